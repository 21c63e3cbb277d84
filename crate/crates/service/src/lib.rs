//! HTTP/JSON service for game sessions and asynchronous solve jobs.
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/sessions` | `{"mode": "free" \| "handicap"}` (optional) |
//! | GET | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/points` | `{"x": 0.5, "y": -1.25}` |
//! | DELETE | `/sessions/{id}/points/{idx}` | |
//! | POST | `/sessions/{id}/solve` | `{"mode", "budget", "seed", "depth", "margin"}`, all optional |
//! | GET | `/jobs/{id}` | |
//! | POST | `/jobs/{id}/cancel` | |
//! | GET | `/presets/fig1-55` | |
//! | GET | `/sessions/{id}/overlay` | `?mode=handicap&t=x,y&res=64` |
//!
//! Errors are `{"error": "..."}` with status 400, 404, 409 or 429.

mod jobs;
mod routes;
mod state;

pub use jobs::{execute, JobResult, JobStatus, JobView, SolveMode, SolveRequest};
pub use routes::{router, Overlay, Preset};
pub use state::{AppState, ServiceConfig, SessionView};

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: std::net::SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(AppState::new(config))).await
}
