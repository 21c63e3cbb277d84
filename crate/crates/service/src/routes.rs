use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use pc2_core::config::reference_configuration;
use pc2_core::cover::MAX_POINTS;
use pc2_core::geometry::{point_in_interstitium, Point2};
use pc2_core::{CancelToken, Error};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::jobs::{execute, Job, JobStatus, JobView, SolveMode, SolveRequest};
use crate::state::{AppState, Move, Session, SessionView};

const MAX_OVERLAY_RES: usize = 512;

pub struct ApiError(StatusCode, String);

impl ApiError {
    fn not_found(what: &str, id: impl std::fmt::Display) -> Self {
        Self(StatusCode::NOT_FOUND, format!("unknown {what} {id}"))
    }

    fn bad_request(msg: impl Into<String>) -> Self {
        Self(StatusCode::BAD_REQUEST, msg.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse_body<T: DeserializeOwned + Default>(body: &Bytes) -> ApiResult<T> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body)
        .map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/points", post(add_point))
        .route("/sessions/{id}/points/{idx}", delete(remove_point))
        .route("/sessions/{id}/solve", post(submit_solve))
        .route("/sessions/{id}/overlay", get(overlay))
        .route("/jobs/{id}", get(poll_job))
        .route("/jobs/{id}/cancel", post(cancel_job))
        .route("/presets/{name}", get(get_preset))
        .with_state(state)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateSession {
    mode: Option<SolveMode>,
    points: Option<Vec<Point2>>,
}

async fn create_session(
    State(state): State<AppState>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let req: CreateSession = parse_body(&body)?;
    let points = req.points.unwrap_or_default();
    let mut store = state.lock();
    let id = store.fresh_id();
    let session = Session {
        history: points.iter().map(|&point| Move::Add { point }).collect(),
        points,
        mode: req.mode.unwrap_or_default(),
        touched: Instant::now(),
    };
    let view = session.view(id);
    store.sessions.insert(id, session);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(
    State(state): State<AppState>,
    Path(id): Path<u64>,
) -> ApiResult<Json<SessionView>> {
    let mut store = state.lock();
    let s = store
        .sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found("session", id))?;
    s.touched = Instant::now();
    Ok(Json(s.view(id)))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AddPoint {
    x: f64,
    y: f64,
}

async fn add_point(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    body: Bytes,
) -> ApiResult<Json<SessionView>> {
    let req: AddPoint = serde_json::from_slice(&body).map_err(|e| {
        ApiError::bad_request(format!("expected {{\"x\": number, \"y\": number}}: {e}"))
    })?;
    let point = Point2::try_new(req.x, req.y).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let mut store = state.lock();
    let s = store
        .sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found("session", id))?;
    s.points.push(point);
    s.history.push(Move::Add { point });
    s.touched = Instant::now();
    Ok(Json(s.view(id)))
}

async fn remove_point(
    State(state): State<AppState>,
    Path((id, idx)): Path<(u64, usize)>,
) -> ApiResult<Json<SessionView>> {
    let mut store = state.lock();
    let s = store
        .sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found("session", id))?;
    if idx >= s.points.len() {
        return Err(ApiError::not_found("point index", idx));
    }
    let point = s.points.remove(idx);
    s.history.push(Move::Remove { index: idx, point });
    s.touched = Instant::now();
    Ok(Json(s.view(id)))
}

async fn submit_solve(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    body: Bytes,
) -> ApiResult<(StatusCode, Json<JobView>)> {
    let mut req: SolveRequest = parse_body(&body)?;
    let (job_id, points, cancel) = {
        let mut store = state.lock();
        let s = store
            .sessions
            .get_mut(&id)
            .ok_or_else(|| ApiError::not_found("session", id))?;
        s.touched = Instant::now();
        if s.points.is_empty() {
            return Err(ApiError(
                StatusCode::CONFLICT,
                "session has no points".into(),
            ));
        }
        req.mode = Some(req.mode.unwrap_or(s.mode));
        if req.mode() == SolveMode::Free && s.points.len() > MAX_POINTS {
            return Err(ApiError::bad_request(format!(
                "free solve supports at most {MAX_POINTS} points"
            )));
        }
        if req.margin.is_some_and(|m| !(m >= 0.0 && m.is_finite())) {
            return Err(ApiError::bad_request("margin must be a finite number ≥ 0"));
        }
        let points = s.points.clone();
        let queued = store
            .jobs
            .values()
            .filter(|j| j.status == JobStatus::Queued)
            .count();
        if queued >= state.config.queue_capacity {
            return Err(ApiError(
                StatusCode::TOO_MANY_REQUESTS,
                "job queue is full".into(),
            ));
        }
        let job_id = store.fresh_id();
        let cancel = CancelToken::new();
        store.jobs.insert(
            job_id,
            Job {
                session: id,
                mode: req.mode(),
                status: JobStatus::Queued,
                result: None,
                error: None,
                cancel: cancel.clone(),
            },
        );
        (job_id, points, cancel)
    };
    let view = state.lock().jobs[&job_id].view(job_id);
    tokio::spawn(run_job(state.clone(), job_id, points, req, cancel));
    Ok((StatusCode::ACCEPTED, Json(view)))
}

async fn run_job(
    state: AppState,
    id: u64,
    points: Vec<Point2>,
    req: SolveRequest,
    cancel: CancelToken,
) {
    let Ok(_permit) = state.workers.clone().acquire_owned().await else {
        return;
    };
    {
        let mut store = state.lock();
        match store.jobs.get_mut(&id) {
            Some(job) if job.status == JobStatus::Queued => job.status = JobStatus::Running,
            _ => return,
        }
    }
    let token = cancel.clone();
    let outcome = tokio::task::spawn_blocking(move || execute(&points, &req, Some(&token))).await;
    let mut store = state.lock();
    let Some(job) = store.jobs.get_mut(&id) else {
        return;
    };
    match outcome {
        Ok(Ok(result)) => {
            job.status = JobStatus::Done;
            job.result = Some(result);
        }
        Ok(Err(Error::Cancelled)) => job.status = JobStatus::Cancelled,
        Ok(Err(e)) => {
            job.status = JobStatus::Failed;
            job.error = Some(e.to_string());
        }
        Err(e) => {
            job.status = JobStatus::Failed;
            job.error = Some(format!("solver task aborted: {e}"));
        }
    }
}

async fn poll_job(State(state): State<AppState>, Path(id): Path<u64>) -> ApiResult<Json<JobView>> {
    let store = state.lock();
    let job = store
        .jobs
        .get(&id)
        .ok_or_else(|| ApiError::not_found("job", id))?;
    Ok(Json(job.view(id)))
}

async fn cancel_job(
    State(state): State<AppState>,
    Path(id): Path<u64>,
) -> ApiResult<Json<JobView>> {
    let mut store = state.lock();
    let job = store
        .jobs
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found("job", id))?;
    match job.status {
        JobStatus::Queued => job.status = JobStatus::Cancelled,
        JobStatus::Running => job.cancel.cancel(),
        _ => {}
    }
    Ok(Json(job.view(id)))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub points: Vec<Point2>,
}

async fn get_preset(Path(name): Path<String>) -> ApiResult<Json<Preset>> {
    match name.as_str() {
        "fig1-55" => Ok(Json(Preset {
            name,
            points: reference_configuration().points,
        })),
        _ => Err(ApiError::not_found("preset", name)),
    }
}

#[derive(Debug, Deserialize)]
struct OverlayQuery {
    mode: String,
    t: String,
    res: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Overlay {
    pub mode: String,
    pub t: Point2,
    pub lo: Point2,
    pub hi: Point2,
    pub width: usize,
    pub height: usize,
    /// Top row first; `1` marks cells whose center lies in the interstitium of `H + t`.
    pub rows: Vec<String>,
}

fn parse_translate(s: &str) -> ApiResult<Point2> {
    let mut it = s.split(',').map(|v| v.trim().parse::<f64>());
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(x)), Some(Ok(y)), None) => {
            Point2::try_new(x, y).map_err(|e| ApiError::bad_request(e.to_string()))
        }
        _ => Err(ApiError::bad_request(format!(
            "t must be \"x,y\", got {s:?}"
        ))),
    }
}

async fn overlay(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Query(q): Query<OverlayQuery>,
) -> ApiResult<Json<Overlay>> {
    if q.mode != "handicap" {
        return Err(ApiError::bad_request(format!(
            "unsupported overlay mode {:?}",
            q.mode
        )));
    }
    let t = parse_translate(&q.t)?;
    let res = q.res.unwrap_or(64);
    if res == 0 || res > MAX_OVERLAY_RES {
        return Err(ApiError::bad_request(format!(
            "res must be in 1..={MAX_OVERLAY_RES}"
        )));
    }
    let points = {
        let mut store = state.lock();
        let s = store
            .sessions
            .get_mut(&id)
            .ok_or_else(|| ApiError::not_found("session", id))?;
        s.touched = Instant::now();
        s.points.clone()
    };
    let (mut lo, mut hi) = (Point2::new(-3.0, -3.0), Point2::new(3.0, 3.0));
    if !points.is_empty() {
        lo = Point2::new(f64::INFINITY, f64::INFINITY);
        hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        lo -= Point2::new(1.5, 1.5);
        hi += Point2::new(1.5, 1.5);
    }
    let (w, h) = (res, res);
    let step = Point2::new((hi.x - lo.x) / w as f64, (hi.y - lo.y) / h as f64);
    let rows = (0..h)
        .rev()
        .map(|j| {
            (0..w)
                .map(|i| {
                    let p = Point2::new(
                        lo.x + (i as f64 + 0.5) * step.x,
                        lo.y + (j as f64 + 0.5) * step.y,
                    );
                    if point_in_interstitium(p, t) {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect();
    Ok(Json(Overlay {
        mode: q.mode,
        t,
        lo,
        hi,
        width: w,
        height: h,
        rows,
    }))
}
