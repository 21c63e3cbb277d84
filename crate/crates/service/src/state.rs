use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use pc2_core::Point2;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

use crate::jobs::{Job, SolveMode};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub workers: usize,
    pub queue_capacity: usize,
    pub session_ttl: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            queue_capacity: 32,
            session_ttl: Duration::from_secs(24 * 60 * 60),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    Add { point: Point2 },
    Remove { index: usize, point: Point2 },
}

pub(crate) struct Session {
    pub points: Vec<Point2>,
    pub history: Vec<Move>,
    pub mode: SolveMode,
    pub touched: Instant,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SessionView {
    pub id: u64,
    pub mode: SolveMode,
    pub points: Vec<Point2>,
    pub history: Vec<Move>,
}

impl Session {
    pub fn view(&self, id: u64) -> SessionView {
        SessionView {
            id,
            mode: self.mode,
            points: self.points.clone(),
            history: self.history.clone(),
        }
    }
}

#[derive(Default)]
pub(crate) struct Store {
    pub next_id: u64,
    pub sessions: HashMap<u64, Session>,
    pub jobs: HashMap<u64, Job>,
}

impl Store {
    pub fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }
}

/// Shared service state; cheap to clone.
#[derive(Clone)]
pub struct AppState {
    pub(crate) store: Arc<Mutex<Store>>,
    pub(crate) workers: Arc<Semaphore>,
    pub(crate) config: Arc<ServiceConfig>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Self {
        Self {
            store: Arc::default(),
            workers: Arc::new(Semaphore::new(config.workers.max(1))),
            config: Arc::new(config),
        }
    }

    /// Locks the store after dropping sessions idle for longer than the TTL.
    pub(crate) fn lock(&self) -> MutexGuard<'_, Store> {
        let mut store = self.store.lock().unwrap_or_else(|e| e.into_inner());
        let ttl = self.config.session_ttl;
        store.sessions.retain(|_, s| s.touched.elapsed() <= ttl);
        store
    }
}
