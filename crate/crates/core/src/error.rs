use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coordinates must be finite, got ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("empty point set")]
    EmptyInput,

    #[error("too many points: {count} exceeds the limit of {max}")]
    TooManyPoints { count: usize, max: usize },

    #[error("disks overlap: center distance {distance} is below 2")]
    OverlappingDisks { distance: f64 },

    #[error("unsupported lattice: minimum distance {min_dist} (only the close packing, d = 2, is supported here)")]
    UnsupportedLattice { min_dist: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
