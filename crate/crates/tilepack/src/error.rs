use thiserror::Error;

/// Errors produced by construction, packing, and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance is not in general position: {0}; perturb it first (e.g. perturb_general_position with a small delta)")]
    NotGeneralPosition(String),

    #[error("invalid tile: {0}")]
    InvalidTile(String),

    #[error("degenerate tile: {0}")]
    DegenerateTile(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("transformation precondition violated: {0}")]
    Precondition(String),

    #[error("grid too coarse for curve integration near x = {x:.6}: curve ordering breaks down; use a smaller eps or smaller k")]
    CoarseGrid { x: f64 },

    #[error("no certificate: {0}")]
    Certification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
