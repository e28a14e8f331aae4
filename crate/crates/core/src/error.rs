use thiserror::Error;

/// Errors produced by the numerical machinery.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("empty sample set")]
    EmptySamples,

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("all sample pairs degenerate (coincident sites)")]
    AllPairsDegenerate,

    #[error("grid too coarse for mollification scale h = {h} (spacing {spacing})")]
    GridTooCoarse { h: f64, spacing: f64 },

    #[error("matrix not positive semidefinite (min eigenvalue {min_eig})")]
    NotPsd { min_eig: f64 },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
