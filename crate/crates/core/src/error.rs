use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of a physical formula (bad quantum numbers,
    /// negative temperature, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Electric-dipole selection rules forbid the requested transition.
    #[error("dipole-forbidden transition: {0}")]
    Forbidden(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical procedure failed to reach its tolerance.
    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
