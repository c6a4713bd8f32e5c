use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a root system: {0}")]
    NotRootSystem(String),
    #[error("axiom violated: {0}")]
    AxiomViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
