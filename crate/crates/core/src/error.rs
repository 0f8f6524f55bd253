use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("precondition refused: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("certificate failed re-verification: {0}")]
    Certificate(String),
}

impl Error {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
