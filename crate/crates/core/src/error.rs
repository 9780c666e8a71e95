use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A tensor dimension would exceed the configured `max_tensor_dim`.
    #[error("dimension budget exceeded: requested {requested}, limit {limit}")]
    Budget { requested: u128, limit: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("malformed document: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
