use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller violated a documented precondition (bad labels, mismatched
    /// dimensions, a boundary path that does not exist, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A lattice computation needs valuations at or beyond the configured
    /// budget; the caller should rebuild the model with a larger radius.
    #[error("precision exhausted: valuation {needed} reached budget {budget}; increase the ball radius")]
    Precision { needed: usize, budget: usize },

    /// Web source text failed to parse.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A web's layers do not compose.
    #[error("invalid web: layer {layer}: {msg}")]
    Validation { layer: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
