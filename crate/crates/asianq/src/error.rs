use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at {what}")]
    Pole { what: String },

    #[error("series failed to converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("adaptive quadrature hit depth cap {depth}")]
    MaxDepth { depth: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("{0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
