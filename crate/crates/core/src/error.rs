use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("query x = {x} lies beyond the system cutoff x_max = {x_max}")]
    Range { x: f64, x_max: f64 },

    #[error("quantile search failed in cell {cell}: {reason}")]
    Construction { cell: usize, reason: String },

    #[error("template inconsistency in cell {cell}: {reason}")]
    TemplateInconsistency { cell: usize, reason: String },

    #[error("quadrature did not converge on panel [{lo}, {hi}] (log scale), estimated error {err:e}")]
    Quadrature { lo: f64, hi: f64, err: f64 },

    #[error("sampler model violates |X| <= 2: {0}")]
    Model(String),

    #[error("malformed template document: {0}")]
    TemplateSpec(String),

    #[error("malformed prime system file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
