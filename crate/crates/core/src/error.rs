use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("overflow in {func}: {detail}")]
    Overflow { func: &'static str, detail: String },

    #[error(
        "{what} did not converge after {iterations} iterations (last relative change {last:.3e})"
    )]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        last: f64,
    },

    #[error("quadrature failed to reach tolerance {tol:.1e} (estimated error {estimate:.3e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("profile synthesis failed: {0}")]
    Embedding(String),

    #[error("insufficient lag range: {0}")]
    InsufficientRange(String),

    #[error("discretisation too coarse: {0}")]
    Discretisation(String),

    #[error("dimension mismatch for {quantity}: expected {expected}, found {found}")]
    Dimension {
        quantity: &'static str,
        expected: String,
        found: String,
    },

    #[error("config error at `{key}`: {detail}")]
    Config { key: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}
