use thiserror::Error;

/// Errors produced by state construction, witness evaluation and the
/// separable-decomposition builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter { name: String, value: f64, reason: String },

    #[error("probabilities do not sum to one (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("expected {expected} values, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("construction outside its admissible regime: {0}")]
    Regime(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, value: f64, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            value,
            reason: reason.into(),
        }
    }
}
