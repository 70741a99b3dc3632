use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("{function}: series did not converge within {max_terms} terms")]
    NonConvergence {
        function: &'static str,
        max_terms: usize,
    },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) after {panels} panels")]
    Quadrature {
        tol: f64,
        estimate: f64,
        panels: usize,
    },

    #[error("{n} is not invertible modulo {c}")]
    NotInvertible { n: i64, c: u64 },

    #[error("shift parameters violate Re v = 0, |Re u| < k - 1: {detail}")]
    ShiftDomain { detail: String },

    #[error("weight {weight} not allowed: {detail}")]
    Weight { weight: i64, detail: String },

    #[error("cutoff {needed} for tail target {tail_target:e} exceeds hard cap {cap}")]
    HardCapExceeded {
        needed: u64,
        cap: u64,
        tail_target: f64,
    },

    #[error("q-expansion of length {length} too short: {detail}")]
    InsufficientLength { length: usize, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fit degenerate: {0}")]
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidParameter(detail.into())
    }
}
