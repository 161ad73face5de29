use thiserror::Error;

use crate::capacity::DiscreteMeasure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("cannot parse `{input}` as a number: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("shell {k} is empty; the first nonempty shell has index {first_valid}")]
    EmptyShell { k: u32, first_valid: u32 },

    #[error("shell decomposition unavailable: {0}")]
    ShellDecomposition(String),

    #[error("set is polar (capacity zero)")]
    PolarSet,

    #[error("unsupported set for this capacity path: {0}")]
    UnsupportedSet(String),

    #[error("pairwise distances underflow in linear scale ({0}); use the closed-form capacity path")]
    DistanceUnderflow(String),

    #[error("reciprocal-log bound needs log cap < 0 for every part, got {0}")]
    BoundRegime(f64),

    #[error("equilibrium solver did not converge after {iterations} iterations (optimality gap {gap:e})")]
    NoConvergence {
        iterations: usize,
        gap: f64,
        best: Box<DiscreteMeasure>,
    },

    #[error("quadrature too coarse: {0}")]
    QuadratureTooCoarse(String),

    #[error("Gram matrix is numerically singular (condition {condition:e} > {limit:e}); use a smaller basis")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("point {re}{im:+}i is not inside the domain: {reason}")]
    OutsideDomain { re: f64, im: f64, reason: String },

    #[error("qc map: {0}")]
    QcMap(String),

    #[error("no feasible (r, t) pairs: {0}")]
    EmptyFeasibility(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
