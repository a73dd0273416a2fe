use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// A symplectic eigenvalue sits at or below `1/2 + epsilon_purity`.
    #[error("mode is (nearly) pure: symplectic eigenvalue {nu} <= 1/2 + {epsilon}")]
    PuritySingularity { nu: f64, epsilon: f64 },

    #[error("imaginary-time propagator overflows: beta*omega*|s| = {0} > 350")]
    Overflow(f64),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("kernel is not real: max |Im| = {imag:e} against scale {scale:e}")]
    NotReal { imag: f64, scale: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("kernel was built for the {found} metric, {expected} required")]
    WrongMetric {
        expected: &'static str,
        found: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
