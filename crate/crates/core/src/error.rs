use thiserror::Error;

/// Errors raised by the analytic series, the finite-difference solver and
/// the verification oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("beta^2(s) has a pole at s = -1")]
    PoleOfExpression,

    #[error("degenerate pole at beta = {beta}: |dD/ds| = {magnitude:e}")]
    DegeneratePole { beta: f64, magnitude: f64 },

    #[error("root bracketing exhausted before branch {branch} (scanned up to beta = {beta_max})")]
    BracketExhausted { branch: usize, beta_max: f64 },

    #[error("tridiagonal row {row} is not diagonally dominant")]
    DominanceViolation { row: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("time schedule ends at tau = {reached} before probe tau = {probe}")]
    ScheduleExhausted { reached: f64, probe: f64 },

    #[error("grid mismatch at index {index}: {a} vs {b}")]
    GridMismatch { index: usize, a: f64, b: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
