use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("point outside the domain of g (coordinate {coordinate}, value {value})")]
    Domain { coordinate: usize, value: f64 },

    #[error("operation requires a separable nonsmooth term")]
    UnsupportedStructure,

    #[error("non-finite gradient at coordinate {coordinate}: {value}")]
    NonFiniteGradient { coordinate: usize, value: f64 },

    #[error("objective is not finite at the start point: {0}")]
    StartPoint(f64),

    #[error("coefficient t/(2(1-mu*t)) is singular: mu*t = {0}")]
    SingularCoefficient(f64),

    #[error("interpolation inequality is degenerate for mu = L = {0}")]
    DegenerateInterpolation(f64),

    #[error("incomplete iterate record: {0}")]
    IncompleteRecord(String),

    #[error("trace does not belong to this problem: {0}")]
    Consistency(String),

    #[error("proximal gradient vanishes at the start point")]
    DegenerateStart,

    #[error("bracket [{lo}, {hi}] does not enclose a minimum")]
    Bracket { lo: f64, hi: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
