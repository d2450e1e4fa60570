use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative power of beta evaluated at beta = 0")]
    NegativePowerAtZero,
    #[error("function cannot be evaluated at a real point")]
    RealPointNotExtendable,
    #[error("base point must be non-real")]
    RealBasePoint,
    #[error("expected an imaginary unit (J^2 = -1)")]
    NotAUnit,
    #[error("function is not slice regular")]
    NotRegular,
    #[error("all spherical coefficients vanish up to index {0}")]
    AllCoefficientsZero(usize),
    #[error("value at this point is not representable exactly; use floating point evaluation")]
    Inexact,
    #[error("expansion truncated at {0}; at least 2 is needed")]
    TruncationTooShort(usize),
    #[error("finite difference step {h} must be smaller than beta = {beta}")]
    StepTooLarge { h: f64, beta: f64 },
    #[error("least squares system is ill conditioned (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("need at least {needed} sample points, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("expression is numeric-only ({0}); exact stem calculus is unavailable")]
    NumericOnly(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI and C error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NegativePowerAtZero => "NegativePowerAtZero",
            Error::RealPointNotExtendable => "RealPointNotExtendable",
            Error::RealBasePoint => "RealBasePoint",
            Error::NotAUnit => "NotAUnit",
            Error::NotRegular => "NotRegular",
            Error::AllCoefficientsZero(_) => "AllCoefficientsZero",
            Error::Inexact => "Inexact",
            Error::TruncationTooShort(_) => "TruncationTooShort",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::IllConditioned(_) => "IllConditioned",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::NumericOnly(_) => "NumericOnly",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    pub fn offset(&self) -> Option<usize> {
        match self {
            Error::Syntax { offset, .. } | Error::UnknownIdentifier { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
