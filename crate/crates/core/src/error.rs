use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid measure specification: {0}")]
    InvalidSpec(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exact arithmetic unavailable: {0}")]
    ExactUnavailable(String),

    #[error("no atom at position {0}")]
    NoAtom(String),

    #[error("removed weight {removed} exceeds present weight {present} at position {position}")]
    WeightExceeded { position: String, present: String, removed: String },

    #[error("atom weight must be positive, got {0}")]
    NonPositiveWeight(String),

    #[error("insufficient moments: need {needed}, have {available}")]
    InsufficientMoments { needed: usize, available: usize },

    #[error("requested {requested} moments exceeds the configured cap of {cap}")]
    MomentCap { requested: usize, cap: usize },

    #[error("nonpositive even moment q_{0}")]
    NonPositiveMoment(usize),

    #[error("Hankel matrix not positive definite at order {index} (pivot {pivot})")]
    NonPositivePivot { index: usize, pivot: String },

    #[error("precision exhausted at {bits} bits: {reason}")]
    PrecisionExhausted { bits: u32, reason: String },

    #[error("quadrature failed to converge within {panels} panels")]
    QuadratureNoConvergence { panels: usize },

    #[error("function undefined at atom {0}")]
    UndefinedAtAtom(String),

    #[error("index {index} out of range for order {order}")]
    OutOfRange { index: usize, order: usize },

    #[error("zero diagonal entry at index {0}")]
    ZeroDiagonal(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not representable exactly: {0}")]
    NotRepresentable(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonPositivePivot { .. }
                | Error::PrecisionExhausted { .. }
                | Error::QuadratureNoConvergence { .. }
                | Error::ZeroDiagonal(_)
                | Error::DivisionByZero
                | Error::NotRepresentable(_)
                | Error::NonPositiveMoment(_)
        )
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid-spec",
            Error::Parse { .. } => "parse",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::ExactUnavailable(_) => "exact-unavailable",
            Error::NoAtom(_) => "no-atom",
            Error::WeightExceeded { .. } => "weight-exceeded",
            Error::NonPositiveWeight(_) => "nonpositive-weight",
            Error::InsufficientMoments { .. } => "insufficient-moments",
            Error::MomentCap { .. } => "moment-cap",
            Error::NonPositiveMoment(_) => "nonpositive-moment",
            Error::NonPositivePivot { .. } => "nonpositive-pivot",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::QuadratureNoConvergence { .. } => "quadrature",
            Error::UndefinedAtAtom(_) => "undefined-at-atom",
            Error::OutOfRange { .. } => "out-of-range",
            Error::ZeroDiagonal(_) => "zero-diagonal",
            Error::DivisionByZero => "division-by-zero",
            Error::NotRepresentable(_) => "not-representable",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
