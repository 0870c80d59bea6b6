use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(String, String),

    #[error("series has a constant or polar part: {0}")]
    NotTopologicallyNilpotent(String),

    #[error("logarithm needs constant term 1, got {0}")]
    LogConstantTerm(String),

    #[error("not finite potent as represented: {0}")]
    NotFinitePotent(String),

    #[error("operators cannot be combined: {0}")]
    IncompatibleTails(String),

    #[error("1 + phi is not invertible (determinant is zero)")]
    NotInvertible,

    #[error("classification undecidable: {0}")]
    Undecidable(String),

    #[error("operator series has no common finite core: {0}")]
    NoCommonCore(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("determinant compatibility violated at index {index}: trace {trace}")]
    CompatibilityViolated { index: usize, trace: String },

    #[error("window of size {window} did not enclose the commutator support")]
    WindowExhausted { window: i64 },

    #[error("rational function is zero")]
    ZeroFunction,

    #[error("polynomial is not irreducible over Q: {0}")]
    NotIrreducible(String),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("identity check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    /// Stable machine-readable code, used by the command-line driver.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::VariableMismatch(..) => "variable_mismatch",
            Error::NotTopologicallyNilpotent(_) => "series_not_nilpotent",
            Error::LogConstantTerm(_) => "log_constant_term",
            Error::NotFinitePotent(_) => "not_finite_potent",
            Error::IncompatibleTails(_) => "incompatible_tails",
            Error::NotInvertible => "not_invertible",
            Error::Undecidable(_) => "undecidable",
            Error::NoCommonCore(_) => "no_common_core",
            Error::Precondition(_) => "precondition",
            Error::CompatibilityViolated { .. } => "compatibility_violated",
            Error::WindowExhausted { .. } => "window_exhausted",
            Error::ZeroFunction => "zero_function",
            Error::NotIrreducible(_) => "not_irreducible",
            Error::TruncationTooSmall(_) => "truncation_too_small",
            Error::CheckFailed(_) => "check_failed",
        }
    }
}
