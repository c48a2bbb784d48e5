use thiserror::Error;

/// Errors raised by the library. Each variant has a stable code string used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mode mismatch: {0} vs {1}")]
    ModeMismatch(String, String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("sublattice not contained in superlattice")]
    NotContained,
    #[error("value not in group: {0}")]
    NotInGroup(String),
    #[error("supplied indices inconsistent with computed ones: {0}")]
    InconsistentIndex(String),
    #[error("nonpositive value: {0}")]
    Nonpositive(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("zero divisor: {0}")]
    ZeroDivisor(String),
    #[error("zero input")]
    ZeroInput,
    #[error("series truncation cap {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("kernel hit at P_{index} = {poly}")]
    KernelHit { index: usize, poly: String },
    #[error("inadmissible data: {0}")]
    Inadmissible(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("depth exceeded: {0}")]
    DepthExceeded(String),
    #[error("value mismatch: {0} vs {1}")]
    ValueMismatch(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::ModeMismatch(..) => "MODE_MISMATCH",
            Error::Empty(_) => "EMPTY_INPUT",
            Error::NotContained => "NOT_CONTAINED",
            Error::NotInGroup(_) => "NOT_IN_GROUP",
            Error::InconsistentIndex(_) => "INCONSISTENT_INDEX",
            Error::Nonpositive(_) => "NONPOSITIVE",
            Error::Invalid(_) => "INVALID",
            Error::ZeroDivisor(_) => "ZERO_DIVISOR",
            Error::ZeroInput => "ZERO_INPUT",
            Error::CapExceeded { .. } => "CAP_EXCEEDED",
            Error::KernelHit { .. } => "KERNEL_HIT",
            Error::Inadmissible(_) => "INADMISSIBLE",
            Error::NotRepresentable(_) => "NOT_REPRESENTABLE",
            Error::DepthExceeded(_) => "DEPTH_EXCEEDED",
            Error::ValueMismatch(..) => "VALUE_MISMATCH",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::Parse(_) => "PARSE",
            Error::OracleInconsistent(_) => "ORACLE_INCONSISTENT",
            Error::Precondition(_) => "PRECONDITION",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
