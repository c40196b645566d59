use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An enumeration would exceed a configured size cap.
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("squared norm must be non-negative, got {0}")]
    NegativeNorm(String),

    #[error("squared norm must be positive (x = 0 is handled by dispatch)")]
    ZeroNorm,

    #[error("weight {index}: {reason}")]
    InvalidWeight { index: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("value too large: {0}")]
    Overflow(String),

    /// The extremal construction needs `k + delta <= n`; otherwise the bound is 0.
    #[error("no extremal configuration: target level {level} exceeds n = {n}")]
    ConstructionImpossible { n: u64, level: u64 },

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },

    /// The family handed to the Milner check is not a k-intersecting antichain.
    #[error("Milner hypothesis violated: {0}")]
    MilnerHypothesis(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.into(),
        }
    }
}
