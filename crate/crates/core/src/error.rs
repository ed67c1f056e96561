use thiserror::Error;

use crate::multipliers::MultiplierCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// A gap query needed elements beyond the certified range of the set.
    #[error("insufficient truncation: query reaches {needed} but the set is certified only on [-{certified}, {certified}]")]
    InsufficientTruncation { needed: i64, certified: i64 },

    #[error("stage {0} is not defined by the cut/spacer data")]
    MissingStage(usize),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("truncation bound did not exceed {window} within {cap} stages")]
    NonTerminating { window: i64, cap: usize },

    #[error("column depth {required} exceeds the depth cap {cap}")]
    DepthCapExceeded { required: usize, cap: usize },

    #[error("search exhausted below {bound}")]
    SearchExhausted { bound: i64 },

    #[error("construction stalled at stage {stage}: {reason}")]
    ConstructionStalled {
        stage: usize,
        reason: String,
        partial: Option<Box<MultiplierCertificate>>,
    },

    #[error("condition violated at stage {stage}")]
    ConditionViolated {
        stage: usize,
        partial: Option<Box<MultiplierCertificate>>,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// The certificate built before a construction gave up, if any.
    pub fn partial_certificate(&self) -> Option<&MultiplierCertificate> {
        match self {
            Error::ConstructionStalled { partial, .. } | Error::ConditionViolated { partial, .. } => {
                partial.as_deref()
            }
            _ => None,
        }
    }
}
