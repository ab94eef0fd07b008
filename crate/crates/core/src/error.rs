use thiserror::Error;

/// Errors raised by the orbit machinery.
///
/// Variants fall into three groups: bad input (malformed or invalid labels),
/// internal consistency failures (two independent computations disagree), and
/// gaps in the transcribed data tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(String, String),
    #[error("enumeration of {requested} Weyl group elements exceeds the cap of {cap}")]
    Resource { requested: u64, cap: u64 },
    #[error("criterion-not-transcribed: {0}")]
    CriterionNotTranscribed(String),
    #[error("reduction-table-gap: {0}")]
    ReductionTableGap(String),
    #[error("action-undetermined: {0}")]
    ActionUndetermined(String),
    #[error("uniqueness-violated: {0}")]
    UniquenessViolated(String),
    #[error("inconsistent-birational-rigidity: {0}")]
    InconsistentBirationalRigidity(String),
    #[error("xi-not-regular: {0}")]
    XiNotRegular(String),
    #[error("table error: {0}")]
    Table(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate a bug or a bad table entry rather than bad input.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::UniquenessViolated(_)
                | Error::InconsistentBirationalRigidity(_)
                | Error::ActionUndetermined(_)
                | Error::Internal(_)
        )
    }

    pub fn is_table_gap(&self) -> bool {
        matches!(
            self,
            Error::CriterionNotTranscribed(_) | Error::ReductionTableGap(_) | Error::Table(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
