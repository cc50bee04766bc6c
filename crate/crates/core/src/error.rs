use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown candidate id `{0}`")]
    UnknownCandidate(String),

    #[error("duplicate candidate id `{0}`")]
    DuplicateCandidate(String),

    #[error("empty candidate id at row {0}")]
    EmptyCandidateId(usize),

    #[error("candidate `{0}` is already in the selected set")]
    AlreadySelected(String),

    #[error("column `{column}` has invalid weight {weight} (must be finite and >= 0)")]
    InvalidWeight { column: String, weight: f64 },

    #[error("column `{column}` has target {target} outside [0, 1]")]
    InvalidTarget { column: String, target: f64 },

    #[error("column `{column}` has {len} indicator entries but the pool has {pool} candidates")]
    IndicatorLength {
        column: String,
        len: usize,
        pool: usize,
    },

    #[error("attribute `{attribute}` columns carry different weights")]
    InconsistentWeight { attribute: String },

    #[error("candidate `{candidate}` has more than one indicator set for attribute `{attribute}`")]
    NotExclusive {
        attribute: String,
        candidate: String,
    },

    #[error("k = {k} exceeds the pool size {pool}")]
    Infeasible { k: usize, pool: usize },

    #[error("{count} pre-selected candidates exceed k = {k}")]
    TooManyPreSelected { count: usize, k: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("attribute `{attribute}`: {message}")]
    Attribute { attribute: String, message: String },

    #[error("the selected set is empty")]
    EmptySelection,

    #[error("{}", join_errors(.0))]
    Multiple(Vec<Error>),
}

fn join_errors(errors: &[Error]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn attribute(attribute: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Attribute {
            attribute: attribute.into(),
            message: message.into(),
        }
    }

    /// True when the error means the request cannot be satisfied by the
    /// pool at all (as opposed to malformed input).
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Infeasible { .. } => true,
            Error::Multiple(errors) => errors.iter().any(Error::is_infeasible),
            _ => false,
        }
    }

    /// Flattens nested aggregates into a list of leaf errors.
    pub fn flatten(self) -> Vec<Error> {
        match self {
            Error::Multiple(errors) => errors.into_iter().flat_map(Error::flatten).collect(),
            other => vec![other],
        }
    }

    pub(crate) fn collect(mut errors: Vec<Error>) -> Result<()> {
        match errors.len() {
            0 => Ok(()),
            1 => Err(errors.pop().unwrap()),
            _ => Err(Error::Multiple(errors)),
        }
    }
}
