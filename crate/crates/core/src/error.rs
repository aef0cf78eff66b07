use thiserror::Error;

/// Errors shared by every module of the library.
///
/// `Precondition` means the inputs are mathematically unfit for the requested
/// construction (a named hypothesis failed, with a witness when we have one).
/// `Malformed` means the data does not even parse into the domain (index out
/// of range, ragged table). `Resource` means a configured cap was exceeded.
/// `Inconsistency` flags a condition that a theorem guarantees cannot happen
/// for valid inputs; seeing it means either the input lied about being
/// validated or there is a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("precondition `{condition}` violated{}", witness_suffix(.witness))]
    Precondition {
        condition: String,
        witness: Vec<usize>,
    },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("resource cap exceeded in {what}: reached {reached}, cap {cap}")]
    Resource {
        what: String,
        cap: usize,
        reached: usize,
    },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{} condition(s) violated, first `{}`", .0.total, first_law(.0))]
    ConditionsFailed(crate::report::ValidationReport),
}

fn first_law(report: &crate::report::ValidationReport) -> String {
    report
        .first()
        .map(|v| format!("{} at {:?}", v.law, v.witness))
        .unwrap_or_default()
}

fn witness_suffix(witness: &[usize]) -> String {
    if witness.is_empty() {
        String::new()
    } else {
        format!(" (witness {witness:?})")
    }
}

impl Error {
    pub fn precondition(condition: impl Into<String>, witness: &[usize]) -> Self {
        Error::Precondition {
            condition: condition.into(),
            witness: witness.to_vec(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
