use thiserror::Error;

use crate::label::Label;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left:?} vs {right:?}")]
    LabelMismatch {
        context: &'static str,
        left: Vec<Label>,
        right: Vec<Label>,
    },

    #[error("matrix is not square: rows {rows:?}, cols {cols:?}")]
    NotSquare { rows: Vec<Label>, cols: Vec<Label> },

    #[error("duplicate or colliding labels: {0:?}")]
    LabelCollision(Vec<Label>),

    #[error("malformed matrix: {0}")]
    Malformed(String),

    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: Label, col: Label },

    #[error("indices lie in no irreducible component: {0:?}")]
    TrivialIndices(Vec<Label>),

    #[error("matrix is nilpotent")]
    Nilpotent,

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown poset element {0}")]
    UnknownElement(Label),

    #[error("invalid shift equivalence witness: {0}")]
    InvalidWitness(String),

    #[error("claim {claim} of the partitioned lift fails: {detail}")]
    ClaimViolation { claim: &'static str, detail: String },

    #[error("matrix is not essentially cyclic: {0}")]
    NotEssentiallyCyclic(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a cokernel isomorphism: {0}")]
    NotCokernelIsomorphism(String),

    #[error("json: {0}")]
    Json(String),

    #[error("internal consistency failure (this is a bug): {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
