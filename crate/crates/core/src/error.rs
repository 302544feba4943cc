use thiserror::Error;

/// Errors reported by the library. Pole behaviour of regulated scalars is
/// data, not an error.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown field label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate field label `{0}`")]
    DuplicateLabel(String),
    #[error("grade {0} violates the unitarity bound (fields must have dimension >= 1; the identity is excluded)")]
    UnitarityBound(i64),
    #[error("F^{c}_{{{a}{b}}}: grade of {c} is not a+b-1-m for any m >= 0")]
    GradeMismatch { a: String, b: String, c: String },
    #[error("graded symmetry conflict for F^{c}_{{{a}{b}}}")]
    SymmetryConflict { a: String, b: String, c: String },
    #[error("singular system: {0}; choose another regulator")]
    Singular(String),
    #[error("sector is not closed: {0}")]
    NonClosedSector(String),
    #[error("missing cochain component: {0}")]
    MissingComponent(String),
    #[error("missing value for variable {0}")]
    MissingVariable(String),
    #[error("invalid input at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
