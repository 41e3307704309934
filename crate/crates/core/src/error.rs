//! Error type shared by all engine modules.

use crate::scalar::Mode;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch([usize; 3], [usize; 3]),
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("leading coefficient is not a positive real number{0}")]
    NotPositive(String),
    #[error("Z is not tangent to ker(theta) at node {node} (|theta(Z)| = {value:e})")]
    NotTangent { node: usize, value: f64 },
    #[error("contact condition theta ^ dtheta != 0 fails at node {0}")]
    NotContact(usize),
    #[error("Levi form is not positive at node {node} (h = {value})")]
    NotPseudoconvex { node: usize, value: String },
    #[error("structure equation residual {residual:e} exceeds tolerance {tol:e} ({which})")]
    StructureResidual { which: &'static str, residual: f64, tol: f64 },
    #[error("jet table entry `{key}` is inconsistent with the background: expected {expected}, found {found}")]
    JetMismatch { key: String, expected: String, found: String },
    #[error("insufficient series depth: need order {need}, have {have}")]
    Depth { need: usize, have: usize },
    #[error("singular linear system at order {0}")]
    Singular(usize),
    #[error("verification failed at order {order}: {component} residual {residual:e} exceeds {tol:e}")]
    Verification { order: usize, component: String, residual: f64, tol: f64 },
    #[error("not supported in {0} mode: {1}")]
    Unsupported(Mode, String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
