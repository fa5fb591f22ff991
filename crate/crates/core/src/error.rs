//! Error type shared by the whole engine.

use thiserror::Error;

/// Errors surfaced by symbolic and numeric operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at offset {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("jet order {order} of `{name}` exceeds declared maximum {max}")]
    JetOrderExceeded { name: String, order: u32, max: u32 },
    #[error("operation needs jet order {needed} but the space tracks at most {max}")]
    OrderOverflow { needed: u32, max: u32 },
    #[error("expressions belong to different jet spaces")]
    SpaceMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable `{name}` is not bound at the evaluation point")]
    UnboundVariable { name: String },
    #[error("coordinate is not declared in this space")]
    UndeclaredCoordinate,
    #[error("invalid jet space declaration: {0}")]
    InvalidSpace(String),
    #[error("invalid vector field: {0}")]
    InvalidVectorField(String),
    #[error("invalid gauge lift: {0}")]
    InvalidLift(String),
    #[error("invalid lagrangian: {0}")]
    InvalidLagrangian(String),
    #[error("horizontal form of top degree {degree} has no horizontal differential")]
    FormDegreeOverflow { degree: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants violate antisymmetry at (i={i}, j={j}, k={k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k})")]
    JacobiIdentityFails { i: usize, j: usize, k: usize },
    #[error("inner product is not {0}")]
    BadInnerProduct(String),
    #[error("operator is not symmetric with respect to the inner product")]
    NonSymmetricOperator,
    #[error("supplied bases do not span the algebra")]
    SpanningFailure,
    #[error("on-shell ansatz needs {needed} unknowns, cap is {cap}")]
    AnsatzTooLarge { needed: usize, cap: usize },
    #[error("leading coefficient degenerate at t = {t}")]
    DegenerateLeadingCoefficient { t: f64 },
    #[error("invalid integration setup: {0}")]
    InvalidIntegration(String),
    #[error("operator is not supported here: {0}")]
    UnsupportedOperator(String),
    #[error("internal identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
