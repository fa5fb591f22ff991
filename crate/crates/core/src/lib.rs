//! Symbolic variational calculus on finite-order jet spaces.
//!
//! The engine computes, with exact arithmetic and decidable equality:
//!
//! * Euler-Lagrange expressions and the first-variation decomposition
//!   into interior term plus boundary current;
//! * Noether currents with their off-shell conservation identity and
//!   Bergmann-Bianchi identities for parameter-linear gauge lifts;
//! * linearizations, formal adjoints, and a machine-checked
//!   self-adjointness report for the Jacobi operator, plus numeric
//!   Jacobi fields with conjugate-point detection;
//! * reductive kernel/image splits of symmetric operators on
//!   finite-dimensional Lie algebras.
//!
//! The symbolic core is generic over an exact coefficient field via
//! [`scalar::Scalar`]; the aliases below pin the default instantiation
//! at arbitrary-precision rationals.

pub mod error;
pub mod jacobi;
pub mod jetspace;
pub mod linalg;
pub mod reductive;
pub mod scalar;
pub mod symexpr;
pub mod variational;

pub use error::{Error, Result};

/// Default exact coefficient field.
pub type Rat = num_rational::BigRational;

/// Expression over the default field.
pub type Expr = symexpr::RatExpr<Rat>;
/// Jet space over the default field.
pub type JetSpace = jetspace::JetSpace<Rat>;
/// Space declaration over the default field.
pub type SpaceSpec = jetspace::SpaceSpec<Rat>;
/// Projectable vector field over the default field.
pub type ProjectableVectorField = jetspace::ProjectableVectorField<Rat>;
/// Horizontal form over the default field.
pub type HorizontalForm = jetspace::HorizontalForm<Rat>;
/// Lagrangian density over the default field.
pub type Lagrangian = variational::Lagrangian<Rat>;
/// Euler-Lagrange expressions over the default field.
pub type ELExpression = variational::ELExpression<Rat>;
/// Parameter-linear gauge lift over the default field.
pub type GaugeLift = variational::GaugeLift<Rat>;
/// Linear total-derivative operator over the default field.
pub type LinearDiffOperator = jacobi::LinearDiffOperator<Rat>;
/// Lie algebra with exact structure constants.
pub type LieAlgebra = reductive::LieAlgebra<Rat>;
/// Endomorphism of a Lie algebra.
pub type AlgebraOperator = reductive::AlgebraOperator<Rat>;

pub use jetspace::MultiIndex;
pub use symexpr::{Coordinate, CoordKind};
