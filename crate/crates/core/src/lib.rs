//! Exact computation with differential graded algebras, differential graded
//! Lie algebras and coalgebras.
//!
//! The crate covers twisting elements and their gauge classification, the
//! Maurer-Cartan equation over Artinian coefficient rings, Hochschild
//! deformations with the Gerstenhaber bracket, and formal power series
//! connections built from a splitting of a finite-dimensional algebra.
//!
//! Gradings are homological throughout: every differential has degree -1 and
//! twisting elements live in degree -1.

pub mod chen;
pub mod coalgebra;
pub mod deformation;
pub mod dga;
pub mod dgl;
mod enumerate;
pub mod fixtures;
pub mod graded;
pub mod hochschild;
mod limits;
mod violation;

pub use graded::{BasisElement, GradedMap, GradedModule, Matrix, Ring, Scalar, Vector};
pub use limits::Limits;
pub use violation::{Identity, Violation};

/// Errors raised by operations whose preconditions fail.
///
/// Structural failures of candidate objects (an associator that does not
/// vanish, say) are reported as [`Violation`]s instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid scalar ring: {0}")]
    InvalidRing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("expected an element of degree {expected}, found degree {found}")]
    WrongDegree { expected: i32, found: i32 },
    #[error("map of degree {degree} sends `{source_basis}` to `{target_basis}`")]
    MapDegree { source_basis: String, target_basis: String, degree: i32 },
    #[error("incompatible arguments: {0}")]
    Incompatible(String),
    #[error("differential does not square to zero on `{0}`")]
    NotAComplex(String),
    #[error("elimination needs a unit pivot in column {column}")]
    NonUnitPivot { column: usize },
    #[error("scalar ring {0} is not a field")]
    NotAField(String),
    #[error("scalar ring is not finite")]
    NotFinite,
    #[error("{0} is not invertible in the scalar ring")]
    NotInvertible(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("truncation exceeded: {0}")]
    Truncation(String),
    #[error("characteristic 2 requires an explicit divided square")]
    DividedSquareRequired,
    #[error("nilpotency class {0} is not supported (maximum 4)")]
    ClassTooLarge(usize),
    #[error("not a twisting element: residual {0}")]
    NotTwisting(String),
    #[error("validation failed: {0}")]
    Invalid(#[from] Violation),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
