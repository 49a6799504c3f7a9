//! Exact coefficient rings, graded modules, graded maps and the Koszul sign
//! rule that the rest of the crate builds on.

mod complex;
mod linalg;
mod module;
mod ring;

pub use complex::{ChainComplex, ComplexSplitting};
pub use linalg::{independent_subset, solve_linear, LinearSolution, Matrix, Vector};
pub use module::{koszul_sign, tensor_of_maps, BasisElement, GradedMap, GradedModule};
pub use ring::{is_prime, BaseField, Ring, Scalar, TruncatedRing};
