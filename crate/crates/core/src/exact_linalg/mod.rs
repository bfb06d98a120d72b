//! Exact integer and rational linear algebra: Smith and Hermite forms,
//! integer kernels, saturation and finitely generated abelian groups.
//!
//! Nothing in here touches floating point.

mod group;
mod lattice;
mod matrix;
pub mod rational;
mod smith;

pub use group::{cokernel_structure, quotient_structure, FiniteAbelianGroup};
pub use lattice::{hermite_basis, hermite_with_transform, kernel_lattice, saturate, LatticeSubgroup};
pub use matrix::{int_vec, rat, IntMatrix, Matrix, RatMatrix};
pub use smith::{smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("data of length {len} does not fit a {rows}x{cols} matrix")]
    BadShape { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("column {column} is not in the lattice")]
    NotInLattice { column: usize },
    #[error("invalid invariant factors: {0}")]
    BadInvariantFactors(String),
}
