//! Exact linear algebra over prime fields.

mod field;
mod matrix;
mod subspace;

pub use field::{Fp, Scalar, DEFAULT_PRIME};
pub use matrix::{Budget, Matrix, Rref, DEFAULT_BUDGET};
pub use subspace::{induced_between, restrict_operator, Quotient, Subspace};

/// Right null space basis of `m` (see [`Matrix::kernel_basis`]).
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<u32>> {
    m.kernel_basis()
}

/// Some solution of `m x = b`, or `None` when b is outside the column space.
pub fn solve_linear(m: &Matrix, b: &[u32]) -> crate::Result<Option<Vec<u32>>> {
    m.solve(b)
}
