//! Dense linear algebra kernels.

mod eigen;
mod matrix;
mod schur;
mod solve;
mod symmetric;

pub use eigen::{eigen_from_schur, numerical_rank, ComplexEigenpairs, CLUSTER_TOL, RANK_TOL};
pub(crate) use eigen::{encode, Entry};
pub use matrix::DenseMatrix;
pub use schur::{real_schur, SchurForm};
pub use solve::{inverse, solve_linear, LuFactors, SINGULAR_PIVOT};
pub use symmetric::{sym_eigen, SymmetricEigen};

/// Real Schur form followed by eigenvector extraction.
pub fn eigen(a: &crate::numlin::DenseMatrix) -> crate::error::Result<ComplexEigenpairs> {
    let s = real_schur(a, 30 * a.rows().max(1))?;
    eigen_from_schur(a, &s)
}
