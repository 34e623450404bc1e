//! Dense linear-algebra kernels: symmetric eigendecomposition, extreme
//! singular values, positive-definite factorization, least-squares and
//! generalized least-squares solves, and orthogonal-complement projectors.

mod chol;
mod eig;
mod projector;
mod solve;
mod svd;

pub use chol::{cholesky, pd_factor, solve_spd, solve_with_factor};
pub use eig::sym_eig;
pub use projector::orth_complement_projector;
pub use solve::{solve_gls, solve_least_squares};
pub use svd::extreme_singular_values;

use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Result of a symmetric eigendecomposition `A = V diag(λ) Vᵀ`.
///
/// Eigenvalues are sorted in non-increasing order and the columns of
/// `eigenvectors` are orthonormal, each flipped so that its entry of largest
/// magnitude (earliest such index on ties) is positive.
#[derive(Debug, Clone)]
pub struct EigenPair<S> {
    pub eigenvalues: Vec<S>,
    pub eigenvectors: DenseMatrix<S>,
}

impl<S: Scalar> EigenPair<S> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Relative threshold below which a matrix counts as rank deficient in the
/// solver preconditions.
pub(crate) fn rank_tol<S: Scalar>() -> S {
    S::tolerance(1e-12)
}
