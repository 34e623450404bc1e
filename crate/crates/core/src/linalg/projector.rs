//! Projector onto the orthogonal complement of a row space.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::chol::{back_substitute, cholesky, forward_substitute};
use super::{extreme_singular_values, rank_tol};

/// `P = I_k − Bᵀ (B Bᵀ)⁻¹ B` for a full-row-rank `B` of shape s×k.
///
/// The result is symmetric, idempotent, and annihilates the rows of `B`.
pub fn orth_complement_projector<S: Scalar>(b: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    let (s, k) = (b.rows(), b.cols());
    if s > k {
        return Err(Error::RankDeficient { sigma_min: 0.0, sigma_max: f64::NAN });
    }
    let (lo, hi) = extreme_singular_values(b)?;
    if lo <= rank_tol::<S>() * hi {
        return Err(Error::RankDeficient { sigma_min: lo.as_f64(), sigma_max: hi.as_f64() });
    }

    let mut gram = b.matmul(&b.transpose());
    gram.symmetrize();
    let l = cholesky(&gram)?;

    // X = (B Bᵀ)⁻¹ B, column by column.
    let mut x = DenseMatrix::zeros(s, k);
    for j in 0..k {
        let col = b.col(j);
        let solved = back_substitute(&l, &forward_substitute(&l, &col));
        for i in 0..s {
            x.set(i, j, solved[i]);
        }
    }

    let mut p = DenseMatrix::identity(k).sub(&b.transpose().matmul(&x));
    p.symmetrize();
    Ok(p)
}
