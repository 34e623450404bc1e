//! Least-squares and generalized least-squares solvers.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::chol::{back_substitute, cholesky, forward_substitute};
use super::{extreme_singular_values, rank_tol};

/// `argmin_z ||A z - b||₂` for a tall (or square) full-column-rank `A`.
///
/// Solved through a thin Householder QR; equals `A⁻¹ b` when `A` is square.
pub fn solve_least_squares<S: Scalar>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    let (m, k) = (a.rows(), a.cols());
    if b.len() != m || m < k {
        return Err(Error::DimensionMismatch {
            expected: format!("rhs of length {m} and rows >= {k} cols"),
            got: format!("rhs of length {}, {m}x{k} matrix", b.len()),
        });
    }
    let (lo, hi) = extreme_singular_values(a)?;
    if lo <= rank_tol::<S>() * hi {
        return Err(Error::RankDeficient { sigma_min: lo.as_f64(), sigma_max: hi.as_f64() });
    }
    qr_solve(a.clone(), b.to_vec())
}

/// Solution of the weighted normal equation `(Aᵀ Q_S⁻¹ A) z = Aᵀ Q_S⁻¹ b`.
///
/// The k×k normal system is formed explicitly and solved by Cholesky; `Q_S`
/// must be symmetric positive definite. With `Q_S = σ²I` the result matches
/// [`solve_least_squares`].
pub fn solve_gls<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &[S],
    q_s: &DenseMatrix<S>,
) -> Result<Vec<S>> {
    let (m, k) = (a.rows(), a.cols());
    if b.len() != m || m < k || q_s.rows() != m || q_s.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: format!("rhs of length {m}, {m}x{m} weight, rows >= cols"),
            got: format!("rhs {}, weight {}x{}", b.len(), q_s.rows(), q_s.cols()),
        });
    }
    let l = cholesky(q_s)?;

    // W = Q_S⁻¹ A column by column, w = Q_S⁻¹ b.
    let mut w_mat = DenseMatrix::zeros(m, k);
    for j in 0..k {
        let col = a.col(j);
        let solved = back_substitute(&l, &forward_substitute(&l, &col));
        for i in 0..m {
            w_mat.set(i, j, solved[i]);
        }
    }
    let w_vec = back_substitute(&l, &forward_substitute(&l, b));

    let mut normal = a.transpose().matmul(&w_mat);
    normal.symmetrize();
    let rhs = a.transpose_mul_vec(&w_vec);

    let (lo, hi) = extreme_singular_values(&normal)?;
    if lo <= rank_tol::<S>() * hi {
        return Err(Error::RankDeficient { sigma_min: lo.as_f64(), sigma_max: hi.as_f64() });
    }
    let chol_normal = cholesky(&normal)?;
    Ok(back_substitute(&chol_normal, &forward_substitute(&chol_normal, &rhs)))
}

/// Thin Householder QR solve; consumes the working copies.
fn qr_solve<S: Scalar>(mut a: DenseMatrix<S>, mut b: Vec<S>) -> Result<Vec<S>> {
    let (m, k) = (a.rows(), a.cols());
    let mut v = vec![S::zero(); m];
    for j in 0..k {
        // Householder vector for column j, rows j..m.
        let mut norm_sq = S::zero();
        for i in j..m {
            let x = a.get(i, j);
            norm_sq += x * x;
        }
        let norm = norm_sq.sqrt();
        if norm == S::zero() {
            // Rank check upstream makes this unreachable in practice.
            return Err(Error::RankDeficient { sigma_min: 0.0, sigma_max: f64::NAN });
        }
        let ajj = a.get(j, j);
        let alpha = if ajj >= S::zero() { -norm } else { norm };
        let mut vnorm_sq = S::zero();
        for i in j..m {
            let val = if i == j { ajj - alpha } else { a.get(i, j) };
            v[i] = val;
            vnorm_sq += val * val;
        }
        if vnorm_sq > S::zero() {
            let beta = S::real(2.0) / vnorm_sq;
            for col in j..k {
                let mut dot = S::zero();
                for i in j..m {
                    dot += v[i] * a.get(i, col);
                }
                let f = beta * dot;
                for i in j..m {
                    let cur = a.get(i, col);
                    a.set(i, col, cur - f * v[i]);
                }
            }
            let mut dot = S::zero();
            for i in j..m {
                dot += v[i] * b[i];
            }
            let f = beta * dot;
            for i in j..m {
                b[i] -= f * v[i];
            }
        }
        a.set(j, j, alpha);
    }
    // Back substitution on the upper-triangular k×k block.
    let mut z = vec![S::zero(); k];
    for i in (0..k).rev() {
        let mut s = b[i];
        for t in (i + 1)..k {
            s -= a.get(i, t) * z[t];
        }
        z[i] = s / a.get(i, i);
    }
    Ok(z)
}
