//! Extreme singular values via one-sided (Hestenes) Jacobi orthogonalization.
//!
//! The one-sided form avoids squaring the matrix, so small singular values
//! keep far more relative accuracy than a Gram-matrix route would give —
//! needed for the rank and invertibility predicates with thresholds near
//! `1e-12 · σ_max`.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

const SWEEP_BUDGET: usize = 60;

/// Smallest and largest singular values of a dense matrix.
pub fn extreme_singular_values<S: Scalar>(a: &DenseMatrix<S>) -> Result<(S, S)> {
    // Work on the tall orientation; singular values are transpose-invariant.
    let work = if a.rows() >= a.cols() { a.clone() } else { a.transpose() };
    let sigma = hestenes_singular_values(work)?;
    let mut lo = sigma[0];
    let mut hi = sigma[0];
    for &s in &sigma[1..] {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok((lo, hi))
}

/// All singular values of a tall matrix, unordered.
fn hestenes_singular_values<S: Scalar>(mut w: DenseMatrix<S>) -> Result<Vec<S>> {
    let (m, k) = (w.rows(), w.cols());
    let eps = S::epsilon() * S::real(8.0);

    if k == 1 {
        return Ok(vec![col_norm(&w, 0)]);
    }

    let mut converged = false;
    for _ in 0..SWEEP_BUDGET {
        let mut rotated = false;
        for i in 0..k - 1 {
            for j in (i + 1)..k {
                let mut alpha = S::zero();
                let mut beta = S::zero();
                let mut gamma = S::zero();
                for r in 0..m {
                    let wi = w.get(r, i);
                    let wj = w.get(r, j);
                    alpha += wi * wi;
                    beta += wj * wj;
                    gamma += wi * wj;
                }
                if alpha == S::zero() || beta == S::zero() {
                    continue;
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (S::real(2.0) * gamma);
                let t = {
                    let mut t = S::one() / (zeta.abs() + (S::one() + zeta * zeta).sqrt());
                    if zeta < S::zero() {
                        t = -t;
                    }
                    t
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let wi = w.get(r, i);
                    let wj = w.get(r, j);
                    w.set(r, i, c * wi - s * wj);
                    w.set(r, j, s * wi + c * wj);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: SWEEP_BUDGET });
    }

    Ok((0..k).map(|j| col_norm(&w, j)).collect())
}

fn col_norm<S: Scalar>(w: &DenseMatrix<S>, j: usize) -> S {
    let mut sum = S::zero();
    for r in 0..w.rows() {
        let v = w.get(r, j);
        sum += v * v;
    }
    sum.sqrt()
}
