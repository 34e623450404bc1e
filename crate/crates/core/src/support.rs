//! Shared frequency-support identification from multiple observations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{validate_support, GftBasis};
use crate::matrix::{norm2, DenseMatrix};
use crate::scalar::Scalar;
use crate::signal::ObservationBatch;

/// Result of row-norm thresholding: the estimated support, the retained GFT
/// rows, and the decision margins.
#[derive(Debug, Clone, Serialize)]
pub struct SupportEstimate<S> {
    support: Vec<usize>,
    #[serde(skip)]
    xbar_hat: DenseMatrix<S>,
    /// k-th largest row norm — the smallest norm kept.
    zeta: S,
    /// Gap between the k-th and (k+1)-th largest row norms (the latter taken
    /// as zero when k = N).
    margin: S,
}

impl<S: Scalar> SupportEstimate<S> {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn xbar_hat(&self) -> &DenseMatrix<S> {
        &self.xbar_hat
    }

    pub fn zeta(&self) -> S {
        self.zeta
    }

    pub fn margin(&self) -> S {
        self.margin
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }
}

/// Frequency-support estimate: keep the k rows of `Ȳ = VᵀY` with the largest
/// ℓ₂ norms (ties → lowest index), zero the rest.
pub fn recover_support<S: Scalar>(
    basis: &GftBasis<S>,
    y: &ObservationBatch<S>,
    k: usize,
) -> Result<SupportEstimate<S>> {
    let n = basis.n();
    if y.n() != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n} rows of observations"),
            got: format!("{}", y.n()),
        });
    }
    if k < 1 || k > n {
        return Err(Error::InvalidBandwidth { k, n });
    }
    let ybar = basis.v().transpose().matmul(y.y());
    let norms: Vec<S> = (0..n).map(|i| norm2(ybar.row(i))).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        norms[b].partial_cmp(&norms[a]).expect("finite norms").then(a.cmp(&b))
    });
    let mut support: Vec<usize> = order[..k].to_vec();
    support.sort_unstable();
    let zeta = norms[order[k - 1]];
    let next = if k < n { norms[order[k]] } else { S::zero() };

    let p = y.p();
    let mut xbar_hat = DenseMatrix::zeros(n, p);
    for &i in &support {
        for j in 0..p {
            xbar_hat.set(i, j, ybar.get(i, j));
        }
    }
    Ok(SupportEstimate { support, xbar_hat, zeta, margin: zeta - next })
}

/// Identifiability condition: min row norm over the true support must exceed
/// 2·ε_n·√P (strictly). Returns (holds, lhs, rhs).
pub fn identifiability_check<S: Scalar>(
    xbar_true: &DenseMatrix<S>,
    support: &[usize],
    eps_n: S,
) -> Result<(bool, S, S)> {
    assert!(eps_n >= S::zero(), "eps_n must be nonnegative");
    validate_support(support, xbar_true.rows())?;
    let lhs = support
        .iter()
        .map(|&i| norm2(xbar_true.row(i)))
        .fold(S::infinity(), S::min);
    let p = S::real(xbar_true.cols() as f64);
    let rhs = S::real(2.0) * eps_n * p.sqrt();
    Ok((lhs > rhs, lhs, rhs))
}

/// Support-recovery error: 1 − |K̂ ∩ K| / k. Zero is perfect recovery.
pub fn support_error(estimated: &[usize], truth: &[usize], k: usize) -> f64 {
    assert_eq!(truth.len(), k, "truth must have exactly k entries");
    let overlap = estimated.iter().filter(|i| truth.contains(i)).count();
    1.0 - overlap as f64 / k as f64
}
