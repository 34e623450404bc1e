//! Cyclic Jacobi eigensolver for real symmetric matrices.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

use super::EigenPair;

/// Maximum number of full Jacobi sweeps before giving up.
const SWEEP_BUDGET: usize = 100;

/// Convergence threshold on the off-diagonal mass, relative to the Frobenius
/// norm of the input (floored at a few machine epsilons for `f32`).
const OFF_DIAGONAL_TOL: f64 = 1e-12;

/// Symmetric eigendecomposition via cyclic Jacobi rotations.
///
/// `tol` bounds the accepted asymmetry `max |a_ij - a_ji|`; anything larger is
/// rejected as [`Error::NonSymmetric`]. The strictly symmetric part
/// `(A + Aᵀ)/2` is decomposed. Output is deterministic for a fixed input:
/// eigenvalues descend and each eigenvector is sign-fixed so its
/// largest-magnitude entry (earliest index on ties) is positive.
pub fn sym_eig<S: Scalar>(m: &DenseMatrix<S>, tol: S) -> Result<EigenPair<S>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let asym = m.max_asymmetry();
    if asym > tol {
        return Err(Error::NonSymmetric { max_deviation: asym.as_f64() });
    }

    let n = m.rows();
    let mut a = m.clone();
    a.symmetrize();
    let mut v = DenseMatrix::identity(n);

    let frob = frobenius(&a);
    let conv = S::tolerance(OFF_DIAGONAL_TOL) * frob.max(S::min_positive_value());

    let mut converged = false;
    for sweep in 0..SWEEP_BUDGET {
        if off_diagonal_norm(&a) <= conv {
            converged = true;
            break;
        }
        // Skip rotations on entries too small to matter early on; the
        // threshold decays to zero so late sweeps annihilate everything.
        let small = if sweep < 3 {
            S::real(0.2) * off_diagonal_norm(&a) / S::real((n * n) as f64)
        } else {
            S::zero()
        };
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, small);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > conv {
        return Err(Error::NoConvergence { iterations: SWEEP_BUDGET });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j).partial_cmp(&a.get(i, i)).unwrap().then(i.cmp(&j))
    });

    let eigenvalues: Vec<S> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut eigenvectors = v.select_cols(&order);
    fix_signs(&mut eigenvectors);

    Ok(EigenPair { eigenvalues, eigenvectors })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate<S: Scalar>(a: &mut DenseMatrix<S>, v: &mut DenseMatrix<S>, p: usize, q: usize, skip: S) {
    let apq = a.get(p, q);
    if apq.abs() <= skip {
        return;
    }
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    let diff = aqq - app;

    let t = if apq.abs() < diff.abs() * S::epsilon() {
        // Rotation angle underflows; treat the entry as already zero.
        a.set(p, q, S::zero());
        a.set(q, p, S::zero());
        return;
    } else {
        let theta = diff / (S::real(2.0) * apq);
        let mut t = S::one() / (theta.abs() + (S::one() + theta * theta).sqrt());
        if theta < S::zero() {
            t = -t;
        }
        t
    };

    let c = S::one() / (S::one() + t * t).sqrt();
    let s = t * c;
    let tau = s / (S::one() + c);
    let h = t * apq;

    a.set(p, p, app - h);
    a.set(q, q, aqq + h);
    a.set(p, q, S::zero());
    a.set(q, p, S::zero());

    let n = a.rows();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a.get(r, p);
        let arq = a.get(r, q);
        let new_p = arp - s * (arq + tau * arp);
        let new_q = arq + s * (arp - tau * arq);
        a.set(r, p, new_p);
        a.set(p, r, new_p);
        a.set(r, q, new_q);
        a.set(q, r, new_q);
    }
    for r in 0..n {
        let vrp = v.get(r, p);
        let vrq = v.get(r, q);
        v.set(r, p, vrp - s * (vrq + tau * vrp));
        v.set(r, q, vrq + s * (vrp - tau * vrq));
    }
}

/// Flips each column so its largest-magnitude entry is positive; ties go to
/// the earliest index.
fn fix_signs<S: Scalar>(v: &mut DenseMatrix<S>) {
    let (n, k) = (v.rows(), v.cols());
    for j in 0..k {
        let mut best = 0;
        let mut best_abs = v.get(0, j).abs();
        for i in 1..n {
            let a = v.get(i, j).abs();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        if v.get(best, j) < S::zero() {
            for i in 0..n {
                let val = v.get(i, j);
                v.set(i, j, -val);
            }
        }
    }
}

fn frobenius<S: Scalar>(a: &DenseMatrix<S>) -> S {
    a.data().iter().map(|&x| x * x).sum::<S>().sqrt()
}

fn off_diagonal_norm<S: Scalar>(a: &DenseMatrix<S>) -> S {
    let n = a.rows();
    let mut sum = S::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let x = a.get(i, j);
                sum += x * x;
            }
        }
    }
    sum.sqrt()
}
