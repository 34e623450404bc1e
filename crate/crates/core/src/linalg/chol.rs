//! Cholesky factorization of symmetric positive-definite matrices.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Relative pivot floor: a pivot at or below this multiple of the largest
/// diagonal entry fails the factorization.
const PIVOT_TOL: f64 = 1e-12;

/// Lower-triangular `L` with `L Lᵀ = Q`.
///
/// Rejects matrices that are visibly asymmetric or whose pivots collapse,
/// both reported as [`Error::NotPositiveDefinite`].
pub fn cholesky<S: Scalar>(q: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    if !q.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    let n = q.rows();
    let scale = q.max_abs().max(S::min_positive_value());
    if q.max_asymmetry() > S::tolerance(1e-8) * scale {
        return Err(Error::NotPositiveDefinite);
    }

    let mut diag_max = S::zero();
    for i in 0..n {
        diag_max = diag_max.max(q.get(i, i).abs());
    }
    let floor = S::tolerance(PIVOT_TOL) * diag_max.max(S::min_positive_value());

    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = q.get(j, j);
        for t in 0..j {
            let ljt = l.get(j, t);
            d -= ljt * ljt;
        }
        if d <= floor {
            return Err(Error::NotPositiveDefinite);
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in (j + 1)..n {
            let mut s = q.get(i, j);
            for t in 0..j {
                s -= l.get(i, t) * l.get(j, t);
            }
            l.set(i, j, s / djj);
        }
    }
    Ok(l)
}

/// Factor `F` with `F Fᵀ = Q`; the Cholesky lower triangle.
pub fn pd_factor<S: Scalar>(q: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    cholesky(q)
}

/// Solves `Q x = b` for symmetric positive-definite `Q` via Cholesky.
pub fn solve_spd<S: Scalar>(q: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    let l = cholesky(q)?;
    Ok(solve_with_factor(&l, b))
}

/// Solves `L Lᵀ x = b` given a Cholesky lower factor `L`.
pub fn solve_with_factor<S: Scalar>(l: &DenseMatrix<S>, b: &[S]) -> Vec<S> {
    back_substitute(l, &forward_substitute(l, b))
}

/// Solves `L y = b` for lower-triangular `L`.
pub(crate) fn forward_substitute<S: Scalar>(l: &DenseMatrix<S>, b: &[S]) -> Vec<S> {
    let n = l.rows();
    debug_assert_eq!(b.len(), n);
    let mut y = vec![S::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for t in 0..i {
            s -= l.get(i, t) * y[t];
        }
        y[i] = s / l.get(i, i);
    }
    y
}

/// Solves `Lᵀ x = y` for lower-triangular `L`.
pub(crate) fn back_substitute<S: Scalar>(l: &DenseMatrix<S>, y: &[S]) -> Vec<S> {
    let n = l.rows();
    debug_assert_eq!(y.len(), n);
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for t in (i + 1)..n {
            s -= l.get(t, i) * x[t];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_factor() {
        let f = pd_factor(&DenseMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(f.data(), &[1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn diagonal_factor() {
        let f = pd_factor(&DenseMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(f.data(), &[2.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn round_trip_2x2() {
        let q = DenseMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let f = pd_factor(&q).unwrap();
        let rec = f.matmul(&f.transpose());
        assert!(rec.sub(&q).max_abs() <= 1e-10 * q.max_abs());
    }

    #[test]
    fn rejects_indefinite() {
        let q = DenseMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(pd_factor(&q), Err(Error::NotPositiveDefinite)));
        let neg = DenseMatrix::from_diagonal(&[-1.0, 1.0]);
        assert!(matches!(pd_factor(&neg), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn spd_solve_matches_hand_solution() {
        let q = DenseMatrix::<f64>::from_rows(&[&[4.0, 2.0], &[2.0, 3.0]]).unwrap();
        // Q x = (8, 7) has x = (1.25, 1.5)
        let x = solve_spd(&q, &[8.0, 7.0]).unwrap();
        assert!((x[0] - 1.25).abs() <= 1e-12);
        assert!((x[1] - 1.5).abs() <= 1e-12);
    }
}
