//! Recovery of bandlimited signals from node samples, with the worst-case
//! noise bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, extreme_singular_values, solve_gls, solve_least_squares};
use crate::matrix::{norm2_sq, sub_vec, DenseMatrix};
use crate::sampling::SamplingSet;
use crate::scalar::Scalar;

/// Output of a reconstruction: node- and frequency-domain estimates plus
/// solve diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionResult<S> {
    pub xhat: Vec<S>,
    pub xbar_hat: Vec<S>,
    /// σ_min/σ_max of the sampled basis used in the solve.
    pub condition: S,
    /// Worst-case error bound, present when a noise radius was supplied.
    pub bound: Option<S>,
}

fn sampled_basis<S: Scalar>(
    u: &DenseMatrix<S>,
    s: &SamplingSet<S>,
) -> Result<(DenseMatrix<S>, S)> {
    let k = u.cols();
    assert!(s.m() >= k, "need at least k samples to reconstruct");
    for &i in s.indices() {
        if i >= u.rows() {
            return Err(Error::NodeOutOfRange { node: i + 1, n: u.rows() });
        }
    }
    let us = u.select_rows(s.indices());
    let (sigma_min, sigma_max) = extreme_singular_values(&us)?;
    if sigma_min <= S::tolerance(1e-10) * sigma_max {
        return Err(Error::NotInvertible {
            sigma_min: sigma_min.as_f64(),
            sigma_max: sigma_max.as_f64(),
        });
    }
    Ok((us, sigma_min / sigma_max))
}

/// Noiseless recovery: `x̂ = U (CU)⁻¹ x̃`, generalized to least squares when
/// more than k samples are supplied.
pub fn reconstruct_noiseless<S: Scalar>(
    u: &DenseMatrix<S>,
    s: &SamplingSet<S>,
    x_tilde: &[S],
) -> Result<ReconstructionResult<S>> {
    if x_tilde.len() != s.m() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} samples", s.m()),
            got: format!("{}", x_tilde.len()),
        });
    }
    let (us, condition) = sampled_basis(u, s)?;
    let xbar_hat = solve_least_squares(&us, x_tilde)?;
    let xhat = u.mul_vec(&xbar_hat);
    Ok(ReconstructionResult { xhat, xbar_hat, condition, bound: None })
}

/// GLS recovery under noise with covariance `q` (full N×N; the sampled block
/// Q_S is taken internally).
pub fn reconstruct_gls<S: Scalar>(
    u: &DenseMatrix<S>,
    s: &SamplingSet<S>,
    x_tilde: &[S],
    q: &DenseMatrix<S>,
) -> Result<ReconstructionResult<S>> {
    if x_tilde.len() != s.m() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} samples", s.m()),
            got: format!("{}", x_tilde.len()),
        });
    }
    if q.rows() != u.rows() || q.cols() != u.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} covariance", u.rows()),
            got: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    let (us, condition) = sampled_basis(u, s)?;
    let q_s = q.select_rows_cols(s.indices());
    let xbar_hat = solve_gls(&us, x_tilde, &q_s)?;
    let xhat = u.mul_vec(&xbar_hat);
    Ok(ReconstructionResult { xhat, xbar_hat, condition, bound: None })
}

/// Worst-case reconstruction error for bounded noise:
/// σ_max((U_Sᵀ Q_S⁻¹ U_S)⁻¹ U_Sᵀ Q_S⁻¹) · ε_n.
pub fn error_bound<S: Scalar>(
    u: &DenseMatrix<S>,
    s: &SamplingSet<S>,
    q: &DenseMatrix<S>,
    eps_n: S,
) -> Result<S> {
    assert!(eps_n >= S::zero(), "eps_n must be nonnegative");
    if q.rows() != u.rows() || q.cols() != u.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0} covariance", u.rows()),
            got: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    let (us, _) = sampled_basis(u, s)?;
    let m = us.rows();
    let k = us.cols();
    let q_s = q.select_rows_cols(s.indices());
    let l = cholesky(&q_s)?;

    // W = Q_S⁻¹ U_S, column by column.
    let mut w = DenseMatrix::zeros(m, k);
    for j in 0..k {
        let col = crate::linalg::solve_with_factor(&l, &us.col(j));
        for i in 0..m {
            w.set(i, j, col[i]);
        }
    }
    // G = U_Sᵀ W is the SPD normal matrix.
    let mut g = us.transpose().matmul(&w);
    g.symmetrize();
    let lg = cholesky(&g).map_err(|_| {
        let (sigma_min, sigma_max) =
            extreme_singular_values(&us).unwrap_or((S::zero(), S::zero()));
        Error::NotInvertible { sigma_min: sigma_min.as_f64(), sigma_max: sigma_max.as_f64() }
    })?;
    // Operator M = G⁻¹ Wᵀ, solved one column of Wᵀ at a time.
    let wt = w.transpose();
    let mut op = DenseMatrix::zeros(k, m);
    for j in 0..m {
        let col = crate::linalg::solve_with_factor(&lg, &wt.col(j));
        for i in 0..k {
            op.set(i, j, col[i]);
        }
    }
    let (_, sigma_max) = extreme_singular_values(&op)?;
    Ok(sigma_max * eps_n)
}

/// Error-to-signal energy ratio ‖x̂ − x‖₂²/‖x‖₂².
pub fn recovery_error<S: Scalar>(xhat: &[S], x: &[S]) -> Result<S> {
    assert_eq!(xhat.len(), x.len(), "vector lengths must match");
    let energy = norm2_sq(x);
    if energy <= S::zero() {
        return Err(Error::ZeroSignal);
    }
    Ok(norm2_sq(&sub_vec(xhat, x)) / energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{erdos_renyi, gft_basis, GftBasis, ShiftKind};
    use crate::matrix::norm2;
    use crate::sampling::{iterative_selection, ResidualNode};
    use crate::signal::{add_noise, synth_bandlimited, NoiseModel};

    fn selection(indices: Vec<usize>) -> SamplingSet<f64> {
        SamplingSet::new(indices, None, vec![]).unwrap()
    }

    #[test]
    fn identity_basis_reconstruction_is_exact() {
        let n = 4;
        let v = DenseMatrix::<f64>::identity(n);
        let basis = GftBasis::from_parts(v, vec![0.0; n], ShiftKind::Adjacency).unwrap();
        let u = basis.u(&[1, 3]).unwrap();
        let s = selection(vec![1, 3]);
        let r = reconstruct_noiseless(&u, &s, &[7.0, -2.0]).unwrap();
        assert_eq!(r.xhat, vec![0.0, 7.0, 0.0, -2.0]);
        assert_eq!(r.xbar_hat, vec![7.0, -2.0]);
    }

    #[test]
    fn algorithm_selection_recovers_random_signals() {
        for seed in 0..20 {
            let g = erdos_renyi::<f64>(16, 0.4, seed).unwrap();
            let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
            let support: Vec<usize> = (0..4).collect();
            let u = basis.u(&support).unwrap();
            let sig = synth_bandlimited(&basis, &support, 100.0, seed + 500).unwrap();
            let s = iterative_selection(&u, 4, ResidualNode::Node(0), 1e-10).unwrap();
            let x_tilde: Vec<f64> =
                s.indices().iter().map(|&i| sig.values()[i]).collect();
            let r = reconstruct_noiseless(&u, &s, &x_tilde).unwrap();
            let err = recovery_error(&r.xhat, sig.values()).unwrap();
            assert!(err.sqrt() <= 1e-10, "seed {seed}: {err}");
        }
    }

    #[test]
    fn collinear_rows_are_not_invertible() {
        let u = DenseMatrix::from_rows(&[&[1.0, 0.0], &[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        let s = selection(vec![0, 1]);
        assert!(matches!(
            reconstruct_noiseless(&u, &s, &[1.0, 2.0]),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn gls_equals_noiseless_under_white_noise() {
        let g = erdos_renyi::<f64>(12, 0.5, 2).unwrap();
        let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
        let support = [0, 1, 2];
        let u = basis.u(&support).unwrap();
        let sig = synth_bandlimited(&basis, &support, 10.0, 77).unwrap();
        let s = iterative_selection(&u, 3, ResidualNode::Node(0), 1e-10).unwrap();
        let x_tilde: Vec<f64> = s.indices().iter().map(|&i| sig.values()[i]).collect();
        let q = DenseMatrix::identity(12).scale(0.3);
        let a = reconstruct_noiseless(&u, &s, &x_tilde).unwrap();
        let b = reconstruct_gls(&u, &s, &x_tilde, &q).unwrap();
        let diff = norm2(&sub_vec(&a.xhat, &b.xhat)) / norm2(&a.xhat);
        assert!(diff <= 1e-10, "{diff}");
    }

    #[test]
    fn gls_identity_system_returns_samples() {
        let u = DenseMatrix::<f64>::identity(2);
        let s = selection(vec![0, 1]);
        let q = DenseMatrix::identity(2);
        let r = reconstruct_gls(&u, &s, &[3.0, -4.0], &q).unwrap();
        assert_eq!(r.xbar_hat, vec![3.0, -4.0]);
    }

    #[test]
    fn gls_weighted_mean_example() {
        // U_S = [[1],[1]], Q_S = diag(1,4), x̃ = (2,5) → x̄̂ = 2.6.
        let u = DenseMatrix::from_rows(&[&[1.0], &[1.0]]).unwrap();
        let s = selection(vec![0, 1]);
        let q = DenseMatrix::from_diagonal(&[1.0, 4.0]);
        let r = reconstruct_gls(&u, &s, &[2.0, 5.0], &q).unwrap();
        assert!((r.xbar_hat[0] - 2.6).abs() <= 1e-12);
    }

    #[test]
    fn error_bound_examples() {
        // Orthonormal square system: bound = eps_n.
        let u = DenseMatrix::from_rows(&[
            &[0.6, 0.8],
            &[0.8, -0.6],
        ])
        .unwrap();
        let s = selection(vec![0, 1]);
        let q = DenseMatrix::identity(2);
        let b = error_bound(&u, &s, &q, 0.25).unwrap();
        assert!((b - 0.25).abs() <= 1e-12, "{b}");

        // U_S = [[2]], Q_S = [[1]], eps = 1 → 0.5.
        let u = DenseMatrix::from_rows(&[&[2.0]]).unwrap();
        let s = selection(vec![0]);
        let q = DenseMatrix::identity(1);
        let b = error_bound(&u, &s, &q, 1.0).unwrap();
        assert!((b - 0.5).abs() <= 1e-12, "{b}");
        assert_eq!(error_bound(&u, &s, &q, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bound_dominates_bounded_noise() {
        let g = erdos_renyi::<f64>(10, 0.5, 5).unwrap();
        let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
        let support = [0, 1, 2];
        let u = basis.u(&support).unwrap();
        let sig = synth_bandlimited(&basis, &support, 5.0, 11).unwrap();
        let s = iterative_selection(&u, 3, ResidualNode::Node(0), 1e-10).unwrap();
        let q = DenseMatrix::identity(10);
        let eps = 0.5;
        let bound = error_bound(&u, &s, &q, eps).unwrap();
        for seed in 0..1000 {
            let (y, _) = add_noise(sig.values(), &NoiseModel::Bounded { eps_n: eps }, seed)
                .unwrap();
            let x_tilde: Vec<f64> = s.indices().iter().map(|&i| y[i]).collect();
            let r = reconstruct_gls(&u, &s, &x_tilde, &q).unwrap();
            let err = norm2(&sub_vec(&r.xhat, sig.values()));
            assert!(err <= bound + 1e-12, "seed {seed}: {err} > {bound}");
        }
    }

    #[test]
    fn recovery_error_definition() {
        let x: Vec<f64> = vec![3.0, 4.0];
        assert_eq!(recovery_error(&x, &x).unwrap(), 0.0);
        assert_eq!(recovery_error(&[0.0, 0.0], &x).unwrap(), 1.0);
        // xhat = x + e₁‖x‖ → error energy equals signal energy.
        let xhat = vec![3.0 + 5.0, 4.0];
        assert!((recovery_error(&xhat, &x).unwrap() - 1.0).abs() <= 1e-12);
        assert!(matches!(recovery_error(&x, &[0.0, 0.0]), Err(Error::ZeroSignal)));
    }

    #[test]
    fn xhat_stays_in_column_space() {
        let g = erdos_renyi::<f64>(9, 0.5, 13).unwrap();
        let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
        let u = basis.u(&[0, 1]).unwrap();
        let s = iterative_selection(&u, 2, ResidualNode::Node(0), 1e-10).unwrap();
        let r = reconstruct_noiseless(&u, &s, &[1.0, -1.0]).unwrap();
        let reproduced = u.mul_vec(&r.xbar_hat);
        assert!(norm2(&sub_vec(&reproduced, &r.xhat)) <= 1e-10);
    }
}
