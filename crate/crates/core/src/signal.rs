//! Bandlimited signal synthesis, GFT transforms, and noise generation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{validate_support, GftBasis};
use crate::linalg::pd_factor;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// A signal whose GFT is supported on a known frequency set `K`.
#[derive(Debug, Clone)]
pub struct BandlimitedSignal<S> {
    support: Vec<usize>,
    coeffs: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> BandlimitedSignal<S> {
    /// Builds `x = U x̄_K` from frequency-domain coefficients.
    pub fn new(basis: &GftBasis<S>, support: &[usize], coeffs: Vec<S>) -> Result<Self> {
        validate_support(support, basis.n())?;
        if coeffs.len() != support.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} coefficients", support.len()),
                got: format!("{}", coeffs.len()),
            });
        }
        let u = basis.u(support)?;
        let values = u.mul_vec(&coeffs);
        Ok(Self { support: support.to_vec(), coeffs, values })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// Additive noise specification for [`add_noise`].
#[derive(Debug, Clone)]
pub enum NoiseModel<S> {
    /// Zero-mean Gaussian noise with the given SPD covariance.
    Covariance(DenseMatrix<S>),
    /// White Gaussian noise scaled to a target signal-to-noise ratio in dB.
    WhiteSnr { snr_db: f64 },
    /// Noise drawn uniformly from the closed ℓ₂ ball of radius `eps_n`.
    Bounded { eps_n: f64 },
}

/// `P` noisy observations sharing one unknown support, one per column.
#[derive(Debug, Clone)]
pub struct ObservationBatch<S> {
    y: DenseMatrix<S>,
}

impl<S: Scalar> ObservationBatch<S> {
    pub fn new(y: DenseMatrix<S>) -> Self {
        Self { y }
    }

    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        assert!(!columns.is_empty(), "batch needs at least one observation");
        let n = columns[0].len();
        for (idx, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("column length {n}"),
                    got: format!("column {} has length {}", idx + 1, c.len()),
                });
            }
        }
        let mut y = DenseMatrix::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                y.set(i, j, x);
            }
        }
        Ok(Self { y })
    }

    pub fn y(&self) -> &DenseMatrix<S> {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.y.rows()
    }

    pub fn p(&self) -> usize {
        self.y.cols()
    }
}

/// Draws i.i.d. Gaussian(0, `coeff_std`²) coefficients on `support` and
/// synthesizes the node-domain signal. Deterministic per seed.
pub fn synth_bandlimited<S: Scalar>(
    basis: &GftBasis<S>,
    support: &[usize],
    coeff_std: f64,
    seed: u64,
) -> Result<BandlimitedSignal<S>> {
    assert!(coeff_std > 0.0, "coeff_std must be positive");
    validate_support(support, basis.n())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<S> = (0..support.len())
        .map(|_| S::real(coeff_std * rng.sample::<f64, _>(StandardNormal)))
        .collect();
    BandlimitedSignal::new(basis, support, coeffs)
}

/// Analysis transform `x̄ = Vᵀx`.
pub fn gft<S: Scalar>(basis: &GftBasis<S>, x: &[S]) -> Result<Vec<S>> {
    if x.len() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", basis.n()),
            got: format!("{}", x.len()),
        });
    }
    Ok(basis.v().transpose_mul_vec(x))
}

/// Synthesis transform `x = V x̄`.
pub fn igft<S: Scalar>(basis: &GftBasis<S>, xbar: &[S]) -> Result<Vec<S>> {
    if xbar.len() != basis.n() {
        return Err(Error::DimensionMismatch {
            expected: format!("vector of length {}", basis.n()),
            got: format!("{}", xbar.len()),
        });
    }
    Ok(basis.v().mul_vec(xbar))
}

/// Adds noise per the model; returns the corrupted signal and the realized
/// noise norm ‖n‖₂.
pub fn add_noise<S: Scalar>(
    x: &[S],
    model: &NoiseModel<S>,
    seed: u64,
) -> Result<(Vec<S>, S)> {
    let n = x.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<S> = match model {
        NoiseModel::Covariance(q) => {
            if q.rows() != n || q.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n}x{n} covariance"),
                    got: format!("{}x{}", q.rows(), q.cols()),
                });
            }
            let f = pd_factor(q)?;
            let g: Vec<S> = standard_normal_vec(&mut rng, n);
            f.mul_vec(&g)
        }
        NoiseModel::WhiteSnr { snr_db } => {
            let energy = crate::matrix::norm2_sq(x);
            if energy <= S::zero() {
                return Err(Error::ZeroSignal);
            }
            // E‖n‖² = ‖x‖² / 10^(snr/10), split evenly across N entries.
            let sigma =
                (energy.as_f64() / (n as f64 * 10f64.powf(snr_db / 10.0))).sqrt();
            standard_normal_vec::<S>(&mut rng, n)
                .into_iter()
                .map(|g| g * S::real(sigma))
                .collect()
        }
        NoiseModel::Bounded { eps_n } => {
            assert!(*eps_n > 0.0, "eps_n must be positive");
            loop {
                let g: Vec<S> = standard_normal_vec(&mut rng, n);
                let norm = crate::matrix::norm2(&g);
                if norm > S::zero() {
                    let u: f64 = rng.gen();
                    let radius = S::real(u.powf(1.0 / n as f64) * eps_n);
                    break g.into_iter().map(|gi| gi * radius / norm).collect();
                }
            }
        }
    };
    let realized = crate::matrix::norm2(&noise);
    let y = crate::matrix::add_vec(x, &noise);
    Ok((y, realized))
}

fn standard_normal_vec<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<S> {
    (0..n).map(|_| S::real(rng.sample::<f64, _>(StandardNormal))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ShiftKind;
    use crate::matrix::{norm2, norm2_sq, sub_vec};

    fn identity_basis(n: usize) -> GftBasis<f64> {
        GftBasis::from_parts(
            DenseMatrix::identity(n),
            vec![0.0; n],
            ShiftKind::Adjacency,
        )
        .unwrap()
    }

    fn random_basis(n: usize, seed: u64) -> GftBasis<f64> {
        let g = crate::graph::erdos_renyi(n, 0.4, seed).unwrap();
        crate::graph::gft_basis(&g, ShiftKind::Adjacency).unwrap()
    }

    #[test]
    fn identity_basis_signal_places_coeffs() {
        let basis = identity_basis(3);
        let sig = BandlimitedSignal::new(&basis, &[1], vec![5.0]).unwrap();
        assert_eq!(sig.values(), &[0.0, 5.0, 0.0]);
    }

    #[test]
    fn empty_support_is_rejected() {
        let basis = identity_basis(3);
        assert!(matches!(
            synth_bandlimited(&basis, &[], 1.0, 0),
            Err(Error::InvalidSupport { .. })
        ));
    }

    #[test]
    fn synthesis_is_deterministic_and_bandlimited() {
        let basis = random_basis(12, 3);
        let a = synth_bandlimited(&basis, &[0, 1, 2, 5], 100.0, 42).unwrap();
        let b = synth_bandlimited(&basis, &[0, 1, 2, 5], 100.0, 42).unwrap();
        assert_eq!(a.values(), b.values());
        let xbar = gft(&basis, a.values()).unwrap();
        for (i, &v) in xbar.iter().enumerate() {
            if !a.support().contains(&i) {
                assert!(v.abs() <= 1e-10, "off-support leak {v} at {i}");
            }
        }
    }

    #[test]
    fn gft_of_basis_column_is_canonical() {
        let basis = random_basis(8, 11);
        let v2 = basis.v().col(2);
        let xbar = gft(&basis, &v2).unwrap();
        for (i, &x) in xbar.iter().enumerate() {
            let expect = if i == 2 { 1.0 } else { 0.0 };
            assert!((x - expect).abs() <= 1e-10);
        }
    }

    #[test]
    fn gft_igft_round_trip_and_energy() {
        let basis = random_basis(10, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let xbar = gft(&basis, &x).unwrap();
        let back = igft(&basis, &xbar).unwrap();
        assert!(norm2(&sub_vec(&back, &x)) <= 1e-10);
        assert!((norm2(&xbar) - norm2(&x)).abs() <= 1e-10);
    }

    #[test]
    fn bounded_noise_respects_radius() {
        let x = vec![1.0, -2.0, 0.5, 3.0];
        for seed in 0..200 {
            let (_, norm) =
                add_noise(&x, &NoiseModel::Bounded { eps_n: 0.5 }, seed).unwrap();
            assert!(norm <= 0.5, "seed {seed}: {norm}");
        }
    }

    #[test]
    fn white_snr_rejects_zero_signal() {
        let x = vec![0.0; 4];
        assert!(matches!(
            add_noise(&x, &NoiseModel::WhiteSnr { snr_db: 20.0 }, 0),
            Err(Error::ZeroSignal)
        ));
    }

    #[test]
    fn white_snr_calibration() {
        // ‖x‖² = 100 at 20 dB → E‖n‖² = 1.
        let x = vec![10.0, 0.0, 0.0, 0.0, 0.0];
        let trials = 10_000;
        let mut total = 0.0;
        for seed in 0..trials {
            let (y, _) =
                add_noise(&x, &NoiseModel::WhiteSnr { snr_db: 20.0 }, seed).unwrap();
            total += norm2_sq(&sub_vec(&y, &x));
        }
        let mean = total / trials as f64;
        assert!((mean - 1.0).abs() <= 0.05, "mean noise energy {mean}");
    }

    #[test]
    fn covariance_noise_sample_statistics() {
        // Q = 0.02² I₄: sample covariance over 1e5 draws within 5% of Q.
        let n = 4;
        let q = DenseMatrix::identity(n).scale(0.02 * 0.02);
        let x = vec![0.0; n];
        let draws = 100_000;
        let mut acc = DenseMatrix::<f64>::zeros(n, n);
        let mut mean = vec![0.0; n];
        for seed in 0..draws {
            let (y, _) = add_noise(&x, &NoiseModel::Covariance(q.clone()), seed).unwrap();
            for i in 0..n {
                mean[i] += y[i];
                for j in 0..n {
                    acc.set(i, j, acc.get(i, j) + y[i] * y[j]);
                }
            }
        }
        for i in 0..n {
            mean[i] /= draws as f64;
            // 3σ CLT band for the mean of N(0, 0.02²) over 1e5 draws.
            assert!(mean[i].abs() <= 3.0 * 0.02 / (draws as f64).sqrt());
            for j in 0..n {
                let sample = acc.get(i, j) / draws as f64;
                if i == j {
                    let rel = (sample - 4e-4).abs() / 4e-4;
                    assert!(rel <= 0.05, "var[{i}] off by {rel}");
                } else {
                    assert!(sample.abs() <= 0.05 * 4e-4, "cov[{i},{j}] = {sample}");
                }
            }
        }
    }

    #[test]
    fn covariance_shape_mismatch_is_rejected() {
        let q = DenseMatrix::<f64>::identity(3);
        assert!(matches!(
            add_noise(&[1.0, 2.0], &NoiseModel::Covariance(q), 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn batch_from_columns() {
        let b = ObservationBatch::from_columns(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(b.n(), 2);
        assert_eq!(b.p(), 2);
        assert_eq!(b.y().get(0, 1), 3.0);
        assert!(ObservationBatch::from_columns(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
