//! Seeded Monte-Carlo experiment runners and result persistence.
//!
//! Trials are embarrassingly parallel; every random draw is seeded by a pure
//! function of (config seed, trial index), and per-trial outputs are reduced
//! in trial-index order, so result files are byte-identical regardless of the
//! parallelism degree.

use crate::config::{ExperimentConfig, ExperimentKind, NoiseSpec, Scheme};
use bandlimit_core::{
    add_noise, erdos_renyi, gft_basis, igft, io as core_io, is_invertible_selection,
    iterative_selection, leverage_score, recover_support, reconstruct_gls,
    reconstruct_noiseless, recovery_error, support_error, synth_bandlimited, uniform_random,
    DenseMatrix, Error as CoreError, GftBasis, Graph, NoiseModel, ObservationBatch,
    ResidualNode, SamplingSet, ShiftKind,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Version stamp written into every results.json.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Numerical tolerance handed to the greedy selection throughout the runners.
pub const SELECTION_TOL: f64 = 1e-10;

/// Relative standard deviation of the out-of-band leakage synthesized for
/// real-data runs without a measured signal.
pub const LEAK_FRACTION: f64 = 0.01;

/// Default bandwidth for real-data runs when the config leaves it unset.
pub const DEFAULT_BANDWIDTH: usize = 4;

#[derive(Debug)]
pub enum RunError {
    Config(crate::config::ConfigError),
    Core(CoreError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<crate::config::ConfigError> for RunError {
    fn from(e: crate::config::ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        RunError::Core(e)
    }
}

fn invalid(msg: String) -> RunError {
    RunError::Config(crate::config::ConfigError::Invalid(msg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: String,
    pub param: u64,
    pub mean_error: f64,
    pub std_error: f64,
    pub success_rate: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl ResultTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scheme,param,mean_error,std_error,success_rate,trials\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.scheme,
                r.param,
                fmt_float(r.mean_error),
                fmt_float(r.std_error),
                fmt_float(r.success_rate),
                r.trials
            ));
        }
        out
    }
}

/// SplitMix64 step; used to turn (seed ⊕ trial index) into decorrelated
/// per-purpose streams.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial root seed: the documented `seed ⊕ trial-index` fed through one
/// SplitMix64 round.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ trial)
}

/// Chains purpose tags onto a root seed so graph draws, coefficient draws,
/// noise draws, and scheme draws never share a stream.
pub fn derive_seed(root: u64, tags: &[u64]) -> u64 {
    let mut s = root;
    for &t in tags {
        s = splitmix64(s ^ t);
    }
    s
}

const TAG_GRAPH: u64 = 1;
const TAG_SUPPORT: u64 = 2;
const TAG_SIGNAL: u64 = 3;
const TAG_NOISE: u64 = 4;
const TAG_SCHEME: u64 = 5;

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Resolved noise: the config spec with any covariance file already loaded.
enum ResolvedNoise {
    None,
    Model(NoiseModel<f64>),
}

fn resolve_noise(cfg: &ExperimentConfig, n: usize) -> Result<ResolvedNoise, RunError> {
    Ok(match &cfg.noise {
        NoiseSpec::None => ResolvedNoise::None,
        NoiseSpec::WhiteSnr { snr_db } => {
            ResolvedNoise::Model(NoiseModel::WhiteSnr { snr_db: *snr_db })
        }
        NoiseSpec::Bounded { eps_n } => ResolvedNoise::Model(NoiseModel::Bounded {
            eps_n: *eps_n,
        }),
        NoiseSpec::Isotropic { std } => {
            ResolvedNoise::Model(NoiseModel::Covariance(
                DenseMatrix::identity(n).scale(std * std),
            ))
        }
        NoiseSpec::Covariance { path } => {
            let q = core_io::read_matrix_csv::<f64>(path)?;
            if q.rows() != n || q.cols() != n {
                return Err(invalid(format!(
                    "noise covariance must be {n}x{n}, got {}x{}",
                    q.rows(),
                    q.cols()
                )));
            }
            ResolvedNoise::Model(NoiseModel::Covariance(q))
        }
    })
}

impl ResolvedNoise {
    fn apply(&self, x: &[f64], seed: u64) -> Result<Vec<f64>, CoreError> {
        match self {
            ResolvedNoise::None => Ok(x.to_vec()),
            ResolvedNoise::Model(m) => Ok(add_noise(x, m, seed)?.0),
        }
    }

    fn covariance(&self) -> Option<&DenseMatrix<f64>> {
        match self {
            ResolvedNoise::Model(NoiseModel::Covariance(q)) => Some(q),
            _ => None,
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable, RunError> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::SupportVsP => run_support_experiment(cfg),
        ExperimentKind::SamplingVsK => run_sampling_experiment(cfg),
        ExperimentKind::RealData => run_real_data_experiment(cfg),
    }
}

/// Support recovery error as a function of the number of observations P.
///
/// Within a trial the graph, the support, and the first P signal/noise draws
/// are shared across every P in the grid (larger P extends the batch), so
/// the P-curves are paired rather than independently resampled.
pub fn run_support_experiment(cfg: &ExperimentConfig) -> Result<ResultTable, RunError> {
    if cfg.experiment != ExperimentKind::SupportVsP {
        return Err(invalid("run_support_experiment requires experiment = support_vs_p".into()));
    }
    cfg.validate()?;
    let noise = resolve_noise(cfg, cfg.n)?;
    let max_p = *cfg.p_grid.iter().max().expect("validated nonempty");

    let mut rows = Vec::new();
    for &k in &cfg.k_grid {
        let per_trial: Vec<Result<Vec<f64>, CoreError>> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let root = trial_seed(cfg.seed, t);
                let g: Graph<f64> =
                    erdos_renyi(cfg.n, cfg.edge_prob, derive_seed(root, &[TAG_GRAPH, k as u64]))?;
                let basis = gft_basis(&g, ShiftKind::Adjacency)?;
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(root, &[TAG_SUPPORT, k as u64]));
                let mut support = rand::seq::index::sample(&mut rng, cfg.n, k).into_vec();
                support.sort_unstable();

                let mut columns: Vec<Vec<f64>> = Vec::with_capacity(max_p);
                for j in 0..max_p {
                    let sig = synth_bandlimited(
                        &basis,
                        &support,
                        cfg.coeff_std,
                        derive_seed(root, &[TAG_SIGNAL, k as u64, j as u64]),
                    )?;
                    let noisy = noise.apply(
                        sig.values(),
                        derive_seed(root, &[TAG_NOISE, k as u64, j as u64]),
                    )?;
                    columns.push(noisy);
                }

                let mut errs = Vec::with_capacity(cfg.p_grid.len());
                for &p in &cfg.p_grid {
                    let batch = ObservationBatch::from_columns(&columns[..p])?;
                    let est = recover_support(&basis, &batch, k)?;
                    errs.push(support_error(est.support(), &support, k));
                }
                Ok(errs)
            })
            .collect();
        let per_trial: Vec<Vec<f64>> =
            per_trial.into_iter().collect::<Result<_, CoreError>>()?;

        for (pi, &p) in cfg.p_grid.iter().enumerate() {
            let errs: Vec<f64> = per_trial.iter().map(|v| v[pi]).collect();
            let (mean, std) = mean_std(&errs);
            let success = errs.iter().filter(|&&e| e == 0.0).count() as f64
                / errs.len() as f64;
            rows.push(ResultRow {
                scheme: format!("k={k}"),
                param: p as u64,
                mean_error: mean,
                std_error: std,
                success_rate: success,
                trials: cfg.trials,
            });
        }
    }
    Ok(ResultTable { rows })
}

/// One scheme's outcome on one trial.
struct SchemeOutcome {
    error: f64,
    invertible: bool,
}

fn run_scheme(
    scheme: Scheme,
    u: &DenseMatrix<f64>,
    m: usize,
    noisy: &[f64],
    truth: &[f64],
    q: Option<&DenseMatrix<f64>>,
    scheme_seed: u64,
) -> SchemeOutcome {
    let n = u.rows();
    let selection: Result<SamplingSet<f64>, CoreError> = match scheme {
        Scheme::Iterative => iterative_selection(u, m, ResidualNode::Node(0), SELECTION_TOL),
        Scheme::Uniform => uniform_random(n, m, scheme_seed),
        Scheme::Leverage => leverage_score(u, m, scheme_seed),
    };
    let s = match selection {
        Ok(s) => s,
        // A failed draw reconstructs nothing: scored as the zero signal,
        // error 1 by the energy-ratio metric.
        Err(_) => return SchemeOutcome { error: 1.0, invertible: false },
    };
    let invertible = is_invertible_selection(u, &s);
    let x_tilde: Vec<f64> = s.indices().iter().map(|&i| noisy[i]).collect();
    let recon = match q {
        Some(q) => reconstruct_gls(u, &s, &x_tilde, q),
        None => reconstruct_noiseless(u, &s, &x_tilde),
    };
    let error = match recon {
        Ok(r) => recovery_error(&r.xhat, truth).unwrap_or(1.0),
        Err(_) => 1.0,
    };
    SchemeOutcome { error, invertible }
}

/// Recovery error and invertibility rate of each sampling scheme as the
/// bandwidth k sweeps a grid, at m samples per the config.
pub fn run_sampling_experiment(cfg: &ExperimentConfig) -> Result<ResultTable, RunError> {
    if cfg.experiment != ExperimentKind::SamplingVsK {
        return Err(invalid("run_sampling_experiment requires experiment = sampling_vs_k".into()));
    }
    cfg.validate()?;
    let noise = resolve_noise(cfg, cfg.n)?;

    // outcomes[ki][si] = per-trial outcomes for (k_grid[ki], schemes[si])
    let mut outcomes: Vec<Vec<Vec<SchemeOutcome>>> = Vec::with_capacity(cfg.k_grid.len());
    for &k in &cfg.k_grid {
        let m = cfg.m.resolve(k);
        let per_trial: Vec<Result<Vec<SchemeOutcome>, CoreError>> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let root = trial_seed(cfg.seed, t);
                let g: Graph<f64> =
                    erdos_renyi(cfg.n, cfg.edge_prob, derive_seed(root, &[TAG_GRAPH, k as u64]))?;
                let basis = gft_basis(&g, ShiftKind::Adjacency)?;
                let support: Vec<usize> = (0..k).collect();
                let u = basis.u(&support)?;
                let sig = synth_bandlimited(
                    &basis,
                    &support,
                    cfg.coeff_std,
                    derive_seed(root, &[TAG_SIGNAL, k as u64]),
                )?;
                let noisy = noise.apply(
                    sig.values(),
                    derive_seed(root, &[TAG_NOISE, k as u64]),
                )?;
                Ok(cfg
                    .schemes
                    .iter()
                    .enumerate()
                    .map(|(si, &scheme)| {
                        run_scheme(
                            scheme,
                            &u,
                            m,
                            &noisy,
                            sig.values(),
                            noise.covariance(),
                            derive_seed(root, &[TAG_SCHEME, k as u64, si as u64]),
                        )
                    })
                    .collect())
            })
            .collect();
        let per_trial: Vec<Vec<SchemeOutcome>> =
            per_trial.into_iter().collect::<Result<_, CoreError>>()?;

        let mut by_scheme: Vec<Vec<SchemeOutcome>> =
            (0..cfg.schemes.len()).map(|_| Vec::with_capacity(cfg.trials)).collect();
        for trial in per_trial {
            for (si, out) in trial.into_iter().enumerate() {
                by_scheme[si].push(out);
            }
        }
        outcomes.push(by_scheme);
    }

    let mut rows = Vec::new();
    for (si, &scheme) in cfg.schemes.iter().enumerate() {
        for (ki, &k) in cfg.k_grid.iter().enumerate() {
            let outs = &outcomes[ki][si];
            let errs: Vec<f64> = outs.iter().map(|o| o.error).collect();
            let (mean, std) = mean_std(&errs);
            let success =
                outs.iter().filter(|o| o.invertible).count() as f64 / outs.len() as f64;
            rows.push(ResultRow {
                scheme: scheme.name().to_string(),
                param: k as u64,
                mean_error: mean,
                std_error: std,
                success_rate: success,
                trials: cfg.trials,
            });
        }
    }
    Ok(ResultTable { rows })
}

/// Synthesizes an approximately bandlimited signal: unit-scale coefficients
/// inside the band plus small out-of-band leakage.
fn synth_approx_bandlimited(
    basis: &GftBasis<f64>,
    k: usize,
    coeff_std: f64,
    seed: u64,
) -> Result<Vec<f64>, CoreError> {
    let n = basis.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xbar = vec![0.0f64; n];
    for (i, slot) in xbar.iter_mut().enumerate() {
        let g: f64 = StandardNormal.sample(&mut rng);
        let std = if i < k { coeff_std } else { coeff_std * LEAK_FRACTION };
        *slot = g * std;
    }
    igft(basis, &xbar)
}

/// Scheme comparison on an ingested graph as the sample count m sweeps a
/// grid, with the signal treated as (approximately) k-bandlimited.
pub fn run_real_data_experiment(cfg: &ExperimentConfig) -> Result<ResultTable, RunError> {
    if cfg.experiment != ExperimentKind::RealData {
        return Err(invalid("run_real_data_experiment requires experiment = real_data".into()));
    }
    cfg.validate()?;
    let path = cfg.data_path.as_ref().expect("validated");
    let g: Graph<f64> = core_io::read_edge_list(path, cfg.threshold)?;
    let n = g.n();
    let basis = gft_basis(&g, ShiftKind::Adjacency)?;
    let k = cfg.bandwidth.unwrap_or(DEFAULT_BANDWIDTH);
    if k >= n {
        return Err(invalid(format!("bandwidth {k} must be below the graph size {n}")));
    }

    let x = match &cfg.signal_path {
        Some(sp) => {
            let x = core_io::read_vector_csv::<f64>(sp)?;
            if x.len() != n {
                return Err(invalid(format!(
                    "signal length {} does not match graph size {n}",
                    x.len()
                )));
            }
            x
        }
        None => synth_approx_bandlimited(
            &basis,
            k,
            cfg.coeff_std,
            derive_seed(splitmix64(cfg.seed), &[TAG_SIGNAL]),
        )?,
    };

    let m_grid: Vec<usize> = if cfg.m_grid.is_empty() {
        vec![k, (2 * k).min(n - 1)]
    } else {
        cfg.m_grid.clone()
    };
    for &m in &m_grid {
        if m < k || m > n {
            return Err(invalid(format!("m = {m} must satisfy k = {k} <= m <= n = {n}")));
        }
    }

    let noise = resolve_noise(cfg, n)?;
    let support: Vec<usize> = (0..k).collect();
    let u = basis.u(&support)?;

    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        for &m in &m_grid {
            let si = cfg.schemes.iter().position(|&s| s == scheme).unwrap() as u64;
            let per_trial: Vec<Result<SchemeOutcome, CoreError>> = (0..cfg.trials as u64)
                .into_par_iter()
                .map(|t| {
                    let root = trial_seed(cfg.seed, t);
                    let noisy =
                        noise.apply(&x, derive_seed(root, &[TAG_NOISE, m as u64]))?;
                    Ok(run_scheme(
                        scheme,
                        &u,
                        m,
                        &noisy,
                        &x,
                        noise.covariance(),
                        derive_seed(root, &[TAG_SCHEME, m as u64, si]),
                    ))
                })
                .collect();
            let outs: Vec<SchemeOutcome> =
                per_trial.into_iter().collect::<Result<_, CoreError>>()?;
            let errs: Vec<f64> = outs.iter().map(|o| o.error).collect();
            let (mean, std) = mean_std(&errs);
            let success =
                outs.iter().filter(|o| o.invertible).count() as f64 / outs.len() as f64;
            rows.push(ResultRow {
                scheme: scheme.name().to_string(),
                param: m as u64,
                mean_error: mean,
                std_error: std,
                success_rate: success,
                trials: cfg.trials,
            });
        }
    }
    Ok(ResultTable { rows })
}

#[derive(Serialize)]
struct Artifact<'a> {
    version: &'a str,
    config: &'a ExperimentConfig,
    notes: &'a [&'a str],
    rows: &'a [ResultRow],
}

const NOTES: &[&str] = &[
    "failed draws (singular or failed selections) are scored as recovery error 1, the zero-signal reconstruction, and are reflected in success_rate rather than dropped",
    "per-trial seeds are splitmix64(seed XOR trial_index); results are byte-identical for any thread count",
];

/// Writes `results.csv` and `results.json` into `out_dir`; returns the two
/// paths.
pub fn write_results(
    out_dir: &Path,
    cfg: &ExperimentConfig,
    table: &ResultTable,
) -> Result<(PathBuf, PathBuf), RunError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| RunError::Core(CoreError::Io(format!("{}: {e}", out_dir.display()))))?;
    let csv_path = out_dir.join("results.csv");
    let json_path = out_dir.join("results.json");
    std::fs::write(&csv_path, table.to_csv())
        .map_err(|e| RunError::Core(CoreError::Io(format!("{}: {e}", csv_path.display()))))?;
    let artifact = Artifact {
        version: ARTIFACT_VERSION,
        config: cfg,
        notes: NOTES,
        rows: &table.rows,
    };
    let mut json = serde_json::to_string_pretty(&artifact).expect("artifact serializes");
    json.push('\n');
    std::fs::write(&json_path, json)
        .map_err(|e| RunError::Core(CoreError::Io(format!("{}: {e}", json_path.display()))))?;
    Ok((csv_path, json_path))
}
