//! `bandlimit` — sampling, reconstruction, and support recovery for
//! bandlimited graph signals.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 numerical failure.

use bandlimit_cli::config::{ExperimentConfig, Scheme};
use bandlimit_cli::experiments::{run_experiment, write_results, RunError, SELECTION_TOL};
use bandlimit_core::{
    gft_basis, io as core_io, iterative_selection, leverage_score, reconstruct_gls,
    reconstruct_noiseless, recover_support, recovery_error, uniform_random, DenseMatrix,
    Error as CoreError, GftBasis, Graph, ObservationBatch, ResidualNode, SamplingSet, ShiftKind,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bandlimit",
    version,
    about = "Sampling and reconstruction of bandlimited graph signals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Iterative,
    Uniform,
    Leverage,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Iterative => Scheme::Iterative,
            SchemeArg::Uniform => Scheme::Uniform,
            SchemeArg::Leverage => Scheme::Leverage,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an Erdos-Renyi graph and write it as a 1-based edge list.
    GenGraph {
        /// Number of nodes.
        #[arg(long)]
        n: usize,
        /// Edge probability, strictly between 0 and 1.
        #[arg(long)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge-list path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Select a sampling set for the first-k-frequency basis of a graph.
    Sample {
        /// Edge-list file defining the graph.
        #[arg(long)]
        basis_from: PathBuf,
        /// Edge weights below this are dropped at ingestion.
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        /// Bandwidth: number of leading frequencies retained.
        #[arg(long)]
        k: usize,
        /// Number of samples; defaults to k.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = SchemeArg::Iterative)]
        scheme: SchemeArg,
        /// Seed for the random schemes (ignored by the iterative scheme).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Residual node: a node index, or "auto" for the largest-norm row.
        #[arg(long, default_value = "0")]
        residual_node: String,
        /// Write the sampling-set JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a bandlimited signal from its samples.
    Reconstruct {
        #[arg(long)]
        basis_from: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        #[arg(long)]
        k: usize,
        /// CSV column of sampled values, ordered like the sampling set.
        #[arg(long)]
        samples: PathBuf,
        /// Sampling-set JSON produced by `sample`.
        #[arg(long)]
        set: PathBuf,
        /// Full n-by-n noise covariance CSV; switches to the GLS estimator.
        #[arg(long)]
        q: Option<PathBuf>,
        /// Ground-truth signal CSV; adds recovery_error to the output.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identify the frequency support of bandlimited observations.
    RecoverSupport {
        /// CSV matrix of observations, one column per signal.
        #[arg(long)]
        signals: PathBuf,
        #[arg(long)]
        basis_from: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        /// Support size.
        #[arg(long)]
        k: usize,
    },
    /// Run a Monte-Carlo experiment described by a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to the config file's directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for trial parallelism (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
}

struct AppError {
    code: u8,
    message: String,
}

fn numerical(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::NotInvertible { .. }
            | CoreError::NoConvergence { .. }
            | CoreError::NotPositiveDefinite
            | CoreError::RankDeficient { .. }
    )
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        AppError {
            code: if numerical(&e) { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<RunError> for AppError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Core(c) => c.into(),
            RunError::Config(c) => AppError { code: 1, message: c.to_string() },
        }
    }
}

impl From<bandlimit_cli::config::ConfigError> for AppError {
    fn from(e: bandlimit_cli::config::ConfigError) -> Self {
        AppError { code: 1, message: e.to_string() }
    }
}

fn validation(message: String) -> AppError {
    AppError { code: 1, message }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn load_basis(path: &Path, threshold: f64) -> Result<(Graph<f64>, GftBasis<f64>), AppError> {
    let g: Graph<f64> = core_io::read_edge_list(path, threshold)?;
    let basis = gft_basis(&g, ShiftKind::Adjacency)?;
    Ok((g, basis))
}

fn first_k_u(basis: &GftBasis<f64>, k: usize) -> Result<DenseMatrix<f64>, AppError> {
    let support = basis.first_k(k)?;
    Ok(basis.u(&support)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| validation(format!("{}: {e}", p.display()))),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::GenGraph { n, edge_prob, seed, out } => {
            let g = bandlimit_core::erdos_renyi::<f64>(n, edge_prob, seed)?;
            core_io::write_edge_list(&out, &g)?;
            Ok(())
        }
        Command::Sample {
            basis_from,
            threshold,
            k,
            m,
            scheme,
            seed,
            residual_node,
            out,
        } => {
            let (g, basis) = load_basis(&basis_from, threshold)?;
            let u = first_k_u(&basis, k)?;
            let m = m.unwrap_or(k);
            if m < k {
                return Err(validation(format!("m = {m} is below the bandwidth k = {k}")));
            }
            let set = match Scheme::from(scheme) {
                Scheme::Iterative => {
                    let node = if residual_node == "auto" {
                        ResidualNode::Auto
                    } else {
                        let idx: usize = residual_node.parse().map_err(|_| {
                            validation(format!(
                                "residual-node must be a node index or \"auto\", got \"{residual_node}\""
                            ))
                        })?;
                        ResidualNode::Node(idx)
                    };
                    iterative_selection(&u, m, node, SELECTION_TOL)?
                }
                Scheme::Uniform => uniform_random(g.n(), m, seed)?,
                Scheme::Leverage => leverage_score(&u, m, seed)?,
            };
            let json = serde_json::to_string_pretty(&set).expect("sampling set serializes");
            emit(out.as_deref(), &json)
        }
        Command::Reconstruct {
            basis_from,
            threshold,
            k,
            samples,
            set,
            q,
            truth,
            out,
        } => {
            let (_, basis) = load_basis(&basis_from, threshold)?;
            let u = first_k_u(&basis, k)?;
            let x_tilde: Vec<f64> = core_io::read_vector_csv(&samples)?;
            let set_text = std::fs::read_to_string(&set)
                .map_err(|e| validation(format!("{}: {e}", set.display())))?;
            let s: SamplingSet<f64> = serde_json::from_str(&set_text)
                .map_err(|e| validation(format!("{}: {e}", set.display())))?;
            let result = match q {
                Some(qp) => {
                    let q = core_io::read_matrix_csv::<f64>(&qp)?;
                    reconstruct_gls(&u, &s, &x_tilde, &q)?
                }
                None => reconstruct_noiseless(&u, &s, &x_tilde)?,
            };
            let mut value = serde_json::to_value(&result).expect("result serializes");
            if let Some(tp) = truth {
                let x: Vec<f64> = core_io::read_vector_csv(&tp)?;
                let err = recovery_error(&result.xhat, &x)?;
                value["recovery_error"] = serde_json::json!(err);
            }
            let json = serde_json::to_string_pretty(&value).expect("json serializes");
            emit(out.as_deref(), &json)
        }
        Command::RecoverSupport { signals, basis_from, threshold, k } => {
            let (_, basis) = load_basis(&basis_from, threshold)?;
            let y = core_io::read_matrix_csv::<f64>(&signals)?;
            let est = recover_support(&basis, &ObservationBatch::new(y), k)?;
            let json = serde_json::to_string_pretty(&est).expect("estimate serializes");
            println!("{json}");
            Ok(())
        }
        Command::Experiment { config, seed, out, threads } => {
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .map_err(|e| validation(format!("thread pool: {e}")))?;
            }
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let out_dir = out.unwrap_or_else(|| {
                config.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
            });
            let table = run_experiment(&cfg)?;
            let (csv, json) = write_results(&out_dir, &cfg, &table)?;
            println!("wrote {}", csv.display());
            println!("wrote {}", json.display());
            Ok(())
        }
    }
}
