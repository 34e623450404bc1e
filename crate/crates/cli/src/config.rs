//! Experiment configuration: a TOML file whose keys match the
//! `ExperimentConfig` field names exactly.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SupportVsP,
    SamplingVsK,
    RealData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Iterative,
    Uniform,
    Leverage,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Iterative => "iterative",
            Scheme::Uniform => "uniform",
            Scheme::Leverage => "leverage",
        }
    }
}

/// Sample-count policy: either a fixed count (`m = 30`) or the literal
/// string `"equal_k"` to track the bandwidth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MSpec {
    Count(usize),
    Keyword(String),
}

impl Default for MSpec {
    fn default() -> Self {
        MSpec::Keyword("equal_k".to_string())
    }
}

impl MSpec {
    pub fn resolve(&self, k: usize) -> usize {
        match self {
            MSpec::Count(m) => *m,
            MSpec::Keyword(_) => k,
        }
    }
}

/// Noise specification. TOML form:
///
/// ```toml
/// [noise]
/// kind = "white_snr"
/// snr_db = 20.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseSpec {
    #[default]
    None,
    WhiteSnr {
        snr_db: f64,
    },
    Isotropic {
        std: f64,
    },
    Bounded {
        eps_n: f64,
    },
    Covariance {
        path: PathBuf,
    },
}

impl NoiseSpec {
    /// True when the variant carries an explicit covariance, i.e. reconstruction
    /// should use the GLS estimator rather than plain least squares.
    pub fn has_covariance(&self) -> bool {
        matches!(self, NoiseSpec::Isotropic { .. } | NoiseSpec::Covariance { .. })
    }
}

fn default_n() -> usize {
    200
}

fn default_edge_prob() -> f64 {
    0.2
}

fn default_coeff_std() -> f64 {
    1.0
}

fn default_threshold() -> f64 {
    0.01
}

fn default_schemes() -> Vec<Scheme> {
    vec![Scheme::Iterative]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_edge_prob")]
    pub edge_prob: f64,
    #[serde(default)]
    pub k_grid: Vec<usize>,
    #[serde(default)]
    pub p_grid: Vec<usize>,
    #[serde(default)]
    pub m: MSpec,
    #[serde(default = "default_coeff_std")]
    pub coeff_std: f64,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub data_path: Option<PathBuf>,
    /// Optional measured signal (one CSV column, length n) for real-data
    /// runs; when absent an approximately bandlimited signal is synthesized.
    #[serde(default)]
    pub signal_path: Option<PathBuf>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    /// Bandwidth assumed for real-data runs (defaults to 4).
    #[serde(default)]
    pub bandwidth: Option<usize>,
    /// Sample sizes swept by real-data runs (defaults to {k, 2k}).
    #[serde(default)]
    pub m_grid: Vec<usize>,
}

#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Parse(String),
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "config io error: {m}"),
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid config: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |m: String| Err(ConfigError::Invalid(m));
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if !(self.coeff_std > 0.0) {
            return fail(format!("coeff_std must be positive, got {}", self.coeff_std));
        }
        if !(self.threshold >= 0.0) {
            return fail(format!("threshold must be nonnegative, got {}", self.threshold));
        }
        match &self.noise {
            NoiseSpec::None => {}
            NoiseSpec::WhiteSnr { snr_db } => {
                if !snr_db.is_finite() {
                    return fail("noise.snr_db must be finite".into());
                }
            }
            NoiseSpec::Isotropic { std } => {
                if !(*std > 0.0) {
                    return fail(format!("noise.std must be positive, got {std}"));
                }
            }
            NoiseSpec::Bounded { eps_n } => {
                if !(*eps_n > 0.0) {
                    return fail(format!("noise.eps_n must be positive, got {eps_n}"));
                }
            }
            NoiseSpec::Covariance { path } => {
                if !path.exists() {
                    return fail(format!("noise covariance file not found: {}", path.display()));
                }
            }
        }
        if let MSpec::Keyword(word) = &self.m {
            if word != "equal_k" {
                return fail(format!("m must be a count or \"equal_k\", got \"{word}\""));
            }
        }
        match self.experiment {
            ExperimentKind::SupportVsP => {
                self.validate_synthetic_graph()?;
                if self.k_grid.is_empty() {
                    return fail("support_vs_p requires a nonempty k_grid".into());
                }
                if self.p_grid.is_empty() {
                    return fail("support_vs_p requires a nonempty p_grid".into());
                }
                if self.p_grid.iter().any(|&p| p < 1) {
                    return fail("p_grid entries must be at least 1".into());
                }
                self.validate_k_grid()?;
            }
            ExperimentKind::SamplingVsK => {
                self.validate_synthetic_graph()?;
                if self.k_grid.is_empty() {
                    return fail("sampling_vs_k requires a nonempty k_grid".into());
                }
                if self.schemes.is_empty() {
                    return fail("sampling_vs_k requires at least one scheme".into());
                }
                self.validate_k_grid()?;
                for &k in &self.k_grid {
                    let m = self.m.resolve(k);
                    if m < k {
                        return fail(format!("m = {m} is below the bandwidth k = {k}"));
                    }
                    if m > self.n {
                        return fail(format!("m = {m} exceeds the graph size n = {}", self.n));
                    }
                }
            }
            ExperimentKind::RealData => {
                let path = match &self.data_path {
                    Some(p) => p,
                    None => return fail("real_data requires data_path".into()),
                };
                if !path.exists() {
                    return fail(format!("data_path not found: {}", path.display()));
                }
                if self.schemes.is_empty() {
                    return fail("real_data requires at least one scheme".into());
                }
                if self.bandwidth == Some(0) {
                    return fail("bandwidth must be at least 1".into());
                }
                if let Some(sp) = &self.signal_path {
                    if !sp.exists() {
                        return fail(format!("signal_path not found: {}", sp.display()));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_synthetic_graph(&self) -> Result<(), ConfigError> {
        if self.n < 2 {
            return Err(ConfigError::Invalid(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(self.edge_prob > 0.0 && self.edge_prob < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "edge_prob must lie strictly between 0 and 1, got {}",
                self.edge_prob
            )));
        }
        Ok(())
    }

    fn validate_k_grid(&self) -> Result<(), ConfigError> {
        for &k in &self.k_grid {
            if k < 1 || k >= self.n {
                return Err(ConfigError::Invalid(format!(
                    "bandwidth k = {k} must satisfy 1 <= k < n = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}
