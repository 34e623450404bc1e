//! Error type shared by all modules of the crate.

use std::fmt;

/// Errors produced by graph construction, linear algebra kernels, sampling
/// and recovery routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix failed a symmetry check.
    NonSymmetric { max_deviation: f64 },
    /// An iterative kernel exceeded its iteration budget.
    NoConvergence { iterations: usize },
    /// Matrix does not have full rank up to the stated tolerance.
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    /// Matrix is not symmetric positive definite.
    NotPositiveDefinite,
    /// Operand shapes are incompatible.
    DimensionMismatch { expected: String, got: String },
    /// A matrix entry or edge weight is NaN or infinite.
    NonFinite { row: usize, col: usize },
    /// Edge probability outside the open interval (0, 1).
    InvalidProbability { p: f64 },
    /// Edge endpoint outside the declared node range.
    NodeOutOfRange { node: usize, n: usize },
    /// Negative edge weight.
    NegativeWeight { i: usize, j: usize },
    /// Self-loop supplied where the graph model forbids one.
    SelfLoop { node: usize },
    /// Frequency support is empty, repeats an index, or leaves the basis range.
    InvalidSupport { reason: &'static str },
    /// Signal has zero energy where a nonzero norm is required.
    ZeroSignal,
    /// Greedy selection ran out of usable candidate nodes.
    SpanExhausted { selected: usize, requested: usize },
    /// More samples requested than candidates available.
    TooManySamples { requested: usize, available: usize },
    /// All sampling weights are zero.
    DegenerateWeights,
    /// Selected rows do not form a full-column-rank matrix.
    NotInvertible { sigma_min: f64, sigma_max: f64 },
    /// Bandwidth outside [1, N].
    InvalidBandwidth { k: usize, n: usize },
    /// Text input failed to parse.
    Parse { line: usize, message: String },
    /// Underlying I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonSymmetric { max_deviation } => {
                write!(f, "matrix is not symmetric (max |a_ij - a_ji| = {max_deviation:.3e})")
            }
            Error::NoConvergence { iterations } => {
                write!(f, "iterative solver did not converge within {iterations} iterations")
            }
            Error::RankDeficient { sigma_min, sigma_max } => {
                write!(f, "matrix is rank deficient (sigma_min = {sigma_min:.3e}, sigma_max = {sigma_max:.3e})")
            }
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            Error::InvalidProbability { p } => {
                write!(f, "edge probability {p} outside the open interval (0, 1)")
            }
            Error::NodeOutOfRange { node, n } => {
                write!(f, "node index {node} outside 1..={n}")
            }
            Error::NegativeWeight { i, j } => {
                write!(f, "negative weight on edge ({i}, {j})")
            }
            Error::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Error::InvalidSupport { reason } => write!(f, "invalid frequency support: {reason}"),
            Error::ZeroSignal => write!(f, "signal has zero norm"),
            Error::SpanExhausted { selected, requested } => {
                write!(f, "selection exhausted after {selected} of {requested} nodes")
            }
            Error::TooManySamples { requested, available } => {
                write!(f, "requested {requested} samples but only {available} candidates")
            }
            Error::DegenerateWeights => write!(f, "all sampling weights are zero"),
            Error::NotInvertible { sigma_min, sigma_max } => {
                write!(f, "selected rows are not invertible (sigma_min = {sigma_min:.3e}, sigma_max = {sigma_max:.3e})")
            }
            Error::InvalidBandwidth { k, n } => {
                write!(f, "bandwidth {k} outside 1..={n}")
            }
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
