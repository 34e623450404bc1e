//! Sampling and reconstruction of bandlimited graph signals.
//!
//! The crate covers the full pipeline: build or ingest a graph, compute its
//! Fourier basis, pick sampling nodes with the greedy iterative scheme (or a
//! random baseline), reconstruct the signal from noisy samples with a
//! worst-case error bound, and identify an unknown frequency support shared
//! by several observations.
//!
//! Everything is generic over the scalar type; [`f64`] is the working
//! precision used by the CLI, with [`f32`] supported for storage-constrained
//! callers. Concrete aliases (`DenseMatrix64`, `Graph64`, …) are exported at
//! the crate root.

mod error;
mod graph;
pub mod io;
mod linalg;
mod matrix;
mod reconstruction;
mod sampling;
mod scalar;
mod signal;
mod support;

pub use error::{Error, Result};
pub use graph::{erdos_renyi, from_edge_list, gft_basis, GftBasis, Graph, ShiftKind};
pub use linalg::{
    cholesky, extreme_singular_values, orth_complement_projector, pd_factor, solve_gls,
    solve_least_squares, solve_spd, sym_eig, EigenPair,
};
pub use matrix::{add_vec, dot, norm2, norm2_sq, sub_vec, DenseMatrix};
pub use reconstruction::{
    error_bound, reconstruct_gls, reconstruct_noiseless, recovery_error, ReconstructionResult,
};
pub use sampling::{
    is_invertible_selection, iterative_selection, leverage_score, uniform_random, ResidualNode,
    SamplingSet,
};
pub use scalar::Scalar;
pub use signal::{
    add_noise, gft, igft, synth_bandlimited, BandlimitedSignal, NoiseModel, ObservationBatch,
};
pub use support::{identifiability_check, recover_support, support_error, SupportEstimate};

pub type DenseMatrix64 = DenseMatrix<f64>;
pub type DenseMatrix32 = DenseMatrix<f32>;
pub type Graph64 = Graph<f64>;
pub type Graph32 = Graph<f32>;
pub type GftBasis64 = GftBasis<f64>;
pub type GftBasis32 = GftBasis<f32>;
pub type SamplingSet64 = SamplingSet<f64>;
pub type SupportEstimate64 = SupportEstimate<f64>;
