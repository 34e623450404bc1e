//! Undirected weighted graphs and their Fourier bases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sym_eig;
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Which shift operator a Fourier basis diagonalizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    Adjacency,
    Laplacian,
}

/// Undirected weighted graph: symmetric nonnegative adjacency with a zero
/// diagonal.
#[derive(Debug, Clone)]
pub struct Graph<S> {
    adjacency: DenseMatrix<S>,
    node_labels: Option<Vec<String>>,
}

impl<S: Scalar> Graph<S> {
    /// Validates and wraps an adjacency matrix.
    pub fn from_adjacency(adjacency: DenseMatrix<S>) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square adjacency".into(),
                got: format!("{}x{}", adjacency.rows(), adjacency.cols()),
            });
        }
        let n = adjacency.rows();
        let scale = adjacency.max_abs().max(S::one());
        let asym = adjacency.max_asymmetry();
        if asym > S::tolerance(1e-12) * scale {
            return Err(Error::NonSymmetric { max_deviation: asym.as_f64() });
        }
        for i in 0..n {
            if adjacency.get(i, i) != S::zero() {
                return Err(Error::SelfLoop { node: i + 1 });
            }
            for j in 0..n {
                if adjacency.get(i, j) < S::zero() {
                    return Err(Error::NegativeWeight { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self { adjacency, node_labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} labels", self.n()),
                got: format!("{} labels", labels.len()),
            });
        }
        self.node_labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &DenseMatrix<S> {
        &self.adjacency
    }

    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    /// Number of edges with nonzero weight.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.adjacency.get(i, j) != S::zero() {
                    count += 1;
                }
            }
        }
        count
    }

    /// Combinatorial Laplacian `diag(A·1) − A`.
    pub fn laplacian(&self) -> DenseMatrix<S> {
        let n = self.n();
        let mut l = self.adjacency.scale(-S::one());
        for i in 0..n {
            let degree: S = self.adjacency.row(i).iter().copied().sum();
            l.set(i, i, degree);
        }
        l
    }
}

/// Unit-weight Erdős–Rényi graph: each unordered pair is an edge with
/// probability `p`, independently. Deterministic for a fixed seed.
pub fn erdos_renyi<S: Scalar>(n: usize, p: f64, seed: u64) -> Result<Graph<S>> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability { p });
    }
    assert!(n >= 2, "erdos_renyi needs at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                adjacency.set(i, j, S::one());
                adjacency.set(j, i, S::one());
            }
        }
    }
    Ok(Graph { adjacency, node_labels: None })
}

/// Builds a graph from 1-based weighted edges.
///
/// Weights below `threshold` are zeroed, duplicate pairs resolve last-wins,
/// and self-loops are dropped.
pub fn from_edge_list<S: Scalar>(
    edges: &[(usize, usize, S)],
    n: usize,
    threshold: S,
) -> Result<Graph<S>> {
    assert!(n >= 1, "graph needs at least one node");
    let mut adjacency = DenseMatrix::zeros(n, n);
    for &(i, j, w) in edges {
        if i < 1 || i > n {
            return Err(Error::NodeOutOfRange { node: i, n });
        }
        if j < 1 || j > n {
            return Err(Error::NodeOutOfRange { node: j, n });
        }
        if !w.is_finite() {
            return Err(Error::NonFinite { row: i, col: j });
        }
        if w < S::zero() {
            return Err(Error::NegativeWeight { i, j });
        }
        if i == j {
            continue;
        }
        let kept = if w >= threshold { w } else { S::zero() };
        adjacency.set(i - 1, j - 1, kept);
        adjacency.set(j - 1, i - 1, kept);
    }
    Ok(Graph { adjacency, node_labels: None })
}

/// Orthonormal Fourier basis of a graph shift operator.
///
/// Columns of `v` are the eigenvectors of the adjacency (or Laplacian),
/// ordered by non-increasing eigenvalue.
#[derive(Debug, Clone)]
pub struct GftBasis<S> {
    v: DenseMatrix<S>,
    lambda: Vec<S>,
    shift_kind: ShiftKind,
}

impl<S: Scalar> GftBasis<S> {
    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// Full eigenvector matrix `V`, one eigenvector per column.
    pub fn v(&self) -> &DenseMatrix<S> {
        &self.v
    }

    pub fn lambda(&self) -> &[S] {
        &self.lambda
    }

    pub fn shift_kind(&self) -> ShiftKind {
        self.shift_kind
    }

    /// `U = V_{K,c}`: basis columns restricted to a frequency support.
    pub fn u(&self, support: &[usize]) -> Result<DenseMatrix<S>> {
        validate_support(support, self.n())?;
        Ok(self.v.select_cols(support))
    }

    /// The first `k` frequency indices in eigenvalue order.
    pub fn first_k(&self, k: usize) -> Result<Vec<usize>> {
        if k < 1 || k > self.n() {
            return Err(Error::InvalidBandwidth { k, n: self.n() });
        }
        Ok((0..k).collect())
    }

    /// Wraps an externally computed basis; used by tests that need a
    /// hand-picked `V`.
    pub fn from_parts(v: DenseMatrix<S>, lambda: Vec<S>, shift_kind: ShiftKind) -> Result<Self> {
        if !v.is_square() || v.rows() != lambda.len() {
            return Err(Error::DimensionMismatch {
                expected: "square V matching eigenvalue count".into(),
                got: format!("{}x{} with {} eigenvalues", v.rows(), v.cols(), lambda.len()),
            });
        }
        Ok(Self { v, lambda, shift_kind })
    }
}

pub(crate) fn validate_support(support: &[usize], n: usize) -> Result<()> {
    if support.is_empty() {
        return Err(Error::InvalidSupport { reason: "empty support" });
    }
    let mut seen = vec![false; n];
    for &idx in support {
        if idx >= n {
            return Err(Error::InvalidSupport { reason: "index outside basis range" });
        }
        if seen[idx] {
            return Err(Error::InvalidSupport { reason: "repeated index" });
        }
        seen[idx] = true;
    }
    Ok(())
}

/// Eigendecomposition of the selected shift operator.
pub fn gft_basis<S: Scalar>(g: &Graph<S>, shift_kind: ShiftKind) -> Result<GftBasis<S>> {
    let shift = match shift_kind {
        ShiftKind::Adjacency => g.adjacency().clone(),
        ShiftKind::Laplacian => g.laplacian(),
    };
    let tol = S::tolerance(1e-9) * shift.max_abs().max(S::one());
    let pair = sym_eig(&shift, tol)?;
    Ok(GftBasis { v: pair.eigenvectors, lambda: pair.eigenvalues, shift_kind })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_sure_edge_for_p_close_to_one() {
        for seed in 0..100 {
            let g: Graph<f64> = erdos_renyi(2, 1.0 - 1e-9, seed).unwrap();
            assert_eq!(g.adjacency().get(0, 1), 1.0, "seed {seed}");
        }
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a: Graph<f64> = erdos_renyi(5, 0.5, 7).unwrap();
        let b: Graph<f64> = erdos_renyi(5, 0.5, 7).unwrap();
        assert_eq!(a.adjacency().data(), b.adjacency().data());
    }

    #[test]
    fn rejects_degenerate_probability() {
        assert!(matches!(
            erdos_renyi::<f64>(4, 0.0, 1),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(
            erdos_renyi::<f64>(4, 1.0, 1),
            Err(Error::InvalidProbability { .. })
        ));
    }

    #[test]
    fn edge_density_concentrates() {
        let g: Graph<f64> = erdos_renyi(1000, 0.15, 3).unwrap();
        let pairs = 1000.0 * 999.0 / 2.0;
        let density = g.edge_count() as f64 / pairs;
        assert!((density - 0.15).abs() <= 0.01, "density {density}");
    }

    #[test]
    fn edge_list_basic() {
        let g: Graph<f64> = from_edge_list(&[(1, 2, 0.5)], 3, 0.01).unwrap();
        assert_eq!(g.adjacency().get(0, 1), 0.5);
        assert_eq!(g.adjacency().get(1, 0), 0.5);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_thresholds_small_weights() {
        let g: Graph<f64> = from_edge_list(&[(1, 2, 0.005)], 2, 0.01).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn edge_list_duplicates_last_wins() {
        let g: Graph<f64> =
            from_edge_list(&[(1, 2, 0.3), (2, 3, 0.2), (1, 2, 0.4)], 3, 0.01).unwrap();
        assert_eq!(g.adjacency().get(0, 1), 0.4);
        assert_eq!(g.adjacency().get(1, 2), 0.2);
    }

    #[test]
    fn edge_list_rejects_bad_nodes_and_weights() {
        assert!(matches!(
            from_edge_list::<f64>(&[(0, 2, 0.3)], 3, 0.0),
            Err(Error::NodeOutOfRange { node: 0, .. })
        ));
        assert!(matches!(
            from_edge_list::<f64>(&[(1, 4, 0.3)], 3, 0.0),
            Err(Error::NodeOutOfRange { node: 4, .. })
        ));
        assert!(matches!(
            from_edge_list::<f64>(&[(1, 2, -0.3)], 3, 0.0),
            Err(Error::NegativeWeight { .. })
        ));
    }

    #[test]
    fn edge_list_drops_self_loops() {
        let g: Graph<f64> = from_edge_list(&[(2, 2, 5.0), (1, 2, 1.0)], 2, 0.0).unwrap();
        assert_eq!(g.adjacency().get(1, 1), 0.0);
        assert_eq!(g.adjacency().get(0, 1), 1.0);
    }

    #[test]
    fn k2_adjacency_basis() {
        let g: Graph<f64> = from_edge_list(&[(1, 2, 1.0)], 2, 0.0).unwrap();
        let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
        assert!((basis.lambda()[0] - 1.0).abs() <= 1e-12);
        assert!((basis.lambda()[1] + 1.0).abs() <= 1e-12);
        let s = 0.5f64.sqrt();
        let v = basis.v();
        assert!((v.get(0, 0) - s).abs() <= 1e-12);
        assert!((v.get(1, 0) - s).abs() <= 1e-12);
        assert!((v.get(0, 1) - s).abs() <= 1e-12);
        assert!((v.get(1, 1) + s).abs() <= 1e-12);
    }

    #[test]
    fn empty_graph_basis() {
        let g: Graph<f64> = Graph::from_adjacency(DenseMatrix::zeros(3, 3)).unwrap();
        let basis = gft_basis(&g, ShiftKind::Adjacency).unwrap();
        assert_eq!(basis.lambda(), &[0.0, 0.0, 0.0]);
        let vtv = basis.v().transpose().matmul(basis.v());
        assert!(vtv.sub(&DenseMatrix::identity(3)).max_abs() <= 1e-12);
    }

    #[test]
    fn k2_laplacian_basis() {
        let g: Graph<f64> = from_edge_list(&[(1, 2, 1.0)], 2, 0.0).unwrap();
        let basis = gft_basis(&g, ShiftKind::Laplacian).unwrap();
        assert!((basis.lambda()[0] - 2.0).abs() <= 1e-12);
        assert!(basis.lambda()[1].abs() <= 1e-12);
    }

    #[test]
    fn from_adjacency_rejects_violations() {
        let asym = DenseMatrix::from_rows(&[&[0.0, 1.0], &[0.5, 0.0]]).unwrap();
        assert!(matches!(Graph::from_adjacency(asym), Err(Error::NonSymmetric { .. })));
        let loops = DenseMatrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(Graph::from_adjacency(loops), Err(Error::SelfLoop { node: 1 })));
        let neg = DenseMatrix::from_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]).unwrap();
        assert!(matches!(Graph::from_adjacency(neg), Err(Error::NegativeWeight { .. })));
    }
}
