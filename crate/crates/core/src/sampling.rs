//! Node-subset selection: the greedy iterative scheme and random baselines.

use rand::distributions::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::extreme_singular_values;
use crate::matrix::{dot, norm2, norm2_sq, DenseMatrix};
use crate::scalar::Scalar;

/// How the greedy scheme picks its residual seed row ℓ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualNode {
    /// Candidate row of largest norm (ties → lowest index).
    Auto,
    /// A fixed node, 0-based.
    Node(usize),
}

/// An ordered set of selected nodes plus selection diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingSet<S> {
    indices: Vec<usize>,
    residual_node: Option<usize>,
    #[serde(rename = "scores")]
    selection_scores: Vec<S>,
}

impl<S: Scalar> SamplingSet<S> {
    pub fn new(
        indices: Vec<usize>,
        residual_node: Option<usize>,
        selection_scores: Vec<S>,
    ) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidSupport { reason: "empty sampling set" });
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSupport { reason: "repeated node index" });
        }
        Ok(Self { indices, residual_node, selection_scores })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn m(&self) -> usize {
        self.indices.len()
    }

    pub fn residual_node(&self) -> Option<usize> {
        self.residual_node
    }

    pub fn scores(&self) -> &[S] {
        &self.selection_scores
    }
}

/// Removes the span of `basis` (orthonormal vectors) from `v`; two passes
/// keep the result orthogonal to working precision.
fn project_out<S: Scalar>(basis: &[Vec<S>], v: &[S]) -> Vec<S> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, &w);
            for (wi, &qi) in w.iter_mut().zip(q.iter()) {
                *wi -= c * qi;
            }
        }
    }
    w
}

/// Greedy iterative selection. Deterministic; ties always break toward the
/// lowest node index.
///
/// Selection follows the residual-projection scheme for the first
/// rank-many picks (cost O(N·k²)); once the selected rows span the
/// coefficient space, any remaining picks maximize σ_min of the augmented
/// matrix, which costs one small SVD per candidate per step and is the
/// dominant expense when m substantially exceeds k.
pub fn iterative_selection<S: Scalar>(
    u: &DenseMatrix<S>,
    m: usize,
    residual_node: ResidualNode,
    tol: S,
) -> Result<SamplingSet<S>> {
    let n = u.rows();
    let k = u.cols();
    if k > n {
        return Err(Error::DimensionMismatch {
            expected: "basis with k ≤ N".into(),
            got: format!("{n}x{k}"),
        });
    }
    assert!(m >= 1, "m must be at least 1");
    assert!(tol > S::zero(), "tol must be positive");

    let rows: Vec<Vec<S>> = (0..n).map(|i| u.row(i).to_vec()).collect();
    let row_norm_sq: Vec<S> = rows.iter().map(|r| norm2_sq(r)).collect();

    let ell = match residual_node {
        ResidualNode::Node(l) => {
            if l >= n {
                return Err(Error::NodeOutOfRange { node: l + 1, n });
            }
            l
        }
        ResidualNode::Auto => {
            let mut best = 0;
            for i in 1..n {
                if row_norm_sq[i] > row_norm_sq[best] {
                    best = i;
                }
            }
            best
        }
    };

    let mut is_selected = vec![false; n];
    let mut selected: Vec<usize> = Vec::with_capacity(m);
    let mut scores: Vec<S> = Vec::with_capacity(m);
    // Orthonormal basis of the selected rows' span, grown one vector per pick.
    let mut q_basis: Vec<Vec<S>> = Vec::new();
    let is_candidate = |j: usize, is_selected: &[bool]| -> bool {
        j != ell && !is_selected[j] && row_norm_sq[j] > S::zero()
    };

    let mut seed_row = ell;
    let mut just_reseeded = false;
    while selected.len() < m && q_basis.len() < k {
        let r = project_out(&q_basis, &rows[seed_row]);
        let mut best: Option<(usize, S)> = None;
        if norm2(&r) > tol {
            for j in 0..n {
                if !is_candidate(j, &is_selected) {
                    continue;
                }
                let c = dot(&r, &rows[j]);
                let score = c * c / row_norm_sq[j];
                if best.map_or(true, |(_, s)| score > s) {
                    best = Some((j, score));
                }
            }
        }
        match best {
            Some((j, score)) if score > tol * tol => {
                is_selected[j] = true;
                selected.push(j);
                scores.push(score);
                let w = project_out(&q_basis, &rows[j]);
                let w_norm = norm2(&w);
                if w_norm > tol {
                    q_basis.push(w.iter().map(|&x| x / w_norm).collect());
                }
                just_reseeded = false;
            }
            _ if just_reseeded => break,
            _ => {
                // Residual exhausted: re-seed from the unselected row with the
                // largest component outside the selected span.
                let mut reseed: Option<(usize, S)> = None;
                for j in 0..n {
                    if !is_candidate(j, &is_selected) {
                        continue;
                    }
                    let p = norm2(&project_out(&q_basis, &rows[j]));
                    if reseed.map_or(true, |(_, best)| p > best) {
                        reseed = Some((j, p));
                    }
                }
                match reseed {
                    Some((j, p)) if p > tol => {
                        seed_row = j;
                        just_reseeded = true;
                    }
                    _ => break, // selected rows span everything reachable
                }
            }
        }
    }

    // Span complete: fill any remaining slots by maximizing σ_min of the
    // augmented selection.
    while selected.len() < m {
        let mut best: Option<(usize, S)> = None;
        for j in 0..n {
            if !is_candidate(j, &is_selected) {
                continue;
            }
            let mut aug: Vec<&[S]> = selected.iter().map(|&i| rows[i].as_slice()).collect();
            aug.push(&rows[j]);
            let sigma_min = match DenseMatrix::from_rows(&aug)
                .and_then(|m| extreme_singular_values(&m))
            {
                Ok((lo, _)) => lo,
                Err(_) => S::zero(),
            };
            if best.map_or(true, |(_, s)| sigma_min > s) {
                best = Some((j, sigma_min));
            }
        }
        match best {
            Some((j, sigma_min)) => {
                is_selected[j] = true;
                selected.push(j);
                scores.push(sigma_min);
            }
            None => {
                return Err(Error::SpanExhausted { selected: selected.len(), requested: m })
            }
        }
    }

    Ok(SamplingSet { indices: selected, residual_node: Some(ell), selection_scores: scores })
}

/// `m` distinct nodes drawn uniformly without replacement.
pub fn uniform_random<S: Scalar>(n: usize, m: usize, seed: u64) -> Result<SamplingSet<S>> {
    assert!(m >= 1, "m must be at least 1");
    if m > n {
        return Err(Error::TooManySamples { requested: m, available: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = rand::seq::index::sample(&mut rng, n, m).into_vec();
    Ok(SamplingSet { indices, residual_node: None, selection_scores: Vec::new() })
}

/// Sequential weighted draws without replacement, weights ∝ row energies.
pub fn leverage_score<S: Scalar>(
    u: &DenseMatrix<S>,
    m: usize,
    seed: u64,
) -> Result<SamplingSet<S>> {
    assert!(m >= 1, "m must be at least 1");
    let n = u.rows();
    let mut weights: Vec<f64> = (0..n).map(|i| norm2_sq(u.row(i)).as_f64()).collect();
    let available = weights.iter().filter(|&&w| w > 0.0).count();
    if available == 0 {
        return Err(Error::DegenerateWeights);
    }
    if m > available {
        return Err(Error::TooManySamples { requested: m, available });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = Vec::with_capacity(m);
    for _ in 0..m {
        let dist = WeightedIndex::new(&weights).expect("positive weights remain");
        let j = rng.sample(&dist);
        indices.push(j);
        weights[j] = 0.0;
    }
    Ok(SamplingSet { indices, residual_node: None, selection_scores: Vec::new() })
}

/// Invertibility predicate: σ_min(U_{S,:}) > 1e−10 · σ_max(U_{S,:}).
pub fn is_invertible_selection<S: Scalar>(u: &DenseMatrix<S>, s: &SamplingSet<S>) -> bool {
    assert!(s.m() >= u.cols(), "need at least k selected nodes");
    let us = u.select_rows(s.indices());
    match extreme_singular_values(&us) {
        Ok((sigma_min, sigma_max)) => sigma_min > S::tolerance(1e-10) * sigma_max,
        Err(_) => false,
    }
}
