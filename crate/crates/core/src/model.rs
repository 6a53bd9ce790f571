//! Planted partition (stochastic block model) instances: construction,
//! separation/noise/spectral statistics and graph sampling.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{self, stream};
use crate::spectra::{symmetric_eigen, DenseMatrix};

/// A singular value of `P` counts toward its rank when it is at least this
/// fraction of the largest one.
pub const RANK_TOL: f64 = 1e-9;

/// Model description as read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub sizes: Vec<usize>,
    pub block_probs: Vec<Vec<f64>>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<PlantedModel> {
        build_model(&self.sizes, &self.block_probs)
    }
}

/// Ground-truth partition of `n` vertices into `k` clusters with a
/// symmetric matrix of block edge probabilities. Vertices are laid out
/// cluster by cluster; cluster labels are `0..k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedModel {
    sizes: Vec<usize>,
    membership: Vec<usize>,
    block_probs: Vec<Vec<f64>>,
}

pub fn build_model(sizes: &[usize], block_probs: &[Vec<f64>]) -> Result<PlantedModel> {
    let k = sizes.len();
    if k == 0 {
        return Err(Error::InvalidModel("no clusters".into()));
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::InvalidModel(format!("cluster {i} is empty")));
    }
    if block_probs.len() != k || block_probs.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidModel(format!("block_probs must be {k}x{k}")));
    }
    for (i, row) in block_probs.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidModel(format!("probability {p} at ({i},{j})")));
            }
            if p != block_probs[j][i] {
                return Err(Error::InvalidModel(format!("block_probs not symmetric at ({i},{j})")));
            }
        }
    }
    let membership = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat_n(c, s)).collect();
    Ok(PlantedModel { sizes: sizes.to_vec(), membership, block_probs: block_probs.to_vec() })
}

/// Separation, noise and spectral parameters of a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelStats {
    /// Minimum distance between columns of `P` in different clusters;
    /// `+∞` for a single cluster.
    pub delta: f64,
    /// Largest entry standard deviation, `max sqrt(p(1 − p))`.
    pub sigma: f64,
    pub s_min: usize,
    /// k-th largest singular value of `P`.
    pub lambda_k: f64,
    pub rank_p: usize,
    /// The `k` leading singular values of `P` (the rest are zero). Values
    /// below `RANK_TOL` times the largest are stored as exact zeros.
    pub singular_values: Vec<f64>,
}

impl ModelStats {
    /// l-th largest singular value of `P` (1-based); zero past `k`.
    pub fn lambda(&self, l: usize) -> f64 {
        l.checked_sub(1).and_then(|i| self.singular_values.get(i)).copied().unwrap_or(0.0)
    }
}

impl PlantedModel {
    pub fn n(&self) -> usize {
        self.membership.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn membership(&self) -> &[usize] {
        &self.membership
    }

    pub fn block_probs(&self) -> &[Vec<f64>] {
        &self.block_probs
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec { sizes: self.sizes.clone(), block_probs: self.block_probs.clone() }
    }

    /// Edge probability between vertices `u` and `v` (the entry `P[u][v]`).
    #[inline]
    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.block_probs[self.membership[u]][self.membership[v]]
    }

    /// The full `n x n` expectation matrix `P`, diagonal included.
    pub fn expectation_matrix<T: Scalar>(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.n(), self.n(), |u, v| T::of(self.prob(u, v)))
    }

    /// Statistics computed on the `k x k` reduction of `P`.
    ///
    /// With `D = diag(sqrt(sizes))`, `P = (Z D⁻¹)(D B D)(Z D⁻¹)ᵀ` where `Z`
    /// is the membership indicator, and `Z D⁻¹` has orthonormal columns, so
    /// the nonzero singular values of `P` are the absolute eigenvalues of
    /// the symmetric matrix `D B D`.
    pub fn stats(&self) -> ModelStats {
        let k = self.k();
        let b = &self.block_probs;
        let mut delta = f64::INFINITY;
        for a in 0..k {
            for c in a + 1..k {
                let d2: f64 = (0..k).map(|r| self.sizes[r] as f64 * (b[r][a] - b[r][c]).powi(2)).sum();
                delta = delta.min(d2.sqrt());
            }
        }
        let sigma = b.iter().flatten().map(|&p| (p * (1.0 - p)).sqrt()).fold(0.0, f64::max);

        let root: Vec<f64> = self.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
        let reduced: Vec<f64> = (0..k * k).map(|i| root[i / k] * b[i / k][i % k] * root[i % k]).collect();
        let mut singular_values: Vec<f64> =
            symmetric_eigen(&reduced, k, false).values.into_iter().map(f64::abs).collect();
        singular_values.sort_by(|x, y| y.total_cmp(x));
        let top = singular_values[0];
        for s in singular_values.iter_mut() {
            if *s < RANK_TOL * top {
                *s = 0.0;
            }
        }
        let rank_p = singular_values.iter().filter(|&&s| s > 0.0).count();

        ModelStats {
            delta,
            sigma,
            s_min: *self.sizes.iter().min().expect("k >= 1"),
            lambda_k: singular_values[k - 1],
            rank_p,
            singular_values,
        }
    }
}

pub fn compute_stats(model: &PlantedModel) -> ModelStats {
    model.stats()
}

/// Simple undirected graph stored as a dense symmetric 0/1 adjacency
/// matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
    seed: u64,
}

impl Graph {
    pub fn from_adjacency(n: usize, adjacency: Vec<bool>, seed: u64) -> Result<Self> {
        if adjacency.len() != n * n {
            return Err(Error::DimensionMismatch(format!("{} entries for n = {n}", adjacency.len())));
        }
        for u in 0..n {
            if adjacency[u * n + u] {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            for v in 0..u {
                if adjacency[u * n + v] != adjacency[v * n + u] {
                    return Err(Error::InvalidArgument(format!("asymmetric pair ({u},{v})")));
                }
            }
        }
        Ok(Self { n, adjacency, seed })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], seed: u64) -> Result<Self> {
        let mut adjacency = vec![false; n * n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            adjacency[u * n + v] = true;
            adjacency[v * n + u] = true;
        }
        Ok(Self { n, adjacency, seed })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n + v]
    }

    pub fn adjacency_row(&self, u: usize) -> &[bool] {
        &self.adjacency[u * self.n..(u + 1) * self.n]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency_row(u).iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
    }

    /// Number of neighbours of `u` inside `set`.
    pub fn neighbors_in(&self, u: usize, set: &[usize]) -> usize {
        let row = self.adjacency_row(u);
        set.iter().filter(|&&v| row[v]).count()
    }

    /// Adjacency submatrix with the given row and column vertex sets.
    pub fn submatrix<T: Scalar>(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix<T> {
        DenseMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            if self.has_edge(rows[r], cols[c]) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    pub fn adjacency_matrix<T: Scalar>(&self) -> DenseMatrix<T> {
        let all: Vec<usize> = (0..self.n).collect();
        self.submatrix(&all, &all)
    }

    /// Graph with vertex `u` renamed to `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut adjacency = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                adjacency[perm[u] * n + perm[v]] = self.has_edge(u, v);
            }
        }
        Self { n, adjacency, seed: self.seed }
    }

    /// Edge-list text: a `# n=<n> seed=<seed>` header, then one `u v` pair
    /// per line with `u < v`, 0-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={} seed={}\n", self.n, self.seed);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let bad = |what: String| Error::InvalidArgument(format!("edge list: {what}"));
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty input".into()))?;
        let mut n = None;
        let mut seed = None;
        for field in header.trim_start_matches('#').split_whitespace() {
            if let Some(x) = field.strip_prefix("n=") {
                n = x.parse::<usize>().ok();
            } else if let Some(x) = field.strip_prefix("seed=") {
                seed = x.parse::<u64>().ok();
            }
        }
        let (Some(n), Some(seed)) = (n, seed) else {
            return Err(bad(format!("bad header `{header}`")));
        };
        let mut edges = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(bad(format!("bad line `{line}`"))),
            }
        }
        Self::from_edges(n, &edges, seed)
    }
}

/// Draws each pair `u < v` independently with probability `P[u][v]`.
pub fn sample_graph(model: &PlantedModel, seed: u64) -> Graph {
    let n = model.n();
    let mut rng = seed::rng(seed::derive(seed, stream::GRAPH, 0));
    let mut adjacency = vec![false; n * n];
    for u in 0..n {
        for v in u + 1..n {
            // One draw per pair regardless of p keeps the stream aligned.
            let x: f64 = rng.random();
            if x < model.prob(u, v) {
                adjacency[u * n + v] = true;
                adjacency[v * n + u] = true;
            }
        }
    }
    Graph { n, adjacency, seed }
}

/// Centered noise `E = adjacency − P` of the graph sampled with `seed`.
/// The diagonal, which is never sampled, is zero.
pub fn sample_noise_matrix(model: &PlantedModel, seed: u64) -> DenseMatrix<f64> {
    noise_of(model, &sample_graph(model, seed))
}

pub fn noise_of(model: &PlantedModel, graph: &Graph) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(model.n(), model.n(), |u, v| {
        if u == v {
            0.0
        } else {
            f64::from(u8::from(graph.has_edge(u, v))) - model.prob(u, v)
        }
    })
}

/// Preset models.
pub mod presets {
    use super::*;

    /// Clique of size `s` planted in `G(n, p)`.
    pub fn clique(n: usize, p: f64, s: usize) -> Result<PlantedModel> {
        if s == 0 || s > n {
            return Err(Error::InvalidModel(format!("clique size {s} for n = {n}")));
        }
        if s == n {
            return build_model(&[n], &[vec![1.0]]);
        }
        build_model(&[s, n - s], &[vec![1.0, p], vec![p, p]])
    }

    /// `k` equal color classes: no edges inside a class, probability `p`
    /// across classes.
    pub fn coloring(n: usize, k: usize, p: f64) -> Result<PlantedModel> {
        if k == 0 || !n.is_multiple_of(k) {
            return Err(Error::InvalidModel(format!("{n} vertices do not split into {k} equal classes")));
        }
        let probs = (0..k).map(|i| (0..k).map(|j| if i == j { 0.0 } else { p }).collect()).collect::<Vec<_>>();
        build_model(&vec![n / k; k], &probs)
    }

    /// Two halves with density `p` inside and `q` across.
    pub fn bipartition(n: usize, p: f64, q: f64) -> Result<PlantedModel> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!("bipartition needs an even n, got {n}")));
        }
        build_model(&[n / 2, n / 2], &[vec![p, q], vec![q, p]])
    }
}

#[cfg(test)]
mod tests;
