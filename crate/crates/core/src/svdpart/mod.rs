//! Spectral partition recovery: SVD I, SVD II and their extensions.
//!
//! SVD II splits the vertices into `Z` (rows) and `Y = Y1 ∪ Y2` (columns)
//! of the bipartite adjacency block `B`. The top-k left subspace of the
//! `Y1` columns is estimated, the `Y2` columns are projected onto it and the
//! projected points are clustered by distances. Because `Y1` and `Y2` are
//! disjoint, the subspace and the projected noise come from disjoint sets of
//! edge draws.

mod conditions;
mod correction;
mod repetition;
mod sweep;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

pub use conditions::{check_conditions, ConditionReport};
pub use correction::{correct_bipartition, extend_by_density};
pub use repetition::{
    default_repetitions, full_partition_by_repetition, merge_runs, repetition_splits,
};
pub use sweep::{sigma_grid, sigma_sweep, SweepChoice};

use crate::cluster::{cluster_by_distances_mst, Partition, PointSet};
use crate::error::{Error, Result};
use crate::model::Graph;
use crate::scalar::Scalar;
use crate::seed::{self, stream};
use crate::spectra::{svd_values, top_k_left_subspace, DenseMatrix};

/// Default essential-rank constant `c3`.
pub const DEFAULT_C3: f64 = 4.0;

const SPLIT_ATTEMPTS: u64 = 100;

/// Random vertex split `V = Z ∪ Y1 ∪ Y2`. All sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub y1: Vec<usize>,
    pub y2: Vec<usize>,
    pub seed: u64,
}

impl SplitPlan {
    /// Builds a plan from explicit `Z` and `Y1`; the remaining vertices form `Y2`.
    pub fn from_sets(n: usize, z: &[usize], y1: &[usize], seed: u64) -> Result<Self> {
        let mut side = vec![2u8; n];
        for (set, tag) in [(z, 0u8), (y1, 1u8)] {
            for &v in set {
                if v >= n || side[v] != 2 {
                    return Err(Error::InvalidArgument(format!("vertex {v} out of range or repeated")));
                }
                side[v] = tag;
            }
        }
        Ok(Self::from_sides(&side, seed))
    }

    fn from_sides(side: &[u8], seed: u64) -> Self {
        let pick = |t: u8| -> Vec<usize> { (0..side.len()).filter(|&v| side[v] == t).collect() };
        let (z, y1, y2) = (pick(0), pick(1), pick(2));
        let y = (0..side.len()).filter(|&v| side[v] != 0).collect();
        SplitPlan { y, z, y1, y2, seed }
    }

    pub fn n(&self) -> usize {
        self.y.len() + self.z.len()
    }
}

/// Draws `Y`/`Z` with probability 1/2 per vertex, then `Y1`/`Y2` likewise.
/// Splits with an empty `Z`, `Y1` or `Y2` are redrawn from derived seeds.
pub fn make_split(n: usize, seed: u64) -> Result<SplitPlan> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("a split needs n ≥ 4, got {n}")));
    }
    for attempt in 0..SPLIT_ATTEMPTS {
        let s = if attempt == 0 {
            seed::derive(seed, stream::SPLIT, 0)
        } else {
            seed::derive(seed, stream::SPLIT_RETRY, attempt)
        };
        let mut rng = seed::rng(s);
        let side: Vec<u8> = (0..n)
            .map(|_| {
                if !rng.random_bool(0.5) {
                    0
                } else if rng.random_bool(0.5) {
                    1
                } else {
                    2
                }
            })
            .collect();
        let plan = SplitPlan::from_sides(&side, seed);
        if !plan.z.is_empty() && !plan.y1.is_empty() && !plan.y2.is_empty() {
            return Ok(plan);
        }
    }
    Err(Error::DegenerateSplit { n })
}

/// Output of one SVD II run. The partition covers `split.y2` only.
#[derive(Debug, Clone)]
pub struct Svd2Result<T> {
    pub partition: Partition,
    /// Projected `Y2` columns in subspace coordinates, keyed by vertex.
    pub points: PointSet<T>,
    pub split: SplitPlan,
    pub k_used: usize,
    pub degenerate_gap: bool,
}

impl<T> Svd2Result<T> {
    pub fn metadata(&self) -> serde_json::Value {
        json!({
            "seed": self.split.seed,
            "k_used": self.k_used,
            "degenerate_gap": self.degenerate_gap,
            "split_sizes": {
                "y1": self.split.y1.len(),
                "y2": self.split.y2.len(),
                "z": self.split.z.len(),
            },
        })
    }
}

/// `Â`: rows `Z`, columns `Y1`.
pub(crate) fn a_hat<T: Scalar>(graph: &Graph, split: &SplitPlan) -> DenseMatrix<T> {
    graph.submatrix(&split.z, &split.y1)
}

/// Columns of `B` to be projected: rows `Z`, columns `Y2`.
pub(crate) fn b_y2<T: Scalar>(graph: &Graph, split: &SplitPlan) -> DenseMatrix<T> {
    graph.submatrix(&split.z, &split.y2)
}

fn check_split(graph: &Graph, split: &SplitPlan) -> Result<()> {
    if split.n() != graph.n() {
        return Err(Error::DimensionMismatch(format!(
            "split of {} vertices for a graph on {}",
            split.n(),
            graph.n()
        )));
    }
    Ok(())
}

/// SVD II on a given split.
pub fn svd2_with_split<T: Scalar>(graph: &Graph, k: usize, split: &SplitPlan) -> Result<Svd2Result<T>> {
    check_split(graph, split)?;
    if k == 0 {
        return Err(Error::RankOutOfRange { k, max: split.y1.len().min(split.z.len()) });
    }
    if split.y1.len() < k || split.z.len() < k {
        return Err(Error::InsufficientSplit { k, y1: split.y1.len(), z: split.z.len() });
    }
    project_and_cluster(graph, k, split, &a_hat(graph, split))
}

fn project_and_cluster<T: Scalar>(
    graph: &Graph,
    k: usize,
    split: &SplitPlan,
    a_hat: &DenseMatrix<T>,
) -> Result<Svd2Result<T>> {
    let subspace = top_k_left_subspace(a_hat, k)?;
    let coords = subspace.basis.coordinates(&b_y2(graph, split))?;
    let points = PointSet::from_columns(split.y2.clone(), &coords)?;
    let partition = cluster_by_distances_mst(&points, k)?;
    Ok(Svd2Result {
        partition,
        points,
        split: split.clone(),
        k_used: k,
        degenerate_gap: subspace.degenerate_gap,
    })
}

/// SVD II with a split drawn from `seed`.
pub fn svd2_run<T: Scalar>(graph: &Graph, k: usize, seed: u64) -> Result<Svd2Result<T>> {
    svd2_with_split(graph, k, &make_split(graph.n(), seed)?)
}

/// SVD I: all adjacency columns projected onto the adjacency matrix's own
/// top-k left subspace, then clustered by distances.
pub fn svd1_run<T: Scalar>(graph: &Graph, k: usize) -> Result<Partition> {
    let a: DenseMatrix<T> = graph.adjacency_matrix();
    let basis = top_k_left_subspace(&a, k)?.basis;
    let coords = basis.coordinates(&a)?;
    let points = PointSet::from_columns((0..graph.n()).collect(), &coords)?;
    cluster_by_distances_mst(&points, k)
}

/// Largest `l` with `σ_l(m) ≥ c3·sigma·sqrt(max(rows, cols))`; 0 if none.
pub fn essential_rank<T: Scalar>(m: &DenseMatrix<T>, sigma: f64, c3: f64) -> Result<usize> {
    if !(sigma > 0.0 && sigma.is_finite()) || !(c3 > 0.0 && c3.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} and c3 = {c3} must be positive")));
    }
    let n = m.rows().max(m.cols()) as f64;
    let threshold = T::of(c3 * sigma * n.sqrt());
    Ok(svd_values(m)?.iter().take_while(|&&v| v >= threshold).count())
}

/// SVD II with `k` replaced by the essential rank of `Â` at [`DEFAULT_C3`].
pub fn svd2_essential<T: Scalar>(graph: &Graph, sigma: f64, seed: u64) -> Result<Svd2Result<T>> {
    svd2_essential_with(graph, sigma, DEFAULT_C3, &make_split(graph.n(), seed)?)
}

pub fn svd2_essential_with<T: Scalar>(
    graph: &Graph,
    sigma: f64,
    c3: f64,
    split: &SplitPlan,
) -> Result<Svd2Result<T>> {
    check_split(graph, split)?;
    let a = a_hat::<T>(graph, split);
    let l = essential_rank(&a, sigma, c3)?;
    if l == 0 {
        return Err(Error::NoSignal);
    }
    project_and_cluster(graph, l.min(split.y2.len()), split, &a)
}

#[cfg(test)]
mod tests;
