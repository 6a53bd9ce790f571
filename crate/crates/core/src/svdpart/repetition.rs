use std::collections::BTreeMap;

use crate::cluster::{DisjointSets, Partition};
use crate::error::{Error, Result};
use crate::model::Graph;
use crate::scalar::Scalar;
use crate::seed::{self, stream};

use super::{make_split, svd2_with_split, SplitPlan};

/// `⌈3·ln n⌉`.
pub fn default_repetitions(n: usize) -> usize {
    (3.0 * (n as f64).ln()).ceil().max(1.0) as usize
}

/// The `l` splits used by [`full_partition_by_repetition`].
pub fn repetition_splits(n: usize, l: usize, seed: u64) -> Result<Vec<SplitPlan>> {
    (0..l as u64).map(|i| make_split(n, seed::derive(seed, stream::REPETITION, i))).collect()
}

/// Runs SVD II `l` times (default [`default_repetitions`]) on independent
/// splits and merges the `Y2` partitions with [`merge_runs`].
pub fn full_partition_by_repetition<T: Scalar>(
    graph: &Graph,
    k: usize,
    l: Option<usize>,
    seed: u64,
) -> Result<Partition> {
    let l = l.unwrap_or_else(|| default_repetitions(graph.n()));
    if l == 0 {
        return Err(Error::InvalidArgument("at least one repetition is required".into()));
    }
    let runs = repetition_splits(graph.n(), l, seed)?
        .iter()
        .map(|split| svd2_with_split::<T>(graph, k, split).map(|r| r.partition))
        .collect::<Result<Vec<_>>>()?;
    merge_runs(&runs, graph.n(), k)
}

/// Merges partial partitions of `0..n`: clusters of different runs that
/// share a vertex are joined, and each vertex takes the majority merged
/// cluster over the runs that cover it.
///
/// Fails with `CoverageFailure` when some vertex is in no run and with
/// `MergeConflict` when the merge does not yield exactly `k` clusters.
pub fn merge_runs(runs: &[Partition], n: usize, k: usize) -> Result<Partition> {
    let mut node_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (r, run) in runs.iter().enumerate() {
        for l in run.labels() {
            let next = node_of.len();
            node_of.insert((r, l), next);
        }
    }
    let mut dsu = DisjointSets::new(node_of.len());
    let mut first_node: Vec<Option<usize>> = vec![None; n];
    for (r, run) in runs.iter().enumerate() {
        for (v, l) in run.iter() {
            if v >= n {
                return Err(Error::InvalidArgument(format!("vertex {v} outside 0..{n}")));
            }
            let node = node_of[&(r, l)];
            match first_node[v] {
                Some(other) => dsu.union(other, node),
                None => first_node[v] = Some(node),
            }
        }
    }

    let uncovered = first_node.iter().filter(|x| x.is_none()).count();
    if uncovered > 0 {
        return Err(Error::CoverageFailure { uncovered });
    }
    let mut roots: Vec<usize> = (0..node_of.len()).map(|x| dsu.find(x)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() != k {
        return Err(Error::MergeConflict { found: roots.len(), expected: k });
    }

    let mut votes: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    for (r, run) in runs.iter().enumerate() {
        for (v, l) in run.iter() {
            *votes[v].entry(dsu.find(node_of[&(r, l)])).or_default() += 1;
        }
    }
    let labels: Vec<usize> = votes
        .iter()
        .map(|tally| {
            let (&root, _) = tally
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .expect("every vertex is covered");
            root
        })
        .collect();
    Ok(Partition::from_membership(&labels).canonical())
}
