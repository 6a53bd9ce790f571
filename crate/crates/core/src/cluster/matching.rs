use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{max_weight_assignment, Partition};
use crate::error::{Error, Result};

/// Outcome of scoring a found partition against the truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    /// Vertices not in the found cluster matched to their true cluster.
    pub misclassified_count: usize,
    /// Per true cluster (ordered by label, clusters absent from the found
    /// domain skipped): members outside the matched found cluster.
    pub per_cluster_errors: Vec<usize>,
    pub exact: bool,
}

struct Overlap {
    /// Sizes of the true clusters restricted to the found domain.
    truth_sizes: Vec<usize>,
    per_cluster_errors: Vec<usize>,
    found_clusters: usize,
}

fn overlap(found: &Partition, truth: &Partition) -> Result<Overlap> {
    if found.is_empty() {
        return Err(Error::InvalidArgument("found partition is empty".into()));
    }
    let mut found_index = BTreeMap::new();
    let mut truth_index = BTreeMap::new();
    let mut pairs = Vec::with_capacity(found.len());
    for (id, fl) in found.iter() {
        let tl = truth
            .label(id)
            .ok_or_else(|| Error::InvalidArgument(format!("vertex {id} missing from the truth")))?;
        let next_f = found_index.len();
        let next_t = truth_index.len();
        let f = *found_index.entry(fl).or_insert(next_f);
        let t = *truth_index.entry(tl).or_insert(next_t);
        pairs.push((f, t));
    }
    // Truth clusters indexed in label order.
    let truth_order: Vec<usize> = truth_index.keys().map(|l| truth_index[l]).collect();
    let (kf, kt) = (found_index.len(), truth_index.len());
    let size = kf.max(kt);
    let mut counts = vec![vec![0i64; size]; size];
    let mut truth_sizes_by_index = vec![0usize; kt];
    for &(f, t) in &pairs {
        counts[f][t] += 1;
        truth_sizes_by_index[t] += 1;
    }
    let assign = max_weight_assignment(&counts);
    let mut matched = vec![0usize; kt];
    for (f, &t) in assign.iter().enumerate() {
        if f < kf && t < kt {
            matched[t] = counts[f][t] as usize;
        }
    }
    let truth_sizes: Vec<usize> = truth_order.iter().map(|&t| truth_sizes_by_index[t]).collect();
    let per_cluster_errors = truth_order.iter().map(|&t| truth_sizes_by_index[t] - matched[t]).collect();
    Ok(Overlap { truth_sizes, per_cluster_errors, found_clusters: kf })
}

/// Scores `found` against `truth` under the label bijection maximizing
/// agreement. `found`'s domain must lie inside `truth`'s.
pub fn match_partitions(found: &Partition, truth: &Partition) -> Result<MatchReport> {
    let o = overlap(found, truth)?;
    let misclassified_count = o.per_cluster_errors.iter().sum();
    Ok(MatchReport {
        misclassified_count,
        exact: misclassified_count == 0 && o.found_clusters == o.truth_sizes.len(),
        per_cluster_errors: o.per_cluster_errors,
    })
}

/// Whether every true cluster loses at most an `eps` fraction of its
/// members (within the found domain) under the optimal matching.
pub fn is_eps_correct(found: &Partition, truth: &Partition, eps: f64) -> Result<bool> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps must lie in [0, 1), got {eps}")));
    }
    let o = overlap(found, truth)?;
    Ok(o
        .per_cluster_errors
        .iter()
        .zip(&o.truth_sizes)
        .all(|(&err, &size)| err as f64 <= eps * size as f64 + 1e-9))
}
