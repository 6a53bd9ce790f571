use std::collections::BTreeMap;

use rand::Rng;

use crate::cluster::Partition;
use crate::error::{Error, Result};
use crate::model::Graph;
use crate::scalar::Scalar;
use crate::seed::{self, stream};

use super::{make_split, svd2_essential_with, DEFAULT_C3};

/// Winning candidate of a σ sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepChoice {
    /// Partition of `Y2`.
    pub partition: Partition,
    pub chosen_sigma: f64,
    /// Held-out log-likelihood of the chosen partition.
    pub score: f64,
}

/// `σ_1 = ln n / sqrt n`, doubled while it stays ≤ 1/2.
pub fn sigma_grid(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut sigma = nf.ln() / nf.sqrt();
    let mut grid = Vec::new();
    while sigma <= 0.5 {
        grid.push(sigma);
        sigma *= 2.0;
    }
    if grid.is_empty() {
        grid.push(0.5);
    }
    grid
}

/// Runs essential-rank SVD II for every σ in [`sigma_grid`] on one split and
/// keeps the partition whose block model best predicts held-out edges.
///
/// Vertex pairs inside `Y2` are divided at random into a fitting half and a
/// scoring half. Block densities are estimated on the fitting half and the
/// Bernoulli log-likelihood of the scoring half is the score. Ties go to
/// the smaller σ.
pub fn sigma_sweep<T: Scalar>(graph: &Graph, seed: u64) -> Result<SweepChoice> {
    let split = make_split(graph.n(), seed)?;
    let y2 = &split.y2;
    let mut rng = seed::rng(seed::derive(seed, stream::HOLDOUT, 0));
    let mut fit = Vec::new();
    let mut score = Vec::new();
    for (i, &u) in y2.iter().enumerate() {
        for &v in &y2[i + 1..] {
            if rng.random_bool(0.5) {
                fit.push((u, v));
            } else {
                score.push((u, v));
            }
        }
    }

    let mut best: Option<SweepChoice> = None;
    for sigma in sigma_grid(graph.n()) {
        let result = match svd2_essential_with::<T>(graph, sigma, DEFAULT_C3, &split) {
            Ok(r) => r,
            Err(Error::NoSignal) => continue,
            Err(e) => return Err(e),
        };
        let ll = held_out_log_likelihood(graph, &result.partition, &fit, &score);
        if best.as_ref().is_none_or(|b| ll > b.score) {
            best = Some(SweepChoice { partition: result.partition, chosen_sigma: sigma, score: ll });
        }
    }
    best.ok_or(Error::NoSignal)
}

fn held_out_log_likelihood(graph: &Graph, p: &Partition, fit: &[(usize, usize)], score: &[(usize, usize)]) -> f64 {
    let block = |u: usize, v: usize| {
        let (a, b) = (p.label(u).expect("pair inside Y2"), p.label(v).expect("pair inside Y2"));
        (a.min(b), a.max(b))
    };
    let mut counts: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for &(u, v) in fit {
        let c = counts.entry(block(u, v)).or_default();
        c.1 += 1.0;
        if graph.has_edge(u, v) {
            c.0 += 1.0;
        }
    }
    score
        .iter()
        .map(|&(u, v)| {
            // Add-half smoothing keeps unseen and empty blocks finite.
            let (e, m) = counts.get(&block(u, v)).copied().unwrap_or_default();
            let q = (e + 0.5) / (m + 1.0);
            if graph.has_edge(u, v) {
                q.ln()
            } else {
                (1.0 - q).ln()
            }
        })
        .sum()
}
