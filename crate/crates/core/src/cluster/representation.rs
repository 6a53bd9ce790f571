use std::collections::BTreeMap;

use super::{Partition, PointSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Result of testing whether an embedding separates the true clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct PerfectReport<T> {
    pub perfect: bool,
    /// The largest same-cluster distance, when the representation is
    /// perfect.
    pub best_r: Option<T>,
    pub d_in: T,
    /// Smallest cross-cluster distance (`+∞` for a single cluster).
    pub d_out: T,
}

/// Groups point indices by true cluster, in label order.
fn groups<T: Scalar>(points: &PointSet<T>, truth: &Partition) -> Result<Vec<Vec<usize>>> {
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &id) in points.ids().iter().enumerate() {
        let l = truth
            .label(id)
            .ok_or_else(|| Error::InvalidArgument(format!("point {id} has no true cluster")))?;
        by_label.entry(l).or_default().push(i);
    }
    Ok(by_label.into_values().collect())
}

/// Same-cluster distances at most `r` and cross-cluster distances at least
/// `4r`, with `r` the largest same-cluster distance.
pub fn check_perfect_representation<T: Scalar>(
    points: &PointSet<T>,
    truth: &Partition,
) -> Result<PerfectReport<T>> {
    let groups = groups(points, truth)?;
    let mut label = vec![0; points.len()];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            label[i] = g;
        }
    }
    let mut d_in2 = T::zero();
    let mut d_out2 = T::infinity();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d2 = points.dist2(i, j);
            if label[i] == label[j] {
                d_in2 = d_in2.max(d2);
            } else {
                d_out2 = d_out2.min(d2);
            }
        }
    }
    let (d_in, d_out) = (d_in2.sqrt(), d_out2.sqrt());
    let perfect = d_out > T::zero() && d_out >= T::of(4.0) * d_in;
    Ok(PerfectReport { perfect, best_r: perfect.then_some(d_in), d_in, d_out })
}

/// Number of members that must lie within `r` of a center.
fn required(size: usize, eps: f64) -> usize {
    (((1.0 - eps) * size as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Medoid of the densest half of a cluster: members are ranked by the
/// distance to their `⌈s/2⌉`-th nearest fellow member, and among the
/// better-ranked half the point with the least total distance to the rest of
/// that half is chosen.
fn dense_core_medoid<T: Scalar>(points: &PointSet<T>, members: &[usize]) -> usize {
    let s = members.len();
    if s <= 2 {
        return members[0];
    }
    let half = s.div_ceil(2);
    let mut radius: Vec<(T, usize)> = members
        .iter()
        .map(|&i| {
            let mut d: Vec<T> = members.iter().map(|&j| points.dist2(i, j)).collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (d[half - 1], i)
        })
        .collect();
    radius.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let core: Vec<usize> = radius[..half].iter().map(|&(_, i)| i).collect();
    let mut best = (T::infinity(), core[0]);
    for &i in &core {
        let total: T = core.iter().map(|&j| points.dist(i, j)).sum();
        if total < best.0 {
            best = (total, i);
        }
    }
    best.1
}

fn mean_of<T: Scalar>(points: &PointSet<T>, members: &[usize]) -> Vec<T> {
    let mut c = vec![T::zero(); points.dim()];
    for &i in members {
        for (x, &p) in c.iter_mut().zip(points.point(i)) {
            *x += p;
        }
    }
    let m = T::of(members.len() as f64);
    c.iter_mut().for_each(|x| *x /= m);
    c
}

fn dist_to<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt()
}

/// Distance from `center` to its `need`-th nearest member.
fn covering_radius<T: Scalar>(points: &PointSet<T>, members: &[usize], center: &[T], need: usize) -> T {
    if need == 0 {
        return T::zero();
    }
    let mut d: Vec<T> = members.iter().map(|&j| dist_to(center, points.point(j))).collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d[need - 1]
}

/// Repeatedly moves the center to the mean of its `need` nearest members.
fn trimmed_center<T: Scalar>(points: &PointSet<T>, members: &[usize], need: usize, start: Vec<T>) -> Vec<T> {
    let mut center = start;
    if need == 0 {
        return center;
    }
    for _ in 0..50 {
        let mut near: Vec<(T, usize)> =
            members.iter().map(|&j| (dist_to(&center, points.point(j)), j)).collect();
        near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let core: Vec<usize> = near[..need].iter().map(|&(_, j)| j).collect();
        let next = mean_of(points, &core);
        if next == center {
            break;
        }
        center = next;
    }
    center
}

/// Whether there are centers `x_1..x_k`, pairwise at least `4r` apart, with
/// at least `(1 − eps)|X_i|` points of each true cluster within `r` of
/// `x_i`.
///
/// Candidate centers per cluster are the dense-core medoid, the mean and a
/// trimmed mean; every combination is tried when there are at most six
/// clusters, otherwise the candidate with the smallest covering radius is
/// used. For fixed centers the smallest admissible `r` is exact. A `true`
/// answer is always a valid certificate.
pub fn check_eps_perfect_representation<T: Scalar>(
    points: &PointSet<T>,
    truth: &Partition,
    eps: f64,
) -> Result<bool> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps must lie in [0, 1), got {eps}")));
    }
    let groups = groups(points, truth)?;
    // (center, covering radius) candidates per cluster.
    let candidates: Vec<Vec<(Vec<T>, T)>> = groups
        .iter()
        .map(|members| {
            let need = required(members.len(), eps);
            let medoid = points.point(dense_core_medoid(points, members)).to_vec();
            let mean = mean_of(points, members);
            let trimmed = trimmed_center(points, members, need, medoid.clone());
            [medoid, mean, trimmed]
                .into_iter()
                .map(|c| {
                    let r = covering_radius(points, members, &c, need);
                    (c, r)
                })
                .collect()
        })
        .collect();

    let feasible = |choice: &[&(Vec<T>, T)]| -> bool {
        let r = choice.iter().map(|c| c.1).fold(T::zero(), T::max);
        let mut spacing = T::infinity();
        for (a, ca) in choice.iter().enumerate() {
            for cb in &choice[a + 1..] {
                spacing = spacing.min(dist_to(&ca.0, &cb.0));
            }
        }
        spacing > T::zero() && spacing >= T::of(4.0) * r
    };

    let k = candidates.len();
    if k > 6 {
        let choice: Vec<&(Vec<T>, T)> = candidates
            .iter()
            .map(|c| c.iter().min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap())
            .collect();
        return Ok(feasible(&choice));
    }
    let total = 3usize.pow(k as u32);
    Ok((0..total).any(|code| {
        let mut rest = code;
        let choice: Vec<&(Vec<T>, T)> = candidates
            .iter()
            .map(|c| {
                let pick = &c[rest % 3];
                rest /= 3;
                pick
            })
            .collect();
        feasible(&choice)
    }))
}
