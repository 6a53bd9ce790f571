use std::cmp::Ordering;

use super::{Partition, PointSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tree edge between point indices, ordered by `(weight, min id, max id)`.
#[derive(Debug, Clone, Copy)]
struct Edge<T> {
    w: T,
    lo: usize,
    hi: usize,
    a: usize,
    b: usize,
}

impl<T: Scalar> Edge<T> {
    fn new(points: &PointSet<T>, a: usize, b: usize, w: T) -> Self {
        let (ia, ib) = (points.ids()[a], points.ids()[b]);
        Self { w, lo: ia.min(ib), hi: ia.max(ib), a, b }
    }

    fn cmp(&self, other: &Self) -> Ordering {
        self.w
            .partial_cmp(&other.w)
            .unwrap_or(Ordering::Equal)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
    }
}

/// Minimum spanning tree of the complete Euclidean graph on the points,
/// with its `k − 1` heaviest edges removed; the remaining components are
/// the clusters.
pub fn cluster_by_distances_mst<T: Scalar>(points: &PointSet<T>, k: usize) -> Result<Partition> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("cannot cut {n} points into {k} clusters")));
    }

    // Prim on the dense graph. Edge keys are totally ordered, so the tree
    // is unique and independent of the start vertex. Squared distances
    // order edges the same way as distances.
    let mut in_tree = vec![false; n];
    let mut best: Vec<Option<Edge<T>>> = vec![None; n];
    let mut tree: Vec<Edge<T>> = Vec::with_capacity(n.saturating_sub(1));
    let mut current = 0;
    in_tree[0] = true;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let e = Edge::new(points, current, v, points.dist2(current, v));
            if best[v].is_none_or(|b| e.cmp(&b) == Ordering::Less) {
                best[v] = Some(e);
            }
        }
        let next = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&x, &y| best[x].unwrap().cmp(&best[y].unwrap()))
            .expect("a vertex remains outside the tree");
        in_tree[next] = true;
        tree.push(best[next].unwrap());
        current = next;
    }

    tree.sort_by(|x, y| y.cmp(x));
    let mut dsu = DisjointSets::new(n);
    for e in &tree[k - 1..] {
        dsu.union(e.a, e.b);
    }
    Ok(components(points, &mut dsu))
}

/// Greedy clustering for a known radius: take the unassigned point with the
/// smallest id and put every unassigned point within `2r` in its cluster.
pub fn cluster_by_radius<T: Scalar>(points: &PointSet<T>, r: T) -> Result<Partition> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by_key(|&i| points.ids()[i]);
    cluster_by_radius_ordered(points, r, &order)
}

/// Radius greedy with an explicit pick order (indices into `points`).
pub fn cluster_by_radius_ordered<T: Scalar>(points: &PointSet<T>, r: T, order: &[usize]) -> Result<Partition> {
    if !(r > T::zero()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let n = points.len();
    let reach2 = (r + r) * (r + r);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for &seed in order {
        if label[seed] != usize::MAX {
            continue;
        }
        for v in 0..n {
            if label[v] == usize::MAX && points.dist2(seed, v) <= reach2 {
                label[v] = next;
            }
        }
        next += 1;
    }
    if label.contains(&usize::MAX) {
        return Err(Error::InvalidArgument("pick order does not cover every point".into()));
    }
    Partition::from_labels(points.ids(), &label)
}

fn components<T: Scalar>(points: &PointSet<T>, dsu: &mut DisjointSets) -> Partition {
    let n = points.len();
    let roots: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
    Partition::from_labels(points.ids(), &roots).expect("ids are distinct").canonical()
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let up = self.parent[x];
            self.parent[x] = root;
            x = up;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
