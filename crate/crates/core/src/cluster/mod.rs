//! Clustering by distances and partition comparison.

mod assignment;
mod matching;
mod mst;
mod representation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub use assignment::max_weight_assignment;
pub use matching::{is_eps_correct, match_partitions, MatchReport};
pub(crate) use mst::DisjointSets;
pub use mst::{cluster_by_distances_mst, cluster_by_radius, cluster_by_radius_ordered};
pub use representation::{
    check_eps_perfect_representation, check_perfect_representation, PerfectReport,
};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectra::DenseMatrix;

/// Points in Euclidean space keyed by vertex id.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    ids: Vec<usize>,
    /// One point per row.
    coords: DenseMatrix<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(ids: Vec<usize>, points: Vec<Vec<T>>) -> Result<Self> {
        if ids.len() != points.len() {
            return Err(Error::DimensionMismatch(format!("{} ids for {} points", ids.len(), points.len())));
        }
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("points of different dimension".into()));
        }
        let coords = DenseMatrix::from_row_major(ids.len(), dim, points.concat())?;
        Self::from_rows(ids, coords)
    }

    /// Points are the rows of `coords`.
    pub fn from_rows(ids: Vec<usize>, coords: DenseMatrix<T>) -> Result<Self> {
        if ids.len() != coords.rows() {
            return Err(Error::DimensionMismatch(format!("{} ids for {} points", ids.len(), coords.rows())));
        }
        if ids.iter().collect::<BTreeSet<_>>().len() != ids.len() {
            return Err(Error::InvalidArgument("duplicate point ids".into()));
        }
        if !coords.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { ids, coords })
    }

    /// Points are the columns of `coords`, as produced by
    /// [`Basis::coordinates`](crate::spectra::Basis::coordinates).
    pub fn from_columns(ids: Vec<usize>, coords: &DenseMatrix<T>) -> Result<Self> {
        Self::from_rows(ids, coords.transpose())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.coords.cols()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn point(&self, i: usize) -> &[T] {
        self.coords.row(i)
    }

    pub fn dist2(&self, i: usize, j: usize) -> T {
        self.point(i).iter().zip(self.point(j)).map(|(&a, &b)| (a - b) * (a - b)).sum()
    }

    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist2(i, j).sqrt()
    }

    pub fn map_points(&self, f: impl Fn(&[T]) -> Vec<T>) -> Result<Self> {
        let points = (0..self.len()).map(|i| f(self.point(i))).collect();
        Self::new(self.ids.clone(), points)
    }
}

/// Assignment of vertex ids to cluster labels over a (possibly partial)
/// domain. Labels carry no meaning beyond equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Partition {
    assignment: BTreeMap<usize, usize>,
}

impl Partition {
    pub fn from_labels(ids: &[usize], labels: &[usize]) -> Result<Self> {
        if ids.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!("{} ids for {} labels", ids.len(), labels.len())));
        }
        let assignment: BTreeMap<_, _> = ids.iter().copied().zip(labels.iter().copied()).collect();
        if assignment.len() != ids.len() {
            return Err(Error::InvalidArgument("duplicate ids in partition".into()));
        }
        Ok(Self { assignment })
    }

    /// Cluster `i` of the list gets label `i`.
    pub fn from_clusters(clusters: &[Vec<usize>]) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (label, members) in clusters.iter().enumerate() {
            for &id in members {
                if assignment.insert(id, label).is_some() {
                    return Err(Error::InvalidArgument(format!("vertex {id} in two clusters")));
                }
            }
        }
        Ok(Self { assignment })
    }

    /// Partition of `0..labels.len()` with vertex `u` labelled `labels[u]`.
    pub fn from_membership(labels: &[usize]) -> Self {
        Self { assignment: labels.iter().copied().enumerate().collect() }
    }

    pub fn label(&self, id: usize) -> Option<usize> {
        self.assignment.get(&id).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.keys().copied()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.assignment.contains_key(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().map(|(&id, &l)| (id, l))
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        self.assignment.values().copied().collect()
    }

    pub fn num_clusters(&self) -> usize {
        self.labels().len()
    }

    /// Members of each cluster, clusters ordered by label, members by id.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (id, l) in self.iter() {
            by_label.entry(l).or_default().push(id);
        }
        by_label.into_values().collect()
    }

    pub fn restrict(&self, ids: impl IntoIterator<Item = usize>) -> Self {
        let assignment = ids.into_iter().filter_map(|id| self.label(id).map(|l| (id, l))).collect();
        Self { assignment }
    }

    /// Same clustering with labels renumbered `0, 1, ...` in order of each
    /// cluster's smallest id. Two partitions describe the same clustering
    /// iff their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let mut rename = BTreeMap::new();
        let assignment = self
            .iter()
            .map(|(id, l)| {
                let next = rename.len();
                (id, *rename.entry(l).or_insert(next))
            })
            .collect();
        Self { assignment }
    }

    pub fn same_clustering(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    /// Text export: one `vertex_id cluster_label` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, l) in self.iter() {
            let _ = writeln!(out, "{id} {l}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut ids = Vec::new();
        let mut labels = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(id)), Some(Ok(l)), None) => {
                    ids.push(id);
                    labels.push(l);
                }
                _ => return Err(Error::InvalidArgument(format!("partition line `{line}`"))),
            }
        }
        Self::from_labels(&ids, &labels)
    }
}
