use crate::cluster::Partition;
use crate::error::{Error, Result};
use crate::model::Graph;

/// Completes a partition of a vertex subset to all vertices: each missing
/// vertex joins the cluster where its neighbour fraction is highest
/// (ties to the smaller label).
pub fn extend_by_density(graph: &Graph, partial: &Partition) -> Result<Partition> {
    if partial.is_empty() {
        return Err(Error::InvalidArgument("cannot extend an empty partition".into()));
    }
    if let Some(v) = partial.domain().find(|&v| v >= graph.n()) {
        return Err(Error::InvalidArgument(format!("vertex {v} outside the graph")));
    }
    let clusters = partial.clusters();
    let labels: Vec<usize> = (0..graph.n())
        .map(|u| {
            if let Some(l) = partial.label(u) {
                return l;
            }
            let mut best = (0, f64::NEG_INFINITY);
            for (c, members) in partial.labels().into_iter().zip(&clusters) {
                let frac = graph.neighbors_in(u, members) as f64 / members.len() as f64;
                if frac > best.1 {
                    best = (c, frac);
                }
            }
            best.0
        })
        .collect();
    Ok(Partition::from_membership(&labels).canonical())
}

/// Rebuilds a planted bipartition from a 2-partition of all vertices.
///
/// `X1'` is the side with the higher internal edge density. Each vertex is
/// scored by its number of neighbours in `X1'`, and the `⌈n/2⌉` highest
/// scores (ties to the smaller id) form the first cluster.
pub fn correct_bipartition(graph: &Graph, approx: &Partition) -> Result<Partition> {
    let n = graph.n();
    if approx.len() != n || approx.domain().any(|v| v >= n) || approx.num_clusters() != 2 {
        return Err(Error::InvalidArgument("approx must be a 2-partition of every vertex".into()));
    }
    let clusters = approx.clusters();
    let density = |c: &[usize]| -> f64 {
        let m = c.len();
        if m < 2 {
            return 0.0;
        }
        let inside: usize = c.iter().map(|&u| graph.neighbors_in(u, c)).sum();
        inside as f64 / (m * (m - 1)) as f64
    };
    let x1 = if density(&clusters[1]) > density(&clusters[0]) { &clusters[1] } else { &clusters[0] };
    let mut order: Vec<(usize, usize)> = (0..n).map(|u| (graph.neighbors_in(u, x1), u)).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut labels = vec![1; n];
    for &(_, u) in order.iter().take(n.div_ceil(2)) {
        labels[u] = 0;
    }
    Ok(Partition::from_membership(&labels).canonical())
}
