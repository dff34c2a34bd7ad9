use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringStats {
    /// 3 × triangles / connected triples
    pub transitivity: f64,
    /// Mean local coefficient; nodes with κ < 2 count as 0.
    pub avg_local_clustering: f64,
}

fn triangles_at(graph: &Graph, v: usize) -> u64 {
    let ns = graph.neighbors(v);
    let mut t = 0;
    for (a, &u) in ns.iter().enumerate() {
        for &w in &ns[a + 1..] {
            if graph.has_edge(u, w) {
                t += 1;
            }
        }
    }
    t
}

/// `(triangles, connected triples)` as exact integers.
pub fn triangle_and_triple_counts(graph: &Graph) -> (u64, u64) {
    let mut corners = 0u64;
    let mut triples = 0u64;
    for v in 0..graph.node_count() {
        let k = graph.degree(v) as u64;
        triples += k * k.saturating_sub(1) / 2;
        corners += triangles_at(graph, v);
    }
    (corners / 3, triples)
}

pub fn clustering(graph: &Graph) -> Result<ClusteringStats> {
    let n = graph.node_count();
    if n < 3 {
        return Err(Error::DegenerateNetwork(format!(
            "{n} node(s); clustering needs at least 3"
        )));
    }
    let (triangles, triples) = triangle_and_triple_counts(graph);
    let transitivity = if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    };
    let local_sum: f64 = (0..n)
        .map(|v| {
            let k = graph.degree(v) as u64;
            if k < 2 {
                0.0
            } else {
                triangles_at(graph, v) as f64 / (k * (k - 1) / 2) as f64
            }
        })
        .sum();
    Ok(ClusteringStats {
        transitivity,
        avg_local_clustering: local_sum / n as f64,
    })
}
