//! Brandes betweenness and Freeman betweenness centralization.
//!
//! Shortest-path ties are split evenly. Sources are processed in parallel and
//! the per-source dependency vectors are summed in source order, so the
//! result does not depend on the thread count.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::Graph;
use crate::error::{Error, Result};

fn dependencies(graph: &Graph, s: usize) -> Vec<f64> {
    let n = graph.node_count();
    let mut order = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    sigma[s] = 1.0;
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in graph.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    while let Some(w) = order.pop() {
        let coeff = (1.0 + delta[w]) / sigma[w];
        for &v in &preds[w] {
            delta[v] += sigma[v] * coeff;
        }
    }
    delta[s] = 0.0;
    delta
}

/// Unnormalized betweenness per node; each unordered pair counted once.
pub fn betweenness(graph: &Graph) -> Vec<f64> {
    let n = graph.node_count();
    let per_source: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| dependencies(graph, s))
        .collect();
    let mut total = vec![0.0f64; n];
    for delta in &per_source {
        for (t, d) in total.iter_mut().zip(delta) {
            *t += d;
        }
    }
    for t in &mut total {
        *t /= 2.0;
    }
    total
}

/// `Σ (b_max − b_i) / ((n−1)² (n−2) / 2)`: 1 for a star, 0 for vertex-transitive graphs.
pub fn betweenness_centralization(graph: &Graph) -> Result<f64> {
    let n = graph.node_count();
    if n < 3 {
        return Err(Error::DegenerateNetwork(format!(
            "{n} node(s); centralization needs at least 3"
        )));
    }
    let b = betweenness(graph);
    let max = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread: f64 = b.iter().map(|x| max - x).sum();
    let nf = n as f64;
    Ok(spread / ((nf - 1.0) * (nf - 1.0) * (nf - 2.0) / 2.0))
}
