use std::collections::VecDeque;

use super::Graph;
use crate::error::{Error, Result};

/// Hop distances from `source`; `None` for unreachable nodes.
pub fn bfs_distances(graph: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.node_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap() + 1;
        for &w in graph.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected components, each sorted, ordered by smallest member.
pub fn components(graph: &Graph) -> Vec<Vec<usize>> {
    let n = graph.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in graph.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diameter {
    pub steps: usize,
    /// Nodes in the component the diameter was taken over.
    pub component_nodes: usize,
}

/// Longest shortest path within the largest connected component (ties go to
/// the component holding the lowest node index).
pub fn diameter(graph: &Graph) -> Result<Diameter> {
    if graph.edge_count() == 0 {
        return Err(Error::NoPaths);
    }
    let comps = components(graph);
    let largest = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b[0].cmp(&a[0])))
        .expect("graph has edges");
    let steps = largest
        .iter()
        .map(|&s| {
            bfs_distances(graph, s)
                .into_iter()
                .flatten()
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(Diameter {
        steps,
        component_nodes: largest.len(),
    })
}
