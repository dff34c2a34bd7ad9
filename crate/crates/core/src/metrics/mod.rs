//! Network statistics battery on the binarized undirected graph.

mod betweenness;
mod clustering;
mod degree;
mod paths;
mod powerlaw;

pub use betweenness::{betweenness, betweenness_centralization};
pub use clustering::{clustering, triangle_and_triple_counts, ClusteringStats};
pub use degree::{degree_stats, DegreeStats};
pub use paths::{bfs_distances, components, diameter, Diameter};
pub use powerlaw::{powerlaw_fit, riemann_zeta, PowerLawFit};

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netbuild::CollabNetwork;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds from an edge list; duplicate edges collapse, self-loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::Invalid(format!("self-loop on node {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn from_network(net: &CollabNetwork) -> Self {
        Self::from_edges(net.nodes.len(), net.edges.keys().copied())
            .expect("network edges are valid")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Node 0 is the hub.
    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (0, i))).unwrap()
    }
}

pub const LOCAL_CLUSTERING_CONVENTION: &str =
    "nodes with degree < 2 contribute 0 and are included in the mean";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub specialty: String,
    pub year: i32,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub diameter: usize,
    pub avg_degree: f64,
    pub density: f64,
    pub betweenness_centralization: f64,
    pub transitivity: f64,
    pub avg_local_clustering: f64,
    pub n_components: usize,
    pub powerlaw_alpha: Option<f64>,
    /// Size of the component the diameter was measured on.
    pub diameter_component_nodes: usize,
    pub local_clustering_convention: String,
}

pub const STATS_CSV_HEADER: &str = "specialty,year,nodes,edges,diameter,avg_degree,density,betweenness_centralization,transitivity,avg_local_clustering,components,alpha";

impl NetworkStats {
    /// Runs every metric. Needs at least three nodes and one edge.
    pub fn compute(graph: &Graph, specialty: &str, year: i32) -> Result<Self> {
        let deg = degree_stats(graph)?;
        let diam = diameter(graph)?;
        let bc = betweenness_centralization(graph)?;
        let cl = clustering(graph)?;
        let degrees: Vec<u64> = deg.degrees.iter().map(|&d| d as u64).collect();
        let powerlaw_alpha = powerlaw_fit(&degrees).ok().map(|f| f.alpha);
        Ok(NetworkStats {
            specialty: specialty.to_string(),
            year,
            n_nodes: graph.node_count(),
            n_edges: graph.edge_count(),
            diameter: diam.steps,
            avg_degree: deg.avg_degree,
            density: deg.density,
            betweenness_centralization: bc,
            transitivity: cl.transitivity,
            avg_local_clustering: cl.avg_local_clustering,
            n_components: components(graph).len(),
            powerlaw_alpha,
            diameter_component_nodes: diam.component_nodes,
            local_clustering_convention: LOCAL_CLUSTERING_CONVENTION.to_string(),
        })
    }

    pub fn from_network(net: &CollabNetwork) -> Result<Self> {
        Self::compute(&Graph::from_network(net), &net.specialty, net.year)
    }

    /// One CSV row matching [`STATS_CSV_HEADER`]. `fixed4` renders reals with
    /// four decimals.
    pub fn write_csv_row<W: Write>(&self, fixed4: bool, w: &mut W) -> Result<()> {
        let real = |x: f64| {
            if fixed4 {
                format!("{x:.4}")
            } else {
                format!("{x}")
            }
        };
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record([
            self.specialty.clone(),
            self.year.to_string(),
            self.n_nodes.to_string(),
            self.n_edges.to_string(),
            self.diameter.to_string(),
            real(self.avg_degree),
            real(self.density),
            real(self.betweenness_centralization),
            real(self.transitivity),
            real(self.avg_local_clustering),
            self.n_components.to_string(),
            self.powerlaw_alpha.map(real).unwrap_or_default(),
        ])?;
        wtr.flush()?;
        Ok(())
    }
}

/// Writes a header plus one row per stats bundle.
pub fn write_stats_csv<W: Write>(stats: &[NetworkStats], fixed4: bool, mut w: W) -> Result<()> {
    writeln!(w, "{STATS_CSV_HEADER}")?;
    for s in stats {
        s.write_csv_row(fixed4, &mut w)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_builders() {
        assert_eq!(Graph::complete(4).edge_count(), 6);
        assert_eq!(Graph::path(4).edge_count(), 3);
        assert_eq!(Graph::cycle(6).edge_count(), 6);
        assert_eq!(Graph::star(7).degree(0), 6);
        assert!(Graph::from_edges(2, [(0, 0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1), (1, 2)]);
    }

    #[test]
    fn k4_battery() {
        let s = NetworkStats::compute(&Graph::complete(4), "x", 2013).unwrap();
        assert_eq!(s.avg_degree, 3.0);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.diameter, 1);
        assert_eq!(s.betweenness_centralization, 0.0);
        assert_eq!(s.transitivity, 1.0);
        assert_eq!(s.n_components, 1);
        assert_eq!(s.powerlaw_alpha, None);
        let mut row = Vec::new();
        s.write_csv_row(true, &mut row).unwrap();
        assert_eq!(
            String::from_utf8(row).unwrap(),
            "x,2013,4,6,1,3.0000,1.0000,0.0000,1.0000,1.0000,1,\n"
        );
    }
}
