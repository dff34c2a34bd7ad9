use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    /// κ per node, in node order.
    pub degrees: Vec<usize>,
    /// 2E / N
    pub avg_degree: f64,
    /// 2E / (N (N - 1))
    pub density: f64,
}

pub fn degree_stats(graph: &Graph) -> Result<DegreeStats> {
    let n = graph.node_count();
    if n < 2 {
        return Err(Error::DegenerateNetwork(format!(
            "{n} node(s); need at least 2"
        )));
    }
    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let twice_edges = degrees.iter().sum::<usize>() as f64;
    Ok(DegreeStats {
        avg_degree: twice_edges / n as f64,
        density: twice_edges / (n as f64 * (n - 1) as f64),
        degrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        let s = degree_stats(&Graph::complete(4)).unwrap();
        assert_eq!(s.avg_degree, 3.0);
        assert_eq!(s.density, 1.0);
        assert_eq!(s.degrees, [3, 3, 3, 3]);
    }

    #[test]
    fn degenerate() {
        assert!(matches!(
            degree_stats(&Graph::from_edges(1, []).unwrap()),
            Err(Error::DegenerateNetwork(_))
        ));
    }

    #[test]
    fn edgeless_pair_has_zero_density() {
        let s = degree_stats(&Graph::from_edges(2, []).unwrap()).unwrap();
        assert_eq!(s.density, 0.0);
    }
}
