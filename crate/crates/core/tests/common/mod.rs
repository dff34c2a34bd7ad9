//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the metric or model code.
#![allow(dead_code)]

use collabnet::lmm::LmmData;
use collabnet::metrics::Graph;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random spanning tree plus extra edges with probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (i, j) in g.edges() {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

pub const INF: usize = usize::MAX / 4;

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let a = adjacency(g);
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if a[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Diameter of the largest component (lowest-index component on ties),
/// from the all-pairs distance matrix.
pub fn fw_diameter(g: &Graph) -> usize {
    let d = floyd_warshall(g);
    let n = g.node_count();
    let mut best: Option<Vec<usize>> = None;
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = (0..n).filter(|&t| d[s][t] < INF).collect();
        for &t in &comp {
            seen[t] = true;
        }
        if best.as_ref().is_none_or(|b| comp.len() > b.len()) {
            best = Some(comp);
        }
    }
    let comp = best.unwrap();
    let mut diam = 0;
    for &i in &comp {
        for &j in &comp {
            diam = diam.max(d[i][j]);
        }
    }
    diam
}

fn enumerate_paths(
    a: &[Vec<bool>],
    d: &[Vec<usize>],
    cur: usize,
    target: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if cur == target {
        out.push(path.clone());
        return;
    }
    for next in 0..a.len() {
        if a[cur][next] && d[next][target] + 1 == d[cur][target] {
            path.push(next);
            enumerate_paths(a, d, next, target, path, out);
            path.pop();
        }
    }
}

/// Betweenness by listing every shortest path of every unordered pair.
pub fn brute_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let a = adjacency(g);
    let d = floyd_warshall(g);
    let mut b = vec![0.0; n];
    for s in 0..n {
        for t in s + 1..n {
            if d[s][t] >= INF {
                continue;
            }
            let mut paths = Vec::new();
            enumerate_paths(&a, &d, s, t, &mut vec![s], &mut paths);
            let total = paths.len() as f64;
            for (v, bv) in b.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                *bv += through / total;
            }
        }
    }
    b
}

pub fn brute_centralization(g: &Graph) -> f64 {
    let b = brute_betweenness(g);
    let n = g.node_count() as f64;
    let max = b.iter().cloned().fold(f64::MIN, f64::max);
    b.iter().map(|x| max - x).sum::<f64>() / ((n - 1.0) * (n - 1.0) * (n - 2.0) / 2.0)
}

/// `(closed triples, all triples)` counted centre by centre.
pub fn enumerate_triples(g: &Graph) -> (u64, u64) {
    let n = g.node_count();
    let a = adjacency(g);
    let (mut closed, mut all) = (0u64, 0u64);
    for v in 0..n {
        for x in 0..n {
            for y in x + 1..n {
                if a[v][x] && a[v][y] {
                    all += 1;
                    if a[x][y] {
                        closed += 1;
                    }
                }
            }
        }
    }
    (closed, all)
}

pub fn design_matrix(data: &LmmData) -> DMatrix<f64> {
    let n = data.response.len();
    let p = data.covariates.len() + 1;
    DMatrix::from_fn(n, p, |i, j| {
        if j == 0 {
            1.0
        } else {
            data.covariates[j - 1][i]
        }
    })
}

pub fn ols(data: &LmmData) -> DVector<f64> {
    let x = design_matrix(data);
    let y = DVector::from_vec(data.response.clone());
    let xtx = x.transpose() * &x;
    xtx.cholesky().unwrap().solve(&(x.transpose() * y))
}

/// ML deviance `−2ℓ` at variance ratio `psi`, built from explicit per-group
/// covariance blocks `V_g = I + psi·11'`.
pub fn dense_ml_deviance(data: &LmmData, psi: f64) -> f64 {
    let x = design_matrix(data);
    let n = data.response.len();
    let p = x.ncols();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| data.groups[a].cmp(&data.groups[b]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match blocks.last_mut() {
            Some(b) if data.groups[b[0]] == data.groups[i] => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut xtvx = DMatrix::<f64>::zeros(p, p);
    let mut xtvy = DVector::<f64>::zeros(p);
    let mut logdet = 0.0;
    let mut inverses = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let m = b.len();
        let v = DMatrix::<f64>::identity(m, m) + DMatrix::<f64>::from_element(m, m, psi);
        logdet += v.determinant().ln();
        let vi = v.try_inverse().unwrap();
        let xg = DMatrix::from_fn(m, p, |r, c| x[(b[r], c)]);
        let yg = DVector::from_fn(m, |r, _| data.response[b[r]]);
        xtvx += xg.transpose() * &vi * &xg;
        xtvy += xg.transpose() * &vi * &yg;
        inverses.push((xg, yg, vi));
    }
    let beta = xtvx.cholesky().unwrap().solve(&xtvy);
    let mut q = 0.0;
    for (xg, yg, vi) in &inverses {
        let r = yg - xg * &beta;
        q += (r.transpose() * vi * &r)[(0, 0)];
    }
    let nf = n as f64;
    let sigma2 = q / nf;
    nf * (2.0 * std::f64::consts::PI * sigma2).ln() + logdet + nf
}
