//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use compcent::{ComponentId, SparseGraph};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub const A1: [[u8; 7]; 7] = [
    [1, 1, 1, 1, 1, 1, 0],
    [1, 1, 0, 1, 1, 1, 1],
    [0, 0, 1, 1, 0, 0, 0],
    [0, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, 0, 1, 1],
];

pub const A2: [[u8; 5]; 5] = [
    [1, 1, 0, 1, 1],
    [0, 1, 1, 1, 0],
    [1, 0, 1, 1, 1],
    [0, 0, 0, 1, 1],
    [0, 0, 0, 1, 1],
];

pub const X1: [f64; 7] = [0.0, 0.0, 0.2083, 0.2083, 0.2083, 0.1875, 0.1875];
pub const X2: [f64; 5] = [0.0, 0.0, 0.0, 0.49996, 0.49996];
pub const REF_TOL: f64 = 5e-4;

pub type Edge = (usize, usize, f64);

fn dense_edges<const N: usize>(rows: &[[u8; N]], offset: usize, out: &mut Vec<Edge>) {
    for (i, row) in rows.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            if a != 0 {
                out.push((i + offset, j + offset, a as f64));
            }
        }
    }
}

pub fn a1() -> SparseGraph {
    let mut e = Vec::new();
    dense_edges(&A1, 0, &mut e);
    SparseGraph::from_edges(7, e).unwrap()
}

pub fn a2() -> SparseGraph {
    let mut e = Vec::new();
    dense_edges(&A2, 0, &mut e);
    SparseGraph::from_edges(5, e).unwrap()
}

/// A1 and A2 side by side: the twelve-vertex, two-block graph.
pub fn twelve() -> SparseGraph {
    let mut e = Vec::new();
    dense_edges(&A1, 0, &mut e);
    dense_edges(&A2, 7, &mut e);
    SparseGraph::from_edges(12, e).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Random digraph on `n` vertices with edge probability `p`, self-loops
/// included, weights in `[0.5, 2)`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Vec<Edge> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(0.5..2.0)));
            }
        }
    }
    edges
}

/// Reflexive-transitive closure by Floyd–Warshall.
pub fn reachability(n: usize, edges: &[Edge]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (v, row) in r.iter_mut().enumerate() {
        row[v] = true;
    }
    for &(u, v, _) in edges {
        r[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let via = r[k].clone();
                for (dst, reach) in r[i].iter_mut().zip(via) {
                    *dst |= reach;
                }
            }
        }
    }
    r
}

/// Mutual-reachability class of every vertex, named by its smallest member.
pub fn brute_force_classes(n: usize, edges: &[Edge]) -> Vec<usize> {
    let r = reachability(n, edges);
    (0..n)
        .map(|v| (0..n).find(|&u| r[u][v] && r[v][u]).unwrap())
        .collect()
}

/// Longest path (in class edges) from each vertex's class to a sink class,
/// by exhaustive recursion over the class DAG.
pub fn brute_force_levels(n: usize, edges: &[Edge]) -> Vec<usize> {
    let class = brute_force_classes(n, edges);
    fn depth(c: usize, class: &[usize], edges: &[Edge]) -> usize {
        edges
            .iter()
            .filter(|&&(u, v, _)| class[u] == c && class[v] != c)
            .map(|&(_, v, _)| 1 + depth(class[v], class, edges))
            .max()
            .unwrap_or(0)
    }
    (0..n).map(|v| depth(class[v], &class, edges)).collect()
}

/// Whether two labelings describe the same partition.
pub fn same_partition(expected: &[usize], got: &[ComponentId]) -> bool {
    let n = expected.len();
    (0..n).all(|u| (0..n).all(|v| (expected[u] == expected[v]) == (got[u] == got[v])))
}

pub fn dense(g: &SparseGraph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut m = DMatrix::zeros(n, n);
    for (u, v, w) in g.edges() {
        m[(u, v)] += w;
    }
    m
}

/// Spectral radius by Gelfand's formula `ρ = lim ‖Mᵏ‖^(1/k)`, evaluated at
/// `k = 2⁶⁰` through repeated squaring of the dense matrix. (The Schur-based
/// eigenvalue routine can stall on defective non-negative matrices.)
pub fn spectral_radius(g: &SparseGraph) -> f64 {
    let mut b = dense(g);
    let mut log_norm = 0.0;
    for _ in 0..60 {
        b = &b * &b;
        let s = b.amax();
        if s == 0.0 {
            return 0.0;
        }
        b /= s;
        log_norm = 2.0 * log_norm + s.ln();
    }
    (log_norm / 2f64.powi(60)).exp()
}

/// Dense power iteration on `Aᵀ` from the uniform vector, L1-normalised.
pub fn dense_power(g: &SparseGraph, tol: f64, max_iter: usize) -> Vec<f64> {
    let n = g.num_vertices();
    let at = dense(g).transpose();
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..max_iter {
        let y = &at * &x;
        let s = y.iter().sum::<f64>();
        let y = y / s;
        let change = (&y - &x).amax();
        x = y;
        if change < tol {
            break;
        }
    }
    x.iter().copied().collect()
}

/// `(I − M/λ)⁻¹ v` for a dense `M`, the limit of the downstream series.
pub fn series_limit(m: &DMatrix<f64>, v: &[f64], lambda: f64) -> Vec<f64> {
    let n = m.nrows();
    let a = DMatrix::identity(n, n) - m / lambda;
    let b = DVector::from_column_slice(v);
    a.lu().solve(&b).unwrap().iter().copied().collect()
}
