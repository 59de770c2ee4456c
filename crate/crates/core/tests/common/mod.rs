//! Independent oracles: brute-force enumeration and exact rational algebra built
//! directly from the definitions, sharing no code paths with the operators under test.
#![allow(dead_code)]

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trifan::exact::DenseMatrix;
use trifan::solver::kernel_basis;
use trifan::{Edge, PartialLatinSquare, PartiteGraph, Vertex};

pub type Key = (usize, usize, usize, usize);

pub fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// Edges of `G` as `(class_a, idx_a, class_b, idx_b)` in lexicographic order.
pub fn canonical_edges(g: &PartiteGraph) -> Vec<Key> {
    let (k, n) = (g.k(), g.n());
    let mut out = Vec::new();
    for ca in 0..k {
        for ia in 0..n {
            for cb in ca + 1..k {
                for ib in 0..n {
                    if g.adjacent(Vertex::new(ca, ia), Vertex::new(cb, ib)) {
                        out.push((ca, ia, cb, ib));
                    }
                }
            }
        }
    }
    out
}

pub fn position(keys: &[Key]) -> HashMap<Key, usize> {
    keys.iter().enumerate().map(|(i, &k)| (k, i)).collect()
}

/// All k-cliques as index tuples, one vertex per class, lexicographic.
pub fn brute_cliques(g: &PartiteGraph) -> Vec<Vec<usize>> {
    let (k, n) = (g.k(), g.n());
    let total = n.pow(k as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut idx = vec![0; k];
        let mut c = code;
        for slot in idx.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let ok = (0..k).all(|a| (a + 1..k).all(|b| g.adjacent(Vertex::new(a, idx[a]), Vertex::new(b, idx[b]))));
        if ok {
            out.push(idx);
        }
    }
    out
}

fn clique_keys(idx: &[usize]) -> Vec<Key> {
    let k = idx.len();
    let mut out = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            out.push((a, idx[a], b, idx[b]));
        }
    }
    out
}

/// `M_G[e][f]` = number of cliques containing both `e` and `f`.
pub fn dense_mg(g: &PartiteGraph) -> Vec<Vec<i64>> {
    let keys = canonical_edges(g);
    let pos = position(&keys);
    let m = keys.len();
    let mut out = vec![vec![0i64; m]; m];
    for c in brute_cliques(g) {
        let es: Vec<usize> = clique_keys(&c).iter().map(|k| pos[k]).collect();
        for &e in &es {
            for &f in &es {
                out[e][f] += 1;
            }
        }
    }
    out
}

pub fn matvec_i64(m: &[Vec<i64>], y: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(y).map(|(&a, b)| a as f64 * b).sum())
        .collect()
}

/// `V (V^T V)^-1 V^T` from 3n - 1 of the kernel vectors, over the complete graph.
pub fn dense_kernel_projector(n: usize) -> DenseMatrix<BigRational> {
    let basis = kernel_basis(n);
    let cols = 3 * n - 1;
    let rows = basis[0].len();
    let v = DenseMatrix::from_fn(rows, cols, |i, j| {
        BigRational::from_integer(BigInt::from(basis[j][i] as i64))
    });
    let gram = v.transpose().matmul(&v);
    let inv = gram.inverse().expect("3n - 1 kernel vectors are independent");
    v.matmul(&inv).matmul(&v.transpose())
}

/// Principal submatrix of the complete-graph projector on the edges of `G`.
pub fn restricted_projector(g: &PartiteGraph, full: &DenseMatrix<BigRational>) -> DenseMatrix<BigRational> {
    let complete = PartiteGraph::complete(g.k(), g.n()).unwrap();
    let all = position(&canonical_edges(&complete));
    let ids: Vec<usize> = canonical_edges(g).iter().map(|k| all[k]).collect();
    DenseMatrix::from_fn(ids.len(), ids.len(), |i, j| full.get(ids[i], ids[j]).clone())
}

/// Exact solution of `(M_G + η K[G]) x = 1` with `K` from the kernel vectors.
pub fn exact_fan_solve(g: &PartiteGraph, eta: &BigRational) -> Option<Vec<BigRational>> {
    let mg = dense_mg(g);
    let kg = restricted_projector(g, &dense_kernel_projector(g.n()));
    let m = mg.len();
    let a = DenseMatrix::from_fn(m, m, |i, j| {
        BigRational::from_integer(BigInt::from(mg[i][j])) + eta * kg.get(i, j)
    });
    a.solve(&vec![BigRational::one(); m])
}

pub fn to_f64(r: &BigRational) -> f64 {
    trifan::exact::rat_to_f64(r)
}

/// `G_P` for a random sub-square with `cells` entries: locally balanced, every
/// edge in a triangle.
pub fn random_balanced(n: usize, cells: usize, seed: u64) -> PartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PartialLatinSquare::random_with_cells(n, cells, &mut rng)
        .unwrap()
        .build_gp()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Graphs with at most 200 edges used for oracle comparisons.
pub fn small_corpus() -> Vec<(String, PartiteGraph)> {
    let mut out = Vec::new();
    for n in 2..=8 {
        out.push((format!("complete n={n}"), PartiteGraph::complete(3, n).unwrap()));
    }
    for n in 3..=8 {
        for (i, cells) in [1, n / 2, n].into_iter().enumerate() {
            out.push((
                format!("gp n={n} cells={cells}"),
                random_balanced(n, cells, (n * 10 + i) as u64),
            ));
        }
    }
    let mut g = PartiteGraph::complete(3, 6).unwrap();
    for t in 0..3 {
        for e in [
            (Vertex::new(0, t), Vertex::new(1, t)),
            (Vertex::new(0, t), Vertex::new(2, t)),
            (Vertex::new(1, t), Vertex::new(2, t)),
        ] {
            g.remove_edge(Edge::new(e.0, e.1).unwrap());
        }
    }
    out.push(("n=6 minus diagonal".into(), g));
    out.retain(|(_, g)| g.edge_count() <= 200);
    out
}

pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}
