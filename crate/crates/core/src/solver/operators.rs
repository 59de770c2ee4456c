//! Matrix-free operators on edge-indexed vectors: the clique-count matrix `M_G`,
//! the kernel projector `K` of the complete graph, and its restriction `K[G]`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::rat_to_f64;
use crate::graph::{class_pairs, pair_index, EdgeIndexer, PartiteGraph, Vertex};
use crate::scheme::{kernel_projector_coeffs, SchemeParams};

const PAR_THRESHOLD: usize = 1 << 13;

const ABSENT: u32 = u32::MAX;

/// The projector onto `ker M` for the complete graph `K[k; n]`, applied in
/// `O(k^2 n^2)` through per-vertex and per-class-pair partial sums.
#[derive(Clone, Debug)]
pub struct KernelProjector {
    k: usize,
    n: usize,
    coeffs: Vec<f64>,
    // per global edge: (pair index, class a, class b, u, v)
    layout: Vec<[u32; 5]>,
}

impl KernelProjector {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let params = SchemeParams::graph(k, n)?;
        let mut coeffs: Vec<f64> = kernel_projector_coeffs(&params)?.iter().map(rat_to_f64).collect();
        coeffs.resize(6, 0.0);
        let ix = EdgeIndexer::new(k, n);
        let layout = (0..ix.count())
            .map(|i| {
                let e = ix.edge(i);
                [
                    pair_index(k, e.a.class, e.b.class) as u32,
                    e.a.class as u32,
                    e.b.class as u32,
                    e.a.index as u32,
                    e.b.index as u32,
                ]
            })
            .collect();
        Ok(Self { k, n, coeffs, layout })
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    /// Coefficients of `K` on `A'_0..A'_5`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `K y` for `y` indexed by all edges of the complete graph.
    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.len() {
            return Err(Error::Domain(format!(
                "vector of length {} does not match {} edges",
                y.len(),
                self.len()
            )));
        }
        let (k, n) = (self.k, self.n);
        let pairs = k * (k - 1) / 2;
        // row sums: side 0 at the lower-class endpoint, side 1 at the upper one
        let mut side = vec![0.0; pairs * 2 * n];
        let mut pair_sum = vec![0.0; pairs];
        for (&[p, _, _, u, v], &val) in self.layout.iter().zip(y) {
            let p = p as usize;
            side[(p * 2) * n + u as usize] += val;
            side[(p * 2 + 1) * n + v as usize] += val;
            pair_sum[p] += val;
        }
        // incident sums per vertex and per class
        let mut vertex_sum = vec![0.0; k * n];
        let mut class_sum = vec![0.0; k];
        for (a, b) in class_pairs(k) {
            let p = pair_index(k, a, b);
            for w in 0..n {
                vertex_sum[a * n + w] += side[(p * 2) * n + w];
                vertex_sum[b * n + w] += side[(p * 2 + 1) * n + w];
            }
            class_sum[a] += pair_sum[p];
            class_sum[b] += pair_sum[p];
        }
        let total: f64 = pair_sum.iter().sum();
        let c = &self.coeffs;
        let entry = |idx: usize| {
            let [p, a, b, u, v] = self.layout[idx];
            let (p, a, b, u, v) = (p as usize, a as usize, b as usize, u as usize, v as usize);
            let ye = y[idx];
            let ru = side[(p * 2) * n + u];
            let rv = side[(p * 2 + 1) * n + v];
            let s = pair_sum[p];
            let a1 = ru + rv - 2.0 * ye;
            let a2 = s - ru - rv + ye;
            let a3 = (vertex_sum[a * n + u] - ru) + (vertex_sum[b * n + v] - rv);
            let a4 = (class_sum[a] - s) + (class_sum[b] - s) - a3;
            let a5 = total - class_sum[a] - class_sum[b] + s;
            c[0] * ye + c[1] * a1 + c[2] * a2 + c[3] * a3 + c[4] * a4 + c[5] * a5
        };
        Ok(if self.len() >= PAR_THRESHOLD {
            (0..self.len()).into_par_iter().map(entry).collect()
        } else {
            (0..self.len()).map(entry).collect()
        })
    }
}

/// The 3n vectors `v_β` spanning `ker M` for `K_{n,n,n}`: `-1` on edges from `β`
/// back to the preceding class, `+1` on edges to the following class (cyclic order
/// 0 → 1 → 2 → 0).
pub fn kernel_basis(n: usize) -> Vec<Vec<f64>> {
    let ix = EdgeIndexer::new(3, n);
    let mut out = Vec::with_capacity(3 * n);
    for c in 0..3 {
        for i in 0..n {
            let beta = Vertex::new(c, i);
            let v = (0..ix.count())
                .map(|idx| {
                    let e = ix.edge(idx);
                    let other = if e.a == beta {
                        e.b
                    } else if e.b == beta {
                        e.a
                    } else {
                        return 0.0;
                    };
                    if other.class == (c + 2) % 3 {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            out.push(v);
        }
    }
    out
}

/// Precomputed fan structure of a graph: its edges, its k-cliques as tuples of
/// local edge indices, and the edge → clique incidence lists.
#[derive(Clone, Debug)]
pub struct FanSystem {
    k: usize,
    n: usize,
    edge_ids: Vec<usize>,
    local: Vec<u32>,
    clique_edges: Vec<u32>,
    per_clique: usize,
    fan_offsets: Vec<usize>,
    fan: Vec<u32>,
    projector: KernelProjector,
}

impl FanSystem {
    pub fn new(g: &PartiteGraph) -> Result<Self> {
        let (k, n) = (g.k(), g.n());
        let projector = KernelProjector::new(k, n)?;
        let ix = g.indexer();
        let edge_ids = g.edge_ids();
        let mut local = vec![ABSENT; ix.count()];
        for (l, &gid) in edge_ids.iter().enumerate() {
            local[gid] = l as u32;
        }
        let per_clique = k * (k - 1) / 2;
        let mut clique_edges = Vec::new();
        g.for_each_clique(k, |vs| {
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let gid = ix.index(&crate::graph::Edge { a: vs[i], b: vs[j] });
                    clique_edges.push(local[gid]);
                }
            }
        });
        let cliques = clique_edges.len() / per_clique;
        let mut counts = vec![0usize; edge_ids.len() + 1];
        for &e in &clique_edges {
            counts[e as usize + 1] += 1;
        }
        for i in 0..edge_ids.len() {
            counts[i + 1] += counts[i];
        }
        let fan_offsets = counts.clone();
        let mut cursor = counts;
        let mut fan = vec![0u32; clique_edges.len()];
        for t in 0..cliques {
            for &e in &clique_edges[t * per_clique..(t + 1) * per_clique] {
                fan[cursor[e as usize]] = t as u32;
                cursor[e as usize] += 1;
            }
        }
        Ok(Self {
            k,
            n,
            edge_ids,
            local,
            clique_edges,
            per_clique,
            fan_offsets,
            fan,
            projector,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn clique_count(&self) -> usize {
        self.clique_edges.len() / self.per_clique.max(1)
    }

    /// Local edge indices of clique `t`.
    pub fn clique(&self, t: usize) -> &[u32] {
        &self.clique_edges[t * self.per_clique..(t + 1) * self.per_clique]
    }

    /// Number of cliques containing local edge `e`.
    pub fn fan_size(&self, e: usize) -> usize {
        self.fan_offsets[e + 1] - self.fan_offsets[e]
    }

    pub fn projector(&self) -> &KernelProjector {
        &self.projector
    }

    fn check_len(&self, y: &[f64], what: &str) -> Result<()> {
        if y.len() != self.edge_count() {
            return Err(Error::Domain(format!(
                "{what} has length {} but the graph has {} edges",
                y.len(),
                self.edge_count()
            )));
        }
        Ok(())
    }

    /// `W_G^T y`: per-clique sums of edge values.
    pub fn lift(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y, "edge vector")?;
        let q = self.per_clique;
        let sum = |t: usize| -> f64 {
            self.clique_edges[t * q..(t + 1) * q]
                .iter()
                .map(|&e| y[e as usize])
                .sum()
        };
        let cliques = self.clique_count();
        Ok(if cliques >= PAR_THRESHOLD {
            (0..cliques).into_par_iter().map(sum).collect()
        } else {
            (0..cliques).map(sum).collect()
        })
    }

    /// `W_G z`: per-edge sums of clique values, in fixed fan order.
    pub fn edge_sums(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.clique_count() {
            return Err(Error::Domain(format!(
                "clique vector has length {} but the graph has {} cliques",
                z.len(),
                self.clique_count()
            )));
        }
        let gather = |e: usize| -> f64 {
            self.fan[self.fan_offsets[e]..self.fan_offsets[e + 1]]
                .iter()
                .map(|&t| z[t as usize])
                .sum()
        };
        let m = self.edge_count();
        Ok(if m >= PAR_THRESHOLD {
            (0..m).into_par_iter().map(gather).collect()
        } else {
            (0..m).map(gather).collect()
        })
    }

    /// `M_G y = W_G W_G^T y` without forming `M_G`.
    pub fn mg_matvec(&self, y: &[f64]) -> Result<Vec<f64>> {
        let s = self.lift(y)?;
        self.edge_sums(&s)
    }

    /// `K[G] y`: zero-extend to the complete graph, project, restrict.
    pub fn kg_matvec(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y, "edge vector")?;
        let mut full = vec![0.0; self.projector.len()];
        for (&gid, &v) in self.edge_ids.iter().zip(y) {
            full[gid] = v;
        }
        let out = self.projector.apply(&full)?;
        Ok(self.edge_ids.iter().map(|&gid| out[gid]).collect())
    }

    /// `(M_G + eta K[G]) y`.
    pub fn shifted_matvec(&self, eta: f64, y: &[f64]) -> Result<Vec<f64>> {
        let mut m = self.mg_matvec(y)?;
        if eta != 0.0 {
            let kg = self.kg_matvec(y)?;
            for (a, b) in m.iter_mut().zip(kg) {
                *a += eta * b;
            }
        }
        Ok(m)
    }

    /// Local index of a global edge id, if present.
    pub fn local_index(&self, global: usize) -> Option<usize> {
        self.local
            .get(global)
            .and_then(|&l| (l != ABSENT).then_some(l as usize))
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }
}

/// `M_G y` for a one-off call.
pub fn mg_matvec(g: &PartiteGraph, y: &[f64]) -> Result<Vec<f64>> {
    FanSystem::new(g)?.mg_matvec(y)
}

/// `K y` for `K_{n,n,n}`.
pub fn k_matvec(n: usize, y: &[f64]) -> Result<Vec<f64>> {
    KernelProjector::new(3, n)?.apply(y)
}

/// `K[G] y` for a one-off call.
pub fn kg_matvec(g: &PartiteGraph, y: &[f64]) -> Result<Vec<f64>> {
    FanSystem::new(g)?.kg_matvec(y)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
