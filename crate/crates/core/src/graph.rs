//! Balanced k-partite graphs as spanning subgraphs of the complete
//! multipartite graph `K[k; n]`.
//!
//! Vertices are `(class, index)` pairs with id `class * n + index`. An edge is
//! stored with its lower class first, and the canonical edge order is the
//! lexicographic order on `(class_a, index_a, class_b, index_b)`.

use std::fmt::Write as _;
use std::path::Path;

use bitvec::prelude::*;
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub class: usize,
    pub index: usize,
}

impl Vertex {
    pub const fn new(class: usize, index: usize) -> Self {
        Self { class, index }
    }

    pub fn id(&self, n: usize) -> usize {
        self.class * n + self.index
    }

    pub fn from_id(id: usize, n: usize) -> Self {
        Self::new(id / n, id % n)
    }
}

/// An edge between two vertices of distinct classes, lower class first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: Vertex,
    pub b: Vertex,
}

impl Edge {
    /// Builds the canonical orientation of `{u, v}`.
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        match u.class.cmp(&v.class) {
            std::cmp::Ordering::Less => Ok(Self { a: u, b: v }),
            std::cmp::Ordering::Greater => Ok(Self { a: v, b: u }),
            std::cmp::Ordering::Equal => Err(Error::Domain(format!(
                "intra-class pair {u:?} {v:?} is not an edge of a partite graph"
            ))),
        }
    }

    pub fn classes(&self) -> (usize, usize) {
        (self.a.class, self.b.class)
    }

    pub fn check(&self, k: usize, n: usize) -> Result<()> {
        if self.a.class >= self.b.class || self.b.class >= k || self.a.index >= n || self.b.index >= n {
            return Err(Error::Domain(format!("malformed edge {self:?} for k = {k}, n = {n}")));
        }
        Ok(())
    }
}

/// Index of the unordered class pair `(a, b)`, `a < b`, in lexicographic order.
pub fn pair_index(k: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < k);
    a * (2 * k - a - 1) / 2 + (b - a - 1)
}

pub fn class_pairs(k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |a| (a + 1..k).map(move |b| (a, b)))
}

/// Global canonical indexing of the edges of the complete graph `K[k; n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIndexer {
    k: usize,
    n: usize,
}

impl EdgeIndexer {
    pub fn new(k: usize, n: usize) -> Self {
        Self { k, n }
    }

    pub fn count(&self) -> usize {
        self.k * (self.k - 1) / 2 * self.n * self.n
    }

    fn class_offset(&self, ca: usize) -> usize {
        // sum over c < ca of n * (k - 1 - c) * n
        let k = self.k;
        self.n * self.n * (ca * (k - 1) - ca * ca.saturating_sub(1) / 2)
    }

    pub fn index(&self, e: &Edge) -> usize {
        let n = self.n;
        let ca = e.a.class;
        self.class_offset(ca) + e.a.index * (self.k - 1 - ca) * n + (e.b.class - ca - 1) * n + e.b.index
    }

    pub fn edge(&self, mut idx: usize) -> Edge {
        let n = self.n;
        let mut ca = 0;
        while ca + 1 < self.k && self.class_offset(ca + 1) <= idx {
            ca += 1;
        }
        idx -= self.class_offset(ca);
        let stride = (self.k - 1 - ca) * n;
        let va = idx / stride;
        let rest = idx % stride;
        Edge {
            a: Vertex::new(ca, va),
            b: Vertex::new(ca + 1 + rest / n, rest % n),
        }
    }
}

/// A triangle with one vertex in each of three distinct classes, ordered by class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [Vertex; 3],
}

impl Triangle {
    pub fn edges(&self) -> [Edge; 3] {
        let [u, v, w] = self.vertices;
        [Edge { a: u, b: v }, Edge { a: u, b: w }, Edge { a: v, b: w }]
    }
}

/// A clique with at most one vertex per class, ordered by class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Clique {
    pub vertices: Vec<Vertex>,
}

impl Clique {
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let vs = &self.vertices;
        (0..vs.len()).flat_map(move |i| (i + 1..vs.len()).map(move |j| Edge { a: vs[i], b: vs[j] }))
    }
}

impl From<Triangle> for Clique {
    fn from(t: Triangle) -> Self {
        Clique {
            vertices: t.vertices.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteGraph {
    k: usize,
    n: usize,
    // one block of n*n bits per unordered class pair, bit u*n + v
    present: BitVec<u64, Lsb0>,
    // deg[vertex_id * k + class]
    deg: Vec<u32>,
    edge_count: usize,
}

impl PartiteGraph {
    pub fn empty(k: usize, n: usize) -> Result<Self> {
        if k < 3 || n < 1 {
            return Err(Error::Domain(format!(
                "partite graph needs k >= 3 and n >= 1, got k = {k}, n = {n}"
            )));
        }
        let pairs = k * (k - 1) / 2;
        Ok(Self {
            k,
            n,
            present: bitvec![u64, Lsb0; 0; pairs * n * n],
            deg: vec![0; k * n * k],
            edge_count: 0,
        })
    }

    /// The complete balanced k-partite graph with classes of size `n`.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        let mut g = Self::empty(k, n)?;
        g.present.fill(true);
        for v in 0..k * n {
            let c = v / n;
            for d in 0..k {
                if d != c {
                    g.deg[v * k + d] = n as u32;
                }
            }
        }
        g.edge_count = EdgeIndexer::new(k, n).count();
        Ok(g)
    }

    pub fn from_edges(k: usize, n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Self::empty(k, n)?;
        for e in edges {
            e.check(k, n)?;
            if !g.insert_edge(e) {
                return Err(Error::Validity(format!("duplicate edge {e:?}")));
            }
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.k * self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn indexer(&self) -> EdgeIndexer {
        EdgeIndexer::new(self.k, self.n)
    }

    fn bit(&self, e: &Edge) -> usize {
        let p = pair_index(self.k, e.a.class, e.b.class);
        p * self.n * self.n + e.a.index * self.n + e.b.index
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.present[self.bit(e)]
    }

    /// Adjacency test for two vertices; false for same-class pairs.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        match Edge::new(u, v) {
            Ok(e) => self.contains(&e),
            Err(_) => false,
        }
    }

    /// Returns false if the edge was already present.
    pub fn insert_edge(&mut self, e: Edge) -> bool {
        let bit = self.bit(&e);
        if self.present[bit] {
            return false;
        }
        self.present.set(bit, true);
        self.bump(&e, 1);
        true
    }

    /// Returns false if the edge was absent.
    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let bit = self.bit(&e);
        if !self.present[bit] {
            return false;
        }
        self.present.set(bit, false);
        self.bump(&e, -1);
        true
    }

    fn bump(&mut self, e: &Edge, delta: i32) {
        let (n, k) = (self.n, self.k);
        let ia = e.a.id(n) * k + e.b.class;
        let ib = e.b.id(n) * k + e.a.class;
        self.deg[ia] = (self.deg[ia] as i32 + delta) as u32;
        self.deg[ib] = (self.deg[ib] as i32 + delta) as u32;
        self.edge_count = (self.edge_count as isize + delta as isize) as usize;
    }

    /// Removes every edge of `clique`; errors if one is already absent.
    pub fn remove_clique(&mut self, clique: &Clique) -> Result<()> {
        let edges: Vec<Edge> = clique.edges().collect();
        if let Some(e) = edges.iter().find(|e| !self.contains(e)) {
            return Err(Error::Validity(format!("edge {e:?} already absent")));
        }
        for e in edges {
            self.remove_edge(e);
        }
        Ok(())
    }

    /// Number of neighbours of `v` inside `class`.
    pub fn degree_into(&self, v: Vertex, class: usize) -> usize {
        self.deg[v.id(self.n) * self.k + class] as usize
    }

    pub fn degree(&self, v: Vertex) -> usize {
        (0..self.k).map(|c| self.degree_into(v, c)).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(move |id| Vertex::from_id(id, self.n))
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let ix = self.indexer();
        (0..ix.count())
            .map(move |i| ix.edge(i))
            .filter(move |e| self.contains(e))
    }

    /// Global indices (into the complete graph) of the present edges, ascending.
    pub fn edge_ids(&self) -> Vec<usize> {
        let ix = self.indexer();
        self.edges().map(|e| ix.index(&e)).collect()
    }

    /// Every vertex has the same number of neighbours in each foreign class.
    pub fn is_locally_balanced(&self) -> bool {
        self.vertices().all(|v| {
            let mut foreign = (0..self.k).filter(|&c| c != v.class);
            let first = foreign.next().map(|c| self.degree_into(v, c));
            foreign.all(|c| Some(self.degree_into(v, c)) == first)
        })
    }

    /// Smallest `c` with `min_degree >= (1 - c)(k - 1)n`.
    pub fn min_degree_deficiency(&self) -> BigRational {
        let full = ((self.k - 1) * self.n) as i64;
        crate::exact::rat(full - self.min_degree() as i64, full)
    }

    /// The partite complement: cross-class pairs flipped.
    pub fn complement(&self) -> Self {
        let mut present = self.present.clone();
        present = !present;
        let mut deg = self.deg.clone();
        for v in 0..self.vertex_count() {
            let c = v / self.n;
            for d in 0..self.k {
                if d != c {
                    deg[v * self.k + d] = self.n as u32 - deg[v * self.k + d];
                }
            }
        }
        Self {
            k: self.k,
            n: self.n,
            present,
            deg,
            edge_count: self.indexer().count() - self.edge_count,
        }
    }

    /// Triangles across every triple of classes, lexicographic by vertex ids.
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        self.for_each_clique(3, |vs| {
            out.push(Triangle {
                vertices: [vs[0], vs[1], vs[2]],
            })
        });
        out
    }

    /// Cliques of `size` vertices in distinct classes, lexicographic by vertex ids.
    pub fn enumerate_cliques(&self, size: usize) -> Vec<Clique> {
        let mut out = Vec::new();
        self.for_each_clique(size, |vs| out.push(Clique { vertices: vs.to_vec() }));
        out
    }

    pub fn for_each_clique(&self, size: usize, mut f: impl FnMut(&[Vertex])) {
        if size == 0 || size > self.k {
            return;
        }
        let mut stack = Vec::with_capacity(size);
        self.extend_clique(size, 0, &mut stack, &mut f);
    }

    fn extend_clique(&self, size: usize, start_class: usize, stack: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if stack.len() == size {
            f(stack);
            return;
        }
        let remaining = size - stack.len();
        for class in start_class..=self.k - remaining {
            for index in 0..self.n {
                let v = Vertex::new(class, index);
                if stack.iter().all(|&u| self.contains(&Edge { a: u, b: v })) {
                    stack.push(v);
                    self.extend_clique(size, class + 1, stack, f);
                    stack.pop();
                }
            }
        }
    }

    /// Serializes to the `partite k n` text format, edges in canonical order.
    pub fn to_text(&self) -> String {
        let mut s = format!("partite {} {}\n", self.k, self.n);
        for e in self.edges() {
            let _ = writeln!(s, "{} {} {} {}", e.a.class, e.a.index, e.b.class, e.b.index);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "partite" {
            return Err(Error::parse(hl, "expected header `partite k n`"));
        }
        let k = parse_usize(toks[1], hl)?;
        let n = parse_usize(toks[2], hl)?;
        let mut g = Self::empty(k, n).map_err(|e| Error::parse(hl, e.to_string()))?;
        for (ln, line) in lines {
            let nums = line
                .split_whitespace()
                .map(|t| parse_usize(t, ln))
                .collect::<Result<Vec<_>>>()?;
            if nums.len() != 4 {
                return Err(Error::parse(ln, "expected `c1 v1 c2 v2`"));
            }
            let e = Edge::new(Vertex::new(nums[0], nums[1]), Vertex::new(nums[2], nums[3]))
                .and_then(|e| e.check(k, n).map(|_| e))
                .map_err(|e| Error::parse(ln, e.to_string()))?;
            if !g.insert_edge(e) {
                return Err(Error::parse(ln, format!("duplicate edge {e:?}")));
            }
        }
        Ok(g)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got `{tok}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn v(c: usize, i: usize) -> Vertex {
        Vertex::new(c, i)
    }

    fn tri(a: usize, b: usize, c: usize) -> Clique {
        Clique {
            vertices: vec![v(0, a), v(1, b), v(2, c)],
        }
    }

    #[test]
    fn indexer_is_lexicographic_bijection() {
        for (k, n) in [(3, 1), (3, 3), (4, 2), (5, 3)] {
            let ix = EdgeIndexer::new(k, n);
            let mut all: Vec<Edge> = Vec::new();
            for ca in 0..k {
                for va in 0..n {
                    for cb in ca + 1..k {
                        for vb in 0..n {
                            all.push(Edge {
                                a: v(ca, va),
                                b: v(cb, vb),
                            });
                        }
                    }
                }
            }
            assert_eq!(all.len(), ix.count());
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(all, sorted);
            for (i, e) in all.iter().enumerate() {
                assert_eq!(ix.index(e), i);
                assert_eq!(ix.edge(i), *e);
            }
        }
    }

    #[test]
    fn complete_counts() {
        let g = PartiteGraph::complete(3, 2).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.enumerate_triangles().len(), 8);
        let g = PartiteGraph::complete(3, 5).unwrap();
        assert_eq!(g.edge_count(), 75);
        assert_eq!(g.enumerate_triangles().len(), 125);
        let g = PartiteGraph::complete(4, 2).unwrap();
        assert_eq!(g.edge_count(), 24);
        assert_eq!(g.enumerate_triangles().len(), 32);
        assert_eq!(g.enumerate_cliques(4).len(), 16);
        for v in g.vertices() {
            for c in 0..4 {
                let want = if c == v.class { 0 } else { 2 };
                assert_eq!(g.degree_into(v, c), want);
            }
        }
    }

    #[test]
    fn complete_triangle_count_is_cubic() {
        for n in 1..=12 {
            let g = PartiteGraph::complete(3, n).unwrap();
            assert_eq!(g.enumerate_triangles().len(), n * n * n);
        }
    }

    #[test]
    fn local_balance_cases() {
        let g = PartiteGraph::complete(3, 4).unwrap();
        assert!(g.is_locally_balanced());

        let mut one = PartiteGraph::complete(3, 2).unwrap();
        one.remove_edge(Edge { a: v(0, 0), b: v(1, 0) });
        assert!(!one.is_locally_balanced());

        let mut packed = PartiteGraph::complete(3, 4).unwrap();
        packed.remove_clique(&tri(1, 2, 3)).unwrap();
        assert!(packed.is_locally_balanced());
        assert_eq!(packed.enumerate_triangles().len(), 64 - 1 - 3 * 3);
    }

    #[test]
    fn min_degree_deficiency_cases() {
        let g = PartiteGraph::complete(3, 2).unwrap();
        assert_eq!(g.min_degree_deficiency(), rat(0, 1));
        let mut m = g.clone();
        m.remove_edge(Edge { a: v(0, 0), b: v(1, 0) });
        m.remove_edge(Edge { a: v(0, 1), b: v(1, 1) });
        assert_eq!(m.min_degree(), 3);
        assert_eq!(m.min_degree_deficiency(), rat(1, 4));
    }

    #[test]
    fn triangle_removal_matches_brute_force() {
        let mut g = PartiteGraph::complete(3, 2).unwrap();
        g.remove_clique(&tri(0, 0, 0)).unwrap();
        let mut brute = 0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    if g.adjacent(v(0, a), v(1, b)) && g.adjacent(v(0, a), v(2, c)) && g.adjacent(v(1, b), v(2, c)) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 4);
        assert_eq!(g.enumerate_triangles().len(), brute);
    }

    #[test]
    fn cutting_a_class_pair_kills_triangles() {
        let mut g = PartiteGraph::complete(3, 3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                g.remove_edge(Edge { a: v(0, a), b: v(1, b) });
            }
        }
        assert!(g.enumerate_triangles().is_empty());
    }

    #[test]
    fn complement_cases() {
        let g = PartiteGraph::complete(3, 3).unwrap();
        let c = g.complement();
        assert_eq!(c.edge_count(), 0);
        assert_eq!(c.complement(), g);
        let mut h = g.clone();
        h.remove_clique(&tri(0, 1, 2)).unwrap();
        assert!(h.complement().is_locally_balanced());
        assert_eq!(h.complement().edge_count(), 3);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let mut g = PartiteGraph::complete(4, 2).unwrap();
        g.remove_edge(Edge { a: v(1, 0), b: v(3, 1) });
        let text = g.to_text();
        assert!(text.starts_with("partite 4 2\n"));
        let back = PartiteGraph::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(PartiteGraph::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(
            PartiteGraph::parse("partite 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PartiteGraph::parse("partite 3 2\n0 0 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PartiteGraph::parse("partite 3 2\n0 0 1 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PartiteGraph::parse("partite 3 2\n0 0 1 1\n1 1 0 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
