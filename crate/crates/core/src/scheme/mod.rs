//! Association-scheme machinery for the second level of the Hamming lattice
//! (edges of the complete k-partite graph), plus Krawtchouk polynomials and
//! eigenvalue formulas for general uniformity `t`.
//!
//! Everything here is exact. Floats only appear downstream.

mod krawtchouk;
pub mod level;

pub use krawtchouk::{krawtchouk, Hamming, HAMMING_GUARD};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, rat, rat_int, DenseMatrix};
use crate::graph::{Edge, EdgeIndexer};

/// Size guard for dense second-level computations: `k * C(k,2) * n^2`.
pub const DENSE_GUARD: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeParams {
    pub k: usize,
    pub n: usize,
    pub t: usize,
}

impl SchemeParams {
    pub fn new(k: usize, n: usize, t: usize) -> Result<Self> {
        if k < 3 || n < 2 || t < 2 || t > k {
            return Err(Error::Domain(format!(
                "scheme needs k >= 3, n >= 2, 2 <= t <= k; got k = {k}, n = {n}, t = {t}"
            )));
        }
        Ok(Self { k, n, t })
    }

    /// Graph case, `t = 2`.
    pub fn graph(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, 2)
    }

    /// Number of associate classes including the identity: 5 for k = 3, 6 otherwise.
    pub fn relation_count(&self) -> usize {
        if self.k == 3 {
            5
        } else {
            6
        }
    }

    pub fn edge_count(&self) -> usize {
        self.k * (self.k - 1) / 2 * self.n * self.n
    }

    fn require_graph(&self) -> Result<()> {
        if self.t != 2 {
            return Err(Error::Unsupported(format!(
                "second-level structure is implemented for t = 2 only (got t = {})",
                self.t
            )));
        }
        Ok(())
    }

    fn dense_guard(&self) -> Result<()> {
        let size = self.k * self.edge_count();
        if size > DENSE_GUARD {
            return Err(Error::Resource(format!(
                "k * C(k,2) * n^2 = {size} exceeds the dense guard {DENSE_GUARD}"
            )));
        }
        Ok(())
    }
}

/// Associate class of an ordered pair of edges.
///
/// 0 identical, 1 adjacent within one class pair, 2 disjoint within one class
/// pair, 3 adjacent across three classes, 4 disjoint across three classes,
/// 5 disjoint across four classes (k >= 4 only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeRelation(u8);

impl EdgeRelation {
    pub const IDENTITY: Self = Self(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Classifies `(e, f)` without validation; both edges must be canonical.
pub(crate) fn relation_index(e: &Edge, f: &Edge) -> usize {
    let (ea, eb) = (e.a, e.b);
    let (fa, fb) = (f.a, f.b);
    if (ea.class, eb.class) == (fa.class, fb.class) {
        return match (ea.index == fa.index, eb.index == fb.index) {
            (true, true) => 0,
            (false, false) => 2,
            _ => 1,
        };
    }
    let shared = [ea, eb]
        .into_iter()
        .flat_map(|x| [fa, fb].into_iter().map(move |y| (x, y)))
        .find(|(x, y)| x.class == y.class);
    match shared {
        Some((x, y)) if x.index == y.index => 3,
        Some(_) => 4,
        None => 5,
    }
}

pub fn relation_of(params: &SchemeParams, e: &Edge, f: &Edge) -> Result<EdgeRelation> {
    params.require_graph()?;
    e.check(params.k, params.n)?;
    f.check(params.k, params.n)?;
    Ok(EdgeRelation(relation_index(e, f) as u8))
}

/// `ν_i` for the second level: `[1, 2(n-1), (n-1)^2, 2(k-2)n, 2(k-2)n(n-1), C(k-2,2)n^2]`,
/// truncated to five entries when k = 3.
pub fn degrees(params: &SchemeParams) -> Vec<BigInt> {
    let k = params.k as i64;
    let n = BigInt::from(params.n);
    let m = &n - 1;
    let mut out = vec![
        BigInt::one(),
        2 * &m,
        &m * &m,
        2 * (k - 2) * &n,
        2 * (k - 2) * &n * &m,
        binomial(k - 2, 2) * &n * &n,
    ];
    out.truncate(params.relation_count());
    out
}

/// Structure constants of the second level of H_{3,n}, closed forms in `n`.
/// Indexed `[h][i][j]`.
pub fn structure_constants_k3(n: usize) -> [[[BigInt; 5]; 5]; 5] {
    let n = n as i64;
    let m = n - 1;
    // upper triangles (i <= j, i, j >= 1) of each a^h block
    let upper: [[[i64; 4]; 4]; 5] = [
        [
            [2 * n - 2, 0, 0, 0],
            [0, m * m, 0, 0],
            [0, 0, 2 * n, 0],
            [0, 0, 0, n * (2 * n - 2)],
        ],
        [
            [n - 2, n - 1, 0, 0],
            [0, m * (n - 2), 0, 0],
            [0, 0, n, n],
            [0, 0, 0, n * (2 * n - 3)],
        ],
        [
            [2, 2 * n - 4, 0, 0],
            [0, (n - 2) * (n - 2), 0, 0],
            [0, 0, 0, 2 * n],
            [0, 0, 0, n * (2 * n - 4)],
        ],
        [
            [0, 0, n - 1, n - 1],
            [0, 0, 0, m * m],
            [0, 0, 1, n - 1],
            [0, 0, 0, m * m],
        ],
        [
            [0, 0, 1, 2 * n - 3],
            [0, 0, n - 1, m * (n - 2)],
            [0, 0, 1, n - 1],
            [0, 0, 0, m * m],
        ],
    ];
    std::array::from_fn(|h| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == 0 || j == 0 {
                    BigInt::from(i64::from(i + j == h))
                } else {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    BigInt::from(upper[h][a - 1][b - 1])
                }
            })
        })
    })
}

/// Eigenvalues `θ_j = C(k-j, k-t) n^(k-t)` of `M = W W^T` for `j = 0..=t`.
pub fn theta(params: &SchemeParams, j: usize) -> BigInt {
    let (k, t) = (params.k as i64, params.t as i64);
    binomial(k - j as i64, k - t) * BigInt::from(params.n).pow((k - t) as u32)
}

/// Nonzero eigenvalues of `M` with multiplicities, followed by `(0, dim ker M)`.
pub fn eigenvalues_m(params: &SchemeParams) -> Vec<(BigInt, BigInt)> {
    let h = Hamming {
        k: params.k,
        n: params.n,
    };
    let mut out: Vec<(BigInt, BigInt)> = (0..=params.t).map(|j| (theta(params, j), h.multiplicity(j))).collect();
    let rows = binomial(params.k as i64, params.t as i64) * BigInt::from(params.n).pow(params.t as u32);
    let used: BigInt = out.iter().map(|(_, m)| m).sum();
    out.push((BigInt::zero(), rows - used));
    out
}

/// Constant row sum of `W A_i W^T`: `C(k,t) C(k,i) n^(k-t) (n-1)^i`.
pub fn waw_rowsum(params: &SchemeParams, i: usize) -> BigInt {
    let (k, t) = (params.k as i64, params.t as i64);
    let n = BigInt::from(params.n);
    binomial(k, t) * binomial(k, i as i64) * n.pow((k - t) as u32) * (&n - BigInt::from(1)).pow(i as u32)
}

/// `F_s(h, i) = n^h (n-1)^i Σ_{l=0}^{2s} C(h, i-l) C(2s, l)`; zero when `h < 0` or `i < 0`.
pub fn f_s(n: usize, s: i64, h: i64, i: i64) -> BigInt {
    if h < 0 || i < 0 {
        return BigInt::zero();
    }
    let n = BigInt::from(n);
    let sum: BigInt = (0..=2 * s).map(|l| binomial(h, i - l) * binomial(2 * s, l)).sum();
    n.pow(h as u32) * (&n - BigInt::from(1)).pow(i as u32) * sum
}

/// Coefficients of `W A_i W^T` on `A'_0..A'_5` (five entries when k = 3).
pub fn waw_expansion_t2(params: &SchemeParams, i: usize) -> Result<Vec<BigInt>> {
    params.require_graph()?;
    if i > params.k {
        return Err(Error::Domain(format!("distance {i} exceeds k = {}", params.k)));
    }
    let (k, n, i) = (params.k as i64, params.n, i as i64);
    let mut out = vec![
        f_s(n, 0, k - 2, i),
        f_s(n, 0, k - 2, i - 1),
        f_s(n, 0, k - 2, i - 2),
        f_s(n, 1, k - 3, i),
        f_s(n, 1, k - 3, i - 1),
        f_s(n, 2, k - 4, i),
    ];
    out.truncate(params.relation_count());
    Ok(out)
}

/// Coefficient rows of `E_0, E_1, E_2` on `A'_0..A'_4` for the second level of H_{3,n}.
pub fn idempotent_coeffs_k3(n: usize) -> Result<[[BigRational; 5]; 3]> {
    if n < 2 {
        return Err(Error::Domain(format!("n must be >= 2, got {n}")));
    }
    let n = n as i64;
    let n2 = n * n;
    let e0 = rat(1, 3 * n2);
    Ok([
        std::array::from_fn(|_| e0.clone()),
        [
            rat(n - 1, n2),
            rat(n - 2, 2 * n2),
            rat(-1, n2),
            rat(n - 1, 2 * n2),
            rat(-1, 2 * n2),
        ],
        [
            rat((n - 1) * (n - 1), n2),
            rat(-(n - 1), n2),
            rat(1, n2),
            rat(0, 1),
            rat(0, 1),
        ],
    ])
}

/// Idempotents `E'_j = θ_j^-1 n^-k Σ_i κ_j(i) W A_i W^T` for any k, expressed on the
/// relation basis via the `F_s` expansion.
pub fn idempotent_coeffs_krawtchouk(params: &SchemeParams) -> Result<Vec<Vec<BigRational>>> {
    params.require_graph()?;
    let (k, n) = (params.k, params.n);
    let nk = BigInt::from(n).pow(k as u32);
    let expansions = (0..=k)
        .map(|i| waw_expansion_t2(params, i))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=2)
        .map(|j| {
            let th = theta(params, j);
            let mut row = vec![BigInt::zero(); params.relation_count()];
            for (i, exp) in expansions.iter().enumerate() {
                let kr = krawtchouk::krawtchouk_unchecked(k, n, j, i);
                for (slot, c) in row.iter_mut().zip(exp) {
                    *slot += &kr * c;
                }
            }
            row.into_iter().map(|c| BigRational::new(c, &th * &nk)).collect()
        })
        .collect())
}

/// Rows `E_0, E_1, E_2` on the relation basis: closed forms at k = 3, the
/// Krawtchouk route otherwise.
pub fn idempotent_coeffs(params: &SchemeParams) -> Result<Vec<Vec<BigRational>>> {
    params.require_graph()?;
    if params.k == 3 {
        Ok(idempotent_coeffs_k3(params.n)?.iter().map(|r| r.to_vec()).collect())
    } else {
        idempotent_coeffs_krawtchouk(params)
    }
}

/// Coefficients of the kernel projector `K = I - E_0 - E_1 - E_2` on the relation
/// basis.
pub fn kernel_projector_coeffs(params: &SchemeParams) -> Result<Vec<BigRational>> {
    let rows = idempotent_coeffs(params)?;
    let mut k = vec![BigRational::zero(); params.relation_count()];
    k[0] = BigRational::one();
    for row in &rows {
        for (slot, c) in k.iter_mut().zip(row) {
            *slot -= c;
        }
    }
    Ok(k)
}

/// Exact tables for the second level of H_{k,n}.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeTable {
    pub params: SchemeParams,
    /// `a^h_{ij}` flattened as `[(h * m + i) * m + j]`, `m = relation_count`.
    pub structure_constants: Vec<BigInt>,
    pub degrees: Vec<BigInt>,
    /// `θ_0, θ_1, θ_2`.
    pub eigenvalues: Vec<BigInt>,
    /// Rows `E_0, E_1, E_2`; columns are relations.
    pub idempotent_coeffs: Vec<Vec<BigRational>>,
}

impl SchemeTable {
    pub fn relation_count(&self) -> usize {
        self.params.relation_count()
    }

    pub fn a(&self, h: usize, i: usize, j: usize) -> &BigInt {
        let m = self.relation_count();
        &self.structure_constants[(h * m + i) * m + j]
    }

    /// Coefficients of `A'_i A'_j` on each `A'_h`.
    pub fn product(&self, i: usize, j: usize) -> Vec<BigInt> {
        (0..self.relation_count()).map(|h| self.a(h, i, j).clone()).collect()
    }

    /// Coefficients of the kernel projector `K = I - E_0 - E_1 - E_2`.
    pub fn kernel_coeffs(&self) -> Vec<BigRational> {
        let mut k = vec![BigRational::zero(); self.relation_count()];
        k[0] = BigRational::one();
        for row in &self.idempotent_coeffs {
            for (slot, c) in k.iter_mut().zip(row) {
                *slot -= c;
            }
        }
        k
    }

    /// Coefficients of `M = W W^T` on the relation basis.
    pub fn m_coeffs(&self) -> Vec<BigRational> {
        // W A_0 W^T = M
        waw_expansion_t2(&self.params, 0)
            .expect("table params are t = 2")
            .into_iter()
            .map(BigRational::from_integer)
            .collect()
    }
}

pub fn build_scheme_table(params: &SchemeParams) -> Result<SchemeTable> {
    params.require_graph()?;
    let m = params.relation_count();
    let (structure_constants, idempotent_coeffs) = if params.k == 3 {
        let a = structure_constants_k3(params.n);
        let flat = a.iter().flatten().flatten().cloned().collect();
        let idem = idempotent_coeffs_k3(params.n)?.iter().map(|r| r.to_vec()).collect();
        (flat, idem)
    } else {
        params.dense_guard()?;
        (
            brute_force_structure_constants(params),
            idempotent_coeffs_krawtchouk(params)?,
        )
    };
    debug_assert_eq!(structure_constants.len(), m * m * m);
    Ok(SchemeTable {
        params: *params,
        structure_constants,
        degrees: degrees(params),
        eigenvalues: (0..=2).map(|j| theta(params, j)).collect(),
        idempotent_coeffs,
    })
}

/// Counts `a^h_{ij}` from one representative pair per relation `h`.
fn brute_force_structure_constants(params: &SchemeParams) -> Vec<BigInt> {
    let m = params.relation_count();
    let ix = EdgeIndexer::new(params.k, params.n);
    let edges: Vec<Edge> = (0..ix.count()).map(|i| ix.edge(i)).collect();
    let base = edges[0];
    let mut reps: Vec<Option<Edge>> = vec![None; m];
    for f in &edges {
        let h = relation_index(&base, f);
        reps[h].get_or_insert(*f);
    }
    let mut out = vec![BigInt::zero(); m * m * m];
    for (h, rep) in reps.iter().enumerate() {
        let f = rep.expect("every relation is realised for k >= 3, n >= 2");
        for z in &edges {
            let i = relation_index(&base, z);
            let j = relation_index(z, &f);
            out[(h * m + i) * m + j] += 1;
        }
    }
    out
}

/// Dense `N x N` table of relation labels over the canonical edge order.
pub fn relation_matrix(params: &SchemeParams) -> Result<DenseMatrix<u8>> {
    params.require_graph()?;
    params.dense_guard()?;
    let ix = EdgeIndexer::new(params.k, params.n);
    let edges: Vec<Edge> = (0..ix.count()).map(|i| ix.edge(i)).collect();
    let size = edges.len();
    Ok(DenseMatrix::from_fn(size, size, |a, b| {
        relation_index(&edges[a], &edges[b]) as u8
    }))
}

/// Builds dense `A'_0..A'_m` from [`relation_of`], multiplies them exactly and
/// compares every product with the tabulated structure constants.
pub fn verify_structure_constants(params: &SchemeParams) -> Result<bool> {
    let table = build_scheme_table(params)?;
    let rel = relation_matrix(params)?;
    let size = rel.rows();
    let m = params.relation_count();
    // counts[f][i][j] = #{z : rel(e,z) = i, rel(z,f) = j} for the current row e
    let mut counts = vec![0u32; size * m * m];
    for e in 0..size {
        counts.fill(0);
        for z in 0..size {
            let i = *rel.get(e, z) as usize;
            let zrow = rel.row(z);
            for (f, &j) in zrow.iter().enumerate() {
                counts[(f * m + i) * m + j as usize] += 1;
            }
        }
        for f in 0..size {
            let h = *rel.get(e, f) as usize;
            for i in 0..m {
                for j in 0..m {
                    if BigInt::from(counts[(f * m + i) * m + j]) != *table.a(h, i, j) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Integer matrix `scale * Σ_h coeffs[h] A'_h`; panics if the result is not integral.
pub(crate) fn assemble_scaled(rel: &DenseMatrix<u8>, coeffs: &[BigRational], scale: &BigInt) -> DenseMatrix<i128> {
    use num::ToPrimitive;
    let ints: Vec<i128> = coeffs
        .iter()
        .map(|c| {
            let v = c * BigRational::from_integer(scale.clone());
            assert!(v.is_integer(), "scale does not clear denominators");
            v.to_integer().to_i128().expect("scaled coefficient fits in i128")
        })
        .collect();
    rel.map(|&r| ints[r as usize])
}

/// Dense exact check of the spectral idempotents: `E_i E_j = δ_ij E_i`,
/// `E_0 + E_1 + E_2 + K = I`, `M E_j = θ_j E_j` and `M K = 0`.
pub fn verify_idempotents(params: &SchemeParams) -> Result<bool> {
    let table = build_scheme_table(params)?;
    let rel = relation_matrix(params)?;
    let size = rel.rows();
    let mut rows = table.idempotent_coeffs.clone();
    rows.push(table.kernel_coeffs());
    let scale = rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, c| num::Integer::lcm(&acc, c.denom()));
    let s = {
        use num::ToPrimitive;
        scale.to_i128().expect("scale fits in i128")
    };
    let mats: Vec<DenseMatrix<i128>> = rows.iter().map(|r| assemble_scaled(&rel, r, &scale)).collect();
    let m_mat = assemble_scaled(&rel, &table.m_coeffs(), &BigInt::one());
    let zero = DenseMatrix::<i128>::zeros(size, size);

    let sum = mats.iter().fold(zero.clone(), |acc, e| acc.add(e));
    if sum != DenseMatrix::<i128>::identity(size).scale(&s) {
        return Ok(false);
    }
    for (a, ea) in mats.iter().enumerate() {
        for (b, eb) in mats.iter().enumerate().skip(a) {
            let want = if a == b { ea.scale(&s) } else { zero.clone() };
            if ea.matmul(eb) != want {
                return Ok(false);
            }
        }
    }
    let thetas: Vec<i128> = {
        use num::ToPrimitive;
        table
            .eigenvalues
            .iter()
            .map(|t| t.to_i128().expect("eigenvalue fits"))
            .chain(std::iter::once(0))
            .collect()
    };
    for (e, th) in mats.iter().zip(thetas) {
        if m_mat.matmul(e) != e.scale(&th) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Σ_i |c_i| ν_i`: the ∞-norm of a Bose–Mesner element, since every row of
/// `A'_i` holds exactly `ν_i` ones and the relations partition each row.
pub fn bm_inf_norm(coeffs: &[BigRational], degrees: &[BigInt]) -> BigRational {
    coeffs
        .iter()
        .zip(degrees)
        .map(|(c, d)| c.abs() * rat_int(d.clone()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn e(ca: usize, va: usize, cb: usize, vb: usize) -> Edge {
        Edge::new(Vertex::new(ca, va), Vertex::new(cb, vb)).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SchemeParams::new(2, 3, 2).is_err());
        assert!(SchemeParams::new(3, 1, 2).is_err());
        assert!(SchemeParams::new(3, 2, 4).is_err());
        assert!(SchemeParams::new(4, 2, 3).is_ok());
    }

    #[test]
    fn relation_examples() {
        let p3 = SchemeParams::graph(3, 3).unwrap();
        let ab = e(0, 0, 1, 0);
        assert_eq!(relation_of(&p3, &ab, &ab).unwrap(), EdgeRelation::IDENTITY);
        assert_eq!(relation_of(&p3, &ab, &e(0, 0, 1, 1)).unwrap().index(), 1);
        assert_eq!(relation_of(&p3, &ab, &e(0, 1, 1, 1)).unwrap().index(), 2);
        // αβ* vs *βγ
        assert_eq!(relation_of(&p3, &ab, &e(1, 0, 2, 2)).unwrap().index(), 3);
        assert_eq!(relation_of(&p3, &ab, &e(1, 1, 2, 2)).unwrap().index(), 4);
        let p5 = SchemeParams::graph(5, 2).unwrap();
        assert_eq!(relation_of(&p5, &e(1, 0, 2, 0), &e(3, 1, 4, 0)).unwrap().index(), 5);
        assert!(matches!(relation_of(&p3, &e(0, 0, 1, 5), &ab), Err(Error::Domain(_))));
        let malformed = Edge {
            a: Vertex::new(2, 0),
            b: Vertex::new(1, 0),
        };
        assert!(relation_of(&p3, &malformed, &ab).is_err());
        assert!(matches!(
            relation_of(&SchemeParams::new(3, 2, 3).unwrap(), &ab, &ab),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn relation_is_symmetric() {
        let p = SchemeParams::graph(4, 2).unwrap();
        let ix = EdgeIndexer::new(4, 2);
        for a in 0..ix.count() {
            for b in 0..ix.count() {
                assert_eq!(
                    relation_index(&ix.edge(a), &ix.edge(b)),
                    relation_index(&ix.edge(b), &ix.edge(a))
                );
            }
        }
        let _ = p;
    }

    #[test]
    fn table_examples() {
        let t = build_scheme_table(&SchemeParams::graph(3, 2).unwrap()).unwrap();
        assert_eq!(*t.a(0, 1, 1), BigInt::from(2));
        let t = build_scheme_table(&SchemeParams::graph(3, 3).unwrap()).unwrap();
        assert_eq!(*t.a(2, 2, 2), BigInt::from(1));
        let t = build_scheme_table(&SchemeParams::graph(3, 4).unwrap()).unwrap();
        assert_eq!(*t.a(3, 1, 2), BigInt::zero());
        assert!(matches!(
            build_scheme_table(&SchemeParams::new(4, 2, 3).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn table_invariants() {
        for (k, n) in [(3, 2), (3, 3), (3, 6), (4, 2), (4, 3), (5, 2)] {
            let t = build_scheme_table(&SchemeParams::graph(k, n).unwrap()).unwrap();
            let m = t.relation_count();
            let total: BigInt = t.degrees.iter().sum();
            assert_eq!(total, BigInt::from(SchemeParams::graph(k, n).unwrap().edge_count()));
            assert_eq!(t.degrees[0], BigInt::one());
            for i in 0..m {
                assert_eq!(t.a(0, i, i), &t.degrees[i]);
                for h in 0..m {
                    let row: BigInt = (0..m).map(|j| t.a(h, i, j)).sum();
                    assert_eq!(row, t.degrees[i], "k={k} n={n} h={h} i={i}");
                    for j in 0..m {
                        assert_eq!(t.a(h, i, j), t.a(h, j, i));
                    }
                }
            }
        }
    }

    #[test]
    fn brute_force_constants_match_closed_form_at_k3() {
        for n in 2..=6 {
            let p = SchemeParams::graph(3, n).unwrap();
            let closed: Vec<BigInt> = structure_constants_k3(n).iter().flatten().flatten().cloned().collect();
            assert_eq!(brute_force_structure_constants(&p), closed, "n = {n}");
        }
    }

    #[test]
    fn dense_structure_verification() {
        for (k, n) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
            assert!(
                verify_structure_constants(&SchemeParams::graph(k, n).unwrap()).unwrap(),
                "k={k} n={n}"
            );
        }
        let big = SchemeParams::graph(6, 20).unwrap();
        assert!(matches!(verify_structure_constants(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn spot_product_a1_a3() {
        let n = 5;
        let t = build_scheme_table(&SchemeParams::graph(3, n).unwrap()).unwrap();
        let p = t.product(1, 3);
        assert_eq!(p, vec![0, 0, 0, 4, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = eigenvalues_m(&SchemeParams::graph(3, 2).unwrap());
        let want: Vec<(BigInt, BigInt)> = [(6, 1), (4, 3), (2, 3), (0, 5)]
            .iter()
            .map(|&(a, b)| (BigInt::from(a), BigInt::from(b)))
            .collect();
        assert_eq!(ev, want);
        for n in 2..8 {
            let p = SchemeParams::graph(3, n).unwrap();
            assert_eq!(theta(&p, 2), BigInt::from(n));
            assert_eq!(eigenvalues_m(&p)[3].1, BigInt::from(3 * n - 1));
        }
        let ev = eigenvalues_m(&SchemeParams::graph(4, 2).unwrap());
        assert_eq!(ev[1], (BigInt::from(12), BigInt::from(4)));
    }

    #[test]
    fn idempotent_k3_examples() {
        let rows = idempotent_coeffs_k3(4).unwrap();
        assert!(rows[0].iter().all(|c| *c == rat(1, 48)));
        assert_eq!(rows[2][3], rat(0, 1));
        assert!(idempotent_coeffs_k3(1).is_err());
    }

    #[test]
    fn krawtchouk_route_reproduces_closed_idempotents() {
        for n in 2..=9 {
            let p = SchemeParams::graph(3, n).unwrap();
            let closed: Vec<Vec<BigRational>> = idempotent_coeffs_k3(n).unwrap().iter().map(|r| r.to_vec()).collect();
            assert_eq!(idempotent_coeffs_krawtchouk(&p).unwrap(), closed, "n = {n}");
        }
    }

    #[test]
    fn dense_idempotent_verification() {
        for (k, n) in [(3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
            assert!(
                verify_idempotents(&SchemeParams::graph(k, n).unwrap()).unwrap(),
                "k={k} n={n}"
            );
        }
    }

    #[test]
    fn waw_examples() {
        let p = SchemeParams::graph(3, 2).unwrap();
        assert_eq!(waw_rowsum(&p, 0), BigInt::from(6));
        let p = SchemeParams::graph(3, 3).unwrap();
        assert_eq!(waw_rowsum(&p, 3), BigInt::from(72));
        let p = SchemeParams::new(4, 2, 3).unwrap();
        assert_eq!(waw_rowsum(&p, 1), BigInt::from(32));

        let p = SchemeParams::graph(4, 2).unwrap();
        let c = waw_expansion_t2(&p, 0).unwrap();
        assert_eq!(c[0], BigInt::from(4));
        assert!(c[1].is_zero() && c[2].is_zero() && c[4].is_zero());
        let p = SchemeParams::graph(3, 3).unwrap();
        for i in 0..=3 {
            assert_eq!(waw_expansion_t2(&p, i).unwrap().len(), 5);
        }
    }

    #[test]
    fn waw_expansion_row_sums() {
        for k in 3..=5 {
            for n in 2..=3 {
                let p = SchemeParams::graph(k, n).unwrap();
                let deg = degrees(&p);
                for i in 0..=k {
                    let s: BigInt = waw_expansion_t2(&p, i)
                        .unwrap()
                        .iter()
                        .zip(&deg)
                        .map(|(c, d)| c * d)
                        .sum();
                    assert_eq!(s, waw_rowsum(&p, i), "k={k} n={n} i={i}");
                }
            }
        }
    }
}
