//! Norm estimates and decomposition thresholds.
//!
//! Every value here is an exact rational first; floats are roundings of it.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
#[cfg(test)]
use crate::exact::rat_to_f64;
use crate::exact::{binomial, rat, rat_int, rat_string};
use crate::graph::{EdgeIndexer, PartiteGraph, Vertex};
use crate::scheme::{
    bm_inf_norm, degrees, idempotent_coeffs, kernel_projector_coeffs, krawtchouk, relation_index, theta, SchemeParams,
};

/// Largest edge count `C(k,2) n^2` for the dense row pass.
pub const NORM_GUARD: usize = 5000;

#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    pub k: usize,
    pub n: usize,
    pub eta: BigRational,
    /// Coefficients of `A^-1` on `A'_0, A'_1, ...`.
    pub coeffs: Vec<BigRational>,
    /// `‖A^-1‖_∞`.
    pub inv_inf_norm: BigRational,
    /// `n^(k-2) ‖A^-1‖_∞`.
    pub scaled: BigRational,
    pub predicted_leading: BigRational,
}

impl NormReport {
    /// `scaled - predicted_leading`.
    pub fn gap(&self) -> BigRational {
        &self.scaled - &self.predicted_leading
    }
}

/// Coefficients of `(M + ηK)^-1 = Σ_j θ_j^-1 E_j + η^-1 K` on the relation basis.
pub fn inv_coeffs(params: &SchemeParams, eta: &BigRational) -> Result<Vec<BigRational>> {
    if !eta.is_positive() {
        return Err(Error::Domain("eta must be positive".into()));
    }
    let rows = idempotent_coeffs(params)?;
    let mut out: Vec<BigRational> = kernel_projector_coeffs(params)?.into_iter().map(|c| c / eta).collect();
    for (j, row) in rows.iter().enumerate() {
        let th = rat_int(theta(params, j));
        for (slot, c) in out.iter_mut().zip(row) {
            *slot += c / &th;
        }
    }
    Ok(out)
}

/// The default shift `θ_1 = (k-1) n^(k-2)`; `2n` for triangles.
pub fn default_eta(k: usize, n: usize) -> Result<BigRational> {
    Ok(rat_int(theta(&SchemeParams::graph(k, n)?, 1)))
}

/// Exact `‖(M + 2nK)^-1‖_∞` for triangles.
pub fn inv_inf_norm_exact(n: usize) -> Result<NormReport> {
    inv_inf_norm_clique(3, n, None)
}

/// Exact `‖(M + ηK)^-1‖_∞` for K_k-fans, `η = θ_1` by default.
///
/// The norm is taken row by row over the dense edge set, grouping entries by
/// relation, and cross-checked against the degree formula `Σ |c_i| ν_i`.
pub fn inv_inf_norm_clique(k: usize, n: usize, eta: Option<BigRational>) -> Result<NormReport> {
    let params = SchemeParams::graph(k, n)?;
    let edges = params.edge_count();
    if edges > NORM_GUARD {
        return Err(Error::Resource(format!(
            "{edges} edges exceeds the dense norm guard {NORM_GUARD}"
        )));
    }
    let eta = match eta {
        Some(e) => e,
        None => default_eta(k, n)?,
    };
    let coeffs = inv_coeffs(&params, &eta)?;
    let abs: Vec<BigRational> = coeffs.iter().map(|c| c.abs()).collect();

    let ix = EdgeIndexer::new(k, n);
    let all: Vec<_> = (0..edges).map(|i| ix.edge(i)).collect();
    let mut best = BigRational::zero();
    let mut counts = vec![0u64; params.relation_count()];
    for e in &all {
        counts.iter_mut().for_each(|c| *c = 0);
        for f in &all {
            counts[relation_index(e, f)] += 1;
        }
        let row: BigRational = counts.iter().zip(&abs).map(|(&c, a)| a * BigInt::from(c)).sum();
        if row > best {
            best = row;
        }
    }
    let formula = bm_inf_norm(&coeffs, &degrees(&params));
    if formula != best {
        return Err(Error::Validity(format!(
            "row pass {best} disagrees with degree formula {formula}"
        )));
    }
    let scale = rat_int(BigInt::from(n).pow(k as u32 - 2));
    Ok(NormReport {
        k,
        n,
        eta,
        scaled: &best * scale,
        inv_inf_norm: best,
        coeffs,
        predicted_leading: clique_leading_coeff(k)?,
    })
}

/// Exact coefficients of `(M + 2nK)^-1` on `A'_0..A'_4`.
pub fn inv_leading_coeffs_k3(n: usize) -> Result<Vec<BigRational>> {
    let params = SchemeParams::graph(3, n)?;
    inv_coeffs(&params, &rat(2 * n as i64, 1))
}

/// Closed forms of the k = 3 coefficients at `η = 2n`:
/// `c_0 = (18n^2 - 18n + 8)/18n^3`, `c_1 = -(9n - 8)/18n^3`, `c_2 = 8/18n^3`,
/// `c_3 = c_4 = -1/18n^3`.
pub fn inv_coeffs_k3_closed(n: usize) -> Vec<BigRational> {
    let n = n as i64;
    let d = 18 * n * n * n;
    vec![
        rat(18 * n * n - 18 * n + 8, d),
        rat(-(9 * n - 8), d),
        rat(8, d),
        rat(-1, d),
        rat(-1, d),
    ]
}

/// `‖A^-1‖_∞ = (46n^2 - 68n + 32) / 18n^3` at k = 3, `η = 2n`.
pub fn inv_inf_norm_k3_closed(n: usize) -> BigRational {
    let n = n as i64;
    rat(46 * n * n - 68 * n + 32, 18 * n * n * n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbationReport {
    /// `‖M[G] - M_G‖_∞`, counted exactly.
    pub delta_inf: u64,
    pub c: String,
    pub bound_6cn: String,
    pub within_bound: bool,
}

/// `‖M[G] - M_G‖_∞` for a locally balanced triangle host, against `6cn`.
///
/// Row `e` of `M[G] - M_G` counts, for each triangle through `e` that is not in
/// `G`, its edges that are still in `G`.
pub fn perturbation_norm(g: &PartiteGraph) -> Result<PerturbationReport> {
    if g.k() != 3 {
        return Err(Error::Unsupported("perturbation norm is implemented for k = 3".into()));
    }
    if !g.is_locally_balanced() {
        return Err(Error::Precondition("graph is not locally balanced".into()));
    }
    let n = g.n();
    let mut delta = 0u64;
    for e in g.edges() {
        let third = 3 - e.a.class - e.b.class;
        let mut row = 0u64;
        for w in 0..n {
            let w = Vertex::new(third, w);
            let (aw, bw) = (g.adjacent(e.a, w), g.adjacent(e.b, w));
            if !(aw && bw) {
                row += 1 + aw as u64 + bw as u64;
            }
        }
        delta = delta.max(row);
    }
    let c = g.min_degree_deficiency();
    let bound = &c * rat(6 * n as i64, 1);
    Ok(PerturbationReport {
        delta_inf: delta,
        within_bound: rat(delta as i64, 1) <= bound,
        c: rat_string(&c),
        bound_6cn: rat_string(&bound),
    })
}

/// `(a + b√d) / q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticSurd {
    pub a: i64,
    pub b: i64,
    pub d: i64,
    pub q: i64,
}

impl QuadraticSurd {
    pub fn to_f64(self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.q as f64
    }

    /// Exact comparison `self < r`.
    pub fn lt_rational(self, r: &BigRational) -> bool {
        // b√d < q r - a, with b, q > 0
        assert!(self.b > 0 && self.q > 0);
        let rhs = rat_int(self.q) * r - rat_int(self.a);
        if !rhs.is_positive() {
            return false;
        }
        rat_int(self.b * self.b * self.d) < &rhs * &rhs
    }
}

impl std::fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(sqrt({}) - {})/{}", self.d, -self.a, self.q)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSet {
    pub k: usize,
    pub t: usize,
    pub c_basic: BigRational,
    pub c_refined: QuadraticSurd,
    pub tau_basic: BigRational,
    /// Upper label for the refined threshold: `1 - c_refined < 0.96`.
    pub tau_refined: BigRational,
}

/// Triangle thresholds: `c < 3/80` from `‖A^-1 δA‖ ≤ 40c/3 ≤ 1/2`, and the
/// refined root `(√409 - 17)/80` of `28c/3 + (40c/3)^2/(1 - 40c/3) = 1`.
pub fn thresholds_k3() -> ThresholdSet {
    ThresholdSet {
        k: 3,
        t: 2,
        c_basic: rat(3, 80),
        c_refined: QuadraticSurd {
            a: -17,
            b: 1,
            d: 409,
            q: 80,
        },
        tau_basic: rat(77, 80),
        tau_refined: rat(24, 25),
    }
}

/// `28c/3 + (40c/3)^2 / (1 - 40c/3) < 1`.
pub fn refined_feasible(c: f64) -> bool {
    let u = 40.0 * c / 3.0;
    u < 1.0 && 28.0 * c / 3.0 + u * u / (1.0 - u) < 1.0
}

pub fn refined_feasible_exact(c: &BigRational) -> bool {
    let u = c * rat(40, 3);
    if u >= BigRational::one() {
        return false;
    }
    c * rat(28, 3) + &u * &u / (BigRational::one() - &u) < BigRational::one()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProdNorm {
    /// `40c/3`.
    pub total: BigRational,
    /// Per-relation contributions `(2c, 2c, 10c/9, 4c, 38c/9)`.
    pub breakdown: [BigRational; 5],
}

/// Leading term of `‖A^-1 δA‖_∞` for a `c`-deficient triangle host.
pub fn prodnorm_bound(c: &BigRational) -> Result<ProdNorm> {
    if c.is_negative() || *c >= BigRational::one() {
        return Err(Error::Domain(format!("c must lie in [0, 1), got {c}")));
    }
    let breakdown = [rat(2, 1), rat(2, 1), rat(10, 9), rat(4, 1), rat(38, 9)].map(|f| f * c);
    Ok(ProdNorm {
        total: c * rat(40, 3),
        breakdown,
    })
}

/// `4 - (k^3 + k - 4) / (2 C(k,2)^2)`: leading coefficient of `n^(k-2) ‖A^-1‖_∞`.
pub fn clique_leading_coeff(k: usize) -> Result<BigRational> {
    if k < 3 {
        return Err(Error::Domain(format!("k must be >= 3, got {k}")));
    }
    let k = k as i64;
    let pairs = k * (k - 1) / 2;
    Ok(rat(4, 1) - rat(k * k * k + k - 4, 2 * pairs * pairs))
}

/// Coefficient `B(k)` with `‖δA‖_∞ ≤ B(k) c n^(k-2)`: 6 and 24 for k = 3, 4,
/// the generic `C(k,2)^2` beyond.
pub fn perturbation_coeff(k: usize) -> Result<BigInt> {
    match k {
        0..=2 => Err(Error::Domain(format!("k must be >= 3, got {k}"))),
        3 => Ok(BigInt::from(6)),
        4 => Ok(BigInt::from(24)),
        _ => Ok(binomial(k as i64, 2).pow(2)),
    }
}

/// `1 - 1/(2 B(k) L(k))`.
pub fn tau_clique(k: usize) -> Result<BigRational> {
    let b = rat_int(perturbation_coeff(k)?);
    let l = clique_leading_coeff(k)?;
    Ok(BigRational::one() - (rat(2, 1) * b * l).recip())
}

/// Whether `tau_clique(k) <= 1 - 1/(2k^4)`.
pub fn tau_clique_within_quartic(k: usize) -> Result<bool> {
    let k4 = rat_int(BigInt::from(k).pow(4));
    Ok(tau_clique(k)? <= BigRational::one() - (rat(2, 1) * k4).recip())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergraphBound {
    pub k: usize,
    pub t: usize,
    /// `2^t C(k,t)^2`.
    pub leading: BigInt,
    /// `C(k,t) Σ_{j<=t} C(k,j) C(k-j,k-t)^-2`, the sharper sum before dropping.
    pub pre_drop: BigRational,
    /// The `C(t)` in use, `2^t`.
    pub c_t: BigInt,
    /// `1/(2 · 2^t C(k,t)^4)`.
    pub threshold: BigRational,
}

pub fn hypergraph_bound(k: usize, t: usize) -> Result<HypergraphBound> {
    if t < 2 || t > k {
        return Err(Error::Domain(format!("need 2 <= t <= k, got k = {k}, t = {t}")));
    }
    let (ki, ti) = (k as i64, t as i64);
    let ckt = binomial(ki, ti);
    let c_t = BigInt::from(2).pow(t as u32);
    let sum: BigRational = (0..=ti)
        .map(|j| {
            let b = binomial(ki - j, ki - ti);
            BigRational::new(binomial(ki, j), &b * &b)
        })
        .sum();
    Ok(HypergraphBound {
        k,
        t,
        leading: &c_t * &ckt * &ckt,
        pre_drop: rat_int(ckt.clone()) * sum,
        threshold: BigRational::new(BigInt::one(), BigInt::from(2) * &c_t * ckt.pow(4)),
        c_t,
    })
}

/// `Σ_{j<=t} C(k,j) C(k-j,k-t)`; equals `2^t C(k,t)`.
pub fn binomial_identity_lhs(k: usize, t: usize) -> BigInt {
    let (k, t) = (k as i64, t as i64);
    (0..=t).map(|j| binomial(k, j) * binomial(k - j, k - t)).sum()
}

/// Finite-n triangle-inequality bound on `‖(M + ηK)^-1‖_∞` at level t; `eta = None`
/// gives the `η → ∞` limit.
pub fn hyper_inverse_bound(k: usize, t: usize, n: usize, eta: Option<&BigRational>) -> Result<BigRational> {
    let params = SchemeParams::new(k, n, t)?;
    if let Some(e) = eta {
        if !e.is_positive() {
            return Err(Error::Domain("eta must be positive".into()));
        }
    }
    let thetas: Vec<BigRational> = (0..=t).map(|j| rat_int(theta(&params, j))).collect();
    let nm1 = BigInt::from(n - 1);
    let mut total = BigRational::zero();
    for i in 0..=k {
        let mut inner = BigRational::zero();
        for (j, th) in thetas.iter().enumerate() {
            let w = match eta {
                Some(e) => th.recip() * (th.recip() - e.recip()),
                None => th.recip() * th.recip(),
            };
            inner += w * rat_int(krawtchouk(k, n, j, i)?);
        }
        total += inner.abs() * rat_int(binomial(k as i64, i as i64) * nm1.pow(i as u32));
    }
    let scale = BigRational::new(binomial(k as i64, t as i64), BigInt::from(n).pow(t as u32));
    let head = eta.map(|e| e.recip()).unwrap_or_else(BigRational::zero);
    Ok(head + scale * total)
}
