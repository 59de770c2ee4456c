//! Fractional clique decompositions through the kernel-shifted fan system
//! `(M_G + η K[G]) x = 1`, lifted to clique weights `z = W_G^T x`.

mod cg;
mod io;
mod operators;

pub use cg::{conjugate_gradient, CgOutcome};
pub use io::{WeightFile, WeightKind};
pub use operators::{dot, inf_norm, k_matvec, kernel_basis, kg_matvec, mg_matvec, FanSystem, KernelProjector};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::PartiteGraph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Absolute shift. When `None`, `eta_multiplier * θ_1` is used
    /// (`θ_1 = (k-1) n^(k-2)`, i.e. `2n` for triangles).
    pub eta: Option<f64>,
    pub eta_multiplier: f64,
    /// Stopping tolerance on `‖(M_G + ηK[G])x - 1‖_∞`.
    pub solve_tol: f64,
    pub cert_tol: f64,
    /// Systems with at most this many edges are factorised densely.
    pub dense_cutoff: usize,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eta: None,
            eta_multiplier: 1.0,
            solve_tol: 1e-10,
            cert_tol: 1e-8,
            dense_cutoff: 512,
            max_iterations: 5000,
        }
    }
}

impl SolverConfig {
    pub fn effective_eta(&self, k: usize, n: usize) -> f64 {
        self.eta
            .unwrap_or_else(|| self.eta_multiplier * (k as f64 - 1.0) * (n as f64).powi(k as i32 - 2))
    }

    pub fn iterative_only(mut self) -> Self {
        self.dense_cutoff = 0;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.solve_tol > 0.0 && self.cert_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if self.eta.is_none() && (self.eta_multiplier.is_nan() || self.eta_multiplier <= 0.0) {
            return Err(Error::Domain("eta multiplier must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMethod {
    Dense,
    Iterative,
    /// Verification only; no solve happened.
    None,
}

/// Solution `x` of the fan system, indexed by edges in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanWeights {
    pub values: Vec<f64>,
    pub eta: f64,
    pub iterations: usize,
    pub residual: f64,
    pub method: SolveMethod,
}

/// Clique weights `z`, indexed by cliques in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleWeights {
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub edges: usize,
    pub cliques: usize,
    /// `‖(M_G + ηK[G])x - 1‖_∞`; `None` when only a verification was run.
    pub fan_residual_inf: Option<f64>,
    /// `‖M_G x - 1‖_∞`.
    pub unshifted_residual_inf: Option<f64>,
    /// `‖W_G z - 1‖_∞`, measured after clamping tiny negatives.
    pub decomposition_residual_inf: f64,
    /// Minimum of `z` before clamping.
    pub min_triangle_weight: f64,
    pub min_fan_weight: Option<f64>,
    pub clamped: usize,
    pub certified: bool,
    pub cert_tol: f64,
    pub eta: Option<f64>,
    pub iterations: usize,
    pub method: SolveMethod,
}

/// A solve that ran out of iterations, with the best iterate seen.
#[derive(Clone, Debug)]
pub struct FailedSolve {
    pub weights: FanWeights,
    pub report: SolveReport,
}

impl FailedSolve {
    pub fn summary(&self) -> String {
        format!(
            "{} iterations, best fan residual {:.3e}",
            self.weights.iterations, self.weights.residual
        )
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub fan: FanWeights,
    pub triangles: TriangleWeights,
    pub report: SolveReport,
}

/// Checks the preconditions of [`solve_fans`].
pub fn check_preconditions(g: &PartiteGraph, system: &FanSystem) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::Precondition("solver needs class size n >= 2".into()));
    }
    if !g.is_locally_balanced() {
        return Err(Error::Precondition("graph is not locally balanced".into()));
    }
    if let Some(e) = (0..system.edge_count()).find(|&e| system.fan_size(e) == 0) {
        let edge = g.indexer().edge(system.edge_ids()[e]);
        return Err(Error::Precondition(format!(
            "edge {edge:?} lies in no {}-clique",
            g.k()
        )));
    }
    Ok(())
}

/// Solves `(M_G + η K[G]) x = 1`, lifts to clique weights and certifies them.
pub fn solve_fans(g: &PartiteGraph, config: &SolverConfig) -> Result<Solution> {
    config.validate()?;
    let system = FanSystem::new(g)?;
    check_preconditions(g, &system)?;
    solve_system(&system, config)
}

pub fn solve_system(system: &FanSystem, config: &SolverConfig) -> Result<Solution> {
    let eta = config.effective_eta(system.k(), system.n());
    let m = system.edge_count();
    let rhs = vec![1.0; m];
    let op = |y: &[f64]| system.shifted_matvec(eta, y).expect("length checked");

    let dense = if m <= config.dense_cutoff {
        dense_solve(m, &op)
    } else {
        None
    };
    let (x, iterations, method, converged) = match dense {
        Some(x) => (x, 0, SolveMethod::Dense, true),
        None => {
            let out = conjugate_gradient(op, &rhs, config.solve_tol, config.max_iterations);
            (out.x, out.iterations, SolveMethod::Iterative, out.converged)
        }
    };

    let fan_res = residual(&system.shifted_matvec(eta, &x)?);
    let unshifted = residual(&system.mg_matvec(&x)?);
    let min_fan = x.iter().copied().fold(f64::INFINITY, f64::min);
    let fan = FanWeights {
        values: x,
        eta,
        iterations,
        residual: fan_res,
        method,
    };

    let mut z = system.lift(&fan.values)?;
    let raw_min = z.iter().copied().fold(f64::INFINITY, f64::min);
    let clamped = clamp_tiny_negatives(&mut z, config.cert_tol);
    let mut report = verify_with_system(system, &z, config.cert_tol)?;
    report.min_triangle_weight = raw_min;
    report.certified = report.decomposition_residual_inf <= config.cert_tol && raw_min >= -config.cert_tol;
    report.clamped = clamped;
    report.fan_residual_inf = Some(fan_res);
    report.unshifted_residual_inf = Some(unshifted);
    report.min_fan_weight = Some(min_fan);
    report.eta = Some(eta);
    report.iterations = iterations;
    report.method = method;

    if !converged {
        return Err(Error::NotConverged(Box::new(FailedSolve { weights: fan, report })));
    }
    Ok(Solution {
        fan,
        triangles: TriangleWeights { values: z },
        report,
    })
}

/// Sets entries in `(-tol, 0)` to zero; returns how many were changed.
pub fn clamp_tiny_negatives(z: &mut [f64], tol: f64) -> usize {
    let mut count = 0;
    for v in z.iter_mut() {
        if *v < 0.0 && *v > -tol {
            *v = 0.0;
            count += 1;
        }
    }
    count
}

/// `z = W_G^T x`.
pub fn lift_to_triangles(g: &PartiteGraph, x: &FanWeights) -> Result<TriangleWeights> {
    Ok(TriangleWeights {
        values: FanSystem::new(g)?.lift(&x.values)?,
    })
}

/// Checks `W_G z = 1` and `z >= 0` up to `cert_tol`. Independent of how `z` was made.
pub fn verify_decomposition(g: &PartiteGraph, z: &TriangleWeights, cert_tol: f64) -> Result<SolveReport> {
    verify_with_system(&FanSystem::new(g)?, &z.values, cert_tol)
}

fn verify_with_system(system: &FanSystem, z: &[f64], cert_tol: f64) -> Result<SolveReport> {
    let sums = system.edge_sums(z)?;
    let res = residual(&sums);
    let min = z.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SolveReport {
        edges: system.edge_count(),
        cliques: system.clique_count(),
        fan_residual_inf: None,
        unshifted_residual_inf: None,
        decomposition_residual_inf: res,
        min_triangle_weight: min,
        min_fan_weight: None,
        clamped: 0,
        certified: res <= cert_tol && (z.is_empty() || min >= -cert_tol),
        cert_tol,
        eta: None,
        iterations: 0,
        method: SolveMethod::None,
    })
}

fn residual(ax: &[f64]) -> f64 {
    ax.iter().fold(0.0, |m, v| m.max((v - 1.0).abs()))
}

fn dense_solve(m: usize, op: &impl Fn(&[f64]) -> Vec<f64>) -> Option<Vec<f64>> {
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut unit = vec![0.0; m];
    for j in 0..m {
        unit[j] = 1.0;
        let col = op(&unit);
        unit[j] = 0.0;
        for (i, v) in col.into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    let chol = a.cholesky()?;
    let x = chol.solve(&DVector::from_element(m, 1.0));
    Some(x.iter().copied().collect())
}
