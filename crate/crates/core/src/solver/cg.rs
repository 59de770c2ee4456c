use super::operators::{dot, inf_norm};

#[derive(Clone, Debug)]
pub struct CgOutcome {
    /// Converged iterate, or the best one seen by true residual.
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True `‖b - A x‖_∞` of the returned iterate.
    pub residual: f64,
    pub converged: bool,
}

const RECHECK_EVERY: usize = 25;

/// Conjugate gradients for a symmetric positive (semi)definite operator, stopping
/// on the true ∞-norm residual `‖b - A x‖_∞ <= tol * ‖b‖_∞`.
///
/// The recursive residual is replaced by the true one every few steps and
/// whenever it claims convergence.
pub fn conjugate_gradient(apply: impl Fn(&[f64]) -> Vec<f64>, b: &[f64], tol: f64, max_iterations: usize) -> CgOutcome {
    let m = b.len();
    let target = tol * inf_norm(b).max(f64::MIN_POSITIVE);
    let mut x = vec![0.0; m];
    let mut r = b.to_vec();
    let mut best = (inf_norm(&r), x.clone());
    if best.0 <= target {
        return CgOutcome {
            x,
            iterations: 0,
            residual: best.0,
            converged: true,
        };
    }
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut done = 0;
    for it in 1..=max_iterations {
        done = it;
        let ap = apply(&p);
        let curv = dot(&p, &ap);
        if curv.is_nan() || curv <= 0.0 {
            // p lies in the null space or the operator is indefinite
            break;
        }
        let alpha = rs / curv;
        for i in 0..m {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if inf_norm(&r) <= target || it % RECHECK_EVERY == 0 {
            let ax = apply(&x);
            for i in 0..m {
                r[i] = b[i] - ax[i];
            }
            let true_res = inf_norm(&r);
            if true_res < best.0 {
                best = (true_res, x.clone());
            }
            if true_res <= target {
                return CgOutcome {
                    x,
                    iterations: it,
                    residual: true_res,
                    converged: true,
                };
            }
        }
        let rs_new = dot(&r, &r);
        let beta = rs_new / rs;
        rs = rs_new;
        for i in 0..m {
            p[i] = r[i] + beta * p[i];
        }
        if it == max_iterations {
            let ax = apply(&x);
            let true_res = b.iter().zip(&ax).fold(0.0f64, |acc, (bi, ai)| acc.max((bi - ai).abs()));
            if true_res < best.0 {
                best = (true_res, x.clone());
            }
        }
    }
    CgOutcome {
        x: best.1,
        iterations: done,
        residual: best.0,
        converged: false,
    }
}
