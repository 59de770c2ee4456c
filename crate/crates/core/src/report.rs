//! JSON renderings. Rationals appear as `{"exact": "p/q", "value": float}`.

use num::{BigInt, BigRational};
use serde_json::{json, Map, Value};

use crate::bounds::{HypergraphBound, NormReport, PerturbationReport, ProdNorm, ThresholdSet};
use crate::exact::{rat_string, rat_to_f64};
use crate::latin::DensityReport;
use crate::solver::{SolveReport, SolverConfig};

pub const SCHEMA: u32 = 1;

pub fn rational(r: &BigRational) -> Value {
    json!({ "exact": rat_string(r), "value": rat_to_f64(r) })
}

pub fn integer(i: &BigInt) -> Value {
    match i64::try_from(i) {
        Ok(v) => json!(v),
        Err(_) => json!(i.to_string()),
    }
}

/// Wraps `body` with the schema tag and a command name.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        map.extend(fields);
    } else {
        map.insert("result".into(), body);
    }
    Value::Object(map)
}

pub fn solver_config(c: &SolverConfig) -> Value {
    serde_json::to_value(c).expect("config serializes")
}

pub fn solve_report(r: &SolveReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn norm_report(r: &NormReport) -> Value {
    json!({
        "k": r.k,
        "n": r.n,
        "eta": rational(&r.eta),
        "coeffs": r.coeffs.iter().map(rational).collect::<Vec<_>>(),
        "inv_inf_norm": rational(&r.inv_inf_norm),
        "scaled": rational(&r.scaled),
        "predicted_leading": rational(&r.predicted_leading),
        "gap": rational(&r.gap()),
    })
}

pub fn thresholds(t: &ThresholdSet) -> Value {
    json!({
        "k": t.k,
        "t": t.t,
        "c_basic": rational(&t.c_basic),
        "c_refined": { "exact": t.c_refined.to_string(), "value": t.c_refined.to_f64() },
        "tau_basic": rational(&t.tau_basic),
        "tau_refined_upper": rational(&t.tau_refined),
    })
}

pub fn prodnorm(p: &ProdNorm) -> Value {
    json!({
        "total": rational(&p.total),
        "breakdown": p.breakdown.iter().map(rational).collect::<Vec<_>>(),
    })
}

pub fn hypergraph(h: &HypergraphBound) -> Value {
    json!({
        "k": h.k,
        "t": h.t,
        "leading": integer(&h.leading),
        "pre_drop": rational(&h.pre_drop),
        "c_t": integer(&h.c_t),
        "threshold": rational(&h.threshold),
    })
}

pub fn perturbation(p: &PerturbationReport) -> Value {
    serde_json::to_value(p).expect("report serializes")
}

pub fn density(d: &DensityReport) -> Value {
    json!({
        "max_row_count": d.max_row_count,
        "max_col_count": d.max_col_count,
        "max_symbol_count": d.max_symbol_count,
        "c": rational(&d.c),
    })
}
