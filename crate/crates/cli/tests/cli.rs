use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use trifan::solver::{WeightFile, WeightKind};
use trifan::{PartialLatinSquare, PartiteGraph, Triangle, Vertex};

fn trifan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trifan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_graph(dir: &TempDir, name: &str, g: &PartiteGraph) -> PathBuf {
    let p = dir.path().join(name);
    g.write(&p).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn spectrum_k3_n4() {
    let out = trifan(&["spectrum", "--k", "3", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let pairs: Vec<(i64, i64)> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["eigenvalue"].as_i64().unwrap(), e["multiplicity"].as_i64().unwrap()))
        .collect();
    assert_eq!(pairs, [(12, 1), (8, 9), (4, 27), (0, 11)]);
    assert_eq!(v["structure_constants_verified"], true);
    assert_eq!(v["idempotents_verified"], true);
    assert_eq!(v["dense_spectrum_verified"], true);
}

#[test]
fn spectrum_k4_n2() {
    let v = json(&trifan(&["spectrum", "--k", "4", "--n", "2", "--t", "2"]));
    let thetas: Vec<i64> = v["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["eigenvalue"].as_i64().unwrap())
        .collect();
    assert_eq!(&thetas[..3], &[24, 12, 4]);
}

#[test]
fn spectrum_guard_exits_2() {
    let out = trifan(&["spectrum", "--k", "3", "--n", "60"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn solve_complete_graph() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "k555.graph", &PartiteGraph::complete(3, 5).unwrap());
    let out = trifan(&["solve", s(&g)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["report"]["certified"], true);
    assert!((num(&v["report"]["min_triangle_weight"]) - 0.2).abs() < 1e-9);
    assert!((num(&v["config"]["effective_eta"]) - 10.0).abs() < 1e-12);
    let z = WeightFile::read(dir.path().join("k555.graph.triangleweights")).unwrap();
    assert_eq!((z.kind, z.values.len()), (WeightKind::Triangle, 125));
    let x = WeightFile::read(dir.path().join("k555.graph.fanweights")).unwrap();
    assert_eq!((x.kind, x.values.len()), (WeightKind::Fan, 75));
}

#[test]
fn solve_near_complete_and_unbalanced() {
    let dir = TempDir::new().unwrap();
    let mut g = PartiteGraph::complete(3, 6).unwrap();
    let t = Triangle {
        vertices: [Vertex::new(0, 0), Vertex::new(1, 0), Vertex::new(2, 0)],
    };
    g.remove_clique(&t.into()).unwrap();
    let path = write_graph(&dir, "hole.graph", &g);
    let out = trifan(&["solve", s(&path)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["report"]["certified"], true);

    let mut u = PartiteGraph::complete(3, 4).unwrap();
    let e = u.edges().next().unwrap();
    u.remove_edge(e);
    let path = write_graph(&dir, "unbalanced.graph", &u);
    assert_eq!(code(&trifan(&["solve", s(&path)])), 3);
}

#[test]
fn solve_reports_parse_errors_and_convergence_failure() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "not a graph\n").unwrap();
    assert_eq!(code(&trifan(&["solve", s(&bad)])), 2);

    let mut g = PartiteGraph::complete(3, 8).unwrap();
    let t = Triangle {
        vertices: [Vertex::new(0, 1), Vertex::new(1, 2), Vertex::new(2, 3)],
    };
    g.remove_clique(&t.into()).unwrap();
    let path = write_graph(&dir, "k888.graph", &g);
    let out = trifan(&["solve", s(&path), "--dense-cutoff", "0", "--max-iterations", "1"]);
    assert_eq!(code(&out), 4);
    let v = json(&out);
    assert!(v["report"]["iterations"].as_u64().unwrap() <= 1);
}

#[test]
fn solve_rejects_bad_tolerances() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "k3.graph", &PartiteGraph::complete(3, 3).unwrap());
    assert_eq!(code(&trifan(&["solve", s(&g), "--cert-tol", "0"])), 2);
    assert_eq!(code(&trifan(&["solve", s(&g), "--eta-multiplier", "-1"])), 2);
}

fn weights(dir: &TempDir, name: &str, values: Vec<f64>) -> PathBuf {
    let p = dir.path().join(name);
    WeightFile {
        kind: WeightKind::Triangle,
        k: 3,
        n: 2,
        values,
    }
    .write(&p)
    .unwrap();
    p
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "k222.graph", &PartiteGraph::complete(3, 2).unwrap());

    let half = weights(&dir, "half.tw", vec![0.5; 8]);
    let out = trifan(&["verify", s(&g), s(&half)]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["report"]["certified"], true);

    let zero = weights(&dir, "zero.tw", vec![0.0; 8]);
    let out = trifan(&["verify", s(&g), s(&zero)]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["report"]["certified"], false);
    assert!((num(&v["report"]["decomposition_residual_inf"]) - 1.0).abs() < 1e-12);

    let mut tampered = vec![0.5; 8];
    tampered[3] += 0.1;
    let tampered = weights(&dir, "tampered.tw", tampered);
    let v = json(&trifan(&["verify", s(&g), s(&tampered)]));
    assert!((num(&v["report"]["decomposition_residual_inf"]) - 0.1).abs() < 1e-9);
    assert_eq!(v["report"]["certified"], false);

    let short = weights(&dir, "short.tw", vec![0.5; 7]);
    assert_eq!(code(&trifan(&["verify", s(&g), s(&short)])), 2);
    let k333 = write_graph(&dir, "k333.graph", &PartiteGraph::complete(3, 3).unwrap());
    assert_eq!(code(&trifan(&["verify", s(&k333), s(&half)])), 2);
}

#[test]
fn threshold_k3() {
    let v = json(&trifan(&["threshold", "--k", "3", "--c", "3/80"]));
    let t = &v["thresholds"];
    assert_eq!(t["c_basic"]["exact"], "3/80");
    assert!((num(&t["c_basic"]["value"]) - 0.0375).abs() < 1e-15);
    assert!((num(&t["c_refined"]["value"]) - 0.0403).abs() < 1e-4);
    assert_eq!(t["tau_basic"]["exact"], "77/80");
    assert_eq!(v["refined_feasible"], true);
    assert_eq!(v["c"]["exact"], "3/80");
    assert!(v["prodnorm"]["total"]["exact"].is_string());
}

#[test]
fn threshold_k4() {
    let out = trifan(&["threshold", "--k", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["tau_clique"]["exact"], "445/448");
    assert_eq!(code(&trifan(&["threshold", "--k", "3", "--c", "x"])), 2);
}

#[test]
fn latin_empty_order_10() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("empty10.pls");
    std::fs::write(&p, PartialLatinSquare::empty(10).unwrap().to_grid()).unwrap();
    let out = trifan(&["latin", s(&p)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["triangles"], 1000);
    assert_eq!(v["report"]["certified"], true);
    let z = WeightFile::read(dir.path().join("empty10.pls.triangleweights")).unwrap();
    assert_eq!(z.values.len(), 1000);
    assert!(z.values.iter().all(|w| (w - 0.1).abs() < 1e-9));
}

#[test]
fn bench_emits_csv() {
    let out = trifan(&["bench", "--n", "3,5"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,edges,triangles,matvec_ms,solve_ms,iterations,residual");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("3,27,27,"));
    assert!(lines[2].starts_with("5,75,125,"));
}

#[test]
fn text_format_and_generate() {
    let out = trifan(&["--format", "text", "norm", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("schema: 1"));
    assert!(text.contains("inv_inf_norm.exact: "));

    let out = trifan(&["generate", "complete", "--n", "2"]);
    let g = PartiteGraph::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(g, PartiteGraph::complete(3, 2).unwrap());

    let out = trifan(&["generate", "pls", "--n", "12", "--c", "1/6", "--seed", "3"]);
    let p = PartialLatinSquare::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(p.density().max_row_count <= 2);
}

#[test]
fn perturb_reports_delta() {
    let dir = TempDir::new().unwrap();
    let g = write_graph(&dir, "k5.graph", &PartiteGraph::complete(3, 5).unwrap());
    let v = json(&trifan(&["perturb", s(&g)]));
    assert_eq!(v["delta_inf"], 0);
    assert_eq!(v["within_bound"], true);
}
