use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use trifan::bounds;
use trifan::latin::fractional_complete;
use trifan::report::{self, rational};
use trifan::scheme::level::Level;
use trifan::scheme::{eigenvalues_m, verify_idempotents, verify_structure_constants};
use trifan::solver::{self, solve_fans, verify_decomposition, FanSystem};
use trifan::{
    Error, PartialLatinSquare, PartiteGraph, SchemeParams, SolverConfig, TriangleWeights, WeightFile, WeightKind,
};

const EXIT_UNCERTIFIED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "trifan",
    version,
    about = "Fractional triangle decompositions via kernel-shifted fan systems"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for the matrix-free products (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of M = W W^T and dense verification of the scheme tables.
    Spectrum {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Solve the fan system, write weight files, certify.
    Solve {
        graph: PathBuf,
        /// Fan weights output (default: <graph>.fanweights).
        #[arg(long)]
        fan_out: Option<PathBuf>,
        /// Triangle weights output (default: <graph>.triangleweights).
        #[arg(long)]
        triangles_out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check a triangle weight file against a graph.
    Verify {
        graph: PathBuf,
        weights: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        cert_tol: f64,
    },
    /// Thresholds and leading coefficients.
    Threshold {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Density at which to evaluate the product-norm bound, e.g. 3/80.
        #[arg(long)]
        c: Option<String>,
    },
    /// Exact ‖(M + θ_1 K)^-1‖_∞ for the complete graph.
    Norm {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Exact ‖M[G] - M_G‖_∞ against the 6cn bound.
    Perturb { graph: PathBuf },
    /// Fractional completion of a partial latin square.
    Latin {
        pls: PathBuf,
        #[arg(long)]
        triangles_out: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Time the operators and the solver on complete graphs; CSV output.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [10usize, 20, 30])]
        n: Vec<usize>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write test inputs.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// K_{n,...,n} as a graph file.
    Complete {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// A partial latin square of order n with density at most c, by deletion.
    Pls {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    solve_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    cert_tol: f64,
    /// η = multiplier · θ_1.
    #[arg(long, default_value_t = 1.0)]
    eta_multiplier: f64,
    #[arg(long, default_value_t = 512)]
    dense_cutoff: usize,
    #[arg(long, default_value_t = 5000)]
    max_iterations: usize,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig, Failure> {
        for (name, v) in [
            ("--solve-tol", self.solve_tol),
            ("--cert-tol", self.cert_tol),
            ("--eta-multiplier", self.eta_multiplier),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(input_error(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(SolverConfig {
            eta: None,
            eta_multiplier: self.eta_multiplier,
            solve_tol: self.solve_tol,
            cert_tol: self.cert_tol,
            dense_cutoff: self.dense_cutoff,
            max_iterations: self.max_iterations,
        })
    }
}

struct Failure {
    code: u8,
    message: String,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Precondition(_) => EXIT_PRECONDITION,
            Error::NotConverged(_) => EXIT_CONVERGENCE,
            _ => EXIT_INPUT,
        };
        let report = match &e {
            Error::NotConverged(f) => Some(report::solve_report(&f.report)),
            _ => None,
        };
        Failure {
            code,
            message: e.to_string(),
            report,
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
        report: None,
    }
}

/// A result body plus the exit code it implies.
struct Outcome {
    body: Value,
    code: u8,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Self { body, code: 0 }
    }

    fn certified(body: Value, certified: bool) -> Self {
        Self {
            body,
            code: if certified { 0 } else { EXIT_UNCERTIFIED },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let name = command_name(&cli.command);
    match run(&cli) {
        Ok(Outcome { body, code }) => {
            if !body.is_null() {
                emit(cli.format, name, body);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(r) = f.report {
                emit(cli.format, name, json!({ "error": f.message, "report": r }));
            }
            ExitCode::from(f.code)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Spectrum { .. } => "spectrum",
        Command::Solve { .. } => "solve",
        Command::Verify { .. } => "verify",
        Command::Threshold { .. } => "threshold",
        Command::Norm { .. } => "norm",
        Command::Perturb { .. } => "perturb",
        Command::Latin { .. } => "latin",
        Command::Bench { .. } => "bench",
        Command::Generate { .. } => "generate",
    }
}

fn emit(format: Format, command: &str, body: Value) {
    let v = report::envelope(command, body);
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("json")),
        Format::Text => print_text("", &v),
    }
}

fn print_text(prefix: &str, v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                print_text(&key, x);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            println!("{prefix}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                print_text(&format!("{prefix}[{i}]"), x);
            }
        }
        other => println!("{prefix}: {}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let threads = json!(cli.threads.unwrap_or_else(rayon::current_num_threads));
    match &cli.command {
        Command::Spectrum { k, n, t } => spectrum(*k, *n, *t),
        Command::Solve {
            graph,
            fan_out,
            triangles_out,
            solver,
        } => solve(
            graph,
            fan_out.as_deref(),
            triangles_out.as_deref(),
            &solver.config()?,
            threads,
        ),
        Command::Verify {
            graph,
            weights,
            cert_tol,
        } => verify(graph, weights, *cert_tol),
        Command::Threshold { k, t, c } => threshold(*k, *t, c.as_deref()),
        Command::Norm { k, n } => {
            let r = bounds::inv_inf_norm_clique(*k, *n, None)?;
            Ok(Outcome::ok(report::norm_report(&r)))
        }
        Command::Perturb { graph } => {
            let g = PartiteGraph::read(graph)?;
            Ok(Outcome::ok(report::perturbation(&bounds::perturbation_norm(&g)?)))
        }
        Command::Latin {
            pls,
            triangles_out,
            solver,
        } => latin(pls, triangles_out.as_deref(), &solver.config()?, threads),
        Command::Bench { n, solver } => bench(n, &solver.config()?),
        Command::Generate { what } => generate(what),
    }
}

fn spectrum(k: usize, n: usize, t: usize) -> Result<Outcome, Failure> {
    let params = SchemeParams::new(k, n, t)?;
    let eigen: Vec<Value> = eigenvalues_m(&params)
        .iter()
        .map(|(theta, mult)| json!({ "eigenvalue": report::integer(theta), "multiplicity": report::integer(mult) }))
        .collect();
    let mut body = json!({ "k": k, "n": n, "t": t, "eigenvalues": eigen });
    if t == 2 {
        body["structure_constants_verified"] = json!(verify_structure_constants(&params)?);
        body["idempotents_verified"] = json!(verify_idempotents(&params)?);
    }
    body["dense_spectrum_verified"] = json!(Level::new(&params)?.spectrum_check());
    Ok(Outcome::ok(body))
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn solve(
    graph: &Path,
    fan_out: Option<&Path>,
    triangles_out: Option<&Path>,
    config: &SolverConfig,
    threads: Value,
) -> Result<Outcome, Failure> {
    let g = PartiteGraph::read(graph)?;
    let sol = solve_fans(&g, config)?;
    let fan_path = fan_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(graph, "fanweights"));
    let tri_path = triangles_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(graph, "triangleweights"));
    WeightFile {
        kind: WeightKind::Fan,
        k: g.k(),
        n: g.n(),
        values: sol.fan.values.clone(),
    }
    .write(&fan_path)?;
    WeightFile {
        kind: WeightKind::Triangle,
        k: g.k(),
        n: g.n(),
        values: sol.triangles.values.clone(),
    }
    .write(&tri_path)?;
    let body = json!({
        "config": config_json(config, g.k(), g.n(), threads),
        "input": graph.display().to_string(),
        "fan_weights": fan_path.display().to_string(),
        "triangle_weights": tri_path.display().to_string(),
        "report": report::solve_report(&sol.report),
    });
    Ok(Outcome::certified(body, sol.report.certified))
}

fn config_json(config: &SolverConfig, k: usize, n: usize, threads: Value) -> Value {
    let mut c = report::solver_config(config);
    c["effective_eta"] = json!(config.effective_eta(k, n));
    c["threads"] = threads;
    c
}

fn verify(graph: &Path, weights: &Path, cert_tol: f64) -> Result<Outcome, Failure> {
    let g = PartiteGraph::read(graph)?;
    let w = WeightFile::read(weights)?;
    if w.kind != WeightKind::Triangle {
        return Err(input_error("verify expects a triangleweights file"));
    }
    if (w.k, w.n) != (g.k(), g.n()) {
        return Err(input_error(format!(
            "weights are for k = {}, n = {} but the graph has k = {}, n = {}",
            w.k,
            w.n,
            g.k(),
            g.n()
        )));
    }
    let cliques = FanSystem::new(&g)?.clique_count();
    if w.values.len() != cliques {
        return Err(input_error(format!(
            "{} weights for a graph with {cliques} cliques",
            w.values.len()
        )));
    }
    let r = verify_decomposition(&g, &TriangleWeights { values: w.values }, cert_tol)?;
    let body = json!({
        "input": { "graph": graph.display().to_string(), "weights": weights.display().to_string() },
        "config": { "cert_tol": cert_tol },
        "report": report::solve_report(&r),
    });
    Ok(Outcome::certified(body, r.certified))
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || input_error(format!("expected a rational like 3/80 or 0.0375, got `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: num::BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: num::BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == num::BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let x: f64 = s.trim().parse().map_err(|_| bad())?;
    BigRational::from_float(x).ok_or_else(bad)
}

fn threshold(k: usize, t: usize, c: Option<&str>) -> Result<Outcome, Failure> {
    let mut body = json!({ "k": k, "t": t });
    if t == 2 {
        if k == 3 {
            let set = bounds::thresholds_k3();
            body["thresholds"] = report::thresholds(&set);
        }
        body["clique_leading_coeff"] = rational(&bounds::clique_leading_coeff(k)?);
        body["perturbation_coeff"] = report::integer(&bounds::perturbation_coeff(k)?);
        body["tau_clique"] = rational(&bounds::tau_clique(k)?);
        body["tau_clique_within_quartic"] = json!(bounds::tau_clique_within_quartic(k)?);
    }
    body["hypergraph"] = report::hypergraph(&bounds::hypergraph_bound(k, t)?);
    if let Some(c) = c {
        let c = parse_rational(c)?;
        if (k, t) == (3, 2) {
            body["prodnorm"] = report::prodnorm(&bounds::prodnorm_bound(&c)?);
            body["refined_feasible"] = json!(bounds::refined_feasible_exact(&c));
        }
        body["c"] = rational(&c);
    }
    Ok(Outcome::ok(body))
}

fn latin(pls: &Path, triangles_out: Option<&Path>, config: &SolverConfig, threads: Value) -> Result<Outcome, Failure> {
    let p = PartialLatinSquare::read(pls)?;
    let cert = fractional_complete(&p, config)?;
    let tri_path = triangles_out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(pls, "triangleweights"));
    if let Some(z) = &cert.triangles {
        WeightFile {
            kind: WeightKind::Triangle,
            k: 3,
            n: p.n(),
            values: z.values.clone(),
        }
        .write(&tri_path)?;
    }
    let body = json!({
        "config": config_json(config, 3, p.n(), threads),
        "input": pls.display().to_string(),
        "order": p.n(),
        "filled": p.len(),
        "density": report::density(&cert.density),
        "graph_edges": cert.graph.edge_count(),
        "triangles": cert.report.cliques,
        "triangle_weights": cert.triangles.as_ref().map(|_| tri_path.display().to_string()),
        "warning": cert.warning,
        "converged": cert.converged,
        "report": report::solve_report(&cert.report),
        "certificate": "fractional completion",
    });
    if !cert.converged {
        return Ok(Outcome {
            body,
            code: EXIT_CONVERGENCE,
        });
    }
    Ok(Outcome::certified(body, cert.report.certified))
}

fn bench(sizes: &[usize], config: &SolverConfig) -> Result<Outcome, Failure> {
    println!("n,edges,triangles,matvec_ms,solve_ms,iterations,residual");
    for &n in sizes {
        let g = PartiteGraph::complete(3, n)?;
        let sys = FanSystem::new(&g)?;
        let eta = config.effective_eta(3, n);
        let y = vec![1.0; sys.edge_count()];
        let reps = 5;
        let start = Instant::now();
        for _ in 0..reps {
            std::hint::black_box(sys.shifted_matvec(eta, &y)?);
        }
        let matvec_ms = start.elapsed().as_secs_f64() * 1e3 / reps as f64;
        let start = Instant::now();
        let sol = solver::solve_system(&sys, config)?;
        let solve_ms = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "{n},{},{},{matvec_ms:.3},{solve_ms:.3},{},{:.3e}",
            sys.edge_count(),
            sys.clique_count(),
            sol.report.iterations,
            sol.report.fan_residual_inf.unwrap_or(f64::NAN)
        );
    }
    Ok(Outcome {
        body: Value::Null,
        code: 0,
    })
}

fn generate(what: &Generate) -> Result<Outcome, Failure> {
    match what {
        Generate::Complete { k, n } => print!("{}", PartiteGraph::complete(*k, *n)?.to_text()),
        Generate::Pls { n, c, seed } => {
            let c = parse_rational(c)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            print!(
                "{}",
                PartialLatinSquare::random_by_deletion(*n, &c, &mut rng)?.to_grid()
            );
        }
    }
    Ok(Outcome {
        body: Value::Null,
        code: 0,
    })
}
