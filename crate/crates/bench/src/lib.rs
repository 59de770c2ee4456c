//! Fixtures and benchmark bodies for the operator and solver timings.

use criterion::{black_box, BenchmarkId, Criterion};
use trifan::solver::{k_matvec, solve_system, FanSystem};
use trifan::{PartialLatinSquare, PartiteGraph, SolverConfig};

pub const SIZES: [usize; 3] = [10, 20, 30];

/// K_{n,n,n} and a sparse-hole instance of the same order.
pub fn fixtures(n: usize) -> [(String, PartiteGraph); 2] {
    let full = PartialLatinSquare::cyclic(n).expect("order is positive");
    let keep: Vec<_> = full.triples().iter().copied().step_by(n).collect();
    let holes = PartialLatinSquare::new(n, keep).expect("subset of a latin square");
    [
        (format!("complete/{n}"), PartiteGraph::complete(3, n).expect("k = 3")),
        (format!("holes/{n}"), holes.build_gp()),
    ]
}

fn ones(len: usize) -> Vec<f64> {
    (0..len).map(|i| 1.0 + (i % 7) as f64 * 0.125).collect()
}

pub fn matvecs(c: &mut Criterion) {
    let mut group = c.benchmark_group("matvec");
    for n in SIZES {
        for (name, g) in fixtures(n) {
            let sys = FanSystem::new(&g).expect("balanced fixture");
            let y = ones(sys.edge_count());
            group.bench_with_input(BenchmarkId::new("mg", &name), &y, |b, y| {
                b.iter(|| sys.mg_matvec(black_box(y)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("kg", &name), &y, |b, y| {
                b.iter(|| sys.kg_matvec(black_box(y)).unwrap())
            });
        }
        let y = ones(3 * n * n);
        group.bench_with_input(BenchmarkId::new("k_full", n), &y, |b, y| {
            b.iter(|| k_matvec(n, black_box(y)).unwrap())
        });
    }
    group.finish();
}

pub fn solves(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_fans");
    group.sample_size(10);
    let config = SolverConfig::default().iterative_only();
    for n in SIZES {
        for (name, g) in fixtures(n) {
            let sys = FanSystem::new(&g).expect("balanced fixture");
            group.bench_function(BenchmarkId::new("cg", &name), |b| {
                b.iter(|| solve_system(black_box(&sys), &config).unwrap())
            });
        }
    }
    group.finish();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_balanced() {
        for (name, g) in fixtures(6) {
            assert!(g.is_locally_balanced(), "{name}");
        }
    }
}
