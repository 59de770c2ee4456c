//! Fractional triangle and clique decompositions of balanced k-partite graphs.
//!
//! A graph is certified by solving the kernel-shifted fan system
//! `(M_G + ηK[G]) x = 1` and lifting `x` to clique weights `z = W_Gᵀx`.
//! Exact association-scheme tables, dense rational oracles and the
//! threshold calculators live alongside the floating-point solver.

pub mod bounds;
pub mod error;
pub mod exact;
pub mod graph;
pub mod latin;
pub mod report;
pub mod scheme;
pub mod solver;

pub use bounds::{HypergraphBound, NormReport, PerturbationReport, ProdNorm, QuadraticSurd, ThresholdSet};
pub use error::{Error, Result};
pub use graph::{Clique, Edge, EdgeIndexer, PartiteGraph, Triangle, Vertex};
pub use latin::{DensityReport, LatinCertificate, PartialLatinSquare};
pub use scheme::{EdgeRelation, SchemeParams, SchemeTable};
pub use solver::{
    FailedSolve, FanWeights, Solution, SolveMethod, SolveReport, SolverConfig, TriangleWeights, WeightFile, WeightKind,
};
