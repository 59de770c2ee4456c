//! Dense models of the `t`-th level of the Hamming lattice against the top level:
//! rank-`t` subwords (hyperedges of `K[t,k,n]`), the inclusion matrix `W`, and
//! brute-force counts used to check the closed-form spectral formulas.

use num::{BigInt, ToPrimitive};

use super::krawtchouk::{hamming_distance, to_digits};
use super::SchemeParams;
use crate::error::{Error, Result};
use crate::exact::DenseMatrix;
use crate::graph::{Edge, Vertex};

/// Limit on `rows * n^k` for the dense level models.
pub const LEVEL_GUARD: usize = 2_000_000;

/// A rank-`t` subword: `values[p]` sits in class `classes[p]`, classes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subword {
    pub classes: Vec<usize>,
    pub values: Vec<usize>,
}

impl Subword {
    fn extended_by(&self, word: &[usize]) -> bool {
        self.classes.iter().zip(&self.values).all(|(&c, &v)| word[c] == v)
    }

    /// The corresponding edge when `t = 2`.
    pub fn as_edge(&self) -> Option<Edge> {
        match (self.classes.as_slice(), self.values.as_slice()) {
            ([a, b], [x, y]) => Some(Edge {
                a: Vertex::new(*a, *x),
                b: Vertex::new(*b, *y),
            }),
            _ => None,
        }
    }
}

pub struct Level {
    pub params: SchemeParams,
    pub subwords: Vec<Subword>,
    words: Vec<Vec<usize>>,
}

impl Level {
    pub fn new(params: &SchemeParams) -> Result<Self> {
        let (k, n, t) = (params.k, params.n, params.t);
        let word_count = n.checked_pow(k as u32).unwrap_or(usize::MAX);
        let mut subwords = Vec::new();
        for classes in subsets(k, t) {
            let count = n.pow(t as u32);
            for code in 0..count {
                subwords.push(Subword {
                    classes: classes.clone(),
                    values: to_digits(code, n, t),
                });
            }
        }
        if subwords.len().saturating_mul(word_count) > LEVEL_GUARD {
            return Err(Error::Resource(format!(
                "level model of size {} x {word_count} exceeds the guard {LEVEL_GUARD}",
                subwords.len()
            )));
        }
        let words = (0..word_count).map(|w| to_digits(w, n, k)).collect();
        Ok(Self {
            params: *params,
            subwords,
            words,
        })
    }

    pub fn rows(&self) -> usize {
        self.subwords.len()
    }

    /// `W`: rows are rank-`t` subwords, columns are words of `[n]^k`.
    pub fn inclusion_matrix(&self) -> DenseMatrix<i64> {
        DenseMatrix::from_fn(self.rows(), self.words.len(), |r, c| {
            i64::from(self.subwords[r].extended_by(&self.words[c]))
        })
    }

    /// `M = W W^T`.
    pub fn m_dense(&self) -> DenseMatrix<i64> {
        let w = self.inclusion_matrix();
        w.matmul(&w.transpose())
    }

    /// `W A_i W^T` by enumerating ordered word pairs at Hamming distance `i`.
    pub fn waw_bruteforce(&self, i: usize) -> DenseMatrix<i64> {
        let rows = self.rows();
        let mut out = DenseMatrix::<i64>::zeros(rows, rows);
        let below: Vec<Vec<usize>> = self
            .words
            .iter()
            .map(|w| (0..rows).filter(|&r| self.subwords[r].extended_by(w)).collect())
            .collect();
        for (a, wa) in self.words.iter().enumerate() {
            for (b, wb) in self.words.iter().enumerate() {
                if hamming_distance(wa, wb) != i {
                    continue;
                }
                for &e in &below[a] {
                    for &f in &below[b] {
                        let v = *out.get(e, f) + 1;
                        out.set(e, f, v);
                    }
                }
            }
        }
        out
    }

    /// Exact check that `M` has eigenvalue `θ_j` with the predicted multiplicity for
    /// each `j`, plus the predicted kernel, by nullities of `M - θ I`.
    pub fn spectrum_check(&self) -> bool {
        matches_spectrum(&self.m_dense(), &super::eigenvalues_m(&self.params))
    }
}

/// True iff each listed eigenvalue has exactly the listed geometric multiplicity
/// (summed over repeated values) and the multiplicities exhaust the dimension (so `m` is diagonalisable with
/// exactly that spectrum).
pub fn matches_spectrum(m: &DenseMatrix<i64>, spectrum: &[(BigInt, BigInt)]) -> bool {
    let size = m.rows();
    let mut merged: Vec<(BigInt, BigInt)> = Vec::new();
    for (theta, mult) in spectrum {
        match merged.iter_mut().find(|(t, _)| t == theta) {
            Some((_, m)) => *m += mult,
            None => merged.push((theta.clone(), mult.clone())),
        }
    }
    let mut total = 0usize;
    for (theta, mult) in &merged {
        let th = theta.to_i64().expect("eigenvalue fits in i64");
        let shifted = DenseMatrix::from_fn(size, size, |i, j| *m.get(i, j) - if i == j { th } else { 0 });
        let nullity = size - shifted.rank();
        let want = mult.to_usize().expect("multiplicity fits");
        if nullity != want {
            return false;
        }
        total += nullity;
    }
    total == size
}

fn subsets(k: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, t: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for c in start..k {
            cur.push(c);
            rec(c + 1, k, t, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, t, &mut Vec::new(), &mut out);
    out
}
