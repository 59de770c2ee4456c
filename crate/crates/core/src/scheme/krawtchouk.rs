//! The Hamming scheme H(k, n) and its Krawtchouk eigenvalue polynomials.

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::exact::binomial;

/// Largest `n^k` for which [`Hamming::transform_check`] will run.
pub const HAMMING_GUARD: u64 = 4096;

/// Parameters of the Hamming scheme on words `[n]^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hamming {
    pub k: usize,
    pub n: usize,
}

impl Hamming {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k < 1 || n < 2 {
            return Err(Error::Domain(format!(
                "Hamming scheme needs k >= 1 and n >= 2, got k = {k}, n = {n}"
            )));
        }
        Ok(Self { k, n })
    }

    /// Krawtchouk polynomial `κ_i(x) = Σ_l (-1)^l (n-1)^(i-l) C(k-x, i-l) C(x, l)`.
    pub fn krawtchouk(&self, i: usize, x: usize) -> Result<BigInt> {
        if i > self.k || x > self.k {
            return Err(Error::Domain(format!(
                "krawtchouk needs 0 <= i, x <= k = {}, got i = {i}, x = {x}",
                self.k
            )));
        }
        Ok(krawtchouk_unchecked(self.k, self.n, i, x))
    }

    pub fn word_count(&self) -> u64 {
        (self.n as u64).saturating_pow(self.k as u32)
    }

    /// Multiplicity of the `j`-th eigenspace, `C(k, j) (n-1)^j`.
    pub fn multiplicity(&self, j: usize) -> BigInt {
        binomial(self.k as i64, j as i64) * BigInt::from(self.n - 1).pow(j as u32)
    }

    /// Checks exactly that `E_j = n^-k Σ_i κ_j(i) A_i` are orthogonal idempotents
    /// summing to `I`, and that `A_i = Σ_j κ_i(j) E_j`.
    ///
    /// Works with the integer matrices `F_j = n^k E_j`. Every matrix involved is
    /// invariant under the automorphism group of H(k, n), which acts transitively on
    /// pairs of words at each fixed distance, so each identity is checked on one
    /// representative pair `(0, y_d)` per distance `d`, summing over all words `z`.
    pub fn transform_check(&self) -> Result<bool> {
        let words = self.word_count();
        if words > HAMMING_GUARD {
            return Err(Error::Resource(format!(
                "n^k = {words} exceeds the dense guard {HAMMING_GUARD}"
            )));
        }
        let (k, n) = (self.k, self.n);
        let nk = BigInt::from(words);
        let kraw: Vec<Vec<BigInt>> = (0..=k)
            .map(|j| (0..=k).map(|i| krawtchouk_unchecked(k, n, j, i)).collect())
            .collect();
        let words = words as usize;
        let digits: Vec<Vec<usize>> = (0..words).map(|w| to_digits(w, n, k)).collect();
        // representative word at distance d from the all-zero word: d leading ones
        let reps: Vec<Vec<usize>> = (0..=k).map(|d| (0..k).map(|p| usize::from(p < d)).collect()).collect();
        let weight: Vec<usize> = digits.iter().map(|w| w.iter().filter(|&&x| x != 0).count()).collect();
        let dist_to_rep: Vec<Vec<usize>> = reps
            .iter()
            .map(|r| digits.iter().map(|w| hamming_distance(w, r)).collect())
            .collect();

        for j in 0..=k {
            for l in 0..=k {
                for (d, dist) in dist_to_rep.iter().enumerate() {
                    let mut acc = BigInt::zero();
                    for z in 0..words {
                        acc += &kraw[j][weight[z]] * &kraw[l][dist[z]];
                    }
                    let want = if j == l { &nk * &kraw[j][d] } else { BigInt::zero() };
                    if acc != want {
                        return Ok(false);
                    }
                }
            }
        }
        for d in 0..=k {
            // Σ_j F_j = n^k I
            let sum: BigInt = (0..=k).map(|j| &kraw[j][d]).sum();
            let want = if d == 0 { nk.clone() } else { BigInt::zero() };
            if sum != want {
                return Ok(false);
            }
            // n^k A_i = Σ_j κ_i(j) F_j
            for i in 0..=k {
                let sum: BigInt = (0..=k).map(|j| &kraw[i][j] * &kraw[j][d]).sum();
                let want = if i == d { nk.clone() } else { BigInt::zero() };
                if sum != want {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn krawtchouk_unchecked(k: usize, n: usize, i: usize, x: usize) -> BigInt {
    let (k, i, x) = (k as i64, i as i64, x as i64);
    let q = BigInt::from(n as i64 - 1);
    (0..=i)
        .map(|l| {
            let term = q.pow((i - l) as u32) * binomial(k - x, i - l) * binomial(x, l);
            if l % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

pub(crate) fn to_digits(mut w: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for d in out.iter_mut().rev() {
        *d = w % n;
        w /= n;
    }
    out
}

pub(crate) fn hamming_distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Free-function form of [`Hamming::krawtchouk`].
pub fn krawtchouk(k: usize, n: usize, i: usize, x: usize) -> Result<BigInt> {
    Hamming::new(k, n)?.krawtchouk(i, x)
}
