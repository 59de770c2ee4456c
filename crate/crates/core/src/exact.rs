//! Exact integer and rational helpers: binomials, a small dense matrix type,
//! and fraction-free (Bareiss) elimination for rank and linear solves.

use std::ops::{Add, Mul, Sub};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Binomial coefficient with the convention that out-of-range arguments give 0.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient as `u64`; out-of-range arguments give 0.
pub fn binom_u64(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(p.into())
}

/// Lossy conversion used only for reporting.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    match r.to_f64() {
        Some(v) => v,
        None => {
            // Fall back to a scaled division for very large numerators/denominators.
            let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
            let num = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let den = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            num / den
        }
    }
}

/// Renders a rational as `"p/q"` (or `"p"` when integral).
pub fn rat_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Row-major dense matrix over an arbitrary ring-like scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone + Zero>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(|c| c.to_vec()).collect()
    }
}

impl<T: Clone + Zero + One> DenseMatrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> DenseMatrix<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    let prod = a * other.get(l, j);
                    out.data[idx] = std::mem::replace(&mut out.data[idx], T::zero()) + &prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }
}

impl<T> DenseMatrix<T>
where
    T: Clone + Zero + for<'a> Add<&'a T, Output = T> + for<'a> Sub<&'a T, Output = T>,
{
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }
}

impl DenseMatrix<BigRational> {
    /// Scales every row by the lcm of its denominators, giving an integer matrix
    /// with the same row space.
    pub fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integer_row(self.row(i)).0).collect()
    }

    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_integer_rows())
    }

    /// Gauss-Jordan inverse over the rationals. `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = self.clone().into_rows();
        let mut inv: Vec<Vec<BigRational>> = DenseMatrix::<BigRational>::identity(n).into_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, p);
            inv.swap(c, p);
            let piv = a[c][c].clone();
            for j in 0..n {
                a[c][j] = &a[c][j] / &piv;
                inv[c][j] = &inv[c][j] / &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] = &a[r][j] - &t;
                    let t = &f * &inv[c][j];
                    inv[r][j] = &inv[r][j] - &t;
                }
            }
        }
        Some(DenseMatrix::from_fn(n, n, |i, j| inv[i][j].clone()))
    }

    /// Solves `self * x = b` exactly. `None` when singular.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                integer_row(&row).0
            })
            .collect();
        bareiss_solve(rows)
    }
}

impl DenseMatrix<i64> {
    pub fn rank(&self) -> usize {
        bareiss_rank(
            (0..self.rows)
                .map(|i| self.row(i).iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }
}

fn integer_row(row: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints = row.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    (ints, l)
}

/// Rank by fraction-free elimination; every intermediate division is exact.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &row[j] * &piv - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Solves a square system given as augmented integer rows `[A | b]`.
pub fn bareiss_solve(mut m: Vec<Vec<BigInt>>) -> Option<Vec<BigRational>> {
    let n = m.len();
    let cols = n + 1;
    let mut prev = BigInt::one();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let (head, tail) = m.split_at_mut(c + 1);
        let pivot_row = &head[c];
        let piv = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &row[j] * &piv - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = piv;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            if !m[i][j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(m[i][j].clone());
            }
        }
        x[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Some(x)
}

/// Maximum absolute row sum.
pub fn inf_norm_rational(m: &DenseMatrix<BigRational>) -> BigRational {
    (0..m.rows())
        .map(|i| m.row(i).iter().fold(BigRational::zero(), |acc, v| acc + v.abs()))
        .max()
        .unwrap_or_else(BigRational::zero)
}
