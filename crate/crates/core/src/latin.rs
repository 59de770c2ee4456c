//! Partial latin squares, their non-incidence graph `G_P`, and fractional completion.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use num::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::rat;
use crate::graph::{Edge, PartiteGraph, Vertex};
use crate::solver::{solve_fans, SolveReport, SolverConfig, TriangleWeights};

/// Density above which completion is attempted but flagged.
pub const DENSITY_WARN: (i64, i64) = (1, 25);

/// A filled cell: `(row, col, symbol)`, all 0-indexed.
pub type Triple = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLatinSquare {
    n: usize,
    /// Sorted by `(row, col)`.
    triples: Vec<Triple>,
}

impl PartialLatinSquare {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("order must be >= 1".into()));
        }
        Ok(Self { n, triples: Vec::new() })
    }

    /// Validates the latin property, naming the first offending pair.
    pub fn new(n: usize, mut triples: Vec<Triple>) -> Result<Self> {
        Self::empty(n)?;
        if let Some(t) = triples.iter().find(|&&(r, c, s)| r >= n || c >= n || s >= n) {
            return Err(Error::Domain(format!("triple {t:?} out of range for order {n}")));
        }
        let mut cell = HashMap::new();
        let mut row_sym = HashMap::new();
        let mut col_sym = HashMap::new();
        for &t @ (r, c, s) in &triples {
            if let Some(prev) = cell.insert((r, c), t) {
                return Err(Error::Validity(format!(
                    "cell ({r}, {c}) filled twice: {prev:?} and {t:?}"
                )));
            }
            if let Some(prev) = row_sym.insert((r, s), t) {
                return Err(Error::Validity(format!(
                    "symbol {s} twice in row {r}: {prev:?} and {t:?}"
                )));
            }
            if let Some(prev) = col_sym.insert((c, s), t) {
                return Err(Error::Validity(format!(
                    "symbol {s} twice in column {c}: {prev:?} and {t:?}"
                )));
            }
        }
        triples.sort_unstable();
        Ok(Self { n, triples })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// `(i, j, i + j mod n)`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::empty(n)?;
        let triples = (0..n).flat_map(|r| (0..n).map(move |c| (r, c, (r + c) % n))).collect();
        Ok(Self { n, triples })
    }

    /// A full square: the cyclic one with rows, columns and symbols permuted at random.
    pub fn random_full<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut perms: [Vec<usize>; 3] = std::array::from_fn(|_| (0..n).collect());
        for p in &mut perms {
            p.shuffle(rng);
        }
        let mut triples: Vec<Triple> = Self::cyclic(n)?
            .triples
            .into_iter()
            .map(|(r, c, s)| (perms[0][r], perms[1][c], perms[2][s]))
            .collect();
        triples.sort_unstable();
        Ok(Self { n, triples })
    }

    /// Deletes entries of a random full square until every row, column and
    /// symbol appears at most `⌊c n⌋` times. Cells are visited in random order
    /// and kept while their row, column and symbol are under the cap.
    pub fn random_by_deletion<R: Rng + ?Sized>(n: usize, c: &BigRational, rng: &mut R) -> Result<Self> {
        if *c < rat(0, 1) || *c > rat(1, 1) {
            return Err(Error::Domain(format!("density must lie in [0, 1], got {c}")));
        }
        let cap = (c * rat(n as i64, 1)).floor().to_integer();
        let cap: usize = cap.try_into().expect("cap fits usize");
        let mut cells = Self::random_full(n, rng)?.triples;
        cells.shuffle(rng);
        Ok(Self::keep_under_cap(n, cells, cap))
    }

    /// A random subset of a full square with exactly `min(cells, n^2)` entries.
    pub fn random_with_cells<R: Rng + ?Sized>(n: usize, cells: usize, rng: &mut R) -> Result<Self> {
        let mut all = Self::random_full(n, rng)?.triples;
        all.shuffle(rng);
        all.truncate(cells);
        all.sort_unstable();
        Ok(Self { n, triples: all })
    }

    fn keep_under_cap(n: usize, cells: Vec<Triple>, cap: usize) -> Self {
        let mut counts = [vec![0usize; n], vec![0usize; n], vec![0usize; n]];
        let mut kept = Vec::new();
        for t @ (r, c, s) in cells {
            if counts[0][r] < cap && counts[1][c] < cap && counts[2][s] < cap {
                counts[0][r] += 1;
                counts[1][c] += 1;
                counts[2][s] += 1;
                kept.push(t);
            }
        }
        kept.sort_unstable();
        Self { n, triples: kept }
    }

    /// Grid or triple text; see [`PartialLatinSquare::to_grid`] and
    /// [`PartialLatinSquare::to_triples`].
    pub fn parse(text: &str) -> Result<Self> {
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'));
        match first {
            Some(l) if l.starts_with("pls") => Self::parse_triples(text),
            Some(_) => Self::parse_grid(text),
            None => Err(Error::parse(1, "empty input")),
        }
    }

    fn parse_grid(text: &str) -> Result<Self> {
        let rows: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| (i, l.split_whitespace().collect()))
            .collect();
        let n = rows.len();
        let mut triples = Vec::new();
        for (r, (line, tokens)) in rows.iter().enumerate() {
            if tokens.len() != n {
                return Err(Error::parse(
                    *line,
                    format!("row has {} entries, expected {n}", tokens.len()),
                ));
            }
            for (c, tok) in tokens.iter().enumerate() {
                if *tok == "." || *tok == "0" {
                    continue;
                }
                let s: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(*line, format!("bad symbol `{tok}`")))?;
                if s > n {
                    return Err(Error::parse(*line, format!("symbol {s} exceeds order {n}")));
                }
                triples.push((r, c, s - 1));
            }
        }
        Self::new(n, triples)
    }

    fn parse_triples(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        let n: usize = match f.as_slice() {
            ["pls", n] => n.parse().map_err(|_| Error::parse(hline, format!("bad order `{n}`")))?,
            _ => return Err(Error::parse(hline, "expected `pls n`")),
        };
        let mut cells: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triples = Vec::new();
        for (line, l) in lines {
            let v: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad entry `{t}`"))))
                .collect::<Result<_>>()?;
            let &[r, c, s] = v.as_slice() else {
                return Err(Error::parse(line, "expected `r c s`"));
            };
            if r >= n || c >= n || s >= n {
                return Err(Error::parse(line, format!("entry out of range for order {n}")));
            }
            if let Some(prev) = cells.insert((r, c), line) {
                return Err(Error::parse(
                    line,
                    format!("cell ({r}, {c}) already filled on line {prev}"),
                ));
            }
            triples.push((r, c, s));
        }
        Self::new(n, triples)
    }

    /// `n` lines of `n` tokens, `.` for empty, symbols 1-indexed.
    pub fn to_grid(&self) -> String {
        let mut grid = vec![vec![".".to_string(); self.n]; self.n];
        for &(r, c, s) in &self.triples {
            grid[r][c] = (s + 1).to_string();
        }
        grid.iter().map(|row| row.join(" ") + "\n").collect()
    }

    /// Header `pls n`, then `r c s` per filled cell, 0-indexed.
    pub fn to_triples(&self) -> String {
        let mut out = format!("pls {}\n", self.n);
        for (r, c, s) in &self.triples {
            let _ = writeln!(out, "{r} {c} {s}");
        }
        out
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn density(&self) -> DensityReport {
        let mut counts = [vec![0usize; self.n], vec![0usize; self.n], vec![0usize; self.n]];
        for &(r, c, s) in &self.triples {
            counts[0][r] += 1;
            counts[1][c] += 1;
            counts[2][s] += 1;
        }
        let max = |v: &Vec<usize>| v.iter().copied().max().unwrap_or(0);
        let (mr, mc, ms) = (max(&counts[0]), max(&counts[1]), max(&counts[2]));
        DensityReport {
            max_row_count: mr,
            max_col_count: mc,
            max_symbol_count: ms,
            c: rat(mr.max(mc).max(ms) as i64, self.n as i64),
        }
    }

    /// The 3-partite non-incidence graph: rows, columns and symbols as classes
    /// 0, 1, 2, joined when not incident in the square.
    pub fn build_gp(&self) -> PartiteGraph {
        let n = self.n;
        let mut g = PartiteGraph::complete(3, n).expect("order >= 1");
        for &(r, c, s) in &self.triples {
            let (r, c, s) = (Vertex::new(0, r), Vertex::new(1, c), Vertex::new(2, s));
            for (u, v) in [(r, c), (r, s), (c, s)] {
                g.remove_edge(Edge { a: u, b: v });
            }
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub max_row_count: usize,
    pub max_col_count: usize,
    pub max_symbol_count: usize,
    pub c: BigRational,
}

/// Outcome of the fractional completion pipeline.
#[derive(Clone, Debug)]
pub struct LatinCertificate {
    pub density: DensityReport,
    pub graph: PartiteGraph,
    /// `None` when the solve did not converge.
    pub triangles: Option<TriangleWeights>,
    pub report: SolveReport,
    pub converged: bool,
    pub warning: Option<String>,
}

/// Solves the fan system on `G_P` and certifies a fractional completion.
pub fn fractional_complete(p: &PartialLatinSquare, config: &SolverConfig) -> Result<LatinCertificate> {
    let density = p.density();
    let warning = (density.c > rat(DENSITY_WARN.0, DENSITY_WARN.1))
        .then(|| format!("density c = {} is above 1/25; no certificate is guaranteed", density.c));
    let graph = p.build_gp();
    match solve_fans(&graph, config) {
        Ok(sol) => Ok(LatinCertificate {
            density,
            graph,
            triangles: Some(sol.triangles),
            report: sol.report,
            converged: true,
            warning,
        }),
        Err(Error::NotConverged(failed)) => Ok(LatinCertificate {
            density,
            graph,
            triangles: None,
            report: failed.report,
            converged: false,
            warning,
        }),
        Err(e) => Err(e),
    }
}
