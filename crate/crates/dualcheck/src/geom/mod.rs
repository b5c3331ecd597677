//! Named operators over flat metrics, dimension formulas and the fixture
//! registry.
//!
//! Symmetric two-tensors `Ω_ij = Ω_ji` are stored by their components
//! `(i, j)` with `i ≤ j` in the order `(11) < (12) < … < (1n) < (22) < …`.
//! A term written on `Ω_ij` with `i > j` lands in column `(j, i)`, so sums
//! over all index pairs count off-diagonal components twice.

pub mod demo;
mod elasticity;
mod examples;

pub use elasticity::*;
pub use examples::*;

use serde::Serialize;

use crate::field::{binomial, MultiIndex, RatFunc};
use crate::ore::{OpMatrix, OreOperator};
use crate::Q;

/// A constant diagonal metric with entries `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metric {
    signature: Vec<i64>,
}

impl Metric {
    pub fn new(signature: Vec<i64>) -> Self {
        assert!(
            signature.iter().all(|s| *s == 1 || *s == -1),
            "signature entries must be ±1"
        );
        Metric { signature }
    }

    pub fn euclidean(n: usize) -> Self {
        Metric::new(vec![1; n])
    }

    /// `(+, …, +, −)`: the last coordinate is time.
    pub fn minkowski(n: usize) -> Self {
        let mut s = vec![1; n];
        s[n - 1] = -1;
        Metric::new(s)
    }

    pub fn n(&self) -> usize {
        self.signature.len()
    }

    /// `ω_ii` (equal to `ω^ii`).
    pub fn w(&self, i: usize) -> i64 {
        self.signature[i]
    }

    /// `ω_ij`.
    pub fn at(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.signature[i]
        } else {
            0
        }
    }
}

/// Components `(i, j)`, `i ≤ j`, zero-based.
pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Column of `Ω_ij` (either order).
pub fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    a * n - a * (a + 1) / 2 + b
}

/// Duality weights: 1 on diagonal components, 2 off the diagonal.
pub fn sym_weights(n: usize) -> Vec<Q> {
    sym_pairs(n)
        .into_iter()
        .map(|(i, j)| Q::from_integer(if i == j { 1 } else { 2 }.into()))
        .collect()
}

/// [`sym_weights`] with the signs `ω_ii ω_jj` that raise both indices.
pub fn metric_weights(metric: &Metric) -> Vec<Q> {
    sym_pairs(metric.n())
        .into_iter()
        .zip(sym_weights(metric.n()))
        .map(|((i, j), w)| w * Q::from_integer((metric.w(i) * metric.w(j)).into()))
        .collect()
}

pub fn inverse_weights(w: &[Q]) -> Vec<Q> {
    w.iter().map(|x| x.recip()).collect()
}

pub fn ones(k: usize) -> Vec<Q> {
    vec![Q::from_integer(1.into()); k]
}

/// `diag(row) · ad(A) · diag(col)`: the adjoint with respect to weighted
/// duality pairings on both sides.
pub fn weighted_adjoint(a: &OpMatrix<Q>, row_w: &[Q], col_w: &[Q]) -> OpMatrix<Q> {
    a.adjoint().scale(row_w, col_w)
}

/// Accumulates `c · d_{idx}` acting on chosen unknowns, one row at a time.
pub(crate) struct Builder {
    n: usize,
    cols: usize,
    rows: Vec<Vec<OreOperator<Q>>>,
}

impl Builder {
    pub fn new(n: usize, cols: usize) -> Self {
        Builder {
            n,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self) -> usize {
        self.rows.push(vec![OreOperator::zero(self.n); self.cols]);
        self.rows.len() - 1
    }

    /// Add `c · d_idx` (zero-based derivative indices) in column `col`.
    pub fn add(&mut self, row: usize, col: usize, c: Q, idx: &[usize]) {
        self.add_rf(row, col, RatFunc::constant(c), idx);
    }

    pub fn add_rf(&mut self, row: usize, col: usize, c: RatFunc<Q>, idx: &[usize]) {
        let mu = MultiIndex::from_indices(self.n, idx);
        self.rows[row][col].add_term(mu, c);
    }

    pub fn finish(self) -> OpMatrix<Q> {
        OpMatrix::from_rows(self.n, self.cols, self.rows)
    }
}

pub(crate) fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

pub(crate) fn qr(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

/// Find diagonal rational matrices with `diag(r) · a · diag(c) = b`.
///
/// Each nonzero entry fixes the product `r_i c_j`; the first row and column
/// of every connected block are normalised to make the answer unique.
pub fn diagonal_equivalence(a: &OpMatrix<Q>, b: &OpMatrix<Q>) -> Option<(Vec<Q>, Vec<Q>)> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() || a.n() != b.n() {
        return None;
    }
    let (p, m) = (a.nrows(), a.ncols());
    // ratio k_ij with b_ij = k_ij a_ij
    let mut ratio: Vec<Vec<Option<Q>>> = vec![vec![None; m]; p];
    for i in 0..p {
        for j in 0..m {
            let (x, y) = (a.get(i, j), b.get(i, j));
            match (x.is_zero(), y.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return None,
                _ => {}
            }
            let (mu, c) = x.leading().unwrap();
            let k = y.coeff(mu).div(c).ok()?.as_constant()?;
            if x.scale_left(&RatFunc::constant(k.clone())) != *y {
                return None;
            }
            ratio[i][j] = Some(k);
        }
    }
    let mut r: Vec<Option<Q>> = vec![None; p];
    let mut c: Vec<Option<Q>> = vec![None; m];
    for start in 0..p {
        if r[start].is_some() {
            continue;
        }
        r[start] = Some(q(1));
        let mut stack = vec![(true, start)];
        while let Some((is_row, k)) = stack.pop() {
            if is_row {
                let ri = r[k].clone().unwrap();
                for j in 0..m {
                    if let Some(kij) = &ratio[k][j] {
                        let want = kij / &ri;
                        match &c[j] {
                            Some(v) if *v != want => return None,
                            Some(_) => {}
                            None => {
                                c[j] = Some(want);
                                stack.push((false, j));
                            }
                        }
                    }
                }
            } else {
                let cj = c[k].clone().unwrap();
                for i in 0..p {
                    if let Some(kij) = &ratio[i][k] {
                        let want = kij / &cj;
                        match &r[i] {
                            Some(v) if *v != want => return None,
                            Some(_) => {}
                            None => {
                                r[i] = Some(want);
                                stack.push((true, i));
                            }
                        }
                    }
                }
            }
        }
    }
    Some((
        r.into_iter().map(|x| x.unwrap_or_else(|| q(1))).collect(),
        c.into_iter().map(|x| x.unwrap_or_else(|| q(1))).collect(),
    ))
}

/// `dim S_q T*` and `dim J_q(E)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub sym: u64,
    pub jet: u64,
}

pub fn dims(n: usize, m: usize, q: u32) -> Dims {
    let (n, q) = (n as u64, q as u64);
    Dims {
        sym: binomial(q + n - 1, n - 1),
        jet: m as u64 * binomial(q + n, n),
    }
}

/// Alternating sum `Σ (−1)^r F_r`.
pub fn euler_characteristic(fibers: &[usize]) -> i64 {
    fibers
        .iter()
        .enumerate()
        .map(|(r, &f)| if r % 2 == 0 { f as i64 } else { -(f as i64) })
        .sum()
}

/// Fibers `n, n(n+1)/2, n²(n²−1)/12, n²(n²−1)(n−2)/24` of the sequence
/// Killing → Riemann → Bianchi.
pub fn killing_sequence_fibers(n: usize) -> [usize; 4] {
    [
        n,
        n * (n + 1) / 2,
        n * n * (n * n - 1) / 12,
        n * n * (n * n - 1) * (n - 2) / 24,
    ]
}
