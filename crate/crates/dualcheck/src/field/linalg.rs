//! Sparse exact linear algebra over `K`.
//!
//! Rows are sparse vectors sorted by column. Elimination always pivots on
//! the leftmost nonzero column, so callers choose the pivot priority by the
//! way they number columns. Results are deterministic for a given insertion
//! order.

use std::collections::BTreeMap;

use super::{RatFunc, Scalar};

/// Sorted sparse row with nonzero entries.
pub type SparseRow<S> = Vec<(usize, RatFunc<S>)>;

/// `a − k·b` for sparse rows.
pub fn axpy<S: Scalar>(a: &SparseRow<S>, k: &RatFunc<S>, b: &SparseRow<S>) -> SparseRow<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = b[j].1.mul(k).neg();
            if !v.is_zero() {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = a[i].1.sub(&b[j].1.mul(k));
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row<S: Scalar>(a: &SparseRow<S>, k: &RatFunc<S>) -> SparseRow<S> {
    if k.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(c, v)| (*c, v.mul(k))).collect()
}

/// Build a sparse row from a dense slice.
pub fn sparse_from_dense<S: Scalar>(v: &[RatFunc<S>]) -> SparseRow<S> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Incrementally built row-echelon basis.
#[derive(Clone, Debug)]
pub struct Echelon<S: Scalar> {
    rows: Vec<SparseRow<S>>,
    pivot_row: BTreeMap<usize, usize>,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_row: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<S>] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Eliminate leading entries while the leading column is a pivot
    /// strictly below `limit`.
    pub fn reduce_below(&self, mut v: SparseRow<S>, limit: usize) -> SparseRow<S> {
        while let Some((c, k)) = v.first().cloned() {
            if c >= limit {
                break;
            }
            match self.pivot_row.get(&c) {
                Some(&r) => v = axpy(&v, &k, &self.rows[r]),
                None => break,
            }
        }
        v
    }

    pub fn reduce(&self, v: SparseRow<S>) -> SparseRow<S> {
        self.reduce_below(v, usize::MAX)
    }

    /// Eliminate every pivot column from `v`, not only the leading one.
    pub fn reduce_full(&self, v: SparseRow<S>) -> SparseRow<S> {
        let mut v = self.reduce(v);
        let mut idx = 1;
        while idx < v.len() {
            let (c, k) = v[idx].clone();
            if let Some(&r) = self.pivot_row.get(&c) {
                v = axpy(&v, &k, &self.rows[r]);
                // entries before idx are untouched because pivot rows start at c
            } else {
                idx += 1;
            }
        }
        v
    }

    pub fn contains(&self, v: SparseRow<S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert an already reduced row (leading column must not be a pivot).
    fn push_reduced(&mut self, v: SparseRow<S>) {
        let (c, lead) = v[0].clone();
        let inv = lead.inv().expect("nonzero leading entry");
        let v = if lead.is_one() {
            v
        } else {
            scale_row(&v, &inv)
        };
        self.pivot_row.insert(c, self.rows.len());
        self.rows.push(v);
    }

    /// Add a row; returns true when it raised the rank.
    pub fn insert(&mut self, v: SparseRow<S>) -> bool {
        let v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        self.push_reduced(v);
        true
    }

    /// Insert and return the reduced form (empty if dependent).
    pub fn insert_reduced(&mut self, v: SparseRow<S>) -> SparseRow<S> {
        let v = self.reduce(v);
        if !v.is_empty() {
            self.push_reduced(v.clone());
        }
        v
    }
}

/// Rank of a list of sparse rows.
pub fn rank<S: Scalar>(rows: &[SparseRow<S>]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r.clone());
    }
    e.rank()
}

/// Basis of the left kernel `{c : Σ c_i rows_i = 0}` where rows live in
/// columns `< ncols`. Each kernel vector is returned densely indexed by row.
pub fn left_kernel<S: Scalar>(rows: &[SparseRow<S>], ncols: usize) -> Vec<SparseRow<S>> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        v.push((ncols + i, RatFunc::one()));
        let red = e.reduce_below(v, ncols);
        if red.first().map(|(c, _)| *c >= ncols).unwrap_or(false) {
            out.push(red.into_iter().map(|(c, k)| (c - ncols, k)).collect());
        } else {
            e.insert(red);
        }
    }
    out
}

/// Solve `Σ β_j rows_j = target` over `K`. Returns the coefficients or
/// `None` when `target` is not in the span.
pub fn solve_combination<S: Scalar>(
    rows: &[SparseRow<S>],
    ncols: usize,
    target: &SparseRow<S>,
) -> Option<Vec<RatFunc<S>>> {
    let mut e = Echelon::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        v.push((ncols + i, RatFunc::one()));
        let red = e.reduce_below(v, ncols);
        if red.first().map(|(c, _)| *c < ncols).unwrap_or(false) {
            e.insert(red);
        }
    }
    let red = e.reduce_below(target.clone(), ncols);
    if red.first().map(|(c, _)| *c < ncols).unwrap_or(false) {
        return None;
    }
    let mut beta = vec![RatFunc::zero(); rows.len()];
    for (c, k) in red {
        beta[c - ncols] = k.neg();
    }
    Some(beta)
}

/// Inverse of a dense square matrix, `None` if singular.
pub fn inverse<S: Scalar>(m: &[Vec<RatFunc<S>>]) -> Option<Vec<Vec<RatFunc<S>>>> {
    let n = m.len();
    let mut a: Vec<Vec<RatFunc<S>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    RatFunc::one()
                } else {
                    RatFunc::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv().ok()?;
        for x in a[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col].clone();
                for c in 0..2 * n {
                    let v = a[r][c].sub(&a[col][c].mul(&k));
                    a[r][c] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
