//! Jet coordinates and prolonged coefficient matrices.

use std::collections::HashMap;

use crate::field::linalg::SparseRow;
use crate::field::{binomial, MultiIndex, RatFunc, Scalar};
use crate::ore::{OpMatrix, OreOperator};

/// The jet coordinates `y^k_μ`, `|μ| ≤ order`, numbered so that column 0 is
/// the highest jet: multi-index descending, then unknown ascending. Every
/// projection to a lower order is therefore a suffix of the columns.
#[derive(Clone, Debug)]
pub struct JetSpace {
    n: usize,
    m: usize,
    order: u32,
    cols: Vec<(usize, MultiIndex)>,
    index: HashMap<(usize, MultiIndex), usize>,
}

impl JetSpace {
    pub fn new(n: usize, m: usize, order: u32) -> Self {
        let mut mus = MultiIndex::all_up_to(n, order);
        mus.reverse();
        let mut cols = Vec::with_capacity(mus.len() * m);
        for mu in mus {
            for k in 0..m {
                cols.push((k, mu.clone()));
            }
        }
        let index = cols
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        JetSpace {
            n,
            m,
            order,
            cols,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn col(&self, i: usize) -> &(usize, MultiIndex) {
        &self.cols[i]
    }

    pub fn index_of(&self, k: usize, mu: &MultiIndex) -> Option<usize> {
        self.index.get(&(k, mu.clone())).copied()
    }

    /// First column whose jet has order `≤ t`.
    pub fn first_of_order_at_most(&self, t: u32) -> usize {
        self.cols
            .iter()
            .position(|(_, mu)| mu.order() <= t)
            .unwrap_or(self.cols.len())
    }
}

/// Coordinates of the linear jet form `Σ_k row[k](y^k)` in `space`.
pub fn encode_row<S: Scalar>(space: &JetSpace, row: &[OreOperator<S>]) -> SparseRow<S> {
    let mut out: SparseRow<S> = Vec::new();
    for (k, p) in row.iter().enumerate() {
        for (mu, a) in p.terms() {
            let c = space.index_of(k, mu).unwrap_or_else(|| {
                panic!("jet y{k}{mu} outside the space of order {}", space.order)
            });
            out.push((c, a.clone()));
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

/// Inverse of [`encode_row`].
pub fn decode_row<S: Scalar>(space: &JetSpace, n: usize, v: &SparseRow<S>) -> Vec<OreOperator<S>> {
    let mut row = vec![OreOperator::zero(n); space.m];
    for (c, a) in v {
        let (k, mu) = &space.cols[*c];
        row[*k].add_term(mu.clone(), a.clone());
    }
    row
}

/// `d_ν ∘ row` entrywise.
pub fn prolong_row<S: Scalar>(
    n: usize,
    nu: &MultiIndex,
    row: &[OreOperator<S>],
) -> Vec<OreOperator<S>> {
    let d = OreOperator::monomial(n, nu.clone(), RatFunc::one());
    row.iter().map(|p| d.compose(p)).collect()
}

/// Coefficient matrix of the prolongation of `A` by `r` derivatives.
///
/// Row `(τ, ν)` holds the coefficients of `d_ν(equation τ)` in the jets of
/// order `≤ q + r`.
#[derive(Clone, Debug)]
pub struct JetMatrix<S: Scalar> {
    pub space: JetSpace,
    pub row_labels: Vec<(usize, MultiIndex)>,
    pub rows: Vec<SparseRow<S>>,
}

impl<S: Scalar> JetMatrix<S> {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.space.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> RatFunc<S> {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, a)| a.clone())
            .unwrap_or_else(RatFunc::zero)
    }
}

/// Prolong `A` (of order `q`) `r` times.
pub fn prolong<S: Scalar>(a: &OpMatrix<S>, r: u32) -> JetMatrix<S> {
    let q = a.order().unwrap_or(0);
    prolong_in(a, r, q + r)
}

/// Prolongation encoded in a jet space of the given (sufficient) order.
pub fn prolong_in<S: Scalar>(a: &OpMatrix<S>, r: u32, order: u32) -> JetMatrix<S> {
    let n = a.n();
    let space = JetSpace::new(n, a.ncols(), order);
    let nus = MultiIndex::all_up_to(n, r);
    let mut row_labels = Vec::with_capacity(a.nrows() * nus.len());
    let mut rows = Vec::with_capacity(a.nrows() * nus.len());
    for tau in 0..a.nrows() {
        for nu in &nus {
            row_labels.push((tau, nu.clone()));
            rows.push(encode_row(&space, &prolong_row(n, nu, a.row(tau))));
        }
    }
    JetMatrix {
        space,
        row_labels,
        rows,
    }
}

/// `dim S_q T* = C(q+n−1, n−1)`.
pub fn dim_sym(n: usize, q: u32) -> usize {
    if n == 0 {
        return usize::from(q == 0);
    }
    binomial(q as u64 + n as u64 - 1, n as u64 - 1) as usize
}

/// `dim J_q(E) = m·C(q+n, n)`.
pub fn dim_jet(n: usize, m: usize, q: u32) -> usize {
    m * binomial(q as u64 + n as u64, n as u64) as usize
}
