//! Left syzygies (compatibility conditions), module membership and ranks
//! over the operator ring.

use serde::Serialize;

use crate::field::linalg::{self, Echelon, SparseRow};
use crate::field::{MultiIndex, RatFunc, Scalar, Var};
use crate::ore::{lclm, OpMatrix, OreOperator};

use super::jet::{decode_row, encode_row, prolong, prolong_row, JetSpace};
use super::JanetError;

/// Generating compatibility conditions found by the bounded search.
#[derive(Clone, Debug)]
pub struct CcResult<S: Scalar> {
    /// Rows are left syzygies: `cc · A = 0`.
    pub cc: OpMatrix<S>,
    /// Highest syzygy order examined.
    pub search_order: u32,
    /// `rk(A) + rk(cc) = rows(A)` holds.
    pub certified_complete: bool,
    /// `(rk A, rk cc)` over the operator ring.
    pub ranks: (usize, usize),
}

impl<S: Scalar> CcResult<S> {
    pub fn orders(&self) -> Vec<Option<u32>> {
        (0..self.cc.nrows()).map(|i| self.cc.row_order(i)).collect()
    }
}

/// Scale a row so the leading coefficient of its first nonzero entry is one.
pub fn normalize_row<S: Scalar>(row: &[OreOperator<S>]) -> Vec<OreOperator<S>> {
    let lead = row.iter().find_map(|p| p.leading().map(|(_, a)| a.clone()));
    match lead {
        Some(a) if !a.is_one() => {
            let k = a.inv().expect("nonzero");
            row.iter().map(|p| p.scale_left(&k)).collect()
        }
        _ => row.to_vec(),
    }
}

/// Compatibility conditions of `A`, searched order by order up to
/// `max_order`. At each order the left kernel of the prolonged jet matrix
/// is reduced modulo the prolongations of the syzygies already kept, so a
/// syzygy is kept only if it is not a combination of lower ones within the
/// same order. The search stops as soon as rank additivity certifies it.
pub fn cc<S: Scalar>(a: &OpMatrix<S>, max_order: u32) -> Result<CcResult<S>, JanetError> {
    let n = a.n();
    let p = a.nrows();
    let rk_a = rank_d(a, max_order)?;
    let target = p - rk_a;
    let mut gens: Vec<Vec<OreOperator<S>>> = Vec::new();
    let mut rk_cc = 0;
    if target == 0 {
        return Ok(CcResult {
            cc: OpMatrix::from_rows(n, p, gens),
            search_order: 0,
            certified_complete: true,
            ranks: (rk_a, 0),
        });
    }
    for s in 0..=max_order {
        let jm = prolong(a, s);
        let ker = linalg::left_kernel(&jm.rows, jm.ncols());
        if ker.is_empty() {
            continue;
        }
        // Syzygy coordinates: (equation τ, ν) with |ν| ≤ s.
        let syz_space = JetSpace::new(n, p, s);
        let label_col: Vec<usize> = jm
            .row_labels
            .iter()
            .map(|(tau, nu)| syz_space.index_of(*tau, nu).unwrap())
            .collect();
        let mut span = Echelon::new();
        for g in &gens {
            let og = g.iter().filter_map(OreOperator::order).max().unwrap_or(0);
            if og > s {
                continue;
            }
            for nu in MultiIndex::all_up_to(n, s - og) {
                span.insert(encode_row(&syz_space, &prolong_row(n, &nu, g)));
            }
        }
        let mut grew = false;
        for v in ker {
            let mut w: SparseRow<S> = v.into_iter().map(|(i, c)| (label_col[i], c)).collect();
            w.sort_by_key(|e| e.0);
            if span.insert(w.clone()) {
                let row = normalize_row(&decode_row(&syz_space, n, &w));
                gens.push(row);
                grew = true;
            }
        }
        if grew {
            let m = OpMatrix::from_rows(n, p, gens.clone());
            rk_cc = rank_d(&m, max_order)?;
            if rk_cc == target {
                return Ok(CcResult {
                    cc: m,
                    search_order: s,
                    certified_complete: true,
                    ranks: (rk_a, rk_cc),
                });
            }
        }
    }
    Ok(CcResult {
        cc: OpMatrix::from_rows(n, p, gens),
        search_order: max_order,
        certified_complete: false,
        ranks: (rk_a, rk_cc),
    })
}

/// Outcome of a bounded membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<S: Scalar> {
    /// `row = Σ coeffs_i · gens_i` with every `ord coeffs_i ≤ order`.
    Member {
        coeffs: Vec<OreOperator<S>>,
        order: u32,
    },
    /// No representation with multipliers of order `≤ bound`. This is not a
    /// proof of non-membership.
    NotUpToBound(u32),
}

impl<S: Scalar> Membership<S> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipVerdict {
    Yes,
    NoUpToBound,
}

/// Decide whether `row` lies in the left row module of `gens` using
/// multipliers of order at most `max_order`.
pub fn membership<S: Scalar>(
    row: &[OreOperator<S>],
    gens: &OpMatrix<S>,
    max_order: u32,
) -> Membership<S> {
    let n = gens.n();
    let k = gens.nrows();
    assert_eq!(
        row.len(),
        gens.ncols(),
        "row width must match the generators"
    );
    let row_ord = row.iter().filter_map(OreOperator::order).max();
    let Some(row_ord) = row_ord else {
        return Membership::Member {
            coeffs: vec![OreOperator::zero(n); k],
            order: 0,
        };
    };
    let g_ord = gens.order();
    let Some(g_ord) = g_ord else {
        return Membership::NotUpToBound(max_order);
    };
    let start = row_ord.saturating_sub(g_ord);
    for t in start..=max_order {
        let space = JetSpace::new(n, gens.ncols(), row_ord.max(t + g_ord));
        let nus = MultiIndex::all_up_to(n, t);
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for i in 0..k {
            for nu in &nus {
                labels.push((i, nu.clone()));
                rows.push(encode_row(&space, &prolong_row(n, nu, gens.row(i))));
            }
        }
        let target = encode_row(&space, row);
        if let Some(beta) = linalg::solve_combination(&rows, space.len(), &target) {
            let mut coeffs = vec![OreOperator::zero(n); k];
            for ((i, nu), b) in labels.into_iter().zip(beta) {
                coeffs[i].add_term(nu, b);
            }
            return Membership::Member { coeffs, order: t };
        }
    }
    Membership::NotUpToBound(max_order)
}

/// Every row of `a` is in the row module of `b` (bounded).
pub fn rows_in_module<S: Scalar>(a: &OpMatrix<S>, b: &OpMatrix<S>, max_order: u32) -> bool {
    (0..a.nrows()).all(|i| membership(a.row(i), b, max_order).is_member())
}

/// Mutual bounded membership of the two row modules.
pub fn row_module_equal<S: Scalar>(a: &OpMatrix<S>, b: &OpMatrix<S>, max_order: u32) -> bool {
    a.ncols() == b.ncols() && rows_in_module(a, b, max_order) && rows_in_module(b, a, max_order)
}

/// Rank of `A` over the skew field of fractions of the operator ring.
///
/// Constant-coefficient matrices live in a commutative polynomial ring, so
/// the rank is computed over the rational functions in `d1..dn` by exact
/// elimination. Otherwise rows are eliminated with common left multiples,
/// which is valid because the ring is an Ore domain.
pub fn rank_d<S: Scalar>(a: &OpMatrix<S>, max_order: u32) -> Result<usize, JanetError> {
    if a.is_zero() {
        return Ok(0);
    }
    if a.is_constant_coeff() {
        return Ok(rank_commutative(a));
    }
    rank_ore(a, max_order)
}

/// Replace `d_i` by the commuting indeterminate `x_i`; coefficients are
/// coordinate-free so no clash occurs.
fn symbol_poly<S: Scalar>(p: &OreOperator<S>) -> RatFunc<S> {
    let mut acc = RatFunc::zero();
    for (mu, a) in p.terms() {
        let m = crate::field::Poly::term(S::one(), mu.as_monomial());
        acc = acc.add(&a.mul(&RatFunc::from_poly(m)));
    }
    acc
}

fn rank_commutative<S: Scalar>(a: &OpMatrix<S>) -> usize {
    let rows: Vec<SparseRow<S>> = a
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(j, p)| (j, symbol_poly(p)))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

fn rank_ore<S: Scalar>(a: &OpMatrix<S>, max_order: u32) -> Result<usize, JanetError> {
    let mut rows: Vec<Vec<OreOperator<S>>> = a.rows().to_vec();
    let m = a.ncols();
    let mut rank = 0;
    let mut active: Vec<bool> = vec![true; rows.len()];
    for j in 0..m {
        let pivot = (0..rows.len())
            .filter(|&i| active[i] && !rows[i][j].is_zero())
            .min_by_key(|&i| (rows[i][j].order(), i));
        let Some(k) = pivot else { continue };
        active[k] = false;
        rank += 1;
        let pk = rows[k].clone();
        for i in 0..rows.len() {
            if !active[i] || rows[i][j].is_zero() {
                continue;
            }
            let a_ = &pk[j];
            let b_ = &rows[i][j];
            let (u, v) = if a_.compose(b_) == b_.compose(a_) {
                (b_.clone(), a_.clone())
            } else {
                lclm(a_, b_, max_order).map_err(|_| JanetError::BoundExceeded(max_order))?
            };
            let new: Vec<OreOperator<S>> = (0..m)
                .map(|c| v.compose(&rows[i][c]).sub(&u.compose(&pk[c])))
                .collect();
            debug_assert!(new[j].is_zero());
            rows[i] = new;
        }
    }
    Ok(rank)
}

/// Successive compatibility conditions `A, cc(A), cc(cc(A)), …` until a
/// stage has no syzygies or `max_len` stages were computed.
pub fn resolution<S: Scalar>(
    a: &OpMatrix<S>,
    max_order: u32,
    max_len: usize,
) -> Result<Vec<CcResult<S>>, JanetError> {
    let mut out = Vec::new();
    let mut cur = a.clone();
    for _ in 0..max_len {
        let r = cc(&cur, max_order)?;
        let done = r.cc.nrows() == 0;
        cur = r.cc.clone();
        out.push(r);
        if done {
            break;
        }
    }
    Ok(out)
}

/// Substitute parameters by values in every entry.
pub fn specialize<S: Scalar>(
    a: &OpMatrix<S>,
    values: &[(String, RatFunc<S>)],
) -> Result<OpMatrix<S>, crate::field::FieldError> {
    a.substitute(&|v: &Var| match v {
        Var::P(p) => values
            .iter()
            .find(|(k, _)| k.as_str() == &**p)
            .map(|(_, r)| r.clone()),
        Var::X(_) => None,
    })
}
