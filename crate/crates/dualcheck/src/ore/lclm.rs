//! Common left multiples by bounded ansatz.

use std::collections::BTreeMap;

use crate::field::{linalg, MultiIndex, RatFunc, Scalar};

use super::{OreError, OreOperator};

/// Find nonzero `U, V` with `U·P = V·Q`, searching `ord U, ord V ≤ s` for
/// `s = 0, 1, …, max_order` and returning the first solution.
///
/// Such a pair always exists (the operator ring is an Ore domain), so
/// `BoundExceeded` only means the bound was too small.
pub fn lclm<S: Scalar>(
    p: &OreOperator<S>,
    q: &OreOperator<S>,
    max_order: u32,
) -> Result<(OreOperator<S>, OreOperator<S>), OreError> {
    if p.n() != q.n() {
        return Err(OreError::DimensionMismatch("lclm over different n".into()));
    }
    if p.is_zero() || q.is_zero() {
        return Err(OreError::DimensionMismatch(
            "lclm of the zero operator".into(),
        ));
    }
    let n = p.n();
    for s in 0..=max_order {
        let nus = MultiIndex::all_up_to(n, s);
        let mut products: Vec<OreOperator<S>> = Vec::with_capacity(2 * nus.len());
        for nu in &nus {
            products.push(OreOperator::monomial(n, nu.clone(), RatFunc::one()).compose(p));
        }
        for nu in &nus {
            products.push(
                OreOperator::monomial(n, nu.clone(), RatFunc::one())
                    .compose(q)
                    .neg(),
            );
        }
        let mut cols: BTreeMap<MultiIndex, usize> = BTreeMap::new();
        for op in &products {
            for (mu, _) in op.terms() {
                let k = cols.len();
                cols.entry(mu.clone()).or_insert(k);
            }
        }
        let rows: Vec<linalg::SparseRow<S>> = products
            .iter()
            .map(|op| {
                let mut r: Vec<(usize, RatFunc<S>)> =
                    op.terms().map(|(mu, a)| (cols[mu], a.clone())).collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        let ker = linalg::left_kernel(&rows, cols.len());
        if let Some(v) = ker.into_iter().next() {
            let mut u = OreOperator::zero(n);
            let mut w = OreOperator::zero(n);
            for (idx, c) in v {
                if idx < nus.len() {
                    u.add_term(nus[idx].clone(), c);
                } else {
                    w.add_term(nus[idx - nus.len()].clone(), c);
                }
            }
            let lead = u
                .leading()
                .map(|(_, a)| a.clone())
                .expect("U nonzero in a domain");
            let k = lead.inv()?;
            return Ok((u.scale_left(&k), w.scale_left(&k)));
        }
    }
    Err(OreError::BoundExceeded(max_order))
}
