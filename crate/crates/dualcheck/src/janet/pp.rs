//! Prolongation/projection, reduction to first order and polynomial
//! solutions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::field::linalg::{self, Echelon, SparseRow};
use crate::field::{Monomial, MultiIndex, Poly, RatFunc, Scalar, Var};
use crate::ore::{OpMatrix, OreOperator};

use super::jet::{dim_jet, prolong, JetSpace};
use super::JanetError;

/// Dimensions produced by [`pp_reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PpReport {
    /// Order `q` of the input system.
    pub q: u32,
    /// The order `q + r` at which the projections are taken.
    pub order: u32,
    /// `dim J_{q+r}(E)`.
    pub dim_jet: usize,
    /// `dims[s'] = dim R_{q+r}^{(s')}` for `s' = 0..=s`.
    pub dims: Vec<usize>,
}

impl PpReport {
    /// The decreasing chain `dim J, dim R^{(0)}, dim R^{(1)}, …`.
    pub fn chain(&self) -> Vec<usize> {
        std::iter::once(self.dim_jet)
            .chain(self.dims.iter().copied())
            .collect()
    }
}

/// Echelon form of the prolongation of `a` by `r` derivatives.
fn echelon_of<S: Scalar>(a: &OpMatrix<S>, r: u32) -> (JetSpace, Echelon<S>) {
    let jm = prolong(a, r);
    let mut e = Echelon::new();
    for row in jm.rows {
        e.insert(row);
    }
    (jm.space, e)
}

/// Number of independent equations of order `≤ t` implied by the echelon:
/// the rows whose pivot lies in the order-`≤ t` suffix of the columns.
fn eqs_at_most<S: Scalar>(space: &JetSpace, e: &Echelon<S>, t: u32) -> usize {
    let start = space.first_of_order_at_most(t);
    e.pivots().filter(|&c| c >= start).count()
}

/// Dimensions of the projections of `R_{q+r+s'}` onto `J_{q+r}(E)`.
pub fn pp_reduce<S: Scalar>(a: &OpMatrix<S>, r: u32, s: u32) -> PpReport {
    let q = a.order().unwrap_or(0);
    let order = q + r;
    let big_n = dim_jet(a.n(), a.ncols(), order);
    let dims = (0..=s)
        .map(|sp| {
            let (space, e) = echelon_of(a, r + sp);
            big_n - eqs_at_most(&space, &e, order)
        })
        .collect();
    PpReport {
        q,
        order,
        dim_jet: big_n,
        dims,
    }
}

/// First-order system whose unknowns are the parametric jets of a
/// finite-type system.
#[derive(Clone, Debug)]
pub struct Spencerized<S: Scalar> {
    /// Rows `d_i z^α − Σ c·z^β`.
    pub system: OpMatrix<S>,
    /// `z^j` stands for the jet `y^{k}_{μ}` at `jets[j] = (k, μ)`.
    pub jets: Vec<(usize, MultiIndex)>,
    /// Highest order among the parametric jets.
    pub order: u32,
}

impl<S: Scalar> Spencerized<S> {
    pub fn unknown_names(&self, base: &[String]) -> Vec<String> {
        self.jets
            .iter()
            .map(|(k, mu)| {
                if mu.is_zero() {
                    base[*k].clone()
                } else {
                    let idx: String = mu
                        .to_indices()
                        .iter()
                        .map(|i| (i + 1).to_string())
                        .collect();
                    format!("{}_{}", base[*k], idx)
                }
            })
            .collect()
    }
}

/// Rewrite a finite-type system as a first-order system in its parametric
/// jets. Prolongs until every jet of some order `t + 1` is principal and the
/// projected dimensions are stable one order further.
pub fn spencerize<S: Scalar>(a: &OpMatrix<S>, max_q: u32) -> Result<Spencerized<S>, JanetError> {
    let n = a.n();
    let m = a.ncols();
    let q = a.order().unwrap_or(0);
    for big_l in q..=max_q {
        let (space, e) = echelon_of(a, big_l - q);
        // smallest t with all order-(t+1) jets principal
        let Some(t) = (0..big_l).find(|&t| {
            MultiIndex::all_of_order(n, t + 1)
                .iter()
                .all(|mu| (0..m).all(|k| e.is_pivot(space.index_of(k, mu).unwrap())))
        }) else {
            continue;
        };
        if t + 2 > big_l {
            continue;
        }
        let dim_at = |tt: u32| dim_jet(n, m, tt) - eqs_at_most(&space, &e, tt);
        if dim_at(t + 1) != dim_at(t) || dim_at(t + 2) != dim_at(t + 1) {
            continue;
        }
        // The next prolongation must not cut the projection further.
        let (space2, e2) = echelon_of(a, big_l - q + 1);
        if dim_jet(n, m, t + 1) - eqs_at_most(&space2, &e2, t + 1) != dim_at(t + 1) {
            continue;
        }
        return Ok(build_spencer(&space, &e, n, m, t));
    }
    Err(JanetError::NotFiniteType(max_q))
}

fn build_spencer<S: Scalar>(
    space: &JetSpace,
    e: &Echelon<S>,
    n: usize,
    m: usize,
    t: u32,
) -> Spencerized<S> {
    let mut jets: Vec<(usize, MultiIndex)> = Vec::new();
    for mu in MultiIndex::all_up_to(n, t) {
        for k in 0..m {
            if !e.is_pivot(space.index_of(k, &mu).unwrap()) {
                jets.push((k, mu.clone()));
            }
        }
    }
    let z_of: BTreeMap<usize, usize> = jets
        .iter()
        .enumerate()
        .map(|(j, (k, mu))| (space.index_of(*k, mu).unwrap(), j))
        .collect();
    // value of a jet column in terms of the parametric jets
    let express = |col: usize| -> Vec<(usize, RatFunc<S>)> {
        if let Some(&j) = z_of.get(&col) {
            return vec![(j, RatFunc::one())];
        }
        let red = e.reduce_full(vec![(col, RatFunc::one())]);
        // col − (col − red) ; red = col − combination of pivot row
        red.into_iter()
            .map(|(c, v)| (*z_of.get(&c).expect("reduced onto parametric jets"), v))
            .collect()
    };
    let mut rows = Vec::new();
    for (k, mu) in &jets {
        let alpha = z_of[&space.index_of(*k, mu).unwrap()];
        for i in 0..n {
            let mut row = vec![OreOperator::zero(n); jets.len()];
            row[alpha].add_term(MultiIndex::unit(n, i), RatFunc::one());
            let col = space.index_of(*k, &mu.plus_unit(i)).unwrap();
            for (j, v) in express(col) {
                row[j].add_term(MultiIndex::zero(n), v.neg());
            }
            rows.push(row);
        }
    }
    let cols = jets.len();
    Spencerized {
        system: OpMatrix::from_rows(n, cols, rows),
        jets,
        order: t,
    }
}

/// Reduce an ordinary system (`n = 1`) to first order by introducing the
/// derivatives `y^k_j`, `j < q_k`, as unknowns, where `q_k` is the highest
/// order at which `y^k` occurs. Unknowns occurring without derivatives stay
/// as they are.
pub fn first_order_reduction<S: Scalar>(a: &OpMatrix<S>) -> Result<Spencerized<S>, JanetError> {
    if a.n() != 1 {
        return Err(JanetError::Unsupported(
            "first-order reduction needs a single derivation".into(),
        ));
    }
    let m = a.ncols();
    let qk: Vec<u32> = (0..m)
        .map(|k| {
            (0..a.nrows())
                .filter_map(|i| a.get(i, k).order())
                .max()
                .unwrap_or(0)
                .max(1)
        })
        .collect();
    let mut jets = Vec::new();
    let mut first = Vec::with_capacity(m);
    for k in 0..m {
        first.push(jets.len());
        for j in 0..qk[k] {
            jets.push((k, MultiIndex::new(vec![j])));
        }
    }
    let w = jets.len();
    let d = || OreOperator::d(1, 0);
    let mut rows = Vec::new();
    for k in 0..m {
        for j in 0..qk[k].saturating_sub(1) {
            let mut row = vec![OreOperator::zero(1); w];
            row[first[k] + j as usize] = d();
            row[first[k] + j as usize + 1] = OreOperator::int(1, -1);
            rows.push(row);
        }
    }
    for i in 0..a.nrows() {
        let mut row = vec![OreOperator::zero(1); w];
        for k in 0..m {
            for (mu, c) in a.get(i, k).terms() {
                let j = mu.get(0);
                let (col, op) = if j < qk[k] {
                    (first[k] + j as usize, OreOperator::scalar(1, c.clone()))
                } else {
                    (
                        first[k] + qk[k] as usize - 1,
                        OreOperator::monomial(1, MultiIndex::new(vec![1]), c.clone()),
                    )
                };
                row[col] = row[col].add(&op);
            }
        }
        rows.push(row);
    }
    let order = qk.iter().copied().max().unwrap_or(1) - 1;
    Ok(Spencerized {
        system: OpMatrix::from_rows(1, w, rows),
        jets,
        order,
    })
}

/// A basis (over the constants) of the polynomial solutions of total degree
/// `≤ degree`. Each solution is a column of `cols(A)` polynomials.
pub fn polynomial_solutions<S: Scalar>(a: &OpMatrix<S>, degree: u32) -> Vec<Vec<RatFunc<S>>> {
    let n = a.n();
    let m = a.ncols();
    // Clearing row denominators keeps images polynomial in x.
    let row_den: Vec<RatFunc<S>> = (0..a.nrows())
        .map(|i| {
            let mut l = Poly::one();
            for p in a.row(i) {
                for (_, c) in p.terms() {
                    let g = Poly::gcd(&l, c.denom());
                    l = l.mul(&c.denom().div_exact(&g).expect("gcd divides"));
                }
            }
            RatFunc::from_poly(l)
        })
        .collect();
    let monos = MultiIndex::all_up_to(n, degree);
    let mut basis: Vec<Vec<RatFunc<S>>> = Vec::new();
    let mut index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut rows: Vec<SparseRow<S>> = Vec::new();
    for k in 0..m {
        for mu in &monos {
            let mut f = vec![RatFunc::zero(); m];
            f[k] = RatFunc::from_poly(Poly::term(S::one(), mu.as_monomial()));
            let img = a.apply(&f).expect("width matches");
            let mut row: SparseRow<S> = Vec::new();
            for (i, g) in img.iter().enumerate() {
                let g = g.mul(&row_den[i]);
                debug_assert!(g.denom().vars().iter().all(|v| !v.is_coordinate()));
                let scale = RatFunc::from_poly(g.denom().clone())
                    .inv()
                    .expect("nonzero");
                let mut split: BTreeMap<Monomial, Poly<S>> = BTreeMap::new();
                for (mono, c) in g.numer().terms() {
                    let (xs, ps): (Vec<(Var, u32)>, Vec<(Var, u32)>) = mono
                        .pairs()
                        .iter()
                        .cloned()
                        .partition(|(v, _)| v.is_coordinate());
                    split
                        .entry(Monomial::from_pairs(xs))
                        .or_insert_with(Poly::zero)
                        .add_term(Monomial::from_pairs(ps), c.clone());
                }
                for (xm, coeff) in split {
                    let len = index.len();
                    let col = *index.entry((i, xm)).or_insert(len);
                    row.push((col, RatFunc::from_poly(coeff).mul(&scale)));
                }
            }
            row.sort_by_key(|e| e.0);
            rows.push(row);
            basis.push(f);
        }
    }
    linalg::left_kernel(&rows, index.len())
        .into_iter()
        .map(|v| {
            let mut sol = vec![RatFunc::zero(); m];
            for (j, c) in v {
                for (k, s) in sol.iter_mut().enumerate() {
                    *s = s.add(&c.mul(&basis[j][k]));
                }
            }
            sol
        })
        .collect()
}
