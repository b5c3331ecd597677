//! Constant-coefficient symbols, their prolongations and the Spencer
//! δ-complex.

use serde::Serialize;

use crate::field::linalg::{self, SparseRow};
use crate::field::{binomial, MultiIndex, RatFunc, Scalar};
use crate::ore::OpMatrix;

use super::jet::dim_sym;
use super::JanetError;

/// The subspace `g_q ⊆ S_q T* ⊗ E` cut out by linear equations.
///
/// Coordinates of `S_q T* ⊗ E` are `v^k_μ`, `|μ| = q`, stored at
/// `position(μ) · m + k` with `μ` in ascending multi-index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTableau<S: Scalar> {
    pub n: usize,
    pub m: usize,
    pub q: u32,
    pub equations: Vec<Vec<(usize, S)>>,
}

fn basis_index(n: usize, q: u32) -> Vec<MultiIndex> {
    MultiIndex::all_of_order(n, q)
}

fn position(mus: &[MultiIndex], mu: &MultiIndex) -> usize {
    mus.binary_search(mu)
        .expect("multi-index of the right order")
}

fn ker_basis<S: Scalar>(eqs: &[Vec<(usize, S)>], dim: usize) -> Vec<Vec<(usize, S)>> {
    // Right kernel via the left kernel of the transpose.
    let mut cols: Vec<SparseRow<S>> = vec![Vec::new(); dim];
    for (i, e) in eqs.iter().enumerate() {
        for (j, v) in e {
            cols[*j].push((i, RatFunc::constant(v.clone())));
        }
    }
    linalg::left_kernel(&cols, eqs.len())
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|(j, c)| (j, c.as_constant().expect("constant")))
                .collect()
        })
        .collect()
}

impl<S: Scalar> SymbolTableau<S> {
    /// The whole space `S_q T* ⊗ E`.
    pub fn full(n: usize, m: usize, q: u32) -> Self {
        SymbolTableau {
            n,
            m,
            q,
            equations: Vec::new(),
        }
    }

    /// Symbol of a constant-coefficient operator: its top-order part.
    pub fn from_operator(a: &OpMatrix<S>) -> Result<Self, JanetError> {
        let n = a.n();
        let m = a.ncols();
        let q = a.order().unwrap_or(0);
        let mus = basis_index(n, q);
        let mut equations = Vec::new();
        for row in a.rows() {
            let mut eq = Vec::new();
            for (k, p) in row.iter().enumerate() {
                for (mu, c) in p.terms() {
                    if mu.order() != q {
                        continue;
                    }
                    let c = c.as_constant().ok_or_else(|| {
                        JanetError::Unsupported("symbol with non-constant coefficients".into())
                    })?;
                    eq.push((position(&mus, mu) * m + k, c));
                }
            }
            eq.sort_by_key(|e| e.0);
            if !eq.is_empty() {
                equations.push(eq);
            }
        }
        Ok(SymbolTableau { n, m, q, equations })
    }

    pub fn ambient_dim(&self) -> usize {
        self.m * dim_sym(self.n, self.q)
    }

    fn eq_rows(&self) -> Vec<SparseRow<S>> {
        self.equations
            .iter()
            .map(|e| {
                e.iter()
                    .map(|(j, v)| (*j, RatFunc::constant(v.clone())))
                    .collect()
            })
            .collect()
    }

    /// `dim g_q`.
    pub fn dim(&self) -> usize {
        self.ambient_dim() - linalg::rank(&self.eq_rows())
    }

    pub fn basis(&self) -> Vec<Vec<(usize, S)>> {
        ker_basis(&self.equations, self.ambient_dim())
    }

    /// `g_{q+1} = {v : ∂_i v ∈ g_q for every i}`.
    pub fn prolong(&self) -> Self {
        let (n, m) = (self.n, self.m);
        let low = basis_index(n, self.q);
        let high = basis_index(n, self.q + 1);
        let mut equations = Vec::with_capacity(self.equations.len() * n);
        for e in &self.equations {
            for i in 0..n {
                let mut row: Vec<(usize, S)> = e
                    .iter()
                    .map(|(j, v)| {
                        let mu = &low[j / m];
                        (position(&high, &mu.plus_unit(i)) * m + j % m, v.clone())
                    })
                    .collect();
                row.sort_by_key(|x| x.0);
                equations.push(row);
            }
        }
        SymbolTableau {
            n,
            m,
            q: self.q + 1,
            equations,
        }
    }

    /// The symbol space at any order: everything below `q`, prolongations above.
    pub fn at_order(&self, q: u32) -> Self {
        if q < self.q {
            return Self::full(self.n, self.m, q);
        }
        let mut t = self.clone();
        while t.q < q {
            t = t.prolong();
        }
        t
    }
}

/// `(−1)^{#{j ∈ I : j < i}}`.
fn wedge_sign(set: &[usize], i: usize) -> bool {
    set.iter().filter(|&&j| j < i).count() % 2 == 1
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Images under `δ : Λ^r T* ⊗ S_{q+1} ⊗ E → Λ^{r+1} T* ⊗ S_q ⊗ E` of
/// `dx^I ⊗ b` for every `r`-subset `I` and every basis vector `b` of the
/// tableau (order `q + 1`). Target coordinates are
/// `subset_position · m·dim S_q + symmetric coordinate`.
pub fn delta_map<S: Scalar>(tab: &SymbolTableau<S>, r: usize) -> Vec<SparseRow<S>> {
    let (n, m) = (tab.n, tab.m);
    assert!(tab.q >= 1, "δ needs a tableau of order ≥ 1");
    let high = basis_index(n, tab.q);
    let low = basis_index(n, tab.q - 1);
    let targets = subsets(n, r + 1);
    let fiber = m * low.len();
    let basis = tab.basis();
    let mut out = Vec::new();
    for set in subsets(n, r) {
        for b in &basis {
            let mut row: Vec<(usize, RatFunc<S>)> = Vec::new();
            for i in (0..n).filter(|i| !set.contains(i)) {
                let mut bigger = set.clone();
                bigger.push(i);
                bigger.sort_unstable();
                let t = targets.binary_search(&bigger).unwrap();
                let neg = wedge_sign(&set, i);
                for (j, v) in b {
                    let (mu, k) = (&high[j / m], j % m);
                    if mu.get(i) == 0 {
                        continue;
                    }
                    let mut e = mu.exps().to_vec();
                    e[i] -= 1;
                    let col = t * fiber + position(&low, &MultiIndex::new(e)) * m + k;
                    let val = if neg { -v.clone() } else { v.clone() };
                    row.push((col, RatFunc::constant(val)));
                }
            }
            row.sort_by_key(|e| e.0);
            // merge duplicates (none expected, kept for safety)
            let mut merged: Vec<(usize, RatFunc<S>)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = lv.add(&v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            out.push(merged);
        }
    }
    out
}

/// Rank of δ on `Λ^r T* ⊗ g` for the tableau `g` (order ≥ 1).
pub fn delta_rank<S: Scalar>(tab: &SymbolTableau<S>, r: usize) -> usize {
    if r >= tab.n {
        return 0;
    }
    linalg::rank(&delta_map(tab, r))
}

/// Coboundaries, cocycles and cohomology at `Λ^r T* ⊗ g_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub q: u32,
    pub r: usize,
    pub b: usize,
    pub z: usize,
    pub h: usize,
}

/// Dimensions of `B`, `Z`, `H` for the δ-complex
/// `Λ^{r−1} ⊗ g_{q+1} → Λ^r ⊗ g_q → Λ^{r+1} ⊗ g_{q−1}`,
/// where `g_{q'}` is the full space below the tableau's order.
pub fn delta_cohomology_dims<S: Scalar>(
    tab: &SymbolTableau<S>,
    qs: impl IntoIterator<Item = u32>,
    rs: impl IntoIterator<Item = usize> + Clone,
) -> Vec<CohomologyEntry> {
    let n = tab.n;
    let mut out = Vec::new();
    for q in qs {
        let gq = tab.at_order(q);
        let gq1 = tab.at_order(q + 1);
        let dim_g = gq.dim();
        for r in rs.clone() {
            let chains = binomial(n as u64, r as u64) as usize * dim_g;
            let outgoing = if q == 0 { 0 } else { delta_rank(&gq, r) };
            let z = chains - outgoing;
            let b = if r == 0 { 0 } else { delta_rank(&gq1, r - 1) };
            out.push(CohomologyEntry {
                q,
                r,
                b,
                z,
                h: z - b,
            });
        }
    }
    out
}

/// Fiber dimensions of the linear Janet sequence of a finite-type
/// constant-coefficient operator of order `q`:
/// `m`, `dim S_q⊗E − dim g_q`, then `Σ_{q'} dim H^r(g_{q'})` for `r = 2..=n`.
pub fn janet_fibers_finite_type<S: Scalar>(
    tab: &SymbolTableau<S>,
    max_q: u32,
) -> Result<Vec<usize>, JanetError> {
    let (n, m, q) = (tab.n, tab.m, tab.q);
    let mut top = q;
    while tab.at_order(top).dim() != 0 {
        top += 1;
        if top > max_q {
            return Err(JanetError::NotFiniteType(max_q));
        }
    }
    let mut fibers = vec![m, tab.ambient_dim() - tab.dim()];
    for r in 2..=n {
        let h: usize = delta_cohomology_dims(tab, q..top, std::iter::once(r))
            .iter()
            .map(|e| e.h)
            .sum();
        fibers.push(h);
    }
    Ok(fibers)
}

/// Janet fibers `F_0..F_n` after prolonging to an order `q` where the symbol
/// vanishes: `F_r = C(n,r)·(dim J_q − dim R_q) − rank(δ on Λ^{r−1}⊗S_{q+1}⊗E)`.
pub fn janet_fibers_zero_symbol(n: usize, m: usize, q: u32, dim_r_q: usize) -> Vec<usize> {
    let dim_j = m * binomial(q as u64 + n as u64, n as u64) as usize;
    let free = SymbolTableau::<crate::Q>::full(n, m, q + 1);
    (0..=n)
        .map(|r| {
            let base = binomial(n as u64, r as u64) as usize * (dim_j - dim_r_q);
            let cut = if r == 0 { 0 } else { delta_rank(&free, r - 1) };
            base - cut
        })
        .collect()
}

/// Fibers `Λ^r T* ⊗ R` of the first-order Spencer sequence of a system with
/// `dim R = dim_r`.
pub fn spencer_fibers(n: usize, dim_r: usize) -> Vec<usize> {
    (0..=n)
        .map(|r| binomial(n as u64, r as u64) as usize * dim_r)
        .collect()
}
