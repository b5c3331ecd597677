//! Killing, Riemann, Ricci and Einstein operators linearized at a flat
//! metric, with the stress-function operators of elasticity.

use std::collections::BTreeMap;

use crate::field::linalg::Echelon;
use crate::field::{MultiIndex, RatFunc};
use crate::ore::{OpMatrix, OreOperator};
use crate::Q;

use super::{q, qr, sym_index, sym_pairs, Builder, Metric};

/// `Ω_ij = ω_jj d_i ξ^j + ω_ii d_j ξ^i`, one row per component `i ≤ j`.
pub fn killing(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let mut b = Builder::new(n, n);
    for (i, j) in sym_pairs(n) {
        let r = b.row();
        b.add(r, j, q(metric.w(j)), &[i]);
        b.add(r, i, q(metric.w(i)), &[j]);
    }
    b.finish()
}

/// Divergence of a symmetric tensor: row `k` is `Σ_i d_i σ_ik`.
pub fn cauchy(n: usize) -> OpMatrix<Q> {
    let mut b = Builder::new(n, n * (n + 1) / 2);
    for k in 0..n {
        let r = b.row();
        for i in 0..n {
            b.add(r, sym_index(n, i, k), q(1), &[i]);
        }
    }
    b.finish()
}

fn combine(rows: &[(Q, &[OreOperator<Q>])], n: usize, cols: usize) -> Vec<OreOperator<Q>> {
    let mut out = vec![OreOperator::zero(n); cols];
    for (c, row) in rows {
        let c = RatFunc::constant(c.clone());
        for (o, p) in out.iter_mut().zip(row.iter()) {
            *o = o.add(&p.scale_left(&c));
        }
    }
    out
}

/// Trace-free part of the Killing operator. The `(nn)` row is dropped since
/// the trace-free rows sum to zero against `ω^{rr}`.
pub fn conformal_killing(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let k = killing(metric);
    let inv_n = qr(1, n as i64);
    let mut rows = Vec::new();
    for (idx, (i, j)) in sym_pairs(n).into_iter().enumerate() {
        if (i, j) == (n - 1, n - 1) {
            continue;
        }
        let mut parts: Vec<(Q, &[OreOperator<Q>])> = vec![(q(1), k.row(idx))];
        if i == j {
            for r in 0..n {
                let c = -(inv_n.clone() * q(metric.w(i) * metric.w(r)));
                parts.push((c, k.row(sym_index(n, r, r))));
            }
        }
        rows.push(combine(&parts, n, n));
    }
    OpMatrix::from_rows(n, n, rows)
}

/// `d_ik Ω_jl + d_jl Ω_ik − d_il Ω_jk − d_jk Ω_il` as a row over the
/// components of `Ω`.
fn riemann_row(b: &mut Builder, n: usize, (i, j): (usize, usize), (k, l): (usize, usize)) {
    let r = b.row();
    b.add(r, sym_index(n, j, l), q(1), &[i, k]);
    b.add(r, sym_index(n, i, k), q(1), &[j, l]);
    b.add(r, sym_index(n, j, k), q(-1), &[i, l]);
    b.add(r, sym_index(n, i, l), q(-1), &[j, k]);
}

/// Linearized Riemann tensor with lowered indices. In dimension 3 the rows
/// follow the dual labelling `(11) ↦ R_2323, (12) ↦ R_2331, …`; from
/// dimension 4 the rows are the pairs `(ij) ≤ (kl)` minus those dependent
/// on earlier ones (the cyclic identity).
pub fn riemann_lin(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let cols = n * (n + 1) / 2;
    let mut b = Builder::new(n, cols);
    match n {
        1 => return OpMatrix::zeros(1, 0, 1),
        2 => riemann_row(&mut b, n, (0, 1), (0, 1)),
        3 => {
            let dual = |i: usize| ((i + 1) % 3, (i + 2) % 3);
            for (i, j) in sym_pairs(3) {
                riemann_row(&mut b, n, dual(i), dual(j));
            }
        }
        _ => {
            let planes: Vec<(usize, usize)> =
                sym_pairs(n).into_iter().filter(|(i, j)| i < j).collect();
            for (a, &p) in planes.iter().enumerate() {
                for &s in &planes[a..] {
                    riemann_row(&mut b, n, p, s);
                }
            }
            return independent_rows(&b.finish());
        }
    }
    b.finish()
}

/// Keep the rows that are not constant combinations of earlier rows.
fn independent_rows(a: &OpMatrix<Q>) -> OpMatrix<Q> {
    let mut coord: BTreeMap<(usize, MultiIndex), usize> = BTreeMap::new();
    let mut e = Echelon::new();
    let mut keep = Vec::new();
    for (i, row) in a.rows().iter().enumerate() {
        let mut v = Vec::new();
        for (k, p) in row.iter().enumerate() {
            for (mu, c) in p.terms() {
                let len = coord.len();
                let at = *coord.entry((k, mu.clone())).or_insert(len);
                v.push((at, c.clone()));
            }
        }
        v.sort_by_key(|x| x.0);
        if e.insert(v) {
            keep.push(i);
        }
    }
    a.select_rows(&keep)
}

/// `R_ij = ½ Σ_r ω^{rr}(d_rr Ω_ij + d_ij Ω_rr − d_ri Ω_rj − d_rj Ω_ri)`.
pub fn ricci_lin(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let mut b = Builder::new(n, n * (n + 1) / 2);
    let half = qr(1, 2);
    for (i, j) in sym_pairs(n) {
        let row = b.row();
        for r in 0..n {
            let c = half.clone() * q(metric.w(r));
            b.add(row, sym_index(n, i, j), c.clone(), &[r, r]);
            b.add(row, sym_index(n, r, r), c.clone(), &[i, j]);
            b.add(row, sym_index(n, r, j), -c.clone(), &[r, i]);
            b.add(row, sym_index(n, r, i), -c, &[r, j]);
        }
    }
    b.finish()
}

/// Scalar curvature `Σ ω^{ii} R_ii` as a single row.
pub fn scalar_curvature(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let ric = ricci_lin(metric);
    let parts: Vec<(Q, &[OreOperator<Q>])> = (0..n)
        .map(|i| (q(metric.w(i)), ric.row(sym_index(n, i, i))))
        .collect();
    let cols = ric.ncols();
    OpMatrix::from_rows(n, cols, vec![combine(&parts, n, cols)])
}

/// `E_ij = R_ij − ½ ω_ij tr R`, assembled from the Ricci rows.
pub fn einstein_lin(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let ric = ricci_lin(metric);
    let tr = scalar_curvature(metric);
    let cols = ric.ncols();
    let rows = sym_pairs(n)
        .into_iter()
        .enumerate()
        .map(|(idx, (i, j))| {
            let c = qr(-metric.at(i, j), 2);
            combine(&[(q(1), ric.row(idx)), (c, tr.row(0))], n, cols)
        })
        .collect();
    OpMatrix::from_rows(n, cols, rows)
}

/// The Einstein operator written out term by term:
/// `2E_ij = ω^{rs}(d_rs Ω_ij + d_ij Ω_rs − d_ri Ω_sj − d_sj Ω_ri)
///          − ω_ij(ω^{rs}ω^{uv} d_rs Ω_uv − ω^{ru}ω^{sv} d_rs Ω_uv)`.
pub fn einstein_lin_expanded(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let mut b = Builder::new(n, n * (n + 1) / 2);
    let half = qr(1, 2);
    for (i, j) in sym_pairs(n) {
        let row = b.row();
        for r in 0..n {
            let c = half.clone() * q(metric.w(r));
            b.add(row, sym_index(n, i, j), c.clone(), &[r, r]);
            b.add(row, sym_index(n, r, r), c.clone(), &[i, j]);
            b.add(row, sym_index(n, j, r), -c.clone(), &[r, i]);
            b.add(row, sym_index(n, r, i), -c, &[j, r]);
        }
        let wij = metric.at(i, j);
        if wij == 0 {
            continue;
        }
        for r in 0..n {
            for u in 0..n {
                let c = half.clone() * q(-wij * metric.w(r) * metric.w(u));
                b.add(row, sym_index(n, u, u), c, &[r, r]);
            }
            for s in 0..n {
                let c = half.clone() * q(wij * metric.w(r) * metric.w(s));
                b.add(row, sym_index(n, r, s), c, &[r, s]);
            }
        }
    }
    b.finish()
}

/// Row `j`: `Σ_i ω^{ii} d_i E_ij`.
pub fn div_op(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let mut b = Builder::new(n, n * (n + 1) / 2);
    for j in 0..n {
        let r = b.row();
        for i in 0..n {
            b.add(r, sym_index(n, i, j), q(metric.w(i)), &[i]);
        }
    }
    b.finish()
}

/// `σ11 = d22 φ, σ12 = −d12 φ, σ22 = d11 φ`.
pub fn airy() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 1);
    for (c, idx) in [(1, [1, 1]), (-1, [0, 1]), (1, [0, 0])] {
        let r = b.row();
        b.add(r, 0, q(c), &idx);
    }
    b.finish()
}

type Entry = (usize, i64, [usize; 2]);

fn from_entries(n: usize, cols: usize, rows: &[&[Entry]]) -> OpMatrix<Q> {
    let mut b = Builder::new(n, cols);
    for entries in rows {
        let r = b.row();
        for &(col, c, idx) in *entries {
            b.add(r, col, q(c), &idx);
        }
    }
    b.finish()
}

/// Stress functions in three dimensions: rows `σ11, σ12, σ13, σ22, σ23,
/// σ33`, columns `φ11, φ12, φ13, φ22, φ23, φ33`.
pub fn beltrami() -> OpMatrix<Q> {
    from_entries(
        3,
        6,
        &[
            &[(3, 1, [2, 2]), (4, -2, [1, 2]), (5, 1, [1, 1])],
            &[
                (1, -1, [2, 2]),
                (2, 1, [1, 2]),
                (4, 1, [0, 2]),
                (5, -1, [0, 1]),
            ],
            &[
                (1, 1, [1, 2]),
                (2, -1, [1, 1]),
                (3, -1, [0, 2]),
                (4, 1, [0, 1]),
            ],
            &[(0, 1, [2, 2]), (2, -2, [0, 2]), (5, 1, [0, 0])],
            &[
                (0, -1, [1, 2]),
                (1, 1, [0, 2]),
                (2, 1, [0, 1]),
                (4, -1, [0, 0]),
            ],
            &[(0, 1, [1, 1]), (1, -2, [0, 1]), (3, 1, [0, 0])],
        ],
    )
}

/// Beltrami's operator with the off-diagonal rows doubled; this matrix is
/// its own formal adjoint.
pub fn beltrami_symmetric() -> OpMatrix<Q> {
    let two = q(2);
    let one = q(1);
    let rows = [one.clone(), two.clone(), two.clone(), one.clone(), two, one];
    beltrami().scale(&rows, &super::ones(6))
}

/// Maxwell's stress functions `A = φ11, B = φ22, C = φ33`.
pub fn maxwell_potentials() -> OpMatrix<Q> {
    beltrami().select_cols(&[0, 3, 5])
}

/// Morera's stress functions `φ12, φ13, φ23`.
pub fn morera_potentials() -> OpMatrix<Q> {
    beltrami().select_cols(&[1, 2, 4])
}

/// Maxwell's parametrization read as a system on `(A, B, C)` with rows
/// `σ11, σ22, −σ23, σ33, −σ13, −σ12`.
pub fn maxwell_system() -> OpMatrix<Q> {
    from_entries(
        3,
        3,
        &[
            &[(1, 1, [2, 2]), (2, 1, [1, 1])],
            &[(0, 1, [2, 2]), (2, 1, [0, 0])],
            &[(0, 1, [1, 2])],
            &[(0, 1, [1, 1]), (1, 1, [0, 0])],
            &[(1, 1, [0, 2])],
            &[(2, 1, [0, 1])],
        ],
    )
}

/// Involutive form of [`maxwell_system`] after `x̄3 = x1 + x2 + x3`.
pub fn maxwell_involutive() -> OpMatrix<Q> {
    from_entries(
        3,
        3,
        &[
            &[
                (2, 1, [2, 2]),
                (2, 1, [0, 2]),
                (2, 1, [1, 2]),
                (2, 1, [0, 1]),
            ],
            &[(1, 1, [2, 2]), (1, 1, [0, 2])],
            &[(0, 1, [2, 2]), (0, 1, [1, 2])],
            &[
                (2, 1, [1, 2]),
                (2, 1, [1, 1]),
                (2, -1, [0, 2]),
                (1, -1, [0, 2]),
                (2, -1, [0, 1]),
            ],
            &[
                (0, 1, [1, 2]),
                (2, -1, [1, 1]),
                (1, 1, [0, 2]),
                (2, 2, [0, 1]),
                (2, -1, [0, 0]),
            ],
            &[
                (0, 1, [1, 1]),
                (2, 1, [1, 1]),
                (2, -2, [0, 1]),
                (2, 1, [0, 0]),
                (1, 1, [0, 0]),
            ],
        ],
    )
}

/// The change of coordinates `x̄3 = x1 + x2 + x3` used for Maxwell's system.
pub fn maxwell_change() -> Vec<Vec<Q>> {
    vec![
        vec![q(1), q(0), q(0)],
        vec![q(0), q(1), q(0)],
        vec![q(1), q(1), q(1)],
    ]
}

/// `σ^{rs} = □λ^{rs} + ω^{rs} d_ij λ^{ij} − ω^{sj} d_ij λ^{ri} − ω^{ri} d_ij λ^{sj}`,
/// summed over all `i, j`.
pub fn ad_ricci_expanded(metric: &Metric) -> OpMatrix<Q> {
    let n = metric.n();
    let mut b = Builder::new(n, n * (n + 1) / 2);
    for (r, s) in sym_pairs(n) {
        let row = b.row();
        for i in 0..n {
            b.add(row, sym_index(n, r, s), q(metric.w(i)), &[i, i]);
            for j in 0..n {
                b.add(row, sym_index(n, i, j), q(metric.at(r, s)), &[i, j]);
                b.add(row, sym_index(n, r, i), q(-metric.at(s, j)), &[i, j]);
                b.add(row, sym_index(n, s, j), q(-metric.at(r, i)), &[i, j]);
            }
        }
    }
    b.finish()
}

/// Infinitesimal conformal transformations of a flat metric: translations,
/// rotations, the dilatation and the elations, as vector fields with
/// polynomial components.
pub fn conformal_generators(metric: &Metric) -> Vec<Vec<RatFunc<Q>>> {
    let n = metric.n();
    let x = |i: usize| RatFunc::<Q>::x(i);
    let k = |c: i64| RatFunc::<Q>::int(c);
    let zero = || vec![RatFunc::<Q>::zero(); n];
    let mut out = Vec::new();
    for r in 0..n {
        let mut v = zero();
        v[r] = k(1);
        out.push(v);
    }
    for (r, s) in sym_pairs(n).into_iter().filter(|(r, s)| r < s) {
        // x_r ∂_s − x_s ∂_r with lowered coordinates x_r = ω_rr x^r
        let mut v = zero();
        v[s] = x(r).scale(&q(metric.w(r)));
        v[r] = x(s).scale(&q(-metric.w(s)));
        out.push(v);
    }
    out.push((0..n).map(x).collect());
    let sq = (0..n).fold(RatFunc::zero(), |acc, i| {
        acc.add(&x(i).mul(&x(i)).scale(&q(metric.w(i))))
    });
    for s in 0..n {
        let xs = x(s).scale(&q(metric.w(s)));
        let mut v: Vec<RatFunc<Q>> = (0..n).map(|r| xs.mul(&x(r))).collect();
        v[s] = v[s].sub(&sq.scale(&qr(1, 2)));
        out.push(v);
    }
    out
}
