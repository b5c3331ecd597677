//! Small systems used throughout the tests and the CLI demos.

use crate::field::RatFunc;
use crate::ore::{OpMatrix, OreOperator};
use crate::Q;

use super::{q, qr, Builder};

fn p(name: &str) -> RatFunc<Q> {
    RatFunc::param(name)
}

/// `grad` in `n` variables, as an `n × 1` operator.
pub fn grad(n: usize) -> OpMatrix<Q> {
    let mut b = Builder::new(n, 1);
    for i in 0..n {
        let r = b.row();
        b.add(r, 0, q(1), &[i]);
    }
    b.finish()
}

/// `curl` in three variables.
pub fn curl() -> OpMatrix<Q> {
    let mut b = Builder::new(3, 3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let r = b.row();
        b.add(r, k, q(1), &[j]);
        b.add(r, j, q(-1), &[k]);
    }
    b.finish()
}

/// `div` in `n` variables, as a `1 × n` operator.
pub fn div(n: usize) -> OpMatrix<Q> {
    let mut b = Builder::new(n, n);
    let r = b.row();
    for i in 0..n {
        b.add(r, i, q(1), &[i]);
    }
    b.finish()
}

/// Control system `dy = A y + B u` as rows `dy^k − Σ A_kl y^l − Σ B_kr u^r`
/// over the unknowns `(y, u)`.
pub fn kalman(a: &[Vec<RatFunc<Q>>], bm: &[Vec<RatFunc<Q>>]) -> OpMatrix<Q> {
    let k = a.len();
    let r = bm.first().map_or(0, Vec::len);
    let mut b = Builder::new(1, k + r);
    for i in 0..k {
        let row = b.row();
        b.add(row, i, q(1), &[0]);
        for l in 0..k {
            b.add_rf(row, l, a[i][l].neg(), &[]);
        }
        for s in 0..r {
            b.add_rf(row, k + s, bm[i][s].neg(), &[]);
        }
    }
    b.finish()
}

/// Two pendula of lengths `l1, l2` hanging from a cart; unknowns
/// `(x, θ1, θ2)`.
pub fn double_pendulum() -> OpMatrix<Q> {
    let mut b = Builder::new(1, 3);
    for (k, l) in [(1, "l1"), (2, "l2")] {
        let r = b.row();
        b.add(r, 0, q(1), &[0, 0]);
        b.add_rf(r, k, p(l), &[0, 0]);
        b.add_rf(r, k, p("g"), &[]);
    }
    b.finish()
}

/// `x = −l1 l2 d⁴ − g(l1 + l2) d² − g²`, `θ1 = l2 d⁴ + g d²`,
/// `θ2 = l1 d⁴ + g d²`.
pub fn double_pendulum_parametrization() -> OpMatrix<Q> {
    let (l1, l2, g) = (p("l1"), p("l2"), p("g"));
    let mut b = Builder::new(1, 1);
    let r = b.row();
    b.add_rf(r, 0, l1.mul(&l2).neg(), &[0; 4]);
    b.add_rf(r, 0, g.mul(&l1.add(&l2)).neg(), &[0, 0]);
    b.add_rf(r, 0, g.mul(&g).neg(), &[]);
    let r = b.row();
    b.add_rf(r, 0, l2, &[0; 4]);
    b.add_rf(r, 0, g.clone(), &[0, 0]);
    let r = b.row();
    b.add_rf(r, 0, l1, &[0; 4]);
    b.add_rf(r, 0, g, &[0, 0]);
    b.finish()
}

/// `[d, −a, −d; 1, −d, d]` on `(η1, η2, η3)`.
pub fn example_1_2(a: RatFunc<Q>) -> OpMatrix<Q> {
    let mut b = Builder::new(1, 3);
    let r = b.row();
    b.add(r, 0, q(1), &[0]);
    b.add_rf(r, 1, a.neg(), &[]);
    b.add(r, 2, q(-1), &[0]);
    let r = b.row();
    b.add(r, 0, q(1), &[]);
    b.add(r, 1, q(-1), &[0]);
    b.add(r, 2, q(1), &[0]);
    b.finish()
}

/// `η = (d22 ξ, d12 ξ − ξ)`.
pub fn example_1_6() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 1);
    let r = b.row();
    b.add(r, 0, q(1), &[1, 1]);
    let r = b.row();
    b.add(r, 0, q(1), &[0, 1]);
    b.add(r, 0, q(-1), &[]);
    b.finish()
}

/// Compatibility condition of [`example_1_6`]: `d12 u − u − d22 v`.
pub fn example_1_6_cc() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 2);
    let r = b.row();
    b.add(r, 0, q(1), &[0, 1]);
    b.add(r, 0, q(-1), &[]);
    b.add(r, 1, q(-1), &[1, 1]);
    b.finish()
}

/// The two fourth-order consequences `A = d1122 u − d1222 v − d22 v − u`
/// and `B = d1112 u − d11 u − d1122 v` of [`example_1_6_cc`].
pub fn example_1_6_ab() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 2);
    let r = b.row();
    b.add(r, 0, q(1), &[0, 0, 1, 1]);
    b.add(r, 0, q(-1), &[]);
    b.add(r, 1, q(-1), &[0, 1, 1, 1]);
    b.add(r, 1, q(-1), &[1, 1]);
    let r = b.row();
    b.add(r, 0, q(1), &[0, 0, 0, 1]);
    b.add(r, 0, q(-1), &[0, 0]);
    b.add(r, 1, q(-1), &[0, 0, 1, 1]);
    b.finish()
}

/// Rows `Φ1 = d2 y3 − d2 y2`, `Φ2 = d1 y1 − a x2 y1 + d2 y2`,
/// `Φ3 = d1 y3 − d1 y2`.
pub fn example_1_7(a: RatFunc<Q>) -> OpMatrix<Q> {
    let mut b = Builder::new(2, 3);
    let r = b.row();
    b.add(r, 1, q(-1), &[1]);
    b.add(r, 2, q(1), &[1]);
    let r = b.row();
    b.add(r, 0, q(1), &[0]);
    b.add_rf(r, 0, a.mul(&RatFunc::x(1)).neg(), &[]);
    b.add(r, 1, q(1), &[1]);
    let r = b.row();
    b.add(r, 1, q(-1), &[0]);
    b.add(r, 2, q(1), &[0]);
    b.finish()
}

/// The torsion element `z = y3 − y2` of [`example_1_7`].
pub fn example_1_7_torsion() -> Vec<OreOperator<Q>> {
    vec![
        OreOperator::zero(2),
        OreOperator::int(2, -1),
        OreOperator::int(2, 1),
    ]
}

/// `y33 = 0, y23 − y11 = 0, y22 = 0`.
pub fn macaulay() -> OpMatrix<Q> {
    let mut b = Builder::new(3, 1);
    let r = b.row();
    b.add(r, 0, q(1), &[2, 2]);
    let r = b.row();
    b.add(r, 0, q(1), &[1, 2]);
    b.add(r, 0, q(-1), &[0, 0]);
    let r = b.row();
    b.add(r, 0, q(1), &[1, 1]);
    b.finish()
}

/// Polynomial solutions of [`macaulay`]: `1, x1, x2, x3, x1x2, x1x3,
/// x2x3 + x1²/2, x1x2x3 + x1³/6`.
pub fn macaulay_solutions() -> Vec<RatFunc<Q>> {
    let x = RatFunc::<Q>::x;
    let c = |a, b| RatFunc::constant(qr(a, b));
    vec![
        RatFunc::one(),
        x(0),
        x(1),
        x(2),
        x(0).mul(&x(1)),
        x(0).mul(&x(2)),
        x(1).mul(&x(2)).add(&x(0).pow(2).mul(&c(1, 2))),
        x(0).mul(&x(1)).mul(&x(2)).add(&x(0).pow(3).mul(&c(1, 6))),
    ]
}

/// Plane Cosserat equilibrium on `(σ11, σ12, σ21, σ22, μ1, μ2)`.
pub fn cosserat() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 6);
    let r = b.row();
    b.add(r, 0, q(1), &[0]);
    b.add(r, 2, q(1), &[1]);
    let r = b.row();
    b.add(r, 1, q(1), &[0]);
    b.add(r, 3, q(1), &[1]);
    let r = b.row();
    b.add(r, 4, q(1), &[0]);
    b.add(r, 5, q(1), &[1]);
    b.add(r, 1, q(1), &[]);
    b.add(r, 2, q(-1), &[]);
    b.finish()
}

/// `σ11 = −d2φ1, σ12 = −d2φ2, σ21 = d1φ1, σ22 = d1φ2,
/// μ1 = −d2φ3 + φ1, μ2 = d1φ3 + φ2`.
pub fn cosserat_parametrization() -> OpMatrix<Q> {
    let mut b = Builder::new(2, 3);
    for (col, c, idx) in [(0, -1, &[1][..]), (1, -1, &[1]), (0, 1, &[0]), (1, 1, &[0])] {
        let r = b.row();
        b.add(r, col, q(c), idx);
    }
    let r = b.row();
    b.add(r, 2, q(-1), &[1]);
    b.add(r, 0, q(1), &[]);
    let r = b.row();
    b.add(r, 2, q(1), &[0]);
    b.add(r, 1, q(1), &[]);
    b.finish()
}

/// `ξ_xxx = 0`: the projective transformations of the line.
pub fn projective_line() -> OpMatrix<Q> {
    let mut b = Builder::new(1, 1);
    let r = b.row();
    b.add(r, 0, q(1), &[0, 0, 0]);
    b.finish()
}

/// `L = [[1,0,0],[x,1,0],[x²/2,x,1]]`, which turns the adjoint of the
/// first-order form of [`projective_line`] into pure divergences.
pub fn projective_line_divergence() -> OpMatrix<Q> {
    let x = RatFunc::<Q>::x(0);
    let s = |f: RatFunc<Q>| OreOperator::scalar(1, f);
    let z = || OreOperator::zero(1);
    let one = || OreOperator::one(1);
    OpMatrix::from_rows(
        1,
        3,
        vec![
            vec![one(), z(), z()],
            vec![s(x.clone()), one(), z()],
            vec![s(x.pow(2).scale(&qr(1, 2))), s(x), one()],
        ],
    )
}
