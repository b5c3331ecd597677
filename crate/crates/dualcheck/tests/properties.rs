//! Randomized algebraic laws for coefficients and operators.

use dualcheck::field::MultiIndex;
use dualcheck::ore::lclm;
use dualcheck::{OreOperator, Poly, RatFunc};
use proptest::prelude::*;

fn polynomial(n: usize) -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..n, 0..=2)), 0..=3).prop_map(
        |terms| {
            terms.into_iter().fold(RatFunc::zero(), |acc, (c, vars)| {
                let t = vars
                    .into_iter()
                    .fold(RatFunc::int(c), |t, i| t.mul(&RatFunc::x(i)));
                acc.add(&t)
            })
        },
    )
}

/// A polynomial, optionally divided by `1 + x_i²` (which never vanishes).
fn coefficient(n: usize) -> impl Strategy<Value = RatFunc> {
    (polynomial(n), prop::option::of(0..n)).prop_map(|(p, den)| match den {
        Some(i) => p.div(&RatFunc::x(i).pow(2).add(&RatFunc::one())).unwrap(),
        None => p,
    })
}

fn operator_with(
    n: usize,
    max_order: usize,
    coeff: BoxedStrategy<RatFunc>,
) -> impl Strategy<Value = OreOperator> {
    prop::collection::vec((coeff, prop::collection::vec(0..n, 0..=max_order)), 1..=4).prop_map(
        move |terms| {
            let mut p = OreOperator::zero(n);
            for (c, idx) in terms {
                p.add_term(MultiIndex::from_indices(n, &idx), c);
            }
            p
        },
    )
}

fn operator(n: usize, max_order: usize) -> impl Strategy<Value = OreOperator> {
    operator_with(n, max_order, coefficient(n).boxed())
}

fn triple() -> impl Strategy<Value = (OreOperator, OreOperator, OreOperator)> {
    (1usize..=3).prop_flat_map(|n| (operator(n, 2), operator(n, 2), operator(n, 2)))
}

fn pair() -> impl Strategy<Value = (OreOperator, OreOperator)> {
    (1usize..=3).prop_flat_map(|n| (operator(n, 3), operator(n, 3)))
}

/// `Σ_k Σ_{j<k} (−1)^j (a_k g)^{(j)} f^{(k−1−j)}`, whose derivative is
/// `g·Pf − f·ad(P)g` when `P = Σ a_k d^k`.
fn concomitant(p: &OreOperator, f: &RatFunc, g: &RatFunc) -> RatFunc {
    let mut out = RatFunc::zero();
    for (mu, a) in p.terms() {
        let k = mu.order();
        let ag = a.mul(g);
        for j in 0..k {
            let mut u = ag.clone();
            for _ in 0..j {
                u = u.d(0);
            }
            let mut v = f.clone();
            for _ in 0..(k - 1 - j) {
                v = v.d(0);
            }
            let t = u.mul(&v);
            out = if j % 2 == 0 { out.add(&t) } else { out.sub(&t) };
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in coefficient(2), b in coefficient(2), c in coefficient(2)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn derivation_rules(a in coefficient(2), b in coefficient(2), i in 0usize..2) {
        prop_assert_eq!(a.mul(&b).d(i), a.d(i).mul(&b).add(&a.mul(&b.d(i))));
        if !b.is_zero() {
            let q = a.div(&b).unwrap();
            let rhs = a.d(i).mul(&b).sub(&a.mul(&b.d(i))).div(&b.mul(&b)).unwrap();
            prop_assert_eq!(q.d(i), rhs);
        }
        prop_assert_eq!(a.d(0).d(1), a.d(1).d(0));
    }

    #[test]
    fn gcd_divides_common_factor(a in polynomial(2), b in polynomial(2), g in polynomial(2)) {
        let (a, b, g) = (a.numer().clone(), b.numer().clone(), g.numer().clone());
        prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
        let d = Poly::gcd(&a.mul(&g), &b.mul(&g));
        prop_assert!(d.div_exact(&g.monic()).is_some());
        prop_assert!(a.mul(&g).div_exact(&d).is_some());
        prop_assert!(b.mul(&g).div_exact(&d).is_some());
    }

    #[test]
    fn adjoint_is_an_anti_involution((p, q) in pair()) {
        prop_assert_eq!(p.adjoint().adjoint(), p.clone());
        prop_assert_eq!(p.compose(&q).adjoint(), q.adjoint().compose(&p.adjoint()));
        prop_assert_eq!(p.add(&q).adjoint(), p.adjoint().add(&q.adjoint()));
    }

    #[test]
    fn composition_is_associative_and_distributive((p, q, r) in triple()) {
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert_eq!(p.compose(&q.add(&r)), p.compose(&q).add(&p.compose(&r)));
        prop_assert_eq!(p.add(&q).compose(&r), p.compose(&r).add(&q.compose(&r)));
    }

    #[test]
    fn composition_acts_on_functions((p, q, f) in (1usize..=3).prop_flat_map(|n| (operator(n, 2), operator(n, 2), coefficient(n)))) {
        prop_assert_eq!(p.compose(&q).apply(&f), p.apply(&q.apply(&f)));
    }

    #[test]
    fn integration_by_parts(p in operator_with(1, 3, polynomial(1).boxed()), f in polynomial(1), g in polynomial(1)) {
        let lhs = g.mul(&p.apply(&f)).sub(&p.adjoint().apply(&g).mul(&f));
        prop_assert_eq!(concomitant(&p, &f, &g).d(0), lhs);
    }

    #[test]
    fn lclm_gives_a_common_multiple(p in operator(1, 2), q in operator(1, 2)) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (u, v) = lclm(&p, &q, 6).unwrap();
        prop_assert!(!u.is_zero() && !v.is_zero());
        prop_assert!(u.compose(&p).sub(&v.compose(&q)).is_zero());
    }
}
