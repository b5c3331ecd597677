//! The twelve acceptance criteria, each reported on one line as PASS or FAIL.

mod common;

use common::{mat, op, op_rf, z};
use dualcheck::duality::{
    autonomous_relation, default_max_order, five_step_test, self_adjoint_check, Verdict,
};
use dualcheck::field::linalg;
use dualcheck::field::MultiIndex;
use dualcheck::geom::*;
use dualcheck::janet::{
    cc, delta_cohomology_dims, first_order_reduction, janet_fibers_finite_type, membership,
    polynomial_solutions, pp_reduce, resolution, row_module_equal, specialize, spencer_fibers,
    spencerize, Membership, SymbolTableau,
};
use dualcheck::{OpMatrix, OreOperator, RatFunc, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects failed expectations for one criterion.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, actual: T, expected: T, what: &str) {
        if actual != expected {
            self.0
                .push(format!("{what}: expected {expected:?}, got {actual:?}"));
        }
    }
}

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn row(n: usize, r: Vec<OreOperator>) -> OpMatrix {
    let w = r.len();
    OpMatrix::from_rows(n, w, vec![r])
}

fn zero_product(a: &OpMatrix, b: &OpMatrix) -> bool {
    a.mul(b).map(|m| m.is_zero()).unwrap_or(false)
}

// 1 ------------------------------------------------------------------------

fn random_coeff(rng: &mut ChaCha8Rng, n: usize) -> RatFunc {
    let mut f = RatFunc::int(rng.gen_range(-3..=3));
    for _ in 0..rng.gen_range(0..=2) {
        let mut t = RatFunc::int(rng.gen_range(-3..=3));
        for _ in 0..rng.gen_range(1..=2) {
            t = t.mul(&RatFunc::x(rng.gen_range(0..n)));
        }
        f = f.add(&t);
    }
    f
}

fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> OreOperator {
    let mut p = OreOperator::zero(n);
    for _ in 0..rng.gen_range(1..=4) {
        let ord = rng.gen_range(0..=3);
        let idx: Vec<usize> = (0..ord).map(|_| rng.gen_range(0..n)).collect();
        p.add_term(MultiIndex::from_indices(n, &idx), random_coeff(rng, n));
    }
    p
}

fn criterion_1() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..500 {
        let n = rng.gen_range(1..=3);
        let p = random_operator(&mut rng, n);
        let r = random_operator(&mut rng, n);
        c.expect(
            p.adjoint().adjoint() == p,
            format!("case {case}: ad(ad(P)) != P"),
        );
        let lhs = p.compose(&r).adjoint();
        let rhs = r.adjoint().compose(&p.adjoint());
        c.expect(lhs == rhs, format!("case {case}: ad(PQ) != ad(Q) ad(P)"));
    }
    c
}

// 2 ------------------------------------------------------------------------

fn controllability_rank(a: &[Vec<i64>], b: &[Vec<i64>]) -> usize {
    let k = a.len();
    let r = b[0].len();
    // columns of (B, AB, ..., A^{k-1} B), stored as rows of the transpose
    let mut blocks: Vec<Vec<i64>> = (0..r).map(|j| (0..k).map(|i| b[i][j]).collect()).collect();
    let mut cur = blocks.clone();
    for _ in 1..k {
        cur = cur
            .iter()
            .map(|v| {
                (0..k)
                    .map(|i| (0..k).map(|l| a[i][l] * v[l]).sum())
                    .collect()
            })
            .collect();
        blocks.extend(cur.iter().cloned());
    }
    let rows: Vec<linalg::SparseRow<Q>> = blocks
        .iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0)
                .map(|(j, x)| (j, RatFunc::int(*x)))
                .collect()
        })
        .collect();
    linalg::rank(&rows)
}

fn criterion_2() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut yes, mut no) = (0, 0);
    for case in 0..20 {
        let k = rng.gen_range(1..=4);
        let r = rng.gen_range(1..=2);
        let mut a: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let mut b: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..r).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        // every other case hides a block that the inputs cannot reach
        if case % 2 == 1 && k >= 2 {
            let cut = rng.gen_range(1..k);
            for i in cut..k {
                for l in 0..cut {
                    a[i][l] = 0;
                }
                for s in 0..r {
                    b[i][s] = 0;
                }
            }
        }
        let controllable = controllability_rank(&a, &b) == k;
        let to_rf = |m: &[Vec<i64>]| -> Vec<Vec<RatFunc>> {
            m.iter()
                .map(|r| r.iter().map(|v| RatFunc::int(*v)).collect())
                .collect()
        };
        let d1 = kalman(&to_rf(&a), &to_rf(&b));
        let report = match five_step_test(&d1, default_max_order(&d1)) {
            Ok(r) => r,
            Err(e) => {
                c.expect(false, format!("case {case}: {e}"));
                continue;
            }
        };
        let expected = if controllable {
            Verdict::TorsionFree
        } else {
            Verdict::HasTorsion
        };
        if controllable {
            yes += 1;
        } else {
            no += 1;
        }
        c.expect(
            report.verdict == expected,
            format!(
                "case {case} (k={k}, r={r}): {:?} vs {:?}",
                report.verdict, expected
            ),
        );
    }
    c.expect(
        yes > 0 && no > 0,
        format!("sample covers both outcomes ({yes} controllable, {no} not)"),
    );
    c
}

// 3 ------------------------------------------------------------------------

fn pendulum_torsion(c: &mut Checks, d1: &OpMatrix) {
    let report = five_step_test(d1, default_max_order(d1)).unwrap();
    c.eq(report.verdict, Verdict::HasTorsion, "l1 = l2 verdict");
    let zrow = vec![z(1), op(1, &[(1, &[])]), op(1, &[(-1, &[])])];
    let zmat = row(1, zrow.clone());
    let equivalent = report.torsion_generators.iter().any(|g| {
        let gm = row(1, g.row.clone());
        membership(&zrow, &gm.vstack(d1).unwrap(), 2).is_member()
            && membership(&g.row, &zmat.vstack(d1).unwrap(), 2).is_member()
    });
    c.expect(
        equivalent,
        "a torsion generator is θ1 − θ2 modulo the equations",
    );
    let l = RatFunc::param("l1");
    let g = RatFunc::param("g");
    match autonomous_relation(&zrow, d1, 4).unwrap() {
        Some((p, _)) => {
            let expected = op_rf(1, &[(l.clone(), &[1, 1]), (g.clone(), &[])]);
            let (mu, lc) = p.leading().unwrap();
            let ratio = lc.div(&l).unwrap();
            c.eq(mu.order(), 2, "order of the autonomous relation");
            c.expect(
                p == expected.scale_left(&ratio),
                format!("autonomous relation {p} is not a multiple of l d² + g"),
            );
        }
        None => c.expect(false, "no autonomous relation for θ1 − θ2"),
    }
}

fn criterion_3() -> Checks {
    let mut c = Checks::default();
    let d1 = double_pendulum();
    let report = five_step_test(&d1, default_max_order(&d1)).unwrap();
    c.eq(report.verdict, Verdict::TorsionFree, "symbolic verdict");
    match report.parametrization() {
        Some(d) => {
            c.eq(d.order(), Some(4), "order of the parametrization");
            c.expect(zero_product(&d1, d), "D1 · D = 0");
            let printed = double_pendulum_parametrization();
            c.expect(zero_product(&d1, &printed), "D1 · printed D = 0");
            c.expect(
                row_module_equal(&d.adjoint(), &printed.adjoint(), 0),
                "parametrization differs from the printed one",
            );
        }
        None => c.expect(false, "no parametrization"),
    }
    let eq = specialize(&d1, &[("l2".into(), RatFunc::param("l1"))]).unwrap();
    pendulum_torsion(&mut c, &eq);
    c
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Checks {
    let mut c = Checks::default();
    let r = cc(&example_1_6(), 4).unwrap();
    c.expect(r.certified_complete, "certified");
    c.eq(r.cc.clone(), example_1_6_cc(), "unique second-order CC");
    let cmat = example_1_6_cc();
    let ab = example_1_6_ab();
    match membership(ab.row(0), &cmat, 4) {
        Membership::Member { coeffs, .. } => c.eq(
            coeffs,
            vec![op(2, &[(1, &[1, 2]), (1, &[])])],
            "A = d12 C + C",
        ),
        _ => c.expect(false, "A not in the module of C"),
    }
    match membership(ab.row(1), &cmat, 4) {
        Membership::Member { coeffs, .. } => {
            c.eq(coeffs, vec![op(2, &[(1, &[1, 1])])], "B = d11 C")
        }
        _ => c.expect(false, "B not in the module of C"),
    }
    c.expect(
        membership(cmat.row(0), &ab, 4).is_member(),
        "C in the module of A, B",
    );
    let combo = ab.left_apply_row(&[op(2, &[(-1, &[1, 2]), (1, &[])]), op(2, &[(1, &[2, 2])])]);
    c.eq(combo.as_slice(), cmat.row(0), "C = d22 B − d12 A + A");
    let chain = pp_reduce(&example_1_6(), 0, 5).chain();
    c.eq(chain, vec![6, 4, 3, 2, 1, 0, 0], "pp dimensions");
    c
}

// 5 ------------------------------------------------------------------------

fn criterion_5() -> Checks {
    let mut c = Checks::default();
    let d1 = example_1_7(RatFunc::param("a"));
    let r = cc(&d1, 4).unwrap();
    c.expect(r.certified_complete, "certified");
    c.eq(r.cc.nrows(), 1, "number of CC");
    let psi = row(2, vec![op(2, &[(-1, &[1])]), z(2), op(2, &[(1, &[2])])]);
    c.expect(
        row_module_equal(&r.cc, &psi, 0),
        format!("CC {} is not d2Φ3 − d1Φ1", r.cc),
    );
    let zrow = example_1_7_torsion();
    for i in 0..2 {
        let zi: Vec<OreOperator> = zrow
            .iter()
            .map(|p| OreOperator::d(2, i).compose(p))
            .collect();
        c.expect(
            membership(&zi, &d1, 2).is_member(),
            format!("z_{} = 0 on solutions", i + 1),
        );
    }
    let report = five_step_test(&d1, default_max_order(&d1)).unwrap();
    c.eq(report.verdict, Verdict::HasTorsion, "verdict");
    let zmat = row(2, zrow.clone());
    let found = report.torsion_generators.iter().any(|g| {
        membership(&zrow, &row(2, g.row.clone()).vstack(&d1).unwrap(), 2).is_member()
            && membership(&g.row, &zmat.vstack(&d1).unwrap(), 2).is_member()
    });
    c.expect(found, "torsion generator is y3 − y2 modulo the equations");
    // ad(D') : λ ↦ (−d1 λ − a x2 λ, −d2 λ) has a left inverse iff a ≠ 0
    let bound = 4;
    let ad_dprime = |a: i64| {
        mat(
            2,
            1,
            vec![
                vec![op_rf(
                    2,
                    &[(RatFunc::int(-1), &[1]), (RatFunc::x(1).scale(&q(-a)), &[])],
                )],
                vec![op(2, &[(-1, &[2])])],
            ],
        )
    };
    let unit = [op(2, &[(1, &[])])];
    c.expect(
        membership(&unit, &ad_dprime(1), bound).is_member(),
        "a = 1: injective",
    );
    c.expect(
        !membership(&unit, &ad_dprime(0), bound).is_member(),
        format!("a = 0: not injective up to order {bound}"),
    );
    c
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Checks {
    let mut c = Checks::default();
    let cauchy2 = cauchy(2);
    let report = five_step_test(&cauchy2, default_max_order(&cauchy2)).unwrap();
    c.eq(report.verdict, Verdict::TorsionFree, "verdict");
    match report.parametrization() {
        Some(d) => c.expect(
            row_module_equal(&d.adjoint(), &airy().adjoint(), 0),
            "parametrization is Airy",
        ),
        None => c.expect(false, "no parametrization"),
    }
    c.expect(zero_product(&cauchy2, &airy()), "Cauchy · Airy = 0");
    let w = sym_weights(2);
    let ad_r = weighted_adjoint(
        &riemann_lin(&Metric::euclidean(2)),
        &inverse_weights(&w),
        &ones(1),
    );
    c.eq(ad_r, airy(), "ad(Riemann) = Airy with the duality weights");
    c
}

// 7 ------------------------------------------------------------------------

fn criterion_7() -> Checks {
    let mut c = Checks::default();
    let cauchy3 = cauchy(3);
    c.expect(zero_product(&cauchy3, &beltrami()), "Cauchy · Beltrami = 0");
    let w = sym_weights(3);
    let ad_r = weighted_adjoint(
        &riemann_lin(&Metric::euclidean(3)),
        &inverse_weights(&w),
        &w,
    );
    c.eq(
        ad_r,
        beltrami(),
        "Beltrami = ad(Riemann) with rows ½ and columns 2 off the diagonal",
    );
    c.expect(
        zero_product(&cauchy3, &maxwell_potentials()),
        "Cauchy · Maxwell = 0",
    );
    c.expect(
        zero_product(&cauchy3, &morera_potentials()),
        "Cauchy · Morera = 0",
    );
    c
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Checks {
    let mut c = Checks::default();
    for n in 2..=4 {
        for m in [Metric::euclidean(n), Metric::minkowski(n)] {
            let e = einstein_lin(&m);
            c.eq(
                e.clone(),
                einstein_lin_expanded(&m),
                &format!("Einstein formulas agree, {m:?}"),
            );
            c.expect(
                zero_product(&div_op(&m), &e),
                format!("div · Einstein = 0, {m:?}"),
            );
            let w = metric_weights(&m);
            c.expect(
                self_adjoint_check(&e, &inverse_weights(&w), &w),
                format!("Einstein self-adjoint, {m:?}"),
            );
        }
    }
    c.expect(
        einstein_lin(&Metric::euclidean(2)).is_zero(),
        "Einstein vanishes for n = 2",
    );
    let e3 = einstein_lin(&Metric::euclidean(3));
    let s = beltrami_symmetric();
    c.expect(
        self_adjoint_check(&s, &ones(6), &ones(6)),
        "printed 6 × 6 is self-adjoint",
    );
    let w3 = sym_weights(3);
    c.eq(
        e3.scale(&w3, &vec![q(-2); 6]),
        s,
        "printed 6 × 6 = −2 · diag(1,2,2,1,2,1) · Einstein",
    );
    for m in [Metric::euclidean(4), Metric::minkowski(4)] {
        let ric = ricci_lin(&m);
        c.expect(
            diagonal_equivalence(&ric.adjoint(), &ric).is_none(),
            "Ricci is not self-adjoint under any diagonal scaling",
        );
        let w = sym_weights(4);
        let two_w: Vec<Q> = w.iter().map(|x| x * q(2)).collect();
        let printed = ad_ricci_expanded(&m);
        c.eq(
            weighted_adjoint(&ric, &inverse_weights(&w), &two_w),
            printed.clone(),
            "ad(Ricci) matches the printed operator",
        );
        c.expect(zero_product(&cauchy(4), &printed), "d_r σ^{rs} = 0");
    }
    c
}

// 9 ------------------------------------------------------------------------

fn criterion_9() -> Checks {
    let mut c = Checks::default();
    let a = macaulay();
    let sols = polynomial_solutions(&a, 3);
    c.eq(sols.len(), 8, "solution count at degree 3");
    let printed = macaulay_solutions();
    let ok = printed.iter().all(|f| {
        a.apply(std::slice::from_ref(f))
            .unwrap()
            .iter()
            .all(RatFunc::is_zero)
    });
    c.expect(ok, "printed basis solves the system");
    // the printed polynomials are independent: compare coefficient vectors
    let mut index = std::collections::BTreeMap::new();
    let rows: Vec<linalg::SparseRow<Q>> = printed
        .iter()
        .map(|f| {
            let mut r: Vec<(usize, RatFunc)> = f
                .numer()
                .terms()
                .map(|(mono, k)| {
                    let len = index.len();
                    (
                        *index.entry(mono.clone()).or_insert(len),
                        RatFunc::constant(k.clone()),
                    )
                })
                .collect();
            r.sort_by_key(|e| e.0);
            r
        })
        .collect();
    c.eq(linalg::rank(&rows), 8, "printed basis is independent");
    match spencerize(&a, 6) {
        Ok(s) => c.eq(s.jets.len(), 8, "first-order unknowns"),
        Err(e) => c.expect(false, format!("spencerize: {e}")),
    }
    let fib = spencer_fibers(3, 8);
    c.eq(fib.clone(), vec![8, 24, 24, 8], "Spencer fibers");
    c.eq(
        euler_characteristic(&fib),
        0,
        "Spencer Euler characteristic",
    );
    let res = resolution(&a, 4, 3).unwrap();
    // the stage after the last one has no syzygies, so the resolution stops
    c.eq(
        res.last().map(|r| r.cc.nrows()),
        Some(0),
        "resolution terminates",
    );
    let stages = &res[..res.len().saturating_sub(1)];
    let fibers: Vec<usize> = [1, a.nrows()]
        .into_iter()
        .chain(stages.iter().map(|r| r.cc.nrows()))
        .collect();
    c.eq(fibers, vec![1, 3, 3, 1], "resolution fibers");
    let orders: Vec<Option<u32>> = std::iter::once(a.order())
        .chain(stages.iter().map(|r| r.cc.order()))
        .collect();
    c.eq(orders, vec![Some(2), Some(2), Some(2)], "resolution orders");
    c.expect(
        res.iter().all(|r| r.certified_complete),
        "every stage certified",
    );
    c
}

// 10 -----------------------------------------------------------------------

fn criterion_10() -> Checks {
    let mut c = Checks::default();
    for n in 3..=6usize {
        let tab = SymbolTableau::from_operator(&conformal_killing(&Metric::euclidean(n))).unwrap();
        c.eq(tab.dim(), n * (n - 1) / 2 + 1, &format!("dim ĝ1, n = {n}"));
        c.eq(tab.at_order(2).dim(), n, &format!("dim ĝ2, n = {n}"));
        c.eq(tab.at_order(3).dim(), 0, &format!("dim ĝ3, n = {n}"));
        let formula = n * (n + 1) * (n + 2) * (n - 3) / 12;
        let h21 = delta_cohomology_dims(&tab, [1], [2])[0].clone();
        c.eq(h21.h, formula, &format!("dim F̂1 = H²(ĝ1), n = {n}"));
        if n == 4 {
            c.eq((h21.z, h21.b), (26, 16), "cocycles and coboundaries, n = 4");
        }
        if n >= 4 {
            let f1 = killing_sequence_fibers(n)[2];
            c.eq(
                f1 - h21.h,
                n * (n + 1) / 2,
                &format!("dim F1 − dim F̂1, n = {n}"),
            );
        }
        if n == 3 {
            let h22 = delta_cohomology_dims(&tab, [2], [2])[0].h;
            c.eq(h22, 5, "n = 3: the first curvature bundle sits at order 2");
        }
    }
    for (n, expected) in [(3usize, vec![3, 5, 5, 3]), (4, vec![4, 9, 10, 9, 4])] {
        let tab = SymbolTableau::from_operator(&conformal_killing(&Metric::euclidean(n))).unwrap();
        match janet_fibers_finite_type(&tab, 6) {
            Ok(f) => {
                c.eq(f.clone(), expected, &format!("conformal fibers, n = {n}"));
                c.eq(
                    euler_characteristic(&f),
                    0,
                    &format!("Euler characteristic, n = {n}"),
                );
            }
            Err(e) => c.expect(false, format!("n = {n}: {e}")),
        }
    }
    c
}

// 11 -----------------------------------------------------------------------

fn criterion_11() -> Checks {
    let mut c = Checks::default();
    let s = spencerize(&projective_line(), 6).unwrap();
    c.eq(
        s.unknown_names(&["xi".to_string()]),
        vec!["xi".to_string(), "xi_1".into(), "xi_11".into()],
        "unknowns",
    );
    let minus_ad = s.system.adjoint().neg();
    // ∂σ = f, ∂ν + σ = u, ∂π + ν = v on (σ, ν, π)
    let d = || op(1, &[(1, &[1])]);
    let one = || op(1, &[(1, &[])]);
    let printed = mat(
        1,
        3,
        vec![
            vec![d(), z(1), z(1)],
            vec![one(), d(), z(1)],
            vec![z(1), one(), d()],
        ],
    );
    c.eq(minus_ad.clone(), printed, "the three printed equations");
    let l = projective_line_divergence();
    let lhs = l.mul(&minus_ad).unwrap();
    let total = l.map(|e| OreOperator::d(1, 0).compose(e));
    c.eq(lhs, total, "L · (−ad) = ∂ ∘ L");
    c
}

// 12 -----------------------------------------------------------------------

fn verdict(a: &OpMatrix) -> Verdict {
    five_step_test(a, default_max_order(a))
        .map(|r| r.verdict)
        .unwrap_or(Verdict::Inconclusive)
}

fn criterion_12() -> Checks {
    let mut c = Checks::default();
    let pend = double_pendulum();
    let eq = specialize(&pend, &[("l2".into(), RatFunc::param("l1"))]).unwrap();
    for (label, a, expected) in [
        ("l1, l2 free", pend, Verdict::TorsionFree),
        ("l1 = l2", eq, Verdict::HasTorsion),
    ] {
        let first = first_order_reduction(&a).unwrap().system;
        c.eq(
            verdict(&a),
            expected,
            &format!("pendulum {label}, original"),
        );
        c.eq(
            verdict(&first),
            expected,
            &format!("pendulum {label}, first order"),
        );
    }
    let cmat = example_1_6_cc();
    let ab = example_1_6_ab();
    let (vc, vab) = (verdict(&cmat), verdict(&ab));
    c.eq(vc, Verdict::TorsionFree, "C presentation");
    c.eq(vab, vc, "A, B presentation agrees with C");
    c
}

/// Write past the test harness's output capture, so the per-criterion lines
/// show up in a plain `cargo test` log.
fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Checks); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = Vec::new();
    for (k, f) in criteria {
        let start = std::time::Instant::now();
        let checks = f();
        let status = if checks.0.is_empty() { "PASS" } else { "FAIL" };
        emit(&format!("criterion {k}: {status} ({:.2?})", start.elapsed()));
        for msg in &checks.0 {
            emit(&format!("    {msg}"));
        }
        if !checks.0.is_empty() {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
