use dualcheck::duality::parametrize;
use dualcheck::geom::demo::{fixture, run_demo, FIXTURE_IDS};
use dualcheck::geom::*;
use dualcheck::janet::{cc, delta_cohomology_dims, row_module_equal, SymbolTableau};
use dualcheck::{RatFunc, Q};

fn qi(v: i64) -> Q {
    Q::from_integer(v.into())
}

#[test]
fn symmetric_indexing() {
    assert_eq!(
        sym_pairs(3),
        vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    );
    for n in 1..=5 {
        for (k, (i, j)) in sym_pairs(n).into_iter().enumerate() {
            assert_eq!(sym_index(n, i, j), k);
            assert_eq!(sym_index(n, j, i), k);
        }
    }
    assert_eq!(sym_weights(2), vec![qi(1), qi(2), qi(1)]);
    let w = metric_weights(&Metric::minkowski(2));
    assert_eq!(w, vec![qi(1), qi(-2), qi(1)]);
}

#[test]
fn riemann_is_the_compatibility_of_killing() {
    for n in 2..=3 {
        let m = Metric::euclidean(n);
        let r = cc(&killing(&m), 4).unwrap();
        assert!(r.certified_complete);
        assert!(row_module_equal(&r.cc, &riemann_lin(&m), 0), "n = {n}");
    }
}

#[test]
fn killing_sequence_fibers_match_symbol_cohomology() {
    for n in 2..=6 {
        let f = killing_sequence_fibers(n);
        let k = killing(&Metric::euclidean(n));
        assert_eq!(k.ncols(), f[0]);
        assert_eq!(k.nrows(), f[1]);
        let tab = SymbolTableau::from_operator(&k).unwrap();
        let h = delta_cohomology_dims(&tab, [1], [2, 3]);
        assert_eq!(h[0].h, f[2], "curvature, n = {n}");
        assert_eq!(h[1].h, f[3], "Bianchi identities, n = {n}");
        if n <= 4 {
            assert_eq!(riemann_lin(&Metric::euclidean(n)).nrows(), f[2]);
        }
    }
}

#[test]
fn adjoint_killing_is_the_divergence() {
    // ad(killing) differs from Cauchy only by the pairing weights
    for n in 2..=4 {
        let k = killing(&Metric::euclidean(n));
        let (r, c) = diagonal_equivalence(&k.adjoint(), &cauchy(n)).expect("diagonal scaling");
        assert!(r.iter().all(|x| *x == qi(1)));
        for (idx, (i, j)) in sym_pairs(n).into_iter().enumerate() {
            let expected = if i == j {
                Q::new((-1).into(), 2.into())
            } else {
                qi(-1)
            };
            assert_eq!(c[idx], expected);
        }
    }
}

#[test]
fn diagonal_equivalence_rejects_non_diagonal_changes() {
    let a = cauchy(2);
    assert!(diagonal_equivalence(&a, &a).is_some());
    assert!(diagonal_equivalence(&a, &a.neg()).is_some());
    let swapped = a.select_rows(&[1, 0]);
    assert!(diagonal_equivalence(&a, &swapped).is_none());
}

#[test]
fn beltrami_parametrizes_three_dimensional_stress() {
    let d = parametrize(&cauchy(3), 4).unwrap();
    assert!(row_module_equal(&d.adjoint(), &beltrami().adjoint(), 0));
}

#[test]
fn maxwell_change_of_unknowns() {
    let t = maxwell_system()
        .transform_affine(&maxwell_change(), &[qi(0), qi(0), qi(0)])
        .unwrap();
    assert!(row_module_equal(&t, &maxwell_involutive(), 0));
    assert!(cauchy(3).mul(&maxwell_potentials()).unwrap().is_zero());
}

#[test]
fn conformal_generators_are_annihilated() {
    for m in [
        Metric::euclidean(2),
        Metric::euclidean(3),
        Metric::minkowski(4),
    ] {
        let op = conformal_killing(&m);
        let gens = conformal_generators(&m);
        let n = m.n();
        assert_eq!(gens.len(), (n + 1) * (n + 2) / 2);
        for g in &gens {
            assert!(op.apply(g).unwrap().iter().all(RatFunc::is_zero), "{m:?}");
        }
    }
    assert_eq!(conformal_killing(&Metric::minkowski(4)).nrows(), 9);
}

#[test]
fn dimension_helpers() {
    assert_eq!(dims(3, 1, 2), Dims { sym: 6, jet: 10 });
    assert_eq!(dims(4, 4, 1), Dims { sym: 4, jet: 20 });
    assert_eq!(euler_characteristic(&[8, 24, 24, 8]), 0);
    assert_eq!(killing_sequence_fibers(4), [4, 10, 20, 20]);
}

#[test]
fn every_demo_passes() {
    for id in FIXTURE_IDS {
        let fx = fixture(id).unwrap();
        assert_eq!(fx.unknowns.len(), fx.operator.ncols(), "{id}");
        let rows = run_demo(id).unwrap();
        assert!(!rows.is_empty(), "{id}");
        for r in rows {
            assert!(
                r.pass,
                "{id}: {} expected {} got {}",
                r.check, r.expected, r.actual
            );
        }
    }
    assert!(run_demo("nope").is_err());
}
