//! Exactness of the long sequence
//! `0 → R7 → J7(1) → J3(27) → J2(60) → J1(46) → F3 → 0` for the Macaulay
//! system, built from the Janet operators. Sparse elimination keeps the
//! 600 × 540 rank cheap, so the check runs with the default suite.

use dualcheck::field::linalg::{self, Echelon};
use dualcheck::geom::macaulay;
use dualcheck::janet::jet::decode_row;
use dualcheck::janet::prolong;
use dualcheck::{OpMatrix, OreOperator};

/// All first-order left syzygies of `a`, one row per basis vector of the
/// left kernel of its first prolongation.
fn first_order_syzygies(a: &OpMatrix) -> OpMatrix {
    let n = a.n();
    let jm = prolong(a, 1);
    let rows = linalg::left_kernel(&jm.rows, jm.ncols())
        .into_iter()
        .map(|v| {
            let mut row = vec![OreOperator::zero(n); a.nrows()];
            for (i, c) in v {
                let (tau, nu) = &jm.row_labels[i];
                row[*tau].add_term(nu.clone(), c);
            }
            row
        })
        .collect();
    OpMatrix::from_rows(n, a.nrows(), rows)
}

fn prolonged_rank(a: &OpMatrix, r: u32) -> (usize, usize, usize) {
    let jm = prolong(a, r);
    (jm.nrows(), jm.ncols(), linalg::rank(&jm.rows))
}

#[test]
fn macaulay_janet_sequence() {
    let a = macaulay();
    // R4: every equation of order ≤ 4 obtained by prolonging twice
    let jm = prolong(&a, 2);
    let mut e = Echelon::new();
    for row in jm.rows.clone() {
        e.insert(row);
    }
    let d0 = OpMatrix::from_rows(
        3,
        1,
        e.rows()
            .iter()
            .map(|v| decode_row(&jm.space, 3, v))
            .collect(),
    );
    assert_eq!(d0.nrows(), 27);

    let d1 = first_order_syzygies(&d0);
    let d2 = first_order_syzygies(&d1);
    let d3 = first_order_syzygies(&d2);
    assert_eq!([d1.nrows(), d2.nrows(), d3.nrows()], [60, 46, 12]);
    assert!(d1.mul(&d0).unwrap().is_zero());
    assert!(d2.mul(&d1).unwrap().is_zero());
    assert!(d3.mul(&d2).unwrap().is_zero());

    // J7(1) → J3(27): rank 120 − dim R7
    let (r0, c0, k0) = prolonged_rank(&d0, 3);
    assert_eq!((r0, c0), (540, 120));
    assert_eq!(k0, 112);
    // J3(27) → J2(60): the 600 × 540 matrix
    let (r1, c1, k1) = prolonged_rank(&d1, 2);
    assert_eq!((r1, c1), (600, 540));
    assert_eq!(k1, 540 - k0);
    // J2(60) → J1(46)
    let (r2, c2, k2) = prolonged_rank(&d2, 1);
    assert_eq!((r2, c2), (184, 600));
    assert_eq!(k2, 600 - k1);
    // J1(46) → F3 is onto a 12-dimensional fiber
    assert_eq!(184 - k2, 12);
    assert_eq!(8 - 120 + 540 - 600 + 184 - 12, 0);
}
