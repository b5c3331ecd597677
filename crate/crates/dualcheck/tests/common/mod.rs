#![allow(dead_code)]

use dualcheck::field::MultiIndex;
use dualcheck::{OpMatrix, OreOperator, RatFunc};

/// `Σ c·d_I` with 1-based derivative indices.
pub fn op(n: usize, terms: &[(i64, &[usize])]) -> OreOperator {
    op_rf(
        n,
        &terms
            .iter()
            .map(|(c, i)| (RatFunc::int(*c), *i))
            .collect::<Vec<_>>(),
    )
}

pub fn op_rf(n: usize, terms: &[(RatFunc, &[usize])]) -> OreOperator {
    let mut p = OreOperator::zero(n);
    for (c, idx) in terms {
        let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        p.add_term(MultiIndex::from_indices(n, &zero_based), c.clone());
    }
    p
}

pub fn mat(n: usize, cols: usize, rows: Vec<Vec<OreOperator>>) -> OpMatrix {
    OpMatrix::from_rows(n, cols, rows)
}

pub fn z(n: usize) -> OreOperator {
    OreOperator::zero(n)
}

pub fn one(n: usize) -> OreOperator {
    OreOperator::one(n)
}
