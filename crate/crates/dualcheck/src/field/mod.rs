//! Exact arithmetic in the differential field `K = S(params)(x1..xn)`.

pub mod linalg;
mod poly;
mod ratfunc;
mod scalar;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use poly::{Monomial, Poly, Var};
pub use ratfunc::RatFunc;
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("derivation index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("variable {0} has no value at the evaluation point")]
    Unassigned(String),
}

/// Exponent vector of a derivative `d_μ`.
///
/// Ordered by total order first; ties are broken reverse lexicographically
/// (the smaller exponent in the first differing slot is the larger index),
/// matching the monomial order of [`Poly`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    /// From a list of zero-based derivation indices, e.g. `[0, 1]` is `d12`.
    pub fn from_indices(n: usize, idx: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &i in idx {
            v[i] += 1;
        }
        MultiIndex(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn plus_unit(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// `self − o` when componentwise nonnegative.
    pub fn checked_sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Product of binomials `C(μ, κ)`.
    pub fn binomial(&self, k: &MultiIndex) -> u64 {
        self.0
            .iter()
            .zip(&k.0)
            .map(|(&a, &b)| binomial(a as u64, b as u64))
            .product()
    }

    /// The sub-indices `κ ≤ μ` (componentwise).
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for k in 0..=e {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of length `n` with `|μ| = q`, in increasing order.
    pub fn all_of_order(n: usize, q: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, q: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(q);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=q {
                prefix.push(e);
                rec(n, q - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if q == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, q, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All multi-indices with `|μ| ≤ q`, in increasing order.
    pub fn all_up_to(n: usize, q: u32) -> Vec<MultiIndex> {
        (0..=q)
            .flat_map(|k| MultiIndex::all_of_order(n, k))
            .collect()
    }

    /// Zero-based derivation indices with multiplicity, e.g. `d112 → [0,0,1]`.
    pub fn to_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    pub fn as_monomial(&self) -> Monomial {
        Monomial::from_pairs(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| (Var::x(i), e))
                .collect(),
        )
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.order().cmp(&other.order()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return b.cmp(a);
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self
            .to_indices()
            .iter()
            .map(|i| (i + 1).to_string())
            .collect();
        write!(f, "[{}]", idx.join(","))
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}
