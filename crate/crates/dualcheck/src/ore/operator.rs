use std::collections::BTreeMap;
use std::fmt;

use crate::field::{MultiIndex, RatFunc, Scalar, Var};

use super::OreError;

/// Linear differential operator `Σ a^μ d_μ` in normal form (coefficients
/// on the left). Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OreOperator<S: Scalar> {
    n: usize,
    terms: BTreeMap<MultiIndex, RatFunc<S>>,
}

impl<S: Scalar> OreOperator<S> {
    pub fn zero(n: usize) -> Self {
        OreOperator {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, RatFunc::one())
    }

    /// Zero-order operator: multiplication by `a`.
    pub fn scalar(n: usize, a: RatFunc<S>) -> Self {
        Self::monomial(n, MultiIndex::zero(n), a)
    }

    pub fn int(n: usize, c: i64) -> Self {
        Self::scalar(n, RatFunc::int(c))
    }

    /// `a · d_μ`.
    pub fn monomial(n: usize, mu: MultiIndex, a: RatFunc<S>) -> Self {
        assert_eq!(mu.n(), n, "multi-index length must equal n");
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(mu, a);
        }
        OreOperator { n, terms }
    }

    /// `d_i` for a zero-based index.
    pub fn d(n: usize, i: usize) -> Self {
        Self::monomial(n, MultiIndex::unit(n, i), RatFunc::one())
    }

    /// `d_{i j ...}` from zero-based indices.
    pub fn dd(n: usize, idx: &[usize]) -> Self {
        Self::monomial(n, MultiIndex::from_indices(n, idx), RatFunc::one())
    }

    pub fn from_terms(n: usize, it: impl IntoIterator<Item = (MultiIndex, RatFunc<S>)>) -> Self {
        let mut p = Self::zero(n);
        for (mu, a) in it {
            p.add_term(mu, a);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &RatFunc<S>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mu: &MultiIndex) -> RatFunc<S> {
        self.terms.get(mu).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `None` encodes the order `−∞` of the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    /// Highest term in the multi-index order.
    pub fn leading(&self) -> Option<(&MultiIndex, &RatFunc<S>)> {
        self.terms.iter().next_back()
    }

    /// True when every coefficient is free of the coordinates, so the
    /// operator commutes with every other such operator.
    pub fn is_constant_coeff(&self) -> bool {
        self.terms.values().all(RatFunc::is_x_free)
    }

    pub fn add_term(&mut self, mu: MultiIndex, a: RatFunc<S>) {
        if a.is_zero() {
            return;
        }
        match self.terms.entry(mu) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(a);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&a);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, o: &Self) -> Result<(), OreError> {
        if self.n != o.n {
            Err(OreError::DimensionMismatch(format!(
                "n = {} vs n = {}",
                self.n, o.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (mu, a) in &o.terms {
            out.add_term(mu.clone(), a.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        OreOperator {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Left multiplication by a field element: `a · P`.
    pub fn scale_left(&self, a: &RatFunc<S>) -> Self {
        if a.is_zero() {
            return Self::zero(self.n);
        }
        OreOperator {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), a.mul(c)))
                .collect(),
        }
    }

    /// Composition `self ∘ o`, checked.
    pub fn op_mul(&self, o: &Self) -> Result<Self, OreError> {
        self.check(o)?;
        Ok(self.compose(o))
    }

    /// Composition `self ∘ o` via `d^μ a = Σ_κ C(μ,κ) (∂^κ a) d^{μ−κ}`.
    pub fn compose(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "operators over different n");
        let n = self.n;
        let mut out = Self::zero(n);
        if self.is_zero() || o.is_zero() {
            return out;
        }
        let o_const = o.is_constant_coeff();
        let mut cache: BTreeMap<(MultiIndex, MultiIndex), RatFunc<S>> = BTreeMap::new();
        for (mu, a) in &self.terms {
            for (nu, b) in &o.terms {
                if o_const {
                    out.add_term(mu.add(nu), a.mul(b));
                    continue;
                }
                for kappa in mu.divisors() {
                    let db = cache
                        .entry((nu.clone(), kappa.clone()))
                        .or_insert_with(|| derive(b, &kappa))
                        .clone();
                    if db.is_zero() {
                        continue;
                    }
                    let c = mu.binomial(&kappa);
                    let rest = mu.checked_sub(&kappa).unwrap();
                    out.add_term(rest.add(nu), a.mul(&db).scale(&S::from_int(c as i64)));
                }
            }
        }
        out
    }

    /// Formal adjoint `Σ (−1)^{|μ|} d_μ ∘ a^μ` in normal form.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for (mu, a) in &self.terms {
            let sign = if mu.order() % 2 == 0 { 1 } else { -1 };
            if a.is_x_free() {
                out.add_term(mu.clone(), a.scale(&S::from_int(sign)));
                continue;
            }
            for kappa in mu.divisors() {
                let da = derive(a, &kappa);
                if da.is_zero() {
                    continue;
                }
                let c = mu.binomial(&kappa) as i64 * sign;
                out.add_term(mu.checked_sub(&kappa).unwrap(), da.scale(&S::from_int(c)));
            }
        }
        out
    }

    /// Apply to a function: `Σ a^μ ∂^μ f`.
    pub fn apply(&self, f: &RatFunc<S>) -> RatFunc<S> {
        let mut acc = RatFunc::zero();
        for (mu, a) in &self.terms {
            acc = acc.add(&a.mul(&derive(f, mu)));
        }
        acc
    }

    /// Substitute variables inside every coefficient.
    pub fn substitute(
        &self,
        map: &dyn Fn(&Var) -> Option<RatFunc<S>>,
    ) -> Result<Self, crate::field::FieldError> {
        let mut out = Self::zero(self.n);
        for (mu, a) in &self.terms {
            out.add_term(mu.clone(), a.substitute(map)?);
        }
        Ok(out)
    }

    /// Coefficient `d_μ`-wise map.
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc<S>) -> RatFunc<S>) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(m, a)| (m.clone(), f(a))))
    }

    /// Render as `c*d[i,j] + ...` with the given variable namer.
    pub fn fmt_with(&self, name: &dyn Fn(&Var) -> String) -> String {
        super::print::format_terms(
            self.terms
                .iter()
                .rev()
                .map(|(mu, a)| (a.clone(), super::print::dterm(mu, None))),
            name,
        )
    }
}

impl<S: Scalar> fmt::Display for OreOperator<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&|v| v.to_string()))
    }
}

/// `∂^κ f`.
pub fn derive<S: Scalar>(f: &RatFunc<S>, kappa: &MultiIndex) -> RatFunc<S> {
    let mut g = f.clone();
    for (i, &e) in kappa.exps().iter().enumerate() {
        for _ in 0..e {
            if g.is_zero() {
                return g;
            }
            g = g.d(i);
        }
    }
    g
}
