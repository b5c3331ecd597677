//! Canonical rational functions over `S(params)(x1..xn)`.

use std::collections::BTreeMap;
use std::fmt;

use super::{FieldError, Monomial, Poly, Scalar, Var};

/// Element of the differential field `K`.
///
/// Invariant: `gcd(num, den) = 1`, the denominator is nonzero with leading
/// coefficient one, and zero is stored as `0/1`. Structural equality is
/// therefore field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<S: Scalar> {
    num: Poly<S>,
    den: Poly<S>,
}

impl<S: Scalar> Default for RatFunc<S> {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl<S: Scalar> RatFunc<S> {
    /// Build `num/den` in canonical form.
    pub fn normalize(num: Poly<S>, den: Poly<S>) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly<S>, den: Poly<S>) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.as_constant() {
            let num = if c.is_one() { num } else { num.scale(&c.inv()) };
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.lc();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let k = lc.inv();
            RatFunc {
                num: num.scale(&k),
                den: den.scale(&k),
            }
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(c: i64) -> Self {
        RatFunc::constant(S::from_int(c))
    }

    /// The coordinate `x^{i+1}` (zero-based index).
    pub fn x(i: usize) -> Self {
        RatFunc::from_poly(Poly::var(Var::x(i)))
    }

    pub fn param(name: &str) -> Self {
        RatFunc::from_poly(Poly::var(Var::param(name)))
    }

    pub fn from_poly(p: Poly<S>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly<S> {
        &self.num
    }

    pub fn denom(&self) -> &Poly<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<S> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// True when no coordinate occurs, so every derivation kills it.
    pub fn is_x_free(&self) -> bool {
        let free = |p: &Poly<S>| p.terms().all(|(m, _)| m.vars().all(|v| !v.is_coordinate()));
        free(&self.num) && free(&self.den)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    /// Size measure used for deterministic pivot choice.
    pub fn complexity(&self) -> (u32, usize) {
        (
            self.num.total_degree() + self.den.total_degree(),
            self.num.num_terms() + self.den.num_terms(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFunc {
                    num: self.num.add(&o.num),
                    den: Poly::one(),
                };
            }
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        Self::reduce(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc {
                num: self.num.mul(&o.num),
                den: Poly::one(),
            };
        }
        // Cross-cancel; inputs are already reduced.
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = o.den.div_exact(&g1).unwrap();
        let c = o.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.lc();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let k = lc.inv();
            RatFunc {
                num: num.scale(&k),
                den: den.scale(&k),
            }
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        let lc = self.num.lc().inv();
        Ok(RatFunc {
            num: self.den.scale(&lc),
            den: self.num.scale(&lc),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Derivative with respect to any variable (parameters included).
    pub fn diff_var(&self, v: &Var) -> Self {
        if self.den.is_one() {
            return RatFunc::from_poly(self.num.derivative(v));
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        Self::reduce(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    /// `∂_i` with a zero-based coordinate index; parameters are constants.
    pub fn d(&self, i: usize) -> Self {
        self.diff_var(&Var::x(i))
    }

    /// `∂_i f` for `1 ≤ i ≤ n`.
    pub fn partial(&self, i: usize, n: usize) -> Result<Self, FieldError> {
        if i == 0 || i > n {
            return Err(FieldError::IndexOutOfRange { index: i, n });
        }
        Ok(self.d(i - 1))
    }

    /// Exact value at a point assigning every variable that occurs.
    pub fn eval(&self, point: &BTreeMap<Var, S>) -> Result<S, FieldError> {
        let look = |v: &Var| point.get(v).cloned();
        let missing = || {
            self.vars()
                .into_iter()
                .find(|v| !point.contains_key(v))
                .map(|v| FieldError::Unassigned(v.to_string()))
                .unwrap_or(FieldError::ZeroDenominator)
        };
        let n = self.num.eval(&look).ok_or_else(missing)?;
        let d = self.den.eval(&look).ok_or_else(missing)?;
        if d.is_zero() {
            return Err(FieldError::PoleAtPoint);
        }
        Ok(n / d)
    }

    /// Simultaneous substitution of variables by rational functions.
    /// Variables mapped to `None` are kept.
    pub fn substitute(&self, map: &dyn Fn(&Var) -> Option<RatFunc<S>>) -> Result<Self, FieldError> {
        let sub_poly = |p: &Poly<S>| -> RatFunc<S> {
            let mut acc = RatFunc::zero();
            for (m, c) in p.terms() {
                let mut kept = Vec::new();
                let mut t = RatFunc::constant(c.clone());
                for (v, e) in m.pairs() {
                    match map(v) {
                        Some(r) => t = t.mul(&r.pow(*e)),
                        None => kept.push((v.clone(), *e)),
                    }
                }
                let t = t.mul(&RatFunc::from_poly(Poly::term(
                    S::one(),
                    Monomial::from_pairs(kept),
                )));
                acc = acc.add(&t);
            }
            acc
        };
        let n = sub_poly(&self.num);
        let d = sub_poly(&self.den);
        if d.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        n.div(&d)
    }

    pub fn fmt_with(&self, name: &dyn Fn(&Var) -> String) -> String {
        let n = self.num.fmt_with(name);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.fmt_with(name);
        let wrap = |p: &Poly<S>, s: String| {
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        let dwrap = if self.den.num_terms() > 1
            || self
                .den
                .terms()
                .any(|(m, c)| !c.is_one() || m.degree() > 1 || m.pairs().len() > 1)
        {
            format!("({d})")
        } else {
            d
        };
        format!("{}/{}", wrap(&self.num, n), dwrap)
    }
}

impl<S: Scalar> fmt::Display for RatFunc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&|v| v.to_string()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $call:expr) => {
        impl<S: Scalar> std::ops::$tr<&RatFunc<S>> for &RatFunc<S> {
            type Output = RatFunc<S>;
            fn $m(self, o: &RatFunc<S>) -> RatFunc<S> {
                $call(self, o)
            }
        }
        impl<S: Scalar> std::ops::$tr<RatFunc<S>> for RatFunc<S> {
            type Output = RatFunc<S>;
            fn $m(self, o: RatFunc<S>) -> RatFunc<S> {
                $call(&self, &o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RatFunc<S>, b: &RatFunc<S>| a.add(b));
forward_binop!(Sub, sub, |a: &RatFunc<S>, b: &RatFunc<S>| a.sub(b));
forward_binop!(Mul, mul, |a: &RatFunc<S>, b: &RatFunc<S>| a.mul(b));

impl<S: Scalar> std::ops::Neg for RatFunc<S> {
    type Output = RatFunc<S>;
    fn neg(self) -> RatFunc<S> {
        RatFunc::neg(&self)
    }
}

impl<S: Scalar> std::ops::Neg for &RatFunc<S> {
    type Output = RatFunc<S>;
    fn neg(self) -> RatFunc<S> {
        RatFunc::neg(self)
    }
}
