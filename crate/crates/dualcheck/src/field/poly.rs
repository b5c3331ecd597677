//! Sparse multivariate polynomials with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::Scalar;

/// A polynomial variable: either an independent coordinate `x^{i+1}` or a
/// named constant parameter. Coordinates sort before parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Zero-based coordinate index.
    X(u16),
    /// Named constant, killed by every derivation.
    P(Arc<str>),
}

impl Var {
    pub fn x(i: usize) -> Var {
        Var::X(i as u16)
    }

    pub fn param(name: &str) -> Var {
        Var::P(Arc::from(name))
    }

    pub fn is_coordinate(&self) -> bool {
        matches!(self, Var::X(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::P(p) => write!(f, "{p}"),
        }
    }
}

/// A power product, stored sparsely as `(var, exponent)` pairs sorted by var.
///
/// The ordering is degree reverse lexicographic where the smallest variable
/// (first coordinate) is the one inspected first on ties.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exp(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (v, e) in &self.0 {
            let f = other.exp(v);
            if f > 0 {
                out.push((v.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    /// Remove variable `v` entirely, returning its exponent and the rest.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                // Equal degrees make a one-sided exhaustion impossible unless
                // both are exhausted; keep the arms total anyway.
                (None, Some(_)) => return Ordering::Greater,
                (Some(_), None) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    // `self` carries a positive power of the smaller variable.
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {
                        if ea != eb {
                            return eb.cmp(ea);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: map from monomial to nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Poly<S> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn term(c: S, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::term(S::one(), Monomial::var(v, 1))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    /// The value if the polynomial has no variables (zero included).
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> S {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(S::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, k: &S) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c.clone() * d.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scale so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        let lc = self.lc();
        if lc.is_zero() || lc.is_one() {
            self.clone()
        } else {
            self.scale(&lc.inv())
        }
    }

    /// `self` scaled by [`Scalar::content_scale`] of its coefficients.
    pub fn primitive(&self) -> Self {
        let coeffs: Vec<S> = self.terms.values().cloned().collect();
        self.scale(&S::content_scale(&coeffs))
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars().cloned()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// View as a univariate polynomial in `v` with polynomial coefficients.
    pub fn coeffs_in(&self, v: &Var) -> BTreeMap<u32, Poly<S>> {
        let mut out: BTreeMap<u32, Poly<S>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    pub fn derivative(&self, v: &Var) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let (_, rest) = m.split_off(v);
            let m2 = rest.mul(&Monomial::var(v.clone(), e - 1));
            out.add_term(m2, c.clone() * S::from_int(e as i64));
        }
        out
    }

    /// Evaluate with every variable assigned; `None` if one is missing.
    pub fn eval(&self, value: &dyn Fn(&Var) -> Option<S>) -> Option<S> {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let x = value(v)?;
                for _ in 0..*e {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let dinv = dc.inv();
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let m = rm.div(&dm)?;
            let k = rc * dinv.clone();
            r = r.sub(&d.mul_term(&m, &k));
            q.add_term(m, k);
        }
        Some(q)
    }

    fn largest_var(&self) -> Option<Var> {
        self.terms.keys().flat_map(|m| m.vars()).max().cloned()
    }

    /// Content with respect to `v`: gcd of the coefficients in `v`.
    fn content_in(&self, v: &Var) -> Self {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v).into_values() {
            g = Poly::gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Pseudo-remainder of `a` by `b` as polynomials in `v`.
    fn prem(a: &Self, b: &Self, v: &Var) -> Self {
        let db = b.degree_in(v);
        if db == 0 {
            // Division by a v-free polynomial always leaves zero remainder.
            return Poly::zero();
        }
        let lcb = b.coeffs_in(v).remove(&db).unwrap_or_default();
        let mut r = a.clone();
        while !r.is_zero() && r.contains_var(v) && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lcr = r.coeffs_in(v).remove(&dr).unwrap_or_default();
            let shift = Poly::term(S::one(), Monomial::var(v.clone(), dr - db));
            r = lcb.mul(&r).sub(&lcr.mul(&shift).mul(b));
        }
        r
    }

    /// Monic greatest common divisor (primitive PRS, recursive on variables).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        if a.num_terms() == 1 || b.num_terms() == 1 {
            let (mono, other) = if a.num_terms() == 1 { (a, b) } else { (b, a) };
            let mut g = mono.leading().unwrap().0.clone();
            for m in other.terms.keys() {
                g = g.gcd(m);
                if g.is_one() {
                    break;
                }
            }
            return Poly::term(S::one(), g);
        }
        if let Some(g) = heuristic::gcd(&a.primitive(), &b.primitive()) {
            return g.monic();
        }
        let va = a.largest_var().unwrap();
        let vb = b.largest_var().unwrap();
        let v = va.clone().max(vb.clone());
        if !a.contains_var(&v) {
            return Poly::gcd(a, &b.content_in(&v));
        }
        if !b.contains_var(&v) {
            return Poly::gcd(&a.content_in(&v), b);
        }
        let ca = a.content_in(&v);
        let cb = b.content_in(&v);
        let c = Poly::gcd(&ca, &cb);
        let mut p = a.div_exact(&ca).expect("content divides").primitive();
        let mut q = b.div_exact(&cb).expect("content divides").primitive();
        if p.degree_in(&v) < q.degree_in(&v) {
            std::mem::swap(&mut p, &mut q);
        }
        loop {
            let r = Poly::prem(&p, &q, &v);
            if r.is_zero() {
                break;
            }
            if !r.contains_var(&v) {
                q = Poly::one();
                break;
            }
            // Scalar content is invisible to `content_in`; strip it too so
            // coefficients stay small.
            let cr = r.content_in(&v);
            p = q;
            q = r.div_exact(&cr).expect("content divides").primitive();
        }
        let cq = q.content_in(&v);
        let q = q.div_exact(&cq).expect("content divides");
        c.mul(&q).monic()
    }

    /// Render with a custom variable namer.
    pub fn fmt_with(&self, name: &dyn Fn(&Var) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(format!("{a}"));
            }
            for (v, e) in m.pairs() {
                if *e == 1 {
                    parts.push(name(v));
                } else {
                    parts.push(format!("{}^{}", name(v), e));
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&|v| v.to_string()))
    }
}

/// Heuristic gcd of integer polynomials by evaluation at a large integer
/// (Char, Geddes and Gonnet). Each candidate is verified by exact division,
/// so a result is always correct; `None` sends the caller to the remainder
/// sequence.
mod heuristic {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Signed, Zero};

    use super::{Monomial, Poly, Var};
    use crate::field::Scalar;

    const ATTEMPTS: usize = 6;

    fn ints<S: Scalar>(p: &Poly<S>) -> Option<Vec<(Monomial, BigInt)>> {
        p.terms
            .iter()
            .map(|(m, c)| Some((m.clone(), c.to_bigint()?)))
            .collect()
    }

    fn from_ints<S: Scalar>(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Poly<S> {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, S::from_bigint(&c));
        }
        p
    }

    fn content(t: &[(Monomial, BigInt)]) -> BigInt {
        t.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    fn norm(t: &[(Monomial, BigInt)]) -> BigInt {
        t.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
    }

    fn largest_var(t: &[(Monomial, BigInt)]) -> Option<Var> {
        t.iter().flat_map(|(m, _)| m.vars()).max().cloned()
    }

    fn eval(t: &[(Monomial, BigInt)], v: &Var, xi: &BigInt) -> Vec<(Monomial, BigInt)> {
        let mut out: std::collections::BTreeMap<Monomial, BigInt> = Default::default();
        for (m, c) in t {
            let (e, rest) = m.split_off(v);
            *out.entry(rest).or_default() += c * xi.pow(e);
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Rebuild a polynomial in `v` from its value at `v = xi`, reading the
    /// coefficients as balanced base-`xi` digits.
    fn interpolate(
        mut h: Vec<(Monomial, BigInt)>,
        v: &Var,
        xi: &BigInt,
    ) -> Vec<(Monomial, BigInt)> {
        let half = xi / 2;
        let mut out = Vec::new();
        let mut e = 0u32;
        while !h.is_empty() {
            let mut next = Vec::with_capacity(h.len());
            for (m, c) in h {
                let mut r = c.mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                if !r.is_zero() {
                    out.push((m.mul(&Monomial::var(v.clone(), e)), r.clone()));
                }
                let q = (c - r) / xi;
                if !q.is_zero() {
                    next.push((m, q));
                }
            }
            h = next;
            e += 1;
        }
        out
    }

    fn int_gcd<S: Scalar>(
        f: &[(Monomial, BigInt)],
        g: &[(Monomial, BigInt)],
    ) -> Option<Vec<(Monomial, BigInt)>> {
        let (cf, cg) = (content(f), content(g));
        let c = cf.gcd(&cg);
        let Some(v) = largest_var(f).max(largest_var(g)) else {
            return Some(vec![(Monomial::one(), c)]);
        };
        let fp: Vec<_> = f.iter().map(|(m, k)| (m.clone(), k / &cf)).collect();
        let gp: Vec<_> = g.iter().map(|(m, k)| (m.clone(), k / &cg)).collect();
        if largest_var(&fp).is_none() || largest_var(&gp).is_none() {
            return Some(vec![(Monomial::one(), c)]);
        }
        let (fpoly, gpoly): (Poly<S>, Poly<S>) = (from_ints(fp.clone()), from_ints(gp.clone()));
        let b: BigInt = norm(&fp).min(norm(&gp)) * 2 + 29;
        let mut xi = b.clone().min(b.sqrt() * 99).max(BigInt::from(2));
        for _ in 0..ATTEMPTS {
            let (fe, ge) = (eval(&fp, &v, &xi), eval(&gp, &v, &xi));
            if !fe.is_empty() && !ge.is_empty() {
                if let Some(h) = int_gcd::<S>(&fe, &ge) {
                    let mut h = interpolate(h, &v, &xi);
                    let ch = content(&h);
                    if !ch.is_zero() {
                        let neg = h
                            .iter()
                            .max_by(|a, b| a.0.cmp(&b.0))
                            .is_some_and(|(_, k)| k.is_negative());
                        for (_, k) in h.iter_mut() {
                            *k /= &ch;
                            if neg {
                                *k = -&*k;
                            }
                        }
                        let hp: Poly<S> = from_ints(h.clone());
                        if fpoly.div_exact(&hp).is_some() && gpoly.div_exact(&hp).is_some() {
                            return Some(h.into_iter().map(|(m, k)| (m, k * &c)).collect());
                        }
                    }
                }
            }
            xi = &xi * 73794u32 * xi.sqrt().sqrt() / 27011u32 + BigInt::one();
        }
        None
    }

    pub(super) fn gcd<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> Option<Poly<S>> {
        let g = int_gcd::<S>(&ints(a)?, &ints(b)?)?;
        Some(from_ints(g))
    }
}
