//! The exact scalar abstraction underlying every coefficient.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// An exact field of characteristic zero.
///
/// Everything in the crate is generic over this trait; [`crate::Q`] is the
/// only implementation shipped. Floating point types are deliberately not
/// supported because equality decisions must be exact.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + Debug + Display + Eq + Ord + Hash + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("i64 fits every exact scalar")
    }

    /// Parse a literal such as `3`, `-7` or `2/5`.
    fn parse_literal(s: &str) -> Option<Self>;

    fn is_integer(&self) -> bool;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// A nonzero `k` such that `k · coeffs` is small, used to keep remainder
    /// sequences in check. Any nonzero choice is correct; the default makes
    /// the first coefficient one.
    fn content_scale(coeffs: &[Self]) -> Self {
        coeffs
            .first()
            .filter(|c| !c.is_zero())
            .map_or_else(Self::one, Self::inv)
    }

    /// The value as an integer, when it is one. Enables the integer gcd
    /// heuristic; `None` everywhere simply disables it.
    fn to_bigint(&self) -> Option<BigInt> {
        None
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::parse_literal(&v.to_string()).expect("integers are literals")
    }
}

impl Scalar for BigRational {
    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str_radix(n.trim(), 10).ok()?;
                let d = BigInt::from_str_radix(d.trim(), 10).ok()?;
                if d.is_zero() {
                    None
                } else {
                    Some(BigRational::new(n, d))
                }
            }
            None => BigInt::from_str_radix(s, 10)
                .ok()
                .map(BigRational::from_integer),
        }
    }

    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }

    fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    /// `lcm(denominators) / gcd(numerators)`: the primitive integer form.
    fn content_scale(coeffs: &[Self]) -> Self {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in coeffs {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        if num.is_zero() {
            return Self::one();
        }
        BigRational::new(den, num)
    }
}
