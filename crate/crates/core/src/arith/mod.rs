//! Exact arithmetic over the integers and rationals.
//!
//! Every field element is a [`Rational`], an exact reduced fraction of
//! arbitrary-precision integers. On top of that this module provides prime
//! testing, factorization of rationals, p-adic valuations, the Chinese
//! remainder theorem and the quadratic residue tests used by the local
//! Hilbert symbol.

mod crt;
mod factor;
mod primes;
pub(crate) mod residue;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use crate::arith::crt::crt;
pub use crate::arith::factor::{factorize, factorize_integer, Factorization};
pub use crate::arith::primes::{
    is_prime, is_prime_u64, next_prime, primes_below, small_primes, Prime,
};
pub use crate::arith::residue::{is_square_local, legendre, primitive_root};
use crate::error::{Error, Result};

/// Exact reduced fraction; the denominator is always positive.
pub type Rational = num_rational::BigRational;

/// p-adic valuation extended by `+∞`, the value taken at zero.
///
/// The derived ordering places every finite value below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("+inf"),
        }
    }
}

/// Exponent of `p` in the factorization of a nonzero rational.
pub fn valuation(r: &Rational, p: Prime) -> Result<i64> {
    if r.is_zero() {
        return Err(Error::Zero("valuation of zero"));
    }
    Ok(int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64)
}

/// Valuation with the `+∞` convention at zero.
pub fn valuation_ext(r: &Rational, p: Prime) -> Valuation {
    match valuation(r, p) {
        Ok(v) => Valuation::Finite(v),
        Err(_) => Valuation::Infinity,
    }
}

/// Exponent of `p` in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p.get());
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// Splits a nonzero rational as `p^v · n / d` with `p ∤ n·d` and returns
/// `(v, n·d)`. The product `n·d` has the same square class as the unit part
/// `n/d`, so residue symbols may be taken on it directly.
pub(crate) fn split_unit(r: &Rational, p: Prime) -> (i64, BigInt) {
    let pb = BigInt::from(p.get());
    let vn = int_valuation(r.numer(), p);
    let vd = int_valuation(r.denom(), p);
    let n = r.numer() / pb.pow(vn as u32);
    let d = r.denom() / pb.pow(vd as u32);
    (vn as i64 - vd as i64, n * d)
}

/// Parses `"p/q"` or an integer string; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Renders a rational as `"num/den"`, the interchange form.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn support(r: &Rational) -> Result<Vec<Prime>> {
    Ok(factorize(r)?.factors.keys().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&ratio(1, 8), p(2)).unwrap(), -3);
        assert_eq!(valuation(&rat(1155), p(5)).unwrap(), 1);
        assert_eq!(valuation(&ratio(7, 3), p(5)).unwrap(), 0);
        assert!(valuation(&rat(0), p(5)).is_err());
        assert_eq!(valuation_ext(&rat(0), p(5)), Valuation::Infinity);
    }

    #[test]
    fn infinity_dominates_finite_values() {
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinity);
        assert_eq!(Valuation::Finite(3).min(Valuation::Infinity), Valuation::Finite(3));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-8/12").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert_eq!(format_rational(&rat(7)), "7/1");
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn split_unit_strips_prime() {
        let (v, u) = split_unit(&ratio(-45, 14), p(3));
        assert_eq!(v, 2);
        assert_eq!(u, BigInt::from(-5 * 14));
    }
}
