use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::primes::{is_prime_u64, pow_mod, Prime};
use crate::arith::{split_unit, Rational};
use crate::error::{Error, Result};
use crate::places::Place;

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::NotPrime(format!("{p} (odd prime required)")));
    }
    let r = a.mod_floor(&BigInt::from(p));
    let r = u64::try_from(&r).expect("residue below p fits in u64");
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

pub(crate) fn legendre_odd(a: &BigInt, p: Prime) -> i8 {
    legendre(a, p.get()).expect("odd prime")
}

/// Decides whether a nonzero rational is a square in the completion at `v`.
pub fn is_square_local(a: &Rational, v: &Place) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Zero("is_square_local"));
    }
    match *v {
        Place::Infinite => Ok(a.is_positive()),
        Place::Finite(p) => {
            let (val, unit) = split_unit(a, p);
            if val % 2 != 0 {
                return Ok(false);
            }
            if p.is_odd() {
                Ok(legendre_odd(&unit, p) == 1)
            } else {
                Ok(unit.mod_floor(&BigInt::from(8)) == BigInt::from(1))
            }
        }
    }
}

/// Smallest generator of the multiplicative group modulo an odd prime,
/// found by checking element orders directly.
pub fn primitive_root(q: Prime) -> u64 {
    let q = q.get();
    if q == 2 {
        return 1;
    }
    let order = q - 1;
    let mut prime_divisors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            prime_divisors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    (2..q)
        .find(|&g| prime_divisors.iter().all(|&r| pow_mod(g, order / r, q) != 1))
        .expect("cyclic group has a generator")
}
