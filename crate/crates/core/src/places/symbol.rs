use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Place;
use crate::arith::residue::legendre_odd;
use crate::arith::{split_unit, Rational};
use crate::error::{Error, Result};

/// Local Hilbert symbol `(a, b)_v ∈ {+1, −1}`.
///
/// Writing `a = p^α u`, `b = p^β v` with unit parts `u`, `v`:
///
/// - odd `p`: `(−1)^{αβε(p)} (u/p)^β (v/p)^α`
/// - `p = 2`: `(−1)^{ε(u)ε(v) + αω(v) + βω(u)}`
/// - real place: `−1` iff both arguments are negative
///
/// where `ε(x) = (x − 1)/2` and `ω(x) = (x² − 1)/8` modulo 2.
pub fn hilbert(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("Hilbert symbol argument"));
    }
    let p = match *v {
        Place::Infinite => {
            return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 });
        }
        Place::Finite(p) => p,
    };
    let (alpha, u) = split_unit(a, p);
    let (beta, w) = split_unit(b, p);
    let (alpha, beta) = (alpha.rem_euclid(2), beta.rem_euclid(2));
    if p.is_odd() {
        let eps_p = ((p.get() - 1) / 2) % 2;
        let mut s = if alpha * beta * eps_p as i64 % 2 == 1 { -1 } else { 1 };
        if beta == 1 {
            s *= legendre_odd(&u, p);
        }
        if alpha == 1 {
            s *= legendre_odd(&w, p);
        }
        Ok(s)
    } else {
        let u8_ = mod8(&u);
        let w8 = mod8(&w);
        let e = eps(u8_) * eps(w8) + alpha as u64 * omega(w8) + beta as u64 * omega(u8_);
        Ok(if e % 2 == 1 { -1 } else { 1 })
    }
}

fn mod8(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(8)).to_u64().expect("residue mod 8")
}

fn eps(u: u64) -> u64 {
    ((u - 1) / 2) % 2
}

fn omega(u: u64) -> u64 {
    ((u * u - 1) / 8) % 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio, Prime};

    fn pl(p: u64) -> Place {
        Place::Finite(Prime::new(p).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(hilbert(&rat(-1), &rat(-1), &Place::Infinite).unwrap(), -1);
        assert_eq!(hilbert(&rat(2), &rat(5), &pl(5)).unwrap(), -1);
        assert_eq!(hilbert(&rat(-1), &rat(-1), &pl(2)).unwrap(), -1);
        assert_eq!(hilbert(&rat(2), &rat(3), &pl(2)).unwrap(), -1);
        assert_eq!(hilbert(&rat(3), &rat(3), &pl(3)).unwrap(), -1);
        assert_eq!(hilbert(&rat(5), &rat(5), &pl(5)).unwrap(), 1);
        assert_eq!(hilbert(&ratio(1, 2), &rat(3), &pl(2)).unwrap(), -1);
        assert!(hilbert(&rat(0), &rat(3), &pl(2)).is_err());
    }

    #[test]
    fn eps_omega_tables() {
        assert_eq!([1, 3, 5, 7].map(eps), [0, 1, 0, 1]);
        assert_eq!([1, 3, 5, 7].map(omega), [0, 1, 1, 0]);
    }
}
