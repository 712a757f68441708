use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::primes::{is_prime, is_prime_u64, mul_mod, small_primes, Prime};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Signed prime factorization of a nonzero rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `+1` or `-1`.
    pub sign: i8,
    /// Nonzero exponents keyed by prime.
    pub factors: BTreeMap<Prime, i64>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn product(&self) -> Rational {
        let mut num = BigInt::from(self.sign);
        let mut den = BigInt::one();
        for (p, &e) in &self.factors {
            let pp = p.to_bigint().pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        Rational::new(num, den)
    }

    pub fn exponent(&self, p: Prime) -> i64 {
        self.factors.get(&p).copied().unwrap_or(0)
    }
}

/// Factors a nonzero rational into `sign · ∏ p^e`.
pub fn factorize(r: &Rational) -> Result<Factorization> {
    if r.numer().is_zero() {
        return Err(Error::Zero("factorize"));
    }
    let sign = if r.numer().sign() == Sign::Minus { -1 } else { 1 };
    let mut factors = BTreeMap::new();
    for (p, e) in factor_natural(r.numer().magnitude())? {
        factors.insert(p, e as i64);
    }
    for (p, e) in factor_natural(r.denom().magnitude())? {
        // numerator and denominator are coprime
        factors.insert(p, -(e as i64));
    }
    Ok(Factorization { sign, factors })
}

/// Factors a nonzero integer.
pub fn factorize_integer(n: &BigInt) -> Result<Factorization> {
    factorize(&Rational::from_integer(n.clone()))
}

/// Trial division up to 10⁶, then Pollard–Brent rho on the cofactor.
pub(crate) fn factor_natural(n: &BigUint) -> Result<BTreeMap<Prime, u32>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return Err(Error::Zero("factorize"));
    }
    if let Ok(small) = u64::try_from(n) {
        factor_u64(small, &mut out);
        return Ok(out);
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            out.insert(Prime::new_unchecked(p as u64), e);
            if let Ok(small) = u64::try_from(&rest) {
                factor_u64(small, &mut out);
                return Ok(out);
            }
        }
    }
    split_big(rest, &mut out)?;
    Ok(out)
}

fn split_big(n: BigUint, out: &mut BTreeMap<Prime, u32>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Ok(small) = u64::try_from(&n) {
        factor_u64(small, out);
        return Ok(());
    }
    if is_prime(&n) {
        return Err(Error::FactorTooLarge(n.to_string()));
    }
    let d = rho_big(&n);
    let q = &n / &d;
    split_big(d, out)?;
    split_big(q, out)
}

fn factor_u64(mut n: u64, out: &mut BTreeMap<Prime, u32>) {
    for &p in small_primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            *out.entry(Prime::new_unchecked(p)).or_insert(0) += e;
        }
    }
    split_u64(n, out);
}

fn split_u64(n: u64, out: &mut BTreeMap<Prime, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(Prime::new_unchecked(n)).or_insert(0) += 1;
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

/// Returns a nontrivial divisor of an odd composite `n`.
fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut g, mut r, mut q) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho always finds a divisor of a composite")
}

fn rho_big(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u8);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = two.clone();
        let mut y = two.clone();
        let mut g = BigUint::one();
        while g.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
        c += 1u8;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn map(pairs: &[(u64, i64)]) -> BTreeMap<Prime, i64> {
        pairs.iter().map(|&(p, e)| (Prime::new(p).unwrap(), e)).collect()
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&rat(1155)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, map(&[(3, 1), (5, 1), (7, 1), (11, 1)]));

        let f = factorize(&rat(1)).unwrap();
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());

        let f = factorize(&ratio(-8, 9)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, map(&[(2, 3), (3, -2)]));

        assert!(factorize(&rat(0)).is_err());
    }

    #[test]
    fn factors_semiprimes_beyond_trial_division() {
        // 1000003 · 1000033, both above the sieve bound
        let n = 1_000_003u64 * 1_000_033;
        let f = factorize(&Rational::from_integer(BigInt::from(n))).unwrap();
        assert_eq!(f.factors, map(&[(1_000_003, 1), (1_000_033, 1)]));
        // 2^64 + 1 = 274177 · 67280421310721 (needs the big-integer path)
        let n = (BigInt::one() << 64) + 1;
        let f = factorize_integer(&n).unwrap();
        assert_eq!(f.factors, map(&[(274_177, 1), (67_280_421_310_721, 1)]));
        assert_eq!(f.product(), Rational::from_integer(n));
    }

    #[test]
    fn rejects_prime_factor_above_64_bits() {
        let m127 = (BigInt::one() << 127) - 1;
        assert!(matches!(factorize_integer(&m127), Err(Error::FactorTooLarge(_))));
    }

    #[test]
    fn rho_splits_squares_of_large_primes() {
        let p = 4_294_967_311u64; // next prime after 2^32
        let f = factorize_integer(&(BigInt::from(p) * BigInt::from(p))).unwrap();
        assert_eq!(f.factors, map(&[(p, 2)]));
    }
}
