use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use std::sync::LazyLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SIEVE_LIMIT: usize = 1_000_000;

static SMALL_PRIMES: LazyLock<Vec<u32>> = LazyLock::new(|| {
    let mut composite = vec![false; SIEVE_LIMIT + 1];
    let mut primes = Vec::with_capacity(80_000);
    for i in 2..=SIEVE_LIMIT {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= SIEVE_LIMIT {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
});

/// All primes up to 10⁶, ascending.
pub fn small_primes() -> &'static [u32] {
    &SMALL_PRIMES
}

/// A rational prime, verified on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Self> {
        if is_prime_u64(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n.to_string()))
        }
    }

    pub(crate) const fn new_unchecked(n: u64) -> Self {
        Prime(n)
    }

    pub const TWO: Prime = Prime(2);

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        Prime::new(n)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Witnesses 2..37 are deterministic for every n < 3.3·10²⁴, so in particular
// for all 64-bit inputs.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality test; deterministic below 2⁶⁴, Miller–Rabin with a fixed
/// witness set above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // Extra fixed witnesses beyond the 64-bit set.
    let extra = [41u64, 43, 47, 53, 59, 61, 67, 71];
    'witness: for &a in MR_BASES.iter().chain(extra.iter()) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Prime {
    let mut k = n + 1;
    while !is_prime_u64(k) {
        k += 1;
    }
    Prime(k)
}

/// Primes strictly below `bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<Prime> {
    if bound as usize <= SIEVE_LIMIT + 1 {
        return small_primes()
            .iter()
            .take_while(|&&p| (p as u64) < bound)
            .map(|&p| Prime(p as u64))
            .collect();
    }
    (2..bound).filter(|&k| is_prime_u64(k)).map(Prime).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let naive: Vec<u32> = (2u32..2000)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        let sieved: Vec<u32> = small_primes().iter().copied().take_while(|&p| p < 2000).collect();
        assert_eq!(naive, sieved);
        assert_eq!(small_primes().len(), 78_498);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = small_primes();
        let mut idx = 0;
        for n in 0u64..200_000 {
            let expected = idx < primes.len() && primes[idx] as u64 == n;
            if expected {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), expected, "n = {n}");
        }
    }

    #[test]
    fn large_primes_and_composites() {
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        let mersenne_127 = (BigUint::one() << 127) - BigUint::one();
        assert!(is_prime(&mersenne_127));
        assert!(!is_prime(&(&mersenne_127 * BigUint::from(3u8))));
    }

    #[test]
    fn prime_newtype_rejects_composites() {
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Prime::new(97).unwrap().get(), 97);
        assert_eq!(next_prime(7).get(), 11);
        assert_eq!(primes_below(12).len(), 5);
    }
}
