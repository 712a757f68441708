use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Least nonnegative `x` with `x ≡ residue (mod modulus)` for every pair.
///
/// Moduli must be positive and pairwise coprime. An empty system yields 0.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (modulus, residue) in congruences {
        if !modulus.is_positive() {
            return Err(Error::NonPositiveModulus(modulus.to_string()));
        }
        let egcd = m.extended_gcd(modulus);
        if !egcd.gcd.is_one() {
            return Err(Error::NonCoprimeModuli(m.to_string(), modulus.to_string()));
        }
        // x + m·t ≡ residue (mod modulus), with m·egcd.x ≡ 1
        let t = ((residue - &x) * &egcd.x).mod_floor(modulus);
        x += &m * t;
        m *= modulus;
        x = x.mod_floor(&m);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(pairs: &[(i64, i64)]) -> Vec<(BigInt, BigInt)> {
        pairs.iter().map(|&(m, r)| (BigInt::from(m), BigInt::from(r))).collect()
    }

    fn brute(pairs: &[(i64, i64)]) -> i64 {
        let prod: i64 = pairs.iter().map(|p| p.0).product();
        (0..prod)
            .find(|x| pairs.iter().all(|&(m, r)| (x - r).rem_euclid(m) == 0))
            .unwrap()
    }

    #[test]
    fn crt_examples() {
        // brute-force scan of 0..44
        assert_eq!(brute(&[(9, 3), (5, 1)]), 21);
        assert_eq!(crt(&sys(&[(9, 3), (5, 1)])).unwrap(), BigInt::from(21));
        assert_eq!(crt(&sys(&[(7, 0)])).unwrap(), BigInt::from(0));
        assert_eq!(crt(&sys(&[(4, 1), (9, 1)])).unwrap(), BigInt::from(1));
        assert_eq!(crt(&[]).unwrap(), BigInt::from(0));
    }

    #[test]
    fn crt_handles_negative_residues() {
        assert_eq!(crt(&sys(&[(5, -1), (7, -10)])).unwrap(), BigInt::from(4));
    }

    #[test]
    fn crt_rejects_bad_moduli() {
        assert!(matches!(crt(&sys(&[(6, 1), (4, 3)])), Err(Error::NonCoprimeModuli(..))));
        assert!(matches!(crt(&sys(&[(0, 1)])), Err(Error::NonPositiveModulus(_))));
    }

    #[test]
    fn crt_matches_brute_force_on_small_systems() {
        let moduli = [3i64, 4, 5, 7, 11];
        for r0 in 0..3 {
            for r1 in 0..4 {
                for r2 in [0, 2, 4] {
                    let pairs = [(moduli[0], r0), (moduli[1], r1), (moduli[2], r2)];
                    assert_eq!(crt(&sys(&pairs)).unwrap(), BigInt::from(brute(&pairs)));
                }
            }
        }
    }
}
