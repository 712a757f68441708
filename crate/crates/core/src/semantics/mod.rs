//! Membership decided directly from valuations.
//!
//! These tests are the semantic counterparts of the formulas built in
//! [`crate::formulas`]: `J` (valuation at least 1 on `omega`), `J_n`
//! (at least `n`), the inverse sets (at most `−n`), disjointness of two
//! omegas, Campana sets `C_{S,n}`, S-integers, Campana sets pulled back along
//! a binary form, and the coordinate criterion for points of the projective
//! line. [`generate_trace_element`] samples elements of the trace set `S`
//! together with explicit witnesses.

mod campana;
mod form;
mod trace;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{crt, valuation, Rational};
use crate::error::{Error, Result};
use crate::places::{Abcd, PlaceSet};

pub use campana::{
    campana_member, campana_member_form, campana_via_coordinates, denominator_exponent,
    s_integer_member,
};
pub use form::BinaryForm;
pub use trace::{
    generate_trace_element, reduced_norm, trace_element_of, TraceSample, MAX_SAMPLER_ATTEMPTS,
};

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(())
}

/// `r ∈ J`: zero, or valuation at least 1 at every prime of `omega`.
pub fn in_j_for(omega: &PlaceSet, r: &Rational) -> bool {
    in_jn_for(omega, 1, r).expect("n = 1 is valid")
}

/// `r ∈ J_n`: zero, or valuation at least `n` at every prime of `omega`.
pub fn in_jn_for(omega: &PlaceSet, n: u32, r: &Rational) -> Result<bool> {
    check_n(n)?;
    if r.is_zero() {
        return Ok(true);
    }
    Ok(omega
        .primes()
        .into_iter()
        .all(|p| valuation(r, p).expect("nonzero") >= i64::from(n)))
}

/// `r ∈ (J_n ∖ {0})⁻¹`: nonzero with valuation at most `−n` on `omega`.
pub fn in_inv_jn_for(omega: &PlaceSet, n: u32, r: &Rational) -> Result<bool> {
    check_n(n)?;
    if r.is_zero() {
        return Ok(false);
    }
    Ok(omega
        .primes()
        .into_iter()
        .all(|p| valuation(r, p).expect("nonzero") <= -i64::from(n)))
}

pub fn in_j(params: &Abcd, r: &Rational) -> Result<bool> {
    Ok(in_j_for(&params.omega()?, r))
}

pub fn in_jn(params: &Abcd, n: u32, r: &Rational) -> Result<bool> {
    in_jn_for(&params.omega()?, n, r)
}

pub fn in_inv_jn(params: &Abcd, n: u32, r: &Rational) -> Result<bool> {
    in_inv_jn_for(&params.omega()?, n, r)
}

/// An element `z` with `z ∈ J` and `1 − z ∈ J′`, built by CRT as
/// `z ≡ 0` modulo the primes of `omega` and `z ≡ 1` modulo those of
/// `omega_prime`. `None` when the two sets share a prime, since then no such
/// element exists.
pub fn sum_witness(omega: &PlaceSet, omega_prime: &PlaceSet) -> Option<Rational> {
    if !omega.is_disjoint(omega_prime) {
        return None;
    }
    let system: Vec<(BigInt, BigInt)> = omega
        .primes()
        .into_iter()
        .map(|p| (p.to_bigint(), BigInt::zero()))
        .chain(
            omega_prime
                .primes()
                .into_iter()
                .map(|p| (p.to_bigint(), BigInt::one())),
        )
        .collect();
    let z = crt(&system).expect("distinct primes are coprime");
    Some(Rational::from_integer(z))
}

/// Whether `1 ∈ J + J′`, decided by checking the CRT witness.
pub fn one_in_sum(omega: &PlaceSet, omega_prime: &PlaceSet) -> bool {
    sum_witness(omega, omega_prime).is_some_and(|z| {
        let w = Rational::one() - &z;
        in_j_for(omega, &z) && in_j_for(omega_prime, &w)
    })
}

/// Whether the two omegas are disjoint. The direct intersection and the
/// `1 ∈ J + J′` criterion are both evaluated and must agree.
pub fn disjoint_omegas(p: &Abcd, q: &Abcd) -> Result<bool> {
    let (op, oq) = (p.omega()?, q.omega()?);
    let direct = op.is_disjoint(&oq);
    let via_sum = one_in_sum(&op, &oq);
    assert_eq!(direct, via_sum, "disjointness criteria disagree on {op} and {oq}");
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn set(ps: &[u64]) -> PlaceSet {
        PlaceSet::from_primes(ps.iter().copied()).unwrap()
    }

    #[test]
    fn j_examples() {
        let om = set(&[3, 5]);
        assert!(in_j_for(&om, &rat(15)));
        assert!(!in_j_for(&om, &rat(1)));
        assert!(in_j_for(&om, &rat(0)));
        assert!(in_j(&Abcd::trivial(), &rat(0)).unwrap());
        assert!(in_j(&Abcd::trivial(), &ratio(1, 7)).unwrap());
    }

    #[test]
    fn jn_examples() {
        let om = set(&[3]);
        assert!(in_jn_for(&om, 2, &ratio(9, 2)).unwrap());
        assert!(!in_jn_for(&om, 2, &rat(3)).unwrap());
        assert!(in_jn_for(&om, 0, &rat(3)).is_err());
        let om = set(&[2]);
        assert!(in_inv_jn_for(&om, 3, &ratio(5, 8)).unwrap());
        assert!(!in_inv_jn_for(&om, 3, &ratio(1, 4)).unwrap());
        assert!(!in_inv_jn_for(&om, 3, &rat(0)).unwrap());
        assert!(in_inv_jn_for(&set(&[]), 3, &rat(7)).unwrap());
    }

    #[test]
    fn disjointness_examples() {
        assert!(one_in_sum(&set(&[3]), &set(&[5])));
        assert!(!one_in_sum(&set(&[3]), &set(&[3])));
        assert!(one_in_sum(&set(&[]), &set(&[2, 3])));
        assert_eq!(sum_witness(&set(&[3]), &set(&[5])), Some(rat(6)));
        // (−1, 3) ramifies at {2, 3}; (−3, −5) at {inf, 5}
        let p = Abcd::from_ints(-1, 3, -1, 3).unwrap();
        let q = Abcd::from_ints(-3, -5, -3, -5).unwrap();
        assert_eq!(p.omega().unwrap(), set(&[3]));
        assert_eq!(q.omega().unwrap(), set(&[5]));
        assert!(disjoint_omegas(&p, &q).unwrap());
        assert!(!disjoint_omegas(&p, &p).unwrap());
        assert!(disjoint_omegas(&Abcd::trivial(), &p).unwrap());
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-2000i64..=2000, 1i64..=2000)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ratio(n, d))
    }

    fn small_set() -> impl Strategy<Value = PlaceSet> {
        prop::sample::subsequence(vec![2u64, 3, 5, 7, 11], 0..=3)
            .prop_map(|v| PlaceSet::from_primes(v).unwrap())
    }

    proptest! {
        #[test]
        fn jn_products(om in small_set(), n in 1u32..4, m in 1u32..4,
                       r in nonzero_rational(), s in nonzero_rational()) {
            if in_jn_for(&om, n, &r).unwrap() && in_jn_for(&om, m, &s).unwrap() {
                prop_assert!(in_jn_for(&om, n + m, &(&r * &s)).unwrap());
            }
        }

        #[test]
        fn inverse_duality(om in small_set(), n in 1u32..5, r in nonzero_rational()) {
            prop_assert_eq!(
                in_inv_jn_for(&om, n, &r).unwrap(),
                in_jn_for(&om, n, &(Rational::one() / &r)).unwrap()
            );
        }

        #[test]
        fn j_is_j1(om in small_set(), r in nonzero_rational()) {
            prop_assert_eq!(in_j_for(&om, &r), in_jn_for(&om, 1, &r).unwrap());
        }

        #[test]
        fn sum_criterion_matches_intersection(o1 in small_set(), o2 in small_set()) {
            prop_assert_eq!(o1.is_disjoint(&o2), one_in_sum(&o1, &o2));
        }
    }
}
