use num_traits::Zero;

use super::{check_n, BinaryForm};
use crate::arith::{support, valuation, valuation_ext, Prime, Rational, Valuation};
use crate::error::{Error, Result};
use crate::places::PlaceSet;

/// `r ∈ C_{S,n}`: zero, or at every prime outside `S` the valuation is
/// nonnegative or at most `−n`.
pub fn campana_member(s: &PlaceSet, n: u32, r: &Rational) -> Result<bool> {
    check_n(n)?;
    if r.is_zero() {
        return Ok(true);
    }
    Ok(denominator_primes(r)?.into_iter().all(|p| {
        s.contains_prime(p) || valuation(r, p).expect("nonzero") <= -i64::from(n)
    }))
}

/// `r` is integral at every prime outside `S`.
pub fn s_integer_member(s: &PlaceSet, r: &Rational) -> Result<bool> {
    if r.is_zero() {
        return Ok(true);
    }
    Ok(denominator_primes(r)?
        .into_iter()
        .all(|p| s.contains_prime(p)))
}

fn denominator_primes(r: &Rational) -> Result<Vec<Prime>> {
    support(&Rational::from_integer(r.denom().clone()))
}

/// Campana membership of `F(λ, 1)`.
///
/// The threshold is `≤ −n`, matching [`campana_member`]. `λ` must not be a
/// root of `F(x, 1)`.
pub fn campana_member_form(s: &PlaceSet, n: u32, form: &BinaryForm, lambda: &Rational) -> Result<bool> {
    let value = form.eval_affine(lambda);
    if value.is_zero() {
        return Err(Error::Precondition(format!("{lambda} is a root of {form}")));
    }
    campana_member(s, n, &value)
}

/// `ν_p(x1) − min(ν_p(x0), ν_p(x1))`, the exponent of `p` in the reduced
/// denominator of `x0/x1`. Zero has valuation `+∞`.
pub fn denominator_exponent(x0: &Rational, x1: &Rational, p: Prime) -> Result<u64> {
    if x1.is_zero() {
        return Err(Error::Zero("x1 in denominator_exponent"));
    }
    let v1 = valuation(x1, p)?;
    let low = match valuation_ext(x0, p) {
        Valuation::Finite(v0) => v0.min(v1),
        Valuation::Infinity => v1,
    };
    Ok((v1 - low) as u64)
}

/// The coordinate criterion for `[x0 : x1]`: every prime outside `S` has
/// denominator exponent `e` with `e² ≥ n·e`.
pub fn campana_via_coordinates(x0: &Rational, x1: &Rational, s: &PlaceSet, n: u32) -> Result<bool> {
    check_n(n)?;
    if x1.is_zero() {
        return Err(Error::Zero("x1 in campana_via_coordinates"));
    }
    let mut primes = support(x1)?;
    if !x0.is_zero() {
        primes.extend(support(x0)?);
    }
    for p in primes {
        if s.contains_prime(p) {
            continue;
        }
        let e = denominator_exponent(x0, x1, p)?;
        if e * e < u64::from(n) * e {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn set(ps: &[u64]) -> PlaceSet {
        PlaceSet::from_primes(ps.iter().copied()).unwrap()
    }

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn campana_examples() {
        assert!(campana_member(&set(&[]), 3, &ratio(1, 8)).unwrap());
        assert!(!campana_member(&set(&[]), 3, &ratio(1, 4)).unwrap());
        assert!(campana_member(&set(&[2]), 3, &ratio(1, 4)).unwrap());
        assert!(campana_member(&set(&[]), 3, &rat(0)).unwrap());
        assert!(campana_member(&set(&[]), 0, &rat(1)).is_err());
    }

    #[test]
    fn s_integer_examples() {
        assert!(s_integer_member(&set(&[5]), &ratio(7, 25)).unwrap());
        assert!(!s_integer_member(&set(&[5]), &ratio(7, 10)).unwrap());
        assert!(s_integer_member(&set(&[]), &rat(-91)).unwrap());
    }

    #[test]
    fn form_examples() {
        let f: BinaryForm = "x^2 + y^2".parse().unwrap();
        assert_eq!(f.eval_affine(&ratio(1, 2)), ratio(5, 4));
        assert!(campana_member_form(&set(&[]), 2, &f, &ratio(1, 2)).unwrap());
        assert!(!campana_member_form(&set(&[]), 3, &f, &ratio(1, 3)).unwrap());
        let x: BinaryForm = "x".parse().unwrap();
        for r in [ratio(1, 8), ratio(3, 4), rat(5)] {
            assert_eq!(
                campana_member_form(&set(&[]), 3, &x, &r).unwrap(),
                campana_member(&set(&[]), 3, &r).unwrap()
            );
        }
        assert!(campana_member_form(&set(&[]), 3, &x, &rat(0)).is_err());
    }

    #[test]
    fn coordinate_examples() {
        assert_eq!(denominator_exponent(&rat(3), &rat(9), pr(3)).unwrap(), 1);
        assert_eq!(denominator_exponent(&rat(5), &rat(7), pr(3)).unwrap(), 0);
        assert_eq!(denominator_exponent(&rat(0), &rat(8), pr(2)).unwrap(), 0);
        assert!(campana_via_coordinates(&rat(1), &rat(8), &set(&[]), 3).unwrap());
        assert!(!campana_via_coordinates(&rat(1), &rat(4), &set(&[]), 3).unwrap());
    }

    fn nonzero(bound: i64) -> impl Strategy<Value = Rational> {
        (-bound..=bound, 1..=bound)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ratio(n, d))
    }

    fn small_set() -> impl Strategy<Value = PlaceSet> {
        prop::sample::subsequence(vec![2u64, 3, 5, 7], 0..=2)
            .prop_map(|v| PlaceSet::from_primes(v).unwrap())
    }

    proptest! {
        #[test]
        fn coordinates_agree(x0 in nonzero(5000), x1 in nonzero(5000), s in small_set(), n in 1u32..=6) {
            prop_assert_eq!(
                campana_via_coordinates(&x0, &x1, &s, n).unwrap(),
                campana_member(&s, n, &(&x0 / &x1)).unwrap()
            );
        }

        #[test]
        fn filtration(r in nonzero(3000), s in small_set(), n in 1u32..8) {
            prop_assert!(campana_member(&s, 1, &r).unwrap());
            if campana_member(&s, n + 1, &r).unwrap() {
                prop_assert!(campana_member(&s, n, &r).unwrap());
            }
            if s_integer_member(&s, &r).unwrap() {
                prop_assert!(campana_member(&s, n, &r).unwrap());
            }
        }
    }
}
