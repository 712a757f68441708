//! Places of ℚ and the invariants built from local Hilbert symbols.
//!
//! [`hilbert`] evaluates `(a, b)_v` by the classical closed forms. The
//! independent [`hilbert_oracle`] decides the same question by searching for
//! Hensel-liftable primitive zeros of `z² − a x² − b y²` modulo `p^k`, and is
//! used only for cross-validation.
//!
//! The place sets follow the usual notation:
//!
//! - [`delta`]: places where `(a, b)_v = −1`.
//! - [`odd_support`]: primes at which a rational has odd valuation.
//! - [`delta_upper`]: `delta(a, b)` restricted to `odd_support(a) ∪ odd_support(b)`.
//! - [`omega`]: `delta_upper(a, b) ∩ delta_upper(c, d)`.

mod oracle;
mod symbol;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use crate::arith::Prime;
use crate::arith::{factorize, is_square_local, rat, support, Rational};
use crate::error::{Error, Result};
pub use oracle::{default_precision, hilbert_oracle, hilbert_oracle_at, real_oracle, required_precision};
pub use symbol::hilbert;

/// A place of ℚ. The real place sorts before every prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Finite(Prime),
}

impl Place {
    pub fn prime(self) -> Option<Prime> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        }
    }

    pub fn finite(p: u64) -> Result<Place> {
        Ok(Place::Finite(Prime::new(p)?))
    }
}

impl From<Prime> for Place {
    fn from(p: Prime) -> Self {
        Place::Finite(p)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Place::Infinite);
        }
        let n: u64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not a place: {s:?}")))?;
        Place::finite(n)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PlaceRepr {
    Prime(u64),
    Named(String),
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Finite(p) => PlaceRepr::Prime(p.get()),
            Place::Infinite => PlaceRepr::Named("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PlaceRepr::deserialize(d)? {
            PlaceRepr::Prime(p) => Place::finite(p).map_err(serde::de::Error::custom),
            PlaceRepr::Named(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A finite set of places in canonical order (`inf` first, then primes).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaceSet(BTreeSet<Place>);

impl PlaceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set of finite places, verifying primality and rejecting
    /// duplicates.
    pub fn from_primes<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self> {
        let mut set = PlaceSet::new();
        for n in primes {
            if !set.insert(Place::finite(n)?) {
                return Err(Error::Precondition(format!("duplicate prime {n}")));
            }
        }
        Ok(set)
    }

    pub fn insert(&mut self, v: Place) -> bool {
        self.0.insert(v)
    }

    pub fn contains(&self, v: &Place) -> bool {
        self.0.contains(v)
    }

    pub fn contains_prime(&self, p: Prime) -> bool {
        self.0.contains(&Place::Finite(p))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> + '_ {
        self.0.iter()
    }

    /// The finite places, in ascending order.
    pub fn primes(&self) -> Vec<Prime> {
        self.0.iter().filter_map(|v| v.prime()).collect()
    }

    pub fn has_infinite(&self) -> bool {
        self.0.contains(&Place::Infinite)
    }

    pub fn intersection(&self, other: &PlaceSet) -> PlaceSet {
        PlaceSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &PlaceSet) -> PlaceSet {
        PlaceSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &PlaceSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &PlaceSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<Place> for PlaceSet {
    fn from_iter<I: IntoIterator<Item = Place>>(iter: I) -> Self {
        PlaceSet(iter.into_iter().collect())
    }
}

impl FromIterator<Prime> for PlaceSet {
    fn from_iter<I: IntoIterator<Item = Prime>>(iter: I) -> Self {
        PlaceSet(iter.into_iter().map(Place::Finite).collect())
    }
}

impl<'a> IntoIterator for &'a PlaceSet {
    type Item = &'a Place;
    type IntoIter = std::collections::btree_set::Iter<'a, Place>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A parameter tuple `(a, b, c, d)` of nonzero rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Abcd {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Abcd {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if [&a, &b, &c, &d].iter().any(|x| x.is_zero()) {
            return Err(Error::Zero("parameter (a, b, c, d)"));
        }
        Ok(Abcd { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Abcd::new(rat(a), rat(b), rat(c), rat(d))
    }

    /// `(1, 1, 1, 1)`, whose omega is empty.
    pub fn trivial() -> Self {
        Abcd { a: rat(1), b: rat(1), c: rat(1), d: rat(1) }
    }

    pub fn omega(&self) -> Result<PlaceSet> {
        omega(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn to_array(&self) -> [Rational; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

/// Default cap on candidates tried by [`find_local_counterexample`].
pub const COUNTEREXAMPLE_CAP: u64 = 10_000;

/// Primes at which `λ` has odd valuation.
pub fn odd_support(lambda: &Rational) -> Result<PlaceSet> {
    let f = factorize(lambda)?;
    Ok(f.factors
        .iter()
        .filter(|(_, e)| *e % 2 != 0)
        .map(|(p, _)| *p)
        .collect())
}

/// Places outside which `(a, b)_v = +1`: the real place, 2, and the primes
/// dividing `a` or `b`.
pub fn scan_places(a: &Rational, b: &Rational) -> Result<PlaceSet> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("Hilbert symbol argument"));
    }
    let mut set: PlaceSet = support(a)?.into_iter().chain(support(b)?).collect();
    set.insert(Place::Infinite);
    set.insert(Place::Finite(Prime::TWO));
    Ok(set)
}

/// The places where the quaternion algebra `(a, b)` does not split.
pub fn delta(a: &Rational, b: &Rational) -> Result<PlaceSet> {
    let mut out = PlaceSet::new();
    for v in &scan_places(a, b)? {
        if hilbert(a, b, v)? == -1 {
            out.insert(*v);
        }
    }
    Ok(out)
}

pub fn delta_upper(a: &Rational, b: &Rational) -> Result<PlaceSet> {
    let odd = odd_support(a)?.union(&odd_support(b)?);
    Ok(delta(a, b)?.intersection(&odd))
}

pub fn omega(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<PlaceSet> {
    Ok(delta_upper(a, b)?.intersection(&delta_upper(c, d)?))
}

/// Product formula over the scan set. Always true for correct symbols.
pub fn reciprocity_check(a: &Rational, b: &Rational) -> Result<bool> {
    let mut product = 1i8;
    for v in &scan_places(a, b)? {
        product *= hilbert(a, b, v)?;
    }
    Ok(product == 1)
}

/// Finds `b` with `(a, b)_v = −1` for a nonsquare `a` in ℚ_v, trying
/// `±1, ±2, ±3, …` up to [`COUNTEREXAMPLE_CAP`] candidates.
pub fn find_local_counterexample(a: &Rational, v: &Place) -> Result<Rational> {
    find_local_counterexample_with_cap(a, v, COUNTEREXAMPLE_CAP)
}

pub fn find_local_counterexample_with_cap(a: &Rational, v: &Place, cap: u64) -> Result<Rational> {
    if is_square_local(a, v)? {
        return Err(Error::Precondition(format!("{a} is a square at {v}")));
    }
    let mut steps = 0u64;
    let mut m = 1i64;
    loop {
        for b in [rat(m), rat(-m)] {
            if steps >= cap {
                return Err(Error::SearchExhausted { steps });
            }
            steps += 1;
            if hilbert(a, &b, v)? == -1 {
                return Ok(b);
            }
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ratio, valuation};
    use proptest::prelude::*;

    fn pl(p: u64) -> Place {
        Place::finite(p).unwrap()
    }

    fn has_odd_valuation(r: &Rational, p: Prime) -> Result<bool> {
        Ok(valuation(r, p)? % 2 != 0)
    }

    fn set(ps: &[u64]) -> PlaceSet {
        PlaceSet::from_primes(ps.iter().copied()).unwrap()
    }

    #[test]
    fn place_order_and_parsing() {
        assert!(Place::Infinite < pl(2));
        assert!(pl(2) < pl(3));
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap(), pl(7));
        assert!("9".parse::<Place>().is_err());
        assert!("x".parse::<Place>().is_err());
        let mut s = set(&[5, 3]);
        s.insert(Place::Infinite);
        assert_eq!(s.to_string(), "{inf, 3, 5}");
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"["inf",3,5]"#);
        let back: PlaceSet = serde_json::from_str(r#"["inf",3,5]"#).unwrap();
        assert_eq!(back, s);
        assert!(PlaceSet::from_primes([3, 3]).is_err());
        assert!(PlaceSet::from_primes([4]).is_err());
    }

    #[test]
    fn odd_support_examples() {
        assert_eq!(odd_support(&rat(1155)).unwrap(), set(&[3, 5, 7, 11]));
        assert_eq!(odd_support(&ratio(4, 9)).unwrap(), set(&[]));
        assert_eq!(odd_support(&ratio(1, 8)).unwrap(), set(&[2]));
        assert!(odd_support(&rat(0)).is_err());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&rat(1), &rat(1)).unwrap(), set(&[]));
        let mut inf2 = set(&[2]);
        inf2.insert(Place::Infinite);
        assert_eq!(delta(&rat(-1), &rat(-1)).unwrap(), inf2);
        assert_eq!(
            hilbert_oracle(&rat(-1), &rat(-1), Prime::TWO, 5).unwrap(),
            -1
        );
        let d = delta(&rat(2), &rat(5)).unwrap();
        assert!(d.contains(&pl(5)));
        assert_eq!(d.len() % 2, 0);
    }

    #[test]
    fn delta_upper_and_omega_examples() {
        assert_eq!(delta_upper(&rat(1), &rat(1)).unwrap(), set(&[]));
        assert_eq!(delta_upper(&rat(-1), &rat(-1)).unwrap(), set(&[]));
        assert_eq!(omega(&rat(1), &rat(1), &rat(1), &rat(1)).unwrap(), set(&[]));
        assert_eq!(omega(&rat(-1), &rat(3), &rat(1), &rat(1)).unwrap(), set(&[]));
        // (−1, 3): ramified at 2 and 3; odd support of 3 is {3}
        assert_eq!(delta(&rat(-1), &rat(3)).unwrap(), set(&[2, 3]));
        assert_eq!(delta_upper(&rat(-1), &rat(3)).unwrap(), set(&[3]));
    }

    #[test]
    fn reciprocity_examples() {
        assert!(reciprocity_check(&rat(-1), &rat(-1)).unwrap());
        assert!(reciprocity_check(&rat(1), &rat(-7)).unwrap());
        assert!(reciprocity_check(&ratio(-15, 22), &ratio(35, -3)).unwrap());
    }

    #[test]
    fn counterexample_examples() {
        assert_eq!(find_local_counterexample(&rat(-1), &Place::Infinite).unwrap(), rat(-1));
        let b = find_local_counterexample(&rat(5), &pl(5)).unwrap();
        assert_eq!(hilbert(&rat(5), &b, &pl(5)).unwrap(), -1);
        assert_eq!(hilbert_oracle(&rat(5), &b, Prime::new(5).unwrap(), 5).unwrap(), -1);
        assert!(matches!(
            find_local_counterexample(&rat(2), &pl(7)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            find_local_counterexample_with_cap(&rat(5), &pl(5), 1),
            Err(Error::SearchExhausted { steps: 1 })
        ));
    }

    #[test]
    fn symbol_trivial_outside_scan_set() {
        for (a, b) in [(3, 5), (-6, 7), (10, -21), (2, 2)] {
            let (a, b) = (rat(a), rat(b));
            let scan = scan_places(&a, &b).unwrap();
            for p in [11u64, 13, 17, 19, 23, 29, 31] {
                let v = pl(p);
                if !scan.contains(&v) {
                    let p = Prime::new(p).unwrap();
                    assert_eq!(hilbert_oracle(&a, &b, p, 3).unwrap(), 1);
                }
            }
        }
    }

    fn nonzero_rational() -> impl Strategy<Value = Rational> {
        (-300i64..=300, 1i64..=60)
            .prop_filter("nonzero", |(n, _)| *n != 0)
            .prop_map(|(n, d)| ratio(n, d))
    }

    fn place() -> impl Strategy<Value = Place> {
        prop_oneof![
            Just(Place::Infinite),
            prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23]).prop_map(pl),
        ]
    }

    proptest! {
        #[test]
        fn symmetric(a in nonzero_rational(), b in nonzero_rational(), v in place()) {
            prop_assert_eq!(hilbert(&a, &b, &v).unwrap(), hilbert(&b, &a, &v).unwrap());
        }

        #[test]
        fn bimultiplicative(a in nonzero_rational(), b1 in nonzero_rational(),
                            b2 in nonzero_rational(), v in place()) {
            let lhs = hilbert(&a, &(&b1 * &b2), &v).unwrap();
            let rhs = hilbert(&a, &b1, &v).unwrap() * hilbert(&a, &b2, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn square_class_invariant(a in nonzero_rational(), b in nonzero_rational(),
                                  c in nonzero_rational(), v in place()) {
            let bc2 = &b * &c * &c;
            prop_assert_eq!(hilbert(&a, &bc2, &v).unwrap(), hilbert(&a, &b, &v).unwrap());
        }

        #[test]
        fn a_minus_a_splits(a in nonzero_rational(), v in place()) {
            prop_assert_eq!(hilbert(&a, &(-&a), &v).unwrap(), 1);
            prop_assert_eq!(hilbert(&a, &rat(1), &v).unwrap(), 1);
        }

        #[test]
        fn delta_even_and_reciprocity(a in nonzero_rational(), b in nonzero_rational()) {
            prop_assert_eq!(delta(&a, &b).unwrap().len() % 2, 0);
            prop_assert!(reciprocity_check(&a, &b).unwrap());
        }

        #[test]
        fn squares_split_everything(a in nonzero_rational(), b in nonzero_rational(), v in place()) {
            let sq = &a * &a;
            prop_assert_eq!(hilbert(&sq, &b, &v).unwrap(), 1);
        }

        #[test]
        fn nonsquares_have_counterexamples(a in nonzero_rational(), v in place()) {
            if !is_square_local(&a, &v).unwrap() {
                let b = find_local_counterexample(&a, &v).unwrap();
                prop_assert_eq!(hilbert(&a, &b, &v).unwrap(), -1);
            }
        }

        #[test]
        fn delta_upper_within_odd_support(a in nonzero_rational(), b in nonzero_rational()) {
            let du = delta_upper(&a, &b).unwrap();
            prop_assert!(!du.has_infinite());
            prop_assert!(du.is_subset(&delta(&a, &b).unwrap()));
            for p in du.primes() {
                prop_assert!(has_odd_valuation(&a, p).unwrap() || has_odd_valuation(&b, p).unwrap());
            }
        }
    }
}
