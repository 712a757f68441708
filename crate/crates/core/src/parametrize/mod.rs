//! Constructing `(a, b, c, d)` with a prescribed omega.
//!
//! Given a finite set `S` of primes, [`construct_omega`] returns parameters
//! whose omega is exactly `S`:
//!
//! - `|S|` even: `a` is a product of CRT uniformizers (valuation exactly 1 at
//!   each prime of `S`) and `b` is chosen so that `(a, b)` ramifies exactly at
//!   `S`. Then `(c, d) = (a, b)`.
//! - `|S|` odd: each pair `(a, b)`, `(c, d)` ramifies at `S` plus one
//!   auxiliary odd prime, where the first parameter has even valuation. The
//!   two auxiliaries differ, so they cancel in the intersection.
//!
//! Every result is checked against [`crate::places::omega`].

mod gf2;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    crt, factorize, is_square_local, primes_below, primitive_root, support, valuation, Prime,
    Rational,
};
use crate::error::{Error, Result};
use crate::places::{delta, hilbert, omega, Abcd, Place, PlaceSet};

/// Bounds for the search in [`find_b`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of candidate systems tried.
    pub cap: u64,
    /// Auxiliary primes `q′` range over odd primes up to this bound.
    pub aux_bound: u64,
    pub deadline: Option<Instant>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { cap: 100_000, aux_bound: 1_000, deadline: None }
    }
}

/// Result of [`construct_omega`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    #[serde(with = "rational_str")]
    pub c: Rational,
    #[serde(with = "rational_str")]
    pub d: Rational,
    pub target: PlaceSet,
    pub achieved: PlaceSet,
    pub search_steps: u64,
    pub aux: Vec<Prime>,
}

impl ConstructionReport {
    pub fn params(&self) -> Abcd {
        Abcd::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
            .expect("constructed parameters are nonzero")
    }

    pub fn succeeded(&self) -> bool {
        self.achieved == self.target
    }
}

mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

fn finite_primes(s: &PlaceSet) -> Result<Vec<Prime>> {
    if s.has_infinite() {
        return Err(Error::Precondition("the target set must contain only primes".into()));
    }
    Ok(s.primes())
}

/// The CRT uniformizers `y_p ≡ p (mod p²)`, `y_p ≡ 1` modulo the other
/// primes of `S`.
pub fn uniformizers(s: &PlaceSet) -> Result<Vec<(Prime, BigInt)>> {
    let primes = finite_primes(s)?;
    if primes.is_empty() {
        return Err(Error::Precondition("uniformizer product of an empty set".into()));
    }
    primes
        .iter()
        .map(|&p| {
            let pb = p.to_bigint();
            let others: BigInt = primes
                .iter()
                .filter(|&&q| q != p)
                .map(|q| q.to_bigint())
                .product();
            let mut system = vec![(&pb * &pb, pb.clone())];
            if !others.is_one() {
                system.push((others, BigInt::one()));
            }
            Ok((p, crt(&system)?))
        })
        .collect()
}

/// `∏ y_p` over `S`; its valuation is 1 at every prime of `S`.
pub fn uniformizer_product(s: &PlaceSet) -> Result<BigInt> {
    Ok(uniformizers(s)?.into_iter().map(|(_, y)| y).product())
}

/// Finds `b` with `delta(a, b) = S`.
///
/// `b` is sought as `±2^e ∏ g^{e_g} · q′` with `g` ranging over the primes of
/// `S ∪ supp(a)` and `q′ ∈ {1} ∪ {odd primes ≤ aux_bound}` outside that set.
/// For a fixed `q′` the conditions `(a, b)_v = ±1` at the relevant places are
/// linear over F₂ in the exponents, so each `q′` costs one elimination. The
/// returned `b` is verified with [`delta`]. Returns `(b, steps)`.
pub fn find_b(a: &Rational, s: &PlaceSet, cfg: &SearchConfig) -> Result<(Rational, u64)> {
    let target = finite_primes(s)?;
    if target.len() % 2 != 0 {
        return Err(Error::Precondition("find_b needs a set of even size".into()));
    }
    for &p in &target {
        if is_square_local(a, &Place::Finite(p))? {
            return Err(Error::Precondition(format!("{a} is a square at {p}")));
        }
    }
    if target.is_empty() {
        return Ok((Rational::one(), 0));
    }
    let mut base: Vec<Prime> = support(a)?;
    base.extend(target.iter().copied());
    base.push(Prime::TWO);
    base.sort();
    base.dedup();

    let aux = std::iter::once(None).chain(
        primes_below(cfg.aux_bound + 1)
            .into_iter()
            .filter(|q| q.is_odd() && !base.contains(q))
            .map(Some),
    );
    let mut steps = 0u64;
    for q in aux {
        if steps >= cfg.cap {
            return Err(Error::SearchExhausted { steps });
        }
        if cfg.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::DeadlineExceeded { steps });
        }
        steps += 1;
        if let Some(b) = solve_with_aux(a, s, &base, q)? {
            return Ok((b, steps));
        }
    }
    Err(Error::SearchExhausted { steps })
}

fn solve_with_aux(a: &Rational, s: &PlaceSet, base: &[Prime], q: Option<Prime>) -> Result<Option<Rational>> {
    let mut gens: Vec<Rational> = vec![Rational::from_integer(BigInt::from(-1))];
    gens.extend(base.iter().map(|p| Rational::from_integer(p.to_bigint())));
    let mut places: Vec<Place> = std::iter::once(Place::Infinite)
        .chain(base.iter().map(|&p| Place::Finite(p)))
        .collect();
    if let Some(q) = q {
        places.push(Place::Finite(q));
    }
    let aux = q.map(|q| Rational::from_integer(q.to_bigint()));

    let mut rows = Vec::with_capacity(places.len());
    let mut rhs = Vec::with_capacity(places.len());
    for v in &places {
        let row = gens
            .iter()
            .map(|g| Ok(hilbert(a, g, v)? == -1))
            .collect::<Result<Vec<bool>>>()?;
        // the auxiliary prime always enters with exponent 1
        let shift = match &aux {
            Some(q) => hilbert(a, q, v)? == -1,
            None => false,
        };
        rows.push(row);
        rhs.push(s.contains(v) ^ shift);
    }
    let Some(e) = gf2::solve(&rows, &rhs) else {
        return Ok(None);
    };
    let mut b = aux.unwrap_or_else(Rational::one);
    for (g, used) in gens.iter().zip(e) {
        if used {
            b *= g;
        }
    }
    Ok((delta(a, &b)? == *s).then_some(b))
}

/// `(a, b)` with `delta(a, b) = delta_upper(a, b) = S` for `|S|` even.
pub fn construct_even(s: &PlaceSet, cfg: &SearchConfig) -> Result<(Rational, Rational, u64)> {
    let primes = finite_primes(s)?;
    if primes.len() % 2 != 0 {
        return Err(Error::Precondition("construct_even needs a set of even size".into()));
    }
    if primes.is_empty() {
        return Ok((Rational::one(), Rational::one(), 0));
    }
    let a = Rational::from_integer(uniformizer_product(s)?);
    let (b, steps) = find_b(&a, s, cfg)?;
    Ok((a, b, steps))
}

/// Output of [`construct_odd`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddConstruction {
    pub a: Rational,
    pub b: Rational,
    pub aux: Prime,
    pub steps: u64,
}

/// `(a, b, q)` with `delta(a, b) = S ∪ {q}` and `delta(a, b) ∩ odd_support(a) = S`,
/// for `|S|` odd. `q` is the smallest odd prime outside `S` and `excluded`.
pub fn construct_odd(s: &PlaceSet, excluded: &[Prime], cfg: &SearchConfig) -> Result<OddConstruction> {
    let primes = finite_primes(s)?;
    if primes.len() % 2 != 1 {
        return Err(Error::Precondition("construct_odd needs a set of odd size".into()));
    }
    let q = smallest_odd_prime_outside(&primes, excluded);
    let mut extended = s.clone();
    extended.insert(Place::Finite(q));

    let ys = uniformizers(&extended)?;
    let y_q = ys.iter().find(|(p, _)| *p == q).map(|(_, y)| y.clone()).expect("q in set");
    let rest: BigInt = ys.iter().filter(|(p, _)| *p != q).map(|(_, y)| y).product();
    let g = BigInt::from(primitive_root(q));
    let qb = q.to_bigint();
    // rest ≡ 1 (mod q) by construction, so τ ≡ g (mod q) solves τ·rest ≡ g
    let inv = rest.modinv(&qb).expect("rest is a unit mod q");
    let tau_mod_q = (&g * inv) % &qb;
    let m: BigInt = primes.iter().map(|p| p.to_bigint()).product();
    let tau = crt(&[(qb, tau_mod_q), (m, BigInt::one())])?;
    let a = Rational::from_integer(tau * &y_q * &y_q * rest);
    debug_assert_eq!(valuation(&a, q)?, 2);

    let (b, steps) = find_b(&a, &extended, cfg)?;
    Ok(OddConstruction { a, b, aux: q, steps })
}

fn smallest_odd_prime_outside(s: &[Prime], excluded: &[Prime]) -> Prime {
    let mut q = crate::arith::next_prime(2);
    while s.contains(&q) || excluded.contains(&q) {
        q = crate::arith::next_prime(q.get());
    }
    q
}

/// Parameters with `omega(a, b, c, d) = S` for any finite set of primes.
pub fn construct_omega(s: &PlaceSet, cfg: &SearchConfig) -> Result<ConstructionReport> {
    let primes = finite_primes(s)?;
    let (a, b, c, d, steps, aux) = if primes.len() % 2 == 0 {
        let (a, b, steps) = construct_even(s, cfg)?;
        (a.clone(), b.clone(), a, b, steps, vec![])
    } else {
        let first = construct_odd(s, &[], cfg)?;
        let second = construct_odd(s, &[first.aux], cfg)?;
        let aux = vec![first.aux, second.aux];
        (first.a, first.b, second.a, second.b, first.steps + second.steps, aux)
    };
    let achieved = omega(&a, &b, &c, &d)?;
    Ok(ConstructionReport { a, b, c, d, target: s.clone(), achieved, search_steps: steps, aux })
}

/// Factorization-based check that every prime of `S` has valuation 1 in `a`.
pub fn has_unit_valuations(a: &BigInt, s: &PlaceSet) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::Zero("uniformizer product"));
    }
    let f = factorize(&Rational::from_integer(a.clone()))?;
    Ok(s.primes().into_iter().all(|p| f.exponent(p) == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::places::{delta_upper, odd_support};

    fn set(ps: &[u64]) -> PlaceSet {
        PlaceSet::from_primes(ps.iter().copied()).unwrap()
    }

    fn cfg() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn uniformizer_examples() {
        let ys = uniformizers(&set(&[3, 5])).unwrap();
        assert_eq!(ys[0].1, BigInt::from(21));
        assert_eq!(ys[1].1, BigInt::from(55));
        assert_eq!(uniformizer_product(&set(&[3, 5])).unwrap(), BigInt::from(1155));
        assert_eq!(uniformizer_product(&set(&[3])).unwrap(), BigInt::from(3));
        assert!(uniformizer_product(&set(&[])).is_err());
        for s in [set(&[2, 3, 5, 7]), set(&[97, 89]), set(&[2])] {
            let a = uniformizer_product(&s).unwrap();
            assert!(has_unit_valuations(&a, &s).unwrap());
        }
    }

    #[test]
    fn find_b_examples() {
        assert_eq!(find_b(&rat(7), &set(&[]), &cfg()).unwrap().0, rat(1));
        let a = rat(1155);
        let (b, _) = find_b(&a, &set(&[3, 5]), &cfg()).unwrap();
        assert_eq!(delta(&a, &b).unwrap(), set(&[3, 5]));
        let s = set(&[2, 7]);
        let a = Rational::from_integer(uniformizer_product(&s).unwrap());
        assert_eq!(valuation(&a, Prime::TWO).unwrap(), 1);
        let (b, _) = find_b(&a, &s, &cfg()).unwrap();
        assert_eq!(delta(&a, &b).unwrap(), s);
        assert!(find_b(&rat(3), &set(&[3]), &cfg()).is_err());
        assert!(find_b(&rat(4), &set(&[3, 5]), &cfg()).is_err());
    }

    #[test]
    fn even_construction() {
        assert_eq!(construct_even(&set(&[]), &cfg()).unwrap(), (rat(1), rat(1), 0));
        let s = set(&[3, 5]);
        let (a, b, _) = construct_even(&s, &cfg()).unwrap();
        assert_eq!(a, rat(1155));
        assert_eq!(delta_upper(&a, &b).unwrap(), s);
        assert_eq!(delta(&a, &b).unwrap(), s);
        assert!(construct_even(&set(&[3]), &cfg()).is_err());
    }

    #[test]
    fn odd_construction() {
        let out = construct_odd(&set(&[3]), &[], &cfg()).unwrap();
        assert_eq!(out.aux.get(), 5);
        let q = Prime::new(5).unwrap();
        assert_eq!(valuation(&out.a, Prime::new(3).unwrap()).unwrap(), 1);
        assert_eq!(valuation(&out.a, q).unwrap(), 2);
        assert!(!is_square_local(&out.a, &Place::Finite(q)).unwrap());
        let d = delta(&out.a, &out.b).unwrap();
        assert_eq!(d, set(&[3, 5]));
        assert_eq!(d.intersection(&odd_support(&out.a).unwrap()), set(&[3]));

        let out = construct_odd(&set(&[5]), &[], &cfg()).unwrap();
        assert_eq!(out.aux.get(), 3);
        assert_eq!(delta(&out.a, &out.b).unwrap(), set(&[3, 5]));
        assert_eq!(primitive_root(Prime::new(5).unwrap()), 2);
    }

    #[test]
    fn omega_construction() {
        let r = construct_omega(&set(&[]), &cfg()).unwrap();
        assert_eq!(r.params(), Abcd::trivial());
        assert!(r.achieved.is_empty());
        let r = construct_omega(&set(&[3, 5]), &cfg()).unwrap();
        assert!(r.succeeded());
        let r = construct_omega(&set(&[2, 3, 5]), &cfg()).unwrap();
        assert!(r.succeeded());
        assert_eq!(r.aux.len(), 2);
        assert_ne!(r.aux[0], r.aux[1]);
        let mut with_inf = set(&[3]);
        with_inf.insert(Place::Infinite);
        assert!(construct_omega(&with_inf, &cfg()).is_err());
    }

    #[test]
    fn report_json_round_trip() {
        let r = construct_omega(&set(&[3, 5]), &cfg()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""a":"1155/1""#));
        assert!(json.contains(r#""achieved":[3,5]"#));
        let back: ConstructionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn every_subset_of_small_primes() {
        let primes = [2u64, 3, 5, 7];
        for mask in 0u32..16 {
            let s: Vec<u64> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| primes[i]).collect();
            let r = construct_omega(&set(&s), &cfg()).unwrap();
            assert!(r.succeeded(), "{s:?}");
        }
    }

    #[test]
    fn deadline_and_cap() {
        let past = SearchConfig { deadline: Some(Instant::now()), ..cfg() };
        assert!(matches!(
            find_b(&rat(1155), &set(&[3, 5]), &past),
            Err(Error::DeadlineExceeded { steps: 0 })
        ));
        let tiny = SearchConfig { cap: 0, ..cfg() };
        assert!(matches!(
            find_b(&rat(1155), &set(&[3, 5]), &tiny),
            Err(Error::SearchExhausted { steps: 0 })
        ));
    }
}
