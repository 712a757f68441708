use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Place;
use crate::arith::{valuation, Prime, Rational};
use crate::error::{Error, Result};

/// Smallest precision at which [`hilbert_oracle`] is exact:
/// `2·(max(|ν_p(a)|, |ν_p(b)|) + ν_p(2)) + 1`.
pub fn required_precision(a: &Rational, b: &Rational, p: Prime) -> Result<u32> {
    let m = max_abs_val(a, b, p)?;
    let two = u32::from(!p.is_odd());
    Ok(2 * (m + two) + 1)
}

/// Precision used when none is given: `2·max(|ν_p(a)|, |ν_p(b)|) + 3`.
pub fn default_precision(a: &Rational, b: &Rational, p: Prime) -> Result<u32> {
    Ok(2 * max_abs_val(a, b, p)? + 3)
}

fn max_abs_val(a: &Rational, b: &Rational, p: Prime) -> Result<u32> {
    let va = valuation(a, p)?.unsigned_abs();
    let vb = valuation(b, p)?.unsigned_abs();
    Ok(va.max(vb) as u32)
}

/// Decides solvability of `z² = a x² + b y²` over ℚ_p by search.
///
/// After clearing denominators (`a ↦ a·den(a)²`), the search walks the tree
/// of primitive zeros of `Q = z² − A x² − B y²` modulo `p, p², …, p^k`, with
/// the first unit coordinate normalised to 1. A node modulo `p^j` is accepted
/// once `j > 2·min ν(∇Q)`, the point at which Hensel's lemma guarantees a
/// true zero. Below [`required_precision`] the answer is not guaranteed and
/// the call is rejected.
pub fn hilbert_oracle(a: &Rational, b: &Rational, p: Prime, precision: u32) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("Hilbert symbol argument"));
    }
    let required = required_precision(a, b, p)?;
    if precision < required {
        return Err(Error::PrecisionTooSmall { given: precision, required });
    }
    let pp = p.get();
    let mut modulus: u128 = 1;
    for _ in 0..precision {
        modulus *= pp as u128;
        if modulus >= 1 << 62 {
            return Err(Error::PrecisionTooLarge { prime: pp, precision });
        }
    }
    let search = Search {
        p: pp as i128,
        k: precision,
        a: cleared(a, modulus),
        b: cleared(b, modulus),
    };
    Ok(if search.run() { 1 } else { -1 })
}

/// Oracle at any place, using the default precision at primes.
pub fn hilbert_oracle_at(a: &Rational, b: &Rational, v: &Place) -> Result<i8> {
    match *v {
        Place::Infinite => real_oracle(a, b),
        Place::Finite(p) => hilbert_oracle(a, b, p, default_precision(a, b, p)?),
    }
}

/// Real solvability by direct search: a nontrivial real zero exists iff some
/// `(x, y) ≠ 0` makes `a x² + b y²` nonnegative, and the quadratic form in
/// `(x, y)` is diagonal, so the coordinate vectors and `(1, 1)` suffice.
pub fn real_oracle(a: &Rational, b: &Rational) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Zero("Hilbert symbol argument"));
    }
    let found = [(1, 0), (0, 1), (1, 1)].iter().any(|&(x, y)| {
        let v = a * Rational::from_integer(BigInt::from(x * x))
            + b * Rational::from_integer(BigInt::from(y * y));
        !v.is_negative()
    });
    Ok(if found { 1 } else { -1 })
}

fn cleared(r: &Rational, modulus: u128) -> i128 {
    let n = r.numer() * r.denom();
    n.mod_floor(&BigInt::from(modulus)).to_i128().expect("reduced below modulus")
}

struct Search {
    p: i128,
    k: u32,
    a: i128,
    b: i128,
}

impl Search {
    fn run(&self) -> bool {
        let p = self.p;
        let mut roots = Vec::new();
        for x in 0..p {
            for y in 0..p {
                roots.push(([1, x, y], 0));
            }
        }
        for y in 0..p {
            roots.push(([0, 1, y], 1));
        }
        roots.push(([0, 0, 1], 2));
        roots.into_iter().any(|(v, fixed)| self.descend(v, fixed, 1, p))
    }

    /// `v` is a representative modulo `m = p^j`.
    fn descend(&self, v: [i128; 3], fixed: usize, j: u32, m: i128) -> bool {
        if self.q(v).rem_euclid(m) != 0 {
            return false;
        }
        if let Some(g) = self.gradient_valuation(v, j, m) {
            if j > 2 * g {
                return true;
            }
        }
        if j == self.k {
            return false;
        }
        let free: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
        let next = m * self.p;
        for s in 0..self.p {
            for t in 0..self.p {
                let mut w = v;
                w[free[0]] += s * m;
                w[free[1]] += t * m;
                if self.descend(w, fixed, j + 1, next) {
                    return true;
                }
            }
        }
        false
    }

    fn q(&self, [z, x, y]: [i128; 3]) -> i128 {
        let m = self.modulus();
        let sq = |t: i128| (t * t).rem_euclid(m);
        (sq(z) - self.a * sq(x) % m - self.b * sq(y) % m).rem_euclid(m)
    }

    fn modulus(&self) -> i128 {
        self.p.pow(self.k)
    }

    /// Minimum valuation of the partial derivatives `2z, −2Ax, −2By`, or
    /// `None` when all vanish modulo `m`.
    fn gradient_valuation(&self, [z, x, y]: [i128; 3], j: u32, m: i128) -> Option<u32> {
        let big = self.modulus();
        [2 * z, 2 * (self.a * x % big), 2 * (self.b * y % big)]
            .into_iter()
            .filter_map(|g| {
                let g = g.rem_euclid(m);
                (g != 0).then(|| {
                    let mut g = g;
                    let mut e = 0;
                    while g % self.p == 0 && e < j {
                        g /= self.p;
                        e += 1;
                    }
                    e
                })
            })
            .min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(hilbert_oracle(&rat(2), &rat(5), pr(5), 3).unwrap(), -1);
        assert_eq!(hilbert_oracle(&rat(1), &rat(1), pr(3), 3).unwrap(), 1);
        assert_eq!(hilbert_oracle(&rat(-1), &rat(-1), pr(2), 5).unwrap(), -1);
        assert_eq!(hilbert_oracle(&rat(-1), &rat(-1), pr(3), 3).unwrap(), 1);
        assert_eq!(hilbert_oracle(&rat(2), &rat(3), pr(2), 5).unwrap(), -1);
        assert_eq!(hilbert_oracle(&rat(-1), &rat(2), pr(2), 5).unwrap(), 1);
    }

    #[test]
    fn precision_bounds() {
        assert_eq!(required_precision(&rat(2), &rat(5), pr(5)).unwrap(), 3);
        assert_eq!(required_precision(&rat(-1), &rat(-1), pr(2)).unwrap(), 3);
        assert_eq!(required_precision(&ratio(1, 8), &rat(3), pr(2)).unwrap(), 9);
        assert!(matches!(
            hilbert_oracle(&rat(2), &rat(5), pr(5), 2),
            Err(Error::PrecisionTooSmall { given: 2, required: 3 })
        ));
        assert!(matches!(
            hilbert_oracle(&rat(2), &rat(5), pr(5), 40),
            Err(Error::PrecisionTooLarge { .. })
        ));
    }

    #[test]
    fn real_oracle_signs() {
        assert_eq!(real_oracle(&rat(-1), &rat(-1)).unwrap(), -1);
        assert_eq!(real_oracle(&rat(-1), &rat(3)).unwrap(), 1);
        assert_eq!(real_oracle(&ratio(-1, 3), &ratio(-2, 5)).unwrap(), -1);
    }

    #[test]
    fn denominators_do_not_matter() {
        for (a, b) in [(ratio(1, 5), rat(2)), (ratio(3, 4), ratio(-7, 9))] {
            for p in [2u64, 3, 5, 7] {
                let p = pr(p);
                let k = default_precision(&a, &b, p).unwrap();
                let sq = |r: &Rational| Rational::from_integer(r.numer() * r.denom());
                assert_eq!(
                    hilbert_oracle(&a, &b, p, k).unwrap(),
                    hilbert_oracle(&sq(&a), &sq(&b), p, default_precision(&sq(&a), &sq(&b), p).unwrap()).unwrap()
                );
            }
        }
    }
}
