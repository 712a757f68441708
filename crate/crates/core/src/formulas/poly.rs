use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::circuit::{Circuit, Node, NodeId};

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
pub type Monomial = Vec<(String, u32)>;

/// Expanded multivariate polynomial with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(vec![(name.to_string(), 1)], BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[(&str, u32)]) -> BigInt {
        let key: Monomial = {
            let mut k: Monomial = m
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(n, e)| (n.to_string(), *e))
                .collect();
            k.sort();
            k
        };
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|(_, e)| u64::from(*e)).sum())
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.iter().map(|(_, e)| u64::from(*e)).sum::<u64>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = mul_monomials(m1, m2);
                *acc.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(1);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Builds `Σ c·∏ v^e` as a circuit.
    pub fn to_circuit(&self, c: &mut Circuit) -> NodeId {
        let terms: Vec<NodeId> = self
            .terms
            .iter()
            .map(|(m, k)| {
                let factors: Vec<NodeId> = m
                    .iter()
                    .map(|(name, e)| {
                        let v = c.var(name);
                        c.pow(v, *e)
                    })
                    .collect();
                if factors.is_empty() {
                    return c.int(k.clone());
                }
                let prod = c.product(&factors);
                c.scale(prod, k)
            })
            .collect();
        c.sum(&terms)
    }

    /// Substitutes a value for every variable.
    pub fn eval(&self, env: &HashMap<String, BigInt>) -> BigInt {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().fold(c.clone(), |acc, (name, e)| {
                    acc * num_traits::pow(env[name].clone(), *e as usize)
                })
            })
            .sum()
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push((a[i].0.clone(), a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded order: higher total degree first, then larger powers of
        // earlier variables
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by_cached_key(|(m, _)| {
            let deg: u64 = m.iter().map(|(_, e)| u64::from(*e)).sum();
            let key: Vec<(String, i64)> = m.iter().map(|(n, e)| (n.clone(), -i64::from(*e))).collect();
            (std::cmp::Reverse(deg), key)
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            let mono: Vec<String> = m
                .iter()
                .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            match (a.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{a}")?,
                (true, false) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Fully expands the polynomial computed at `root`. Exponential in the
/// worst case; intended for small circuits.
pub fn expand(c: &Circuit, root: NodeId) -> Poly {
    let live = c.reachable(&[root]);
    let mut vals: HashMap<NodeId, Poly> = HashMap::with_capacity(live.len());
    for id in live {
        let p = match c.node(id) {
            Node::Var(v) => Poly::var(c.var_name(*v)),
            Node::Int(k) => Poly::constant(k.clone()),
            Node::Add(l, r) => vals[l].add(&vals[r]),
            Node::Mul(l, r) => vals[l].mul(&vals[r]),
            Node::Neg(x) => vals[x].neg(),
            Node::Pow(x, k) => vals[x].pow(*k),
        };
        vals.insert(id, p);
    }
    vals.remove(&root).expect("root expanded")
}
