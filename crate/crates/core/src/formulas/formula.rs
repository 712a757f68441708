use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, NodeId};
use crate::arith::Rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        })
    }
}

/// Quantifier-free part of a formula. Atoms refer to nodes of the owning
/// formula's circuit: `Eq(p)` means `p = 0`, `Neq(p)` means `p ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matrix {
    Eq(NodeId),
    Neq(NodeId),
    And(Vec<Matrix>),
    Or(Vec<Matrix>),
}

impl Matrix {
    /// Atom roots in left-to-right order.
    pub fn atoms(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<NodeId>) {
        match self {
            Matrix::Eq(p) | Matrix::Neq(p) => out.push(*p),
            Matrix::And(ms) | Matrix::Or(ms) => ms.iter().for_each(|m| m.collect_atoms(out)),
        }
    }

    pub(crate) fn remap(&self, next: &mut impl Iterator<Item = NodeId>) -> Matrix {
        match self {
            Matrix::Eq(_) => Matrix::Eq(next.next().expect("one image per atom")),
            Matrix::Neq(_) => Matrix::Neq(next.next().expect("one image per atom")),
            Matrix::And(ms) => Matrix::And(ms.iter().map(|m| m.remap(next)).collect()),
            Matrix::Or(ms) => Matrix::Or(ms.iter().map(|m| m.remap(next)).collect()),
        }
    }

    fn eval(&self, zero: &mut impl FnMut(NodeId) -> Result<bool>) -> Result<bool> {
        Ok(match self {
            Matrix::Eq(p) => zero(*p)?,
            Matrix::Neq(p) => !zero(*p)?,
            Matrix::And(ms) => {
                for m in ms {
                    if !m.eval(zero)? {
                        return Ok(false);
                    }
                }
                true
            }
            Matrix::Or(ms) => {
                for m in ms {
                    if m.eval(zero)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }
}

/// A prenex formula over polynomial circuits with integer coefficients.
///
/// The circuit holds exactly the nodes reachable from the matrix atoms.
/// Cloning is cheap; the circuit is shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    free: Vec<String>,
    prefix: Vec<(Quantifier, String)>,
    circuit: Arc<Circuit>,
    matrix: Matrix,
    real_embedded: bool,
}

/// Quantifier, atom and degree accounting of a [`Formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaStats {
    pub universals: usize,
    pub existentials: usize,
    pub atoms: usize,
    pub degree_bound: u64,
    pub real_embedded: bool,
}

impl fmt::Display for FormulaStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "universals={} existentials={} degree<={}",
            self.universals, self.existentials, self.degree_bound
        )
    }
}

impl Formula {
    /// Validates names and keeps only the nodes of `circuit` reachable from
    /// the matrix.
    pub fn new(
        free: Vec<String>,
        prefix: Vec<(Quantifier, String)>,
        circuit: &Circuit,
        matrix: Matrix,
        real_embedded: bool,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in free.iter().chain(prefix.iter().map(|(_, v)| v)) {
            if name.is_empty() {
                return Err(Error::NameCollision("empty variable name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::NameCollision(name.clone()));
            }
        }
        let atoms = matrix.atoms();
        if atoms.is_empty() {
            return Err(Error::ShapeMismatch("matrix has no atoms".into()));
        }
        for v in circuit.variables_under(&atoms) {
            if !seen.contains(v.as_str()) {
                return Err(Error::ShapeMismatch(format!("variable {v} is neither free nor bound")));
            }
        }
        let (compact, images) = circuit.compact(&atoms);
        let matrix = matrix.remap(&mut images.into_iter());
        Ok(Formula { free, prefix, circuit: Arc::new(compact), matrix, real_embedded })
    }

    /// Existential closure of a conjunction of equations.
    pub fn exists_conjunction(free: Vec<String>, bound: Vec<String>, circuit: &Circuit, atoms: &[NodeId]) -> Result<Self> {
        let prefix = bound.into_iter().map(|v| (Quantifier::Exists, v)).collect();
        let matrix = Matrix::And(atoms.iter().map(|&a| Matrix::Eq(a)).collect());
        Formula::new(free, prefix, circuit, matrix, false)
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn prefix(&self) -> &[(Quantifier, String)] {
        &self.prefix
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn real_embedded(&self) -> bool {
        self.real_embedded
    }

    pub fn bound(&self) -> impl Iterator<Item = &str> + '_ {
        self.prefix.iter().map(|(_, v)| v.as_str())
    }

    pub fn stats(&self) -> FormulaStats {
        stats(self)
    }

    /// Copy with the real-embedded flag set; used when the combiner assumed
    /// an embedding into ℝ.
    pub(crate) fn with_real_embedded(mut self, flag: bool) -> Self {
        self.real_embedded = flag;
        self
    }
}

/// Counts quantifiers by kind and atoms, and takes the largest symbolic atom
/// degree.
pub fn stats(f: &Formula) -> FormulaStats {
    let atoms = f.matrix.atoms();
    FormulaStats {
        universals: f.prefix.iter().filter(|(q, _)| *q == Quantifier::Forall).count(),
        existentials: f.prefix.iter().filter(|(q, _)| *q == Quantifier::Exists).count(),
        atoms: atoms.len(),
        degree_bound: atoms.iter().map(|&a| f.circuit.degree(a)).max().unwrap_or(0),
        real_embedded: f.real_embedded,
    }
}

/// Truth value of the quantifier-free matrix under a full assignment of the
/// free and bound variables.
pub fn evaluate_matrix(f: &Formula, assignment: &HashMap<String, Rational>) -> Result<bool> {
    for name in f.free.iter().map(String::as_str).chain(f.bound()) {
        if !assignment.contains_key(name) {
            return Err(Error::MissingVariable(name.to_string()));
        }
    }
    f.matrix.eval(&mut |p| f.circuit.is_zero_at(p, assignment))
}

/// Merges `∀x (P ≠ 0)` and `∃z (Q = 0)` into `∀x ∃y ∃z ((yP − 1)Q = 0)`.
///
/// Variables bound by the universal block may occur free in `Q`; they end up
/// bound by the combined universal block, which is how the parameters
/// `a′, b′, c′, d′` are shared between premise and conclusion.
pub fn prenex_or(universal: &Formula, existential: &Formula) -> Result<Formula> {
    let p = match (&universal.matrix, universal.prefix.iter().all(|(q, _)| *q == Quantifier::Forall)) {
        (Matrix::Neq(p), true) => *p,
        _ => {
            return Err(Error::ShapeMismatch(
                "universal part must be a ∀-block over a single ≠ atom".into(),
            ))
        }
    };
    let q = match (&existential.matrix, existential.prefix.iter().all(|(q, _)| *q == Quantifier::Exists)) {
        (Matrix::Eq(q), true) => *q,
        _ => {
            return Err(Error::ShapeMismatch(
                "existential part must be an ∃-block over a single = atom".into(),
            ))
        }
    };
    let ubound: HashSet<&str> = universal.bound().collect();
    for v in existential.bound() {
        if ubound.contains(v) || universal.free.iter().any(|f| f == v) {
            return Err(Error::NameCollision(v.to_string()));
        }
    }
    let mut free = universal.free.clone();
    for v in &existential.free {
        if !ubound.contains(v.as_str()) && !free.contains(v) {
            free.push(v.clone());
        }
    }
    let taken: HashSet<&str> = free
        .iter()
        .map(String::as_str)
        .chain(universal.bound())
        .chain(existential.bound())
        .collect();
    let y = std::iter::once("y".to_string())
        .chain((1..).map(|k| format!("y{k}")))
        .find(|c| !taken.contains(c.as_str()))
        .expect("unbounded supply of names");

    let mut c = Circuit::new();
    let pp = c.import(&universal.circuit, &[p], |c, name| c.var(name))[0];
    let qq = c.import(&existential.circuit, &[q], |c, name| c.var(name))[0];
    let yv = c.var(&y);
    let yp = c.mul(yv, pp);
    let one = c.int(1);
    let lhs = c.sub(yp, one);
    let atom = c.mul(lhs, qq);

    let mut prefix = universal.prefix.clone();
    prefix.push((Quantifier::Exists, y));
    prefix.extend(existential.prefix.iter().cloned());
    Formula::new(
        free,
        prefix,
        &c,
        Matrix::Eq(atom),
        universal.real_embedded || existential.real_embedded,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn single(q: Quantifier, bound: &[&str], free: &[&str], build: impl FnOnce(&mut Circuit) -> NodeId, eq: bool) -> Formula {
        let mut c = Circuit::new();
        let root = build(&mut c);
        let m = if eq { Matrix::Eq(root) } else { Matrix::Neq(root) };
        let prefix = bound.iter().map(|v| (q, v.to_string())).collect();
        Formula::new(names(free), prefix, &c, m, false).unwrap()
    }

    #[test]
    fn rejects_bad_names() {
        let mut c = Circuit::new();
        let x = c.var("x");
        let dup = Formula::new(names(&["x"]), vec![(Quantifier::Exists, "x".into())], &c, Matrix::Eq(x), false);
        assert!(matches!(dup, Err(Error::NameCollision(_))));
        let unbound = Formula::new(vec![], vec![], &c, Matrix::Eq(x), false);
        assert!(matches!(unbound, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn compaction_drops_unused_nodes() {
        let mut c = Circuit::new();
        let x = c.var("x");
        let junk = c.var("junk");
        let _ = c.mul(junk, junk);
        let one = c.int(1);
        let f = c.sub(x, one);
        let phi = Formula::new(names(&["x"]), vec![], &c, Matrix::Eq(f), false).unwrap();
        assert_eq!(phi.circuit().var_names(), ["x"]);
        assert_eq!(phi.circuit().len(), 4);
    }

    #[test]
    fn prenex_or_trivial() {
        let u = single(Quantifier::Forall, &["x"], &[], |c| c.var("x"), false);
        let e = single(Quantifier::Exists, &["z"], &[], |c| c.var("z"), true);
        let f = prenex_or(&u, &e).unwrap();
        let s = f.stats();
        assert_eq!((s.universals, s.existentials, s.atoms, s.degree_bound), (1, 2, 1, 3));
        let prefix: Vec<_> = f.prefix().iter().map(|(q, v)| format!("{q} {v}")).collect();
        assert_eq!(prefix, ["forall x", "exists y", "exists z"]);
        // (yx − 1)z = 0 holds iff z = 0 or yx = 1
        for x in -2..=2 {
            for y in -2..=2 {
                for z in -1..=1 {
                    let env: HashMap<String, Rational> =
                        [("x", x), ("y", y), ("z", z)].iter().map(|(k, v)| (k.to_string(), rat(*v))).collect();
                    let expected = z == 0 || x * y == 1;
                    assert_eq!(evaluate_matrix(&f, &env).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn prenex_or_shares_universal_parameters() {
        let u = single(Quantifier::Forall, &["p", "x"], &["r"], |c| {
            let p = c.var("p");
            let x = c.var("x");
            let r = c.var("r");
            let t = c.mul(p, x);
            c.sub(t, r)
        }, false);
        let e = single(Quantifier::Exists, &["z"], &["p", "r"], |c| {
            let p = c.var("p");
            let z = c.var("z");
            let r = c.var("r");
            let t = c.mul(p, z);
            c.add(t, r)
        }, true);
        let f = prenex_or(&u, &e).unwrap();
        assert_eq!(f.free(), ["r"]);
        assert_eq!(f.stats().degree_bound, 1 + 2 + 2);
        assert!(prenex_or(&e, &u).is_err());
    }

    #[test]
    fn prenex_or_avoids_name_clash() {
        let u = single(Quantifier::Forall, &["y"], &[], |c| c.var("y"), false);
        let e = single(Quantifier::Exists, &["z"], &[], |c| c.var("z"), true);
        let f = prenex_or(&u, &e).unwrap();
        assert_eq!(f.prefix()[1].1, "y1");
    }

    #[test]
    fn missing_variables_are_reported() {
        let f = single(Quantifier::Exists, &["z"], &["r"], |c| {
            let z = c.var("z");
            let r = c.var("r");
            c.add(z, r)
        }, true);
        let env: HashMap<String, Rational> = [("r".to_string(), rat(1))].into();
        assert_eq!(evaluate_matrix(&f, &env), Err(Error::MissingVariable("z".into())));
    }
}
