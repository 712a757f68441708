use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::LazyLock;

use crate::arith::{is_prime_u64, Rational};
use crate::error::{Error, Result};

/// Index of a node in a [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Index of a variable name in a [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub(crate) u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Var(VarId),
    Int(BigInt),
    Add(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Neg(NodeId),
    Pow(NodeId, u32),
}

/// Append-only arena of polynomial nodes with integer constants.
///
/// Children always precede parents, so the arena is acyclic by construction
/// and any forward scan is a valid evaluation order. Structurally equal nodes
/// are shared. The symbolic degree of every node is recorded on insertion.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    nodes: Vec<Node>,
    degrees: Vec<u64>,
    names: Vec<String>,
    name_ids: HashMap<String, VarId>,
    dedup: HashMap<Node, NodeId>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.names == other.names
    }
}

impl Eq for Circuit {}

impl Circuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v.0 as usize]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.name_ids.get(name).copied()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    /// Symbolic degree: variables 1, constants 0, `max` over sums, `+` over
    /// products, `k·deg` for `k`-th powers.
    pub fn degree(&self, id: NodeId) -> u64 {
        self.degrees[id.index()]
    }

    fn intern_name(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.name_ids.get(name) {
            return v;
        }
        let v = VarId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.name_ids.insert(name.to_string(), v);
        v
    }

    fn insert(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        self.push_raw(node)
    }

    /// Appends without sharing; used when reading serialized circuits so that
    /// node indices are preserved exactly.
    pub(crate) fn push_raw(&mut self, node: Node) -> NodeId {
        let deg = match &node {
            Node::Var(_) => 1,
            Node::Int(_) => 0,
            Node::Add(l, r) => self.degree(*l).max(self.degree(*r)),
            Node::Mul(l, r) => self.degree(*l) + self.degree(*r),
            Node::Neg(x) => self.degree(*x),
            Node::Pow(x, k) => self.degree(*x) * u64::from(*k),
        };
        let id = NodeId(self.nodes.len() as u32);
        self.dedup.entry(node.clone()).or_insert(id);
        self.nodes.push(node);
        self.degrees.push(deg);
        id
    }

    pub(crate) fn push_var_raw(&mut self, name: &str) -> NodeId {
        let v = self.intern_name(name);
        self.push_raw(Node::Var(v))
    }

    pub fn var(&mut self, name: &str) -> NodeId {
        let v = self.intern_name(name);
        self.insert(Node::Var(v))
    }

    pub fn int(&mut self, value: impl Into<BigInt>) -> NodeId {
        self.insert(Node::Int(value.into()))
    }

    pub fn add(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.insert(Node::Add(l, r))
    }

    pub fn mul(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.insert(Node::Mul(l, r))
    }

    pub fn neg(&mut self, x: NodeId) -> NodeId {
        self.insert(Node::Neg(x))
    }

    pub fn sub(&mut self, l: NodeId, r: NodeId) -> NodeId {
        let nr = self.neg(r);
        self.add(l, nr)
    }

    pub fn pow(&mut self, x: NodeId, k: u32) -> NodeId {
        assert!(k >= 1, "powers must be positive");
        if k == 1 {
            return x;
        }
        self.insert(Node::Pow(x, k))
    }

    /// `k·x`, skipping the multiplication for `k = ±1`.
    pub fn scale(&mut self, x: NodeId, k: &BigInt) -> NodeId {
        if k.is_one() {
            x
        } else if (-k).is_one() {
            self.neg(x)
        } else {
            let c = self.int(k.clone());
            self.mul(c, x)
        }
    }

    /// Product of several nodes, left to right; the empty product is 1.
    pub fn product(&mut self, xs: &[NodeId]) -> NodeId {
        match xs.split_first() {
            None => self.int(1),
            Some((first, rest)) => rest.iter().fold(*first, |acc, &x| self.mul(acc, x)),
        }
    }

    /// Sum of several nodes, left to right; the empty sum is 0.
    pub fn sum(&mut self, xs: &[NodeId]) -> NodeId {
        match xs.split_first() {
            None => self.int(0),
            Some((first, rest)) => rest.iter().fold(*first, |acc, &x| self.add(acc, x)),
        }
    }

    /// Copies the subcircuits under `roots` from `other`, replacing each
    /// variable through `map_var`. Returns the images of the roots.
    pub fn import(
        &mut self,
        other: &Circuit,
        roots: &[NodeId],
        mut map_var: impl FnMut(&mut Circuit, &str) -> NodeId,
    ) -> Vec<NodeId> {
        let live = other.reachable(roots);
        let mut image: HashMap<NodeId, NodeId> = HashMap::with_capacity(live.len());
        for id in live {
            let new = match other.node(id) {
                Node::Var(v) => map_var(self, other.var_name(*v)),
                Node::Int(k) => self.int(k.clone()),
                Node::Add(l, r) => self.add(image[l], image[r]),
                Node::Mul(l, r) => self.mul(image[l], image[r]),
                Node::Neg(x) => self.neg(image[x]),
                Node::Pow(x, k) => self.pow(image[x], *k),
            };
            image.insert(id, new);
        }
        roots.iter().map(|r| image[r]).collect()
    }

    /// Copy of the part of the circuit reachable from `roots`, with nodes in
    /// their original relative order and variables interned in order of
    /// first occurrence. Returns the images of `roots`.
    pub fn compact(&self, roots: &[NodeId]) -> (Circuit, Vec<NodeId>) {
        let live = self.reachable(roots);
        let mut out = Circuit::new();
        let mut image: HashMap<NodeId, NodeId> = HashMap::with_capacity(live.len());
        for id in live {
            let new = match self.node(id) {
                Node::Var(v) => out.push_var_raw(self.var_name(*v)),
                Node::Int(k) => out.push_raw(Node::Int(k.clone())),
                Node::Add(l, r) => out.push_raw(Node::Add(image[l], image[r])),
                Node::Mul(l, r) => out.push_raw(Node::Mul(image[l], image[r])),
                Node::Neg(x) => out.push_raw(Node::Neg(image[x])),
                Node::Pow(x, k) => out.push_raw(Node::Pow(image[x], *k)),
            };
            image.insert(id, new);
        }
        let roots = roots.iter().map(|r| image[r]).collect();
        (out, roots)
    }

    /// Node ids reachable from `roots`, in ascending (evaluation) order.
    pub fn reachable(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if std::mem::replace(&mut seen[id.index()], true) {
                continue;
            }
            match self.node(id) {
                Node::Var(_) | Node::Int(_) => {}
                Node::Add(l, r) | Node::Mul(l, r) => stack.extend([*l, *r]),
                Node::Neg(x) | Node::Pow(x, _) => stack.push(*x),
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }

    /// Names of the variables occurring under `roots`.
    pub fn variables_under(&self, roots: &[NodeId]) -> Vec<String> {
        let mut out: Vec<String> = self
            .reachable(roots)
            .into_iter()
            .filter_map(|id| match self.node(id) {
                Node::Var(v) => Some(self.var_name(*v).to_string()),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exact value of `root` over the rationals.
    pub fn eval_exact(&self, root: NodeId, env: &HashMap<String, Rational>) -> Result<Rational> {
        Ok(self.eval_exact_many(&[root], env)?.pop().expect("one root"))
    }

    /// Exact values of several roots, sharing common subcircuits.
    pub fn eval_exact_many(&self, roots: &[NodeId], env: &HashMap<String, Rational>) -> Result<Vec<Rational>> {
        let live = self.reachable(roots);
        let mut vals: HashMap<NodeId, Rational> = HashMap::with_capacity(live.len());
        for id in live {
            let v = match self.node(id) {
                Node::Var(v) => {
                    let name = self.var_name(*v);
                    env.get(name)
                        .cloned()
                        .ok_or_else(|| Error::MissingVariable(name.to_string()))?
                }
                Node::Int(k) => Rational::from_integer(k.clone()),
                Node::Add(l, r) => &vals[l] + &vals[r],
                Node::Mul(l, r) => {
                    let (a, b) = (&vals[l], &vals[r]);
                    if a.is_zero() || b.is_zero() {
                        Rational::zero()
                    } else {
                        a * b
                    }
                }
                Node::Neg(x) => -&vals[x],
                Node::Pow(x, k) => num_traits::pow(vals[x].clone(), *k as usize),
            };
            vals.insert(id, v);
        }
        Ok(roots.iter().map(|r| vals[r].clone()).collect())
    }

    /// Decides `root = 0` exactly. Small circuits are evaluated over ℚ.
    /// Larger ones are first evaluated modulo several 61-bit primes; any
    /// nonzero residue proves the value nonzero, otherwise the exact value
    /// is computed.
    pub fn is_zero_at(&self, root: NodeId, env: &HashMap<String, Rational>) -> Result<bool> {
        const EXACT_LIMIT: usize = 4096;
        let live = self.reachable(&[root]);
        if live.len() > EXACT_LIMIT {
            for &p in MODULI.iter() {
                let Some(vals) = self.var_residues(env, p, &live)? else {
                    continue;
                };
                let eval = ModEval::new(self, &[root], p);
                if eval.eval(&vals)[0] != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(self.eval_exact(root, env)?.is_zero())
    }

    pub(crate) fn var_residues(
        &self,
        env: &HashMap<String, Rational>,
        p: u64,
        live: &[NodeId],
    ) -> Result<Option<Vec<u64>>> {
        let mut vals = vec![0u64; self.names.len()];
        for &id in live {
            if let Node::Var(v) = self.node(id) {
                let name = self.var_name(*v);
                let r = env
                    .get(name)
                    .ok_or_else(|| Error::MissingVariable(name.to_string()))?;
                match rational_mod(r, p) {
                    Some(x) => vals[v.0 as usize] = x,
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(vals))
    }
}

/// Three largest primes below 2⁶¹, used for modular evaluation.
pub(crate) static MODULI: LazyLock<Vec<u64>> = LazyLock::new(|| {
    let mut out = Vec::new();
    let mut n = (1u64 << 61) - 1;
    while out.len() < 3 {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
});

/// `r mod p`, or `None` when `p` divides the denominator.
pub(crate) fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64()?;
    let d = r.denom().mod_floor(&pb);
    if d.is_zero() {
        return None;
    }
    let inv = d.modinv(&pb)?.to_u64()?;
    Some(mul_mod(n, inv, p))
}

const MERSENNE_61: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    let x = a as u128 * b as u128;
    if p == MERSENNE_61 {
        // 2^61 ≡ 1, so fold the high bits onto the low ones
        let folded = (x as u64 & MERSENNE_61) + (x >> 61) as u64;
        let r = (folded & MERSENNE_61) + (folded >> 61);
        if r >= MERSENNE_61 { r - MERSENNE_61 } else { r }
    } else {
        (x % p as u128) as u64
    }
}

fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

enum Op {
    Var(u32),
    Const(u64),
    Add(u32, u32),
    Mul(u32, u32),
    Neg(u32),
    Pow(u32, u32),
}

/// A straight-line program for evaluating part of a circuit modulo `p`.
pub(crate) struct ModEval {
    p: u64,
    ops: Vec<Op>,
    roots: Vec<u32>,
}

impl ModEval {
    pub(crate) fn new(c: &Circuit, roots: &[NodeId], p: u64) -> Self {
        let live = c.reachable(roots);
        let mut slot: HashMap<NodeId, u32> = HashMap::with_capacity(live.len());
        let pb = BigInt::from(p);
        let ops = live
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                slot.insert(id, i as u32);
                match c.node(id) {
                    Node::Var(v) => Op::Var(v.0),
                    Node::Int(k) => Op::Const(k.mod_floor(&pb).to_u64().expect("reduced")),
                    Node::Add(l, r) => Op::Add(slot[l], slot[r]),
                    Node::Mul(l, r) => Op::Mul(slot[l], slot[r]),
                    Node::Neg(x) => Op::Neg(slot[x]),
                    Node::Pow(x, k) => Op::Pow(slot[x], *k),
                }
            })
            .collect();
        let roots = roots.iter().map(|r| slot[r]).collect();
        ModEval { p, ops, roots }
    }

    /// Values of the roots, given residues of all variables indexed by
    /// [`VarId`].
    pub(crate) fn eval(&self, vars: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let x = match *op {
                Op::Var(i) => vars[i as usize],
                Op::Const(k) => k,
                Op::Add(l, r) => {
                    let s = v[l as usize] + v[r as usize];
                    if s >= p { s - p } else { s }
                }
                Op::Mul(l, r) => mul_mod(v[l as usize], v[r as usize], p),
                Op::Neg(x) => {
                    let y = v[x as usize];
                    if y == 0 { 0 } else { p - y }
                }
                Op::Pow(x, k) => pow_mod(v[x as usize], k, p),
            };
            v.push(x);
        }
        self.roots.iter().map(|&r| v[r as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn env(pairs: &[(&str, Rational)]) -> HashMap<String, Rational> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    #[test]
    fn sharing_and_degrees() {
        let mut c = Circuit::new();
        let x = c.var("x");
        let y = c.var("y");
        assert_eq!(c.var("x"), x);
        let xy = c.mul(x, y);
        assert_eq!(c.mul(x, y), xy);
        let p = c.pow(xy, 3);
        let four = c.int(4);
        let s = c.add(p, four);
        assert_eq!(c.degree(four), 0);
        assert_eq!(c.degree(xy), 2);
        assert_eq!(c.degree(p), 6);
        assert_eq!(c.degree(s), 6);
        assert_eq!(c.variables_under(&[s]), vec!["x", "y"]);
    }

    #[test]
    fn exact_and_modular_evaluation_agree() {
        let mut c = Circuit::new();
        let x = c.var("x");
        let y = c.var("y");
        let x2 = c.pow(x, 2);
        let two = c.int(2);
        let y2 = c.pow(y, 2);
        let ty2 = c.mul(two, y2);
        let f = c.sub(x2, ty2);
        let e = env(&[("x", ratio(3, 2)), ("y", rat(-1))]);
        assert_eq!(c.eval_exact(f, &e).unwrap(), ratio(1, 4));
        let p = MODULI[0];
        let vals = c.var_residues(&e, p, &c.reachable(&[f])).unwrap().unwrap();
        let m = ModEval::new(&c, &[f], p).eval(&vals)[0];
        assert_eq!(Some(m), rational_mod(&ratio(1, 4), p));
        assert!(!c.is_zero_at(f, &e).unwrap());
        assert!(c.is_zero_at(f, &env(&[("x", rat(0)), ("y", rat(0))])).unwrap());
        assert!(matches!(
            c.eval_exact(f, &env(&[("x", rat(1))])),
            Err(Error::MissingVariable(_))
        ));
    }

    #[test]
    fn moduli_are_prime() {
        assert_eq!(MODULI[0], (1 << 61) - 1);
        assert!(MODULI.iter().all(|&p| is_prime_u64(p)));
        assert_eq!(rational_mod(&ratio(1, 7), 7), None);
    }

    #[test]
    fn import_substitutes_variables() {
        let mut a = Circuit::new();
        let x = a.var("x");
        let one = a.int(1);
        let f = a.add(x, one);
        let mut b = Circuit::new();
        let g = b.import(&a, &[f], |c, name| {
            assert_eq!(name, "x");
            let t = c.var("t");
            c.pow(t, 2)
        })[0];
        assert_eq!(b.degree(g), 2);
        assert_eq!(b.eval_exact(g, &env(&[("t", rat(3))])).unwrap(), rat(10));
    }
}

