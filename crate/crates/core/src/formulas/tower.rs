//! Builders for the definitional tower.
//!
//! Each set is defined by an existential formula over a conjunction of
//! polynomial equations, assembled from the sets below it:
//!
//! | set | definition |
//! |---|---|
//! | `S_{a,b}` | `∃x₂x₃x₄ (r² − 4ax₂² − 4bx₃² + 4abx₄² = 4)` |
//! | `T_{a,b}` | `∃x (x ∈ S ∧ r − x ∈ S)` |
//! | `T^×_{a,b}` | `r ∈ T ∧ ∃v (v ∈ T ∧ rv = 1)` |
//! | `I^c_{a,b}` | `∃xyuv (u, v ∈ T^× ∧ r = cx²u ∧ r = 1 − y²v)` |
//! | `J_{a,b}` | `∃xy (x, r − x ∈ I^a ∧ y, r − y ∈ I^b)` |
//! | `J_{a,b,c,d}` | `∃x (x ∈ J_{a,b} ∧ r − x ∈ J_{c,d})` |
//! | `J⁻¹` | `∃y (y ∈ J ∧ ry = 1)` |
//! | disjoint | `∃xy (abcda′b′c′d′x = 1 ∧ y ∈ J ∧ 1 − y ∈ J′)` |
//! | `J_n` | `∃xy (r = xy^{n−1} ∧ x, y ∈ J)` |
//! | `J_n⁻¹` | `∃y (ry = 1 ∧ y ∈ J_n)` |
//!
//! Bound variables are named `x1, x2, …` in construction order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::circuit::{Circuit, NodeId};
use super::combine::{combine_many, combine_sos};
use super::formula::{prenex_or, Formula, Matrix, Quantifier};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::semantics::BinaryForm;

/// Names of the free variables.
pub const PARAMS: [&str; 4] = ["a", "b", "c", "d"];
pub const PRIMED: [&str; 4] = ["a'", "b'", "c'", "d'"];
pub const ARG: &str = "r";
/// Free variable introduced by [`substitute_form`].
pub const FORM_ARG: &str = "lambda";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    S { a: NodeId, b: NodeId },
    T { a: NodeId, b: NodeId },
    TUnit { a: NodeId, b: NodeId },
    I { a: NodeId, b: NodeId, c: NodeId },
    Jab { a: NodeId, b: NodeId },
    Jabcd { p: [NodeId; 4] },
    InvJ { p: [NodeId; 4] },
    Disjoint { p: [NodeId; 4], q: [NodeId; 4] },
    Jn { p: [NodeId; 4], n: u32 },
    InvJn { p: [NodeId; 4], n: u32 },
    Premise,
}

/// One level of the tower, applied to the argument `arg`.
#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub(crate) kind: Kind,
    pub(crate) arg: Option<NodeId>,
    pub(crate) vars: Vec<(String, NodeId)>,
    pub(crate) atoms: Vec<NodeId>,
    pub(crate) children: Vec<Block>,
}

impl Block {
    fn new(kind: Kind, arg: Option<NodeId>) -> Self {
        Block { kind, arg, vars: Vec::new(), atoms: Vec::new(), children: Vec::new() }
    }

    /// Bound variables, own before children's.
    pub(crate) fn all_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |b| out.extend(b.vars.iter().map(|(v, _)| v.clone())));
        out
    }

    /// Atoms, own before children's.
    pub(crate) fn all_atoms(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.walk(&mut |b| out.extend(b.atoms.iter().copied()));
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Block)) {
        f(self);
        for ch in &self.children {
            ch.walk(f);
        }
    }
}

/// Shared circuit plus a gensym that never returns a reserved name.
pub(crate) struct Builder {
    pub(crate) c: Circuit,
    counter: u64,
    reserved: HashSet<String>,
}

impl Builder {
    pub(crate) fn new(reserved: &[&str]) -> Self {
        Builder { c: Circuit::new(), counter: 0, reserved: reserved.iter().map(|s| s.to_string()).collect() }
    }

    fn fresh(&mut self, block: &mut Block) -> NodeId {
        let name = loop {
            self.counter += 1;
            let cand = format!("x{}", self.counter);
            if !self.reserved.contains(&cand) {
                break cand;
            }
        };
        let id = self.c.var(&name);
        block.vars.push((name, id));
        id
    }

    fn params(&mut self, names: [&str; 4]) -> [NodeId; 4] {
        names.map(|n| self.c.var(n))
    }

    pub(crate) fn s(&mut self, a: NodeId, b: NodeId, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::S { a, b }, Some(r));
        let x2 = self.fresh(&mut blk);
        let x3 = self.fresh(&mut blk);
        let x4 = self.fresh(&mut blk);
        let c = &mut self.c;
        let four = BigInt::from(4);
        let r2 = c.pow(r, 2);
        let sq2 = c.pow(x2, 2);
        let t2 = c.mul(a, sq2);
        let t2 = c.scale(t2, &four);
        let sq3 = c.pow(x3, 2);
        let t3 = c.mul(b, sq3);
        let t3 = c.scale(t3, &four);
        let ab = c.mul(a, b);
        let sq4 = c.pow(x4, 2);
        let t4 = c.mul(ab, sq4);
        let t4 = c.scale(t4, &four);
        let k = c.int(4);
        let e = c.sub(r2, t2);
        let e = c.sub(e, t3);
        let e = c.add(e, t4);
        blk.atoms.push(c.sub(e, k));
        blk
    }

    pub(crate) fn t(&mut self, a: NodeId, b: NodeId, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::T { a, b }, Some(r));
        let x = self.fresh(&mut blk);
        let rest = self.c.sub(r, x);
        blk.children.push(self.s(a, b, x));
        blk.children.push(self.s(a, b, rest));
        blk
    }

    pub(crate) fn t_unit(&mut self, a: NodeId, b: NodeId, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::TUnit { a, b }, Some(r));
        let v = self.fresh(&mut blk);
        let rv = self.c.mul(r, v);
        let one = self.c.int(1);
        blk.atoms.push(self.c.sub(rv, one));
        blk.children.push(self.t(a, b, r));
        blk.children.push(self.t(a, b, v));
        blk
    }

    pub(crate) fn i(&mut self, a: NodeId, b: NodeId, cc: NodeId, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::I { a, b, c: cc }, Some(r));
        let x = self.fresh(&mut blk);
        let y = self.fresh(&mut blk);
        let u = self.fresh(&mut blk);
        let v = self.fresh(&mut blk);
        let c = &mut self.c;
        let x2 = c.pow(x, 2);
        let x2u = c.mul(x2, u);
        let cx2u = c.mul(cc, x2u);
        blk.atoms.push(c.sub(r, cx2u));
        let y2 = c.pow(y, 2);
        let y2v = c.mul(y2, v);
        let one = c.int(1);
        let rhs = c.sub(one, y2v);
        blk.atoms.push(c.sub(r, rhs));
        blk.children.push(self.t_unit(a, b, u));
        blk.children.push(self.t_unit(a, b, v));
        blk
    }

    pub(crate) fn j_ab(&mut self, a: NodeId, b: NodeId, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::Jab { a, b }, Some(r));
        let x = self.fresh(&mut blk);
        let y = self.fresh(&mut blk);
        let rx = self.c.sub(r, x);
        let ry = self.c.sub(r, y);
        blk.children.push(self.i(a, b, a, x));
        blk.children.push(self.i(a, b, a, rx));
        blk.children.push(self.i(a, b, b, y));
        blk.children.push(self.i(a, b, b, ry));
        blk
    }

    pub(crate) fn j_abcd(&mut self, p: [NodeId; 4], r: NodeId) -> Block {
        let mut blk = Block::new(Kind::Jabcd { p }, Some(r));
        let x = self.fresh(&mut blk);
        let rx = self.c.sub(r, x);
        blk.children.push(self.j_ab(p[0], p[1], x));
        blk.children.push(self.j_ab(p[2], p[3], rx));
        blk
    }

    fn reciprocal_atom(&mut self, blk: &mut Block, r: NodeId) -> NodeId {
        let y = self.fresh(blk);
        let ry = self.c.mul(r, y);
        let one = self.c.int(1);
        blk.atoms.push(self.c.sub(ry, one));
        y
    }

    pub(crate) fn inv_j(&mut self, p: [NodeId; 4], r: NodeId) -> Block {
        let mut blk = Block::new(Kind::InvJ { p }, Some(r));
        let y = self.reciprocal_atom(&mut blk, r);
        blk.children.push(self.j_abcd(p, y));
        blk
    }

    pub(crate) fn disjoint(&mut self, p: [NodeId; 4], q: [NodeId; 4]) -> Block {
        let mut blk = Block::new(Kind::Disjoint { p, q }, None);
        let x = self.fresh(&mut blk);
        let y = self.fresh(&mut blk);
        let mut factors: Vec<NodeId> = p.iter().chain(q.iter()).copied().collect();
        factors.push(x);
        let prod = self.c.product(&factors);
        let one = self.c.int(1);
        blk.atoms.push(self.c.sub(prod, one));
        let rest = self.c.sub(one, y);
        blk.children.push(self.j_abcd(p, y));
        blk.children.push(self.j_abcd(q, rest));
        blk
    }

    pub(crate) fn j_n(&mut self, p: [NodeId; 4], n: u32, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::Jn { p, n }, Some(r));
        let x = self.fresh(&mut blk);
        let y = self.fresh(&mut blk);
        let yp = self.c.pow(y, n - 1);
        let xy = self.c.mul(x, yp);
        blk.atoms.push(self.c.sub(r, xy));
        blk.children.push(self.j_abcd(p, x));
        blk.children.push(self.j_abcd(p, y));
        blk
    }

    pub(crate) fn inv_j_n(&mut self, p: [NodeId; 4], n: u32, r: NodeId) -> Block {
        let mut blk = Block::new(Kind::InvJn { p, n }, Some(r));
        let y = self.reciprocal_atom(&mut blk, r);
        blk.children.push(self.j_n(p, n, y));
        blk
    }

    pub(crate) fn premise(&mut self, p: [NodeId; 4], q: [NodeId; 4], r: NodeId) -> Block {
        let mut blk = Block::new(Kind::Premise, Some(r));
        blk.children.push(self.disjoint(p, q));
        blk.children.push(self.inv_j(q, r));
        blk
    }
}

/// The members of the tower that are conjunctions of equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TowerSet {
    S,
    T,
    TUnit,
    I,
    J,
    Jabcd,
    InvJ,
    Disjoint,
    Jn(u32),
    InvJn(u32),
    /// Disjointness of `Ω_{a,b,c,d}` and `Ω_{a′,b′,c′,d′}` together with
    /// `r ∈ (J_{a′,b′,c′,d′} ∖ {0})⁻¹`.
    Premise,
}

impl TowerSet {
    pub const ALL_FIXED: [TowerSet; 9] = [
        TowerSet::S,
        TowerSet::T,
        TowerSet::TUnit,
        TowerSet::I,
        TowerSet::J,
        TowerSet::Jabcd,
        TowerSet::InvJ,
        TowerSet::Disjoint,
        TowerSet::Premise,
    ];

    fn free(self) -> Vec<&'static str> {
        match self {
            TowerSet::S | TowerSet::T | TowerSet::TUnit | TowerSet::J => vec!["a", "b", ARG],
            TowerSet::I => vec!["a", "b", "c", ARG],
            TowerSet::Jabcd | TowerSet::InvJ | TowerSet::Jn(_) | TowerSet::InvJn(_) => {
                PARAMS.iter().copied().chain([ARG]).collect()
            }
            TowerSet::Disjoint => PARAMS.iter().chain(PRIMED.iter()).copied().collect(),
            TowerSet::Premise => PARAMS.iter().chain(PRIMED.iter()).copied().chain([ARG]).collect(),
        }
    }
}

impl fmt::Display for TowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerSet::S => f.write_str("S"),
            TowerSet::T => f.write_str("T"),
            TowerSet::TUnit => f.write_str("Tx"),
            TowerSet::I => f.write_str("I"),
            TowerSet::J => f.write_str("J"),
            TowerSet::Jabcd => f.write_str("Jabcd"),
            TowerSet::InvJ => f.write_str("invJ"),
            TowerSet::Disjoint => f.write_str("disjoint"),
            TowerSet::Jn(n) => write!(f, "Jn({n})"),
            TowerSet::InvJn(n) => write!(f, "invJn({n})"),
            TowerSet::Premise => f.write_str("premise"),
        }
    }
}

impl TowerSet {
    /// Parses a set name; `n` is used by `Jn` and `invJn`.
    pub fn parse(name: &str, n: u32) -> Result<Self> {
        Ok(match name {
            "S" => TowerSet::S,
            "T" => TowerSet::T,
            "Tx" | "Tunit" => TowerSet::TUnit,
            "I" => TowerSet::I,
            "J" | "Jab" => TowerSet::J,
            "Jabcd" => TowerSet::Jabcd,
            "invJ" => TowerSet::InvJ,
            "disjoint" => TowerSet::Disjoint,
            "Jn" => TowerSet::Jn(n),
            "invJn" => TowerSet::InvJn(n),
            "premise" => TowerSet::Premise,
            other => return Err(Error::Parse(format!("unknown tower set {other}"))),
        })
    }
}

impl FromStr for TowerSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TowerSet::parse(s, 2)
    }
}

/// A tower member as an explicit conjunction, with the block structure kept
/// for witness construction.
#[derive(Debug, Clone)]
pub struct Conjunction {
    circuit: Circuit,
    free: Vec<String>,
    block: Block,
}

impl Conjunction {
    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Mutable access for building further combinations over the atoms.
    pub fn circuit_mut(&mut self) -> &mut Circuit {
        &mut self.circuit
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn bound(&self) -> Vec<String> {
        self.block.all_vars()
    }

    pub fn atoms(&self) -> Vec<NodeId> {
        self.block.all_atoms()
    }

    /// `∃(bound) ⋀ atoms = 0`.
    pub fn to_formula(&self) -> Result<Formula> {
        Formula::exists_conjunction(self.free.clone(), self.bound(), &self.circuit, &self.atoms())
    }

    /// Adds the single-equation form of the conjunction to the circuit and
    /// returns its root.
    pub fn combine(&mut self, real_embedded: bool) -> Result<NodeId> {
        let atoms = self.atoms();
        combine(&mut self.circuit, &atoms, real_embedded)
    }

    /// `∃(bound) F = 0` with `F` the combined equation.
    pub fn combined_formula(&self, real_embedded: bool) -> Result<Formula> {
        let mut c = self.clone();
        let root = c.combine(real_embedded)?;
        Formula::new(
            self.free.clone(),
            self.bound().into_iter().map(|v| (Quantifier::Exists, v)).collect(),
            &c.circuit,
            Matrix::Eq(root),
            real_embedded,
        )
    }

    /// Values of all bound variables making every atom vanish, for free
    /// values whose quaternion algebras are split (`a = 1` or `b = 1` in
    /// every pair) and whose arguments avoid zero where a reciprocal is
    /// needed.
    pub fn witness(&self, free_values: &HashMap<String, Rational>) -> Result<HashMap<String, Rational>> {
        let mut env = free_values.clone();
        for v in &self.free {
            if !env.contains_key(v) {
                return Err(Error::MissingVariable(v.clone()));
            }
        }
        self.block.fill_witness(&self.circuit, &mut env)?;
        Ok(env)
    }
}

pub(crate) fn combine(c: &mut Circuit, atoms: &[NodeId], real_embedded: bool) -> Result<NodeId> {
    if real_embedded {
        Ok(combine_sos(c, atoms))
    } else {
        combine_many(c, atoms)
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!("J_n builders need n ≥ 2, got {n}")));
    }
    Ok(())
}

/// Builds the conjunction for `set` with the default free-variable names.
pub fn conjunction(set: TowerSet) -> Result<Conjunction> {
    if let TowerSet::Jn(n) | TowerSet::InvJn(n) = set {
        check_n(n)?;
    }
    let free = set.free();
    let mut reserved = free.clone();
    reserved.extend(PRIMED);
    let mut bld = Builder::new(&reserved);
    let p = bld.params(PARAMS);
    let q = bld.params(PRIMED);
    let r = bld.c.var(ARG);
    let block = match set {
        TowerSet::S => bld.s(p[0], p[1], r),
        TowerSet::T => bld.t(p[0], p[1], r),
        TowerSet::TUnit => bld.t_unit(p[0], p[1], r),
        TowerSet::I => bld.i(p[0], p[1], p[2], r),
        TowerSet::J => bld.j_ab(p[0], p[1], r),
        TowerSet::Jabcd => bld.j_abcd(p, r),
        TowerSet::InvJ => bld.inv_j(p, r),
        TowerSet::Disjoint => bld.disjoint(p, q),
        TowerSet::Jn(n) => bld.j_n(p, n, r),
        TowerSet::InvJn(n) => bld.inv_j_n(p, n, r),
        TowerSet::Premise => bld.premise(p, q, r),
    };
    Ok(Conjunction { circuit: bld.c, free: free.into_iter().map(String::from).collect(), block })
}

/// `S_{a,b}` with caller-chosen names for `a`, `b` and `r`.
pub fn build_s(a: &str, b: &str, r: &str) -> Result<Formula> {
    let names = [a, b, r];
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || names[..i].contains(n) {
            return Err(Error::NameCollision(n.to_string()));
        }
    }
    let mut bld = Builder::new(&names);
    let (av, bv, rv) = (bld.c.var(a), bld.c.var(b), bld.c.var(r));
    let block = bld.s(av, bv, rv);
    let conj = Conjunction { circuit: bld.c, free: names.iter().map(|s| s.to_string()).collect(), block };
    conj.to_formula()
}

pub fn build_t() -> Result<Formula> {
    conjunction(TowerSet::T)?.to_formula()
}

pub fn build_t_unit() -> Result<Formula> {
    conjunction(TowerSet::TUnit)?.to_formula()
}

pub fn build_i() -> Result<Formula> {
    conjunction(TowerSet::I)?.to_formula()
}

pub fn build_j() -> Result<Formula> {
    conjunction(TowerSet::J)?.to_formula()
}

pub fn build_jabcd() -> Result<Formula> {
    conjunction(TowerSet::Jabcd)?.to_formula()
}

pub fn build_inv_j() -> Result<Formula> {
    conjunction(TowerSet::InvJ)?.to_formula()
}

pub fn build_disjoint() -> Result<Formula> {
    conjunction(TowerSet::Disjoint)?.to_formula()
}

pub fn build_jn(n: u32) -> Result<Formula> {
    conjunction(TowerSet::Jn(n))?.to_formula()
}

pub fn build_inv_jn(n: u32) -> Result<Formula> {
    conjunction(TowerSet::InvJn(n))?.to_formula()
}

pub fn build_premise() -> Result<Formula> {
    conjunction(TowerSet::Premise)?.to_formula()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Shared tail of the two ∀∃ definitions: `∀a′b′c′d′ ∀x (P ≠ 0)` for the
/// combined premise, merged with `∃z (Q = 0)`.
fn forall_exists(
    bld: &mut Builder,
    premise: &Block,
    conclusion: &Block,
    conclusion_free: Vec<String>,
    real_embedded: bool,
) -> Result<Formula> {
    let p = combine(&mut bld.c, &premise.all_atoms(), real_embedded)?;
    let q = combine(&mut bld.c, &conclusion.all_atoms(), real_embedded)?;
    let mut uprefix: Vec<(Quantifier, String)> =
        PRIMED.iter().map(|v| (Quantifier::Forall, v.to_string())).collect();
    uprefix.extend(premise.all_vars().into_iter().map(|v| (Quantifier::Forall, v)));
    let mut ufree = strings(&PARAMS);
    ufree.push(ARG.to_string());
    let universal = Formula::new(ufree, uprefix, &bld.c, Matrix::Neq(p), real_embedded)?;
    let eprefix = conclusion.all_vars().into_iter().map(|v| (Quantifier::Exists, v)).collect();
    let existential = Formula::new(conclusion_free, eprefix, &bld.c, Matrix::Eq(q), real_embedded)?;
    prenex_or(&universal, &existential)
}

fn campana_builder() -> (Builder, [NodeId; 4], [NodeId; 4], NodeId) {
    let mut reserved: Vec<&str> = PARAMS.iter().chain(PRIMED.iter()).copied().collect();
    reserved.extend([ARG, "y"]);
    let mut bld = Builder::new(&reserved);
    let p = bld.params(PARAMS);
    let q = bld.params(PRIMED);
    let r = bld.c.var(ARG);
    (bld, p, q, r)
}

/// The ∀∃ definition of `C_{S,n}` in the free variables `a, b, c, d, r`:
///
/// `∀a′b′c′d′ [¬(abcda′b′c′d′ ≠ 0 ∧ Ω ∩ Ω′ = ∅ ∧ r ∈ (J′ ∖ {0})⁻¹) ∨ r ∈ (J′_n ∖ {0})⁻¹]`
///
/// with both sides combined into single equations and merged into prenex
/// form. With `real_embedded` the sum-of-squares combiner is used.
pub fn build_campana(n: u32, real_embedded: bool) -> Result<Formula> {
    check_n(n)?;
    let (mut bld, p, q, r) = campana_builder();
    let premise = bld.premise(p, q, r);
    let conclusion = bld.inv_j_n(q, n, r);
    let mut cfree = strings(&PRIMED);
    cfree.push(ARG.to_string());
    forall_exists(&mut bld, &premise, &conclusion, cfree, real_embedded)
}

/// The ∀∃ definition of `O_S` in the free variables `a, b, c, d, r`:
///
/// `∀a′b′c′d′ ([abcda′b′c′d′ ≠ 0 ∧ Ω ∩ Ω′ = ∅ ∧ 1 ∉ J′] ⇒ r ∉ (J′ ∖ {0})⁻¹)`,
///
/// rewritten as `∀a′b′c′d′ [¬(abcda′b′c′d′ ≠ 0 ∧ Ω ∩ Ω′ = ∅ ∧ r ∈ (J′ ∖ {0})⁻¹) ∨ 1 ∈ J′]`,
/// which shares its universal block with [`build_campana`].
pub fn build_integrality(real_embedded: bool) -> Result<Formula> {
    let (mut bld, p, q, r) = campana_builder();
    let premise = bld.premise(p, q, r);
    let one = bld.c.int(1);
    let conclusion = bld.j_abcd(q, one);
    forall_exists(&mut bld, &premise, &conclusion, strings(&PRIMED), real_embedded)
}

/// Replaces the free variable `r` by `F(λ, 1)`, with `λ` a new free variable
/// named [`FORM_ARG`]. The form must have integer coefficients so that the
/// defining polynomial keeps integer coefficients.
pub fn substitute_form(base: &Formula, form: &BinaryForm) -> Result<Formula> {
    if !base.free().iter().any(|v| v == ARG) {
        return Err(Error::ShapeMismatch(format!("formula has no free variable {ARG}")));
    }
    if base.free().iter().map(String::as_str).chain(base.bound()).any(|v| v == FORM_ARG) {
        return Err(Error::NameCollision(FORM_ARG.to_string()));
    }
    let mut c = Circuit::new();
    let lambda = c.var(FORM_ARG);
    let mut terms = Vec::new();
    for (coef, i) in form.terms() {
        if !coef.is_integer() {
            return Err(Error::Precondition(format!("form coefficient {coef} is not an integer")));
        }
        let k = coef.to_integer();
        let mono = if i == 0 { c.int(1) } else { c.pow(lambda, i) };
        terms.push(if k.is_one() { mono } else { c.scale(mono, &k) });
    }
    let f = c.sum(&terms);
    let atoms = base.matrix().atoms();
    let images = c.import(base.circuit(), &atoms, |c, name| if name == ARG { f } else { c.var(name) });
    let matrix = base.matrix().remap(&mut images.into_iter());
    let free = base.free().iter().map(|v| if v == ARG { FORM_ARG.to_string() } else { v.clone() }).collect();
    Formula::new(free, base.prefix().to_vec(), &c, matrix, base.real_embedded())
        .map(|f| f.with_real_embedded(base.real_embedded()))
}
