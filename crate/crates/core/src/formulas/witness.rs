//! Explicit witnesses for the tower over split quaternion algebras.
//!
//! When `a = 1` (or `b = 1`) the algebra `(a, b)` is split, every rational is
//! a reduced trace of a norm-one element, and every level of the tower can be
//! satisfied by elementary formulas. These witnesses give points at which all
//! atoms of a block vanish simultaneously.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::circuit::{Circuit, NodeId};
use super::tower::{Block, Kind};
use crate::arith::{rat, Rational};
use crate::error::{Error, Result};

fn value(c: &Circuit, id: NodeId, env: &HashMap<String, Rational>) -> Result<Rational> {
    c.eval_exact(id, env)
}

fn reciprocal(r: &Rational, what: &str) -> Result<Rational> {
    if r.is_zero() {
        return Err(Error::Precondition(format!("{what} needs a nonzero argument")));
    }
    Ok(r.recip())
}

impl Block {
    pub(crate) fn fill_witness(&self, c: &Circuit, env: &mut HashMap<String, Rational>) -> Result<()> {
        let r = match self.arg {
            Some(a) => value(c, a, env)?,
            None => Rational::zero(),
        };
        let half = rat(1) / rat(2);
        let vals: Vec<Rational> = match self.kind {
            Kind::S { a, b } => {
                let (a, b) = (value(c, a, env)?, value(c, b, env)?);
                let four = rat(4);
                // r² − 4 = 4a(x₂² − x₄²) when b = 1, 4b(x₃² − x₄²) when a = 1
                let (m, first_free) = if a.is_one() {
                    ((&r * &r - &four) / (&four * &b), false)
                } else if b.is_one() {
                    ((&r * &r - &four) / (&four * &a), true)
                } else {
                    return Err(Error::Precondition(format!(
                        "witnesses need a split algebra, got ({a}, {b})"
                    )));
                };
                let p = (&m + rat(1)) * &half;
                let q = (&m - rat(1)) * &half;
                if first_free {
                    vec![p, rat(0), q]
                } else {
                    vec![rat(0), p, q]
                }
            }
            Kind::T { .. } => vec![&r * &half],
            Kind::TUnit { .. } => vec![reciprocal(&r, "T^×")?],
            Kind::I { c: cc, .. } => {
                let cc = value(c, cc, env)?;
                let (x, u) = if r.is_zero() { (rat(0), rat(1)) } else { (rat(1), &r / &cc) };
                let (y, v) = if r.is_one() { (rat(0), rat(1)) } else { (rat(1), rat(1) - &r) };
                vec![x, y, u, v]
            }
            Kind::Jab { .. } => vec![&r * &half, &r * &half],
            Kind::Jabcd { .. } => vec![&r * &half],
            Kind::InvJ { .. } | Kind::InvJn { .. } => vec![reciprocal(&r, "the inverse set")?],
            Kind::Disjoint { p, q } => {
                let mut prod = rat(1);
                for id in p.iter().chain(q.iter()) {
                    prod *= value(c, *id, env)?;
                }
                vec![reciprocal(&prod, "disjointness")?, half.clone()]
            }
            Kind::Jn { .. } => vec![r.clone(), rat(1)],
            Kind::Premise => Vec::new(),
        };
        debug_assert_eq!(vals.len(), self.vars.len());
        for ((name, _), v) in self.vars.iter().zip(vals) {
            env.insert(name.clone(), v);
        }
        for ch in &self.children {
            ch.fill_witness(c, env)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::arith::ratio;
    use crate::formulas::formula::evaluate_matrix;
    use crate::formulas::tower::{conjunction, TowerSet};
    use proptest::prelude::*;

    fn free_env(names: &[String], vals: &[Rational]) -> HashMap<String, Rational> {
        names.iter().cloned().zip(vals.iter().cloned()).collect()
    }

    fn check(set: TowerSet, vals: &[Rational]) {
        let conj = conjunction(set).unwrap();
        let env = free_env(conj.free(), vals);
        let w = conj.witness(&env).unwrap();
        for atom in conj.atoms() {
            assert!(conj.circuit().eval_exact(atom, &w).unwrap().is_zero(), "{set}");
        }
        assert!(evaluate_matrix(&conj.to_formula().unwrap(), &w).unwrap());
    }

    #[test]
    fn witnesses_for_every_level() {
        let r = ratio(7, 3);
        check(TowerSet::S, &[rat(1), rat(5), r.clone()]);
        check(TowerSet::S, &[rat(-3), rat(1), r.clone()]);
        check(TowerSet::T, &[rat(1), rat(2), r.clone()]);
        check(TowerSet::TUnit, &[rat(3), rat(1), r.clone()]);
        check(TowerSet::I, &[rat(1), rat(1), rat(5), r.clone()]);
        check(TowerSet::I, &[rat(1), rat(1), rat(5), rat(0)]);
        check(TowerSet::I, &[rat(1), rat(1), rat(5), rat(1)]);
        check(TowerSet::J, &[rat(1), rat(-7), r.clone()]);
        let p = [rat(1), rat(2), rat(3), rat(1)];
        let mut v = p.to_vec();
        v.push(r.clone());
        check(TowerSet::Jabcd, &v);
        check(TowerSet::InvJ, &v);
        check(TowerSet::Jn(3), &v);
        check(TowerSet::InvJn(5), &v);
        let mut d = p.to_vec();
        d.extend([rat(1), rat(1), rat(-1), rat(1)]);
        check(TowerSet::Disjoint, &d);
        d.push(r);
        check(TowerSet::Premise, &d);
    }

    #[test]
    fn nonsplit_parameters_are_rejected() {
        let conj = conjunction(TowerSet::S).unwrap();
        let env = free_env(conj.free(), &[rat(-1), rat(-1), rat(1)]);
        assert!(matches!(conj.witness(&env), Err(Error::Precondition(_))));
        let conj = conjunction(TowerSet::InvJ).unwrap();
        let env = free_env(conj.free(), &[rat(1), rat(1), rat(1), rat(1), rat(0)]);
        assert!(conj.witness(&env).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn t_unit_witnesses(b in -20i64..20, num in -50i64..50, den in 1i64..20) {
            prop_assume!(b != 0 && num != 0);
            let conj = conjunction(TowerSet::TUnit).unwrap();
            let env = free_env(conj.free(), &[rat(1), rat(b), ratio(num, den)]);
            let w = conj.witness(&env).unwrap();
            for atom in conj.atoms() {
                prop_assert!(conj.circuit().eval_exact(atom, &w).unwrap().is_zero());
            }
        }
    }
}
