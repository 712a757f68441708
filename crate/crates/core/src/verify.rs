//! Seeded property suites.
//!
//! Every check is deterministic given its seed: trial `i` draws from its own
//! ChaCha stream, trials run in parallel, and results are reported in trial
//! order, so the first counterexample is the same on every run.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{format_rational, primes_below, rat, ratio, Rational};
use crate::error::{Error, Result};
use crate::formulas::circuit::{rational_mod, ModEval, MODULI};
use crate::formulas::{
    build_campana, build_s, combine_pair, conjunction, emit, evaluate_matrix, norm_form, parse_json, Circuit,
    Conjunction, Format, FormulaStats, NodeId, Poly, TowerSet,
};
use crate::parametrize::{construct_omega, SearchConfig};
use crate::places::{hilbert, hilbert_oracle_at, reciprocity_check, Place, PlaceSet};
use crate::semantics::{campana_member, campana_via_coordinates, generate_trace_element, s_integer_member};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Per-construction time limit in the round-trip check.
pub const CONSTRUCTION_LIMIT: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Hilbert,
    Construct,
    Semantics,
    Formulas,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "hilbert" => Suite::Hilbert,
            "construct" => Suite::Construct,
            "semantics" => Suite::Semantics,
            "formulas" => Suite::Formulas,
            _ => return Err(Error::Parse(format!("unknown suite {s}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sample count for the large randomized checks; the expensive ones use
    /// a tenth of it.
    pub samples: usize,
    pub search: SearchConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES, search: SearchConfig::default() }
    }
}

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// First failing case, in a form that can be replayed from the CLI.
    pub counterexample: Option<String>,
    /// Wall time; not part of the printed report, which must be
    /// reproducible byte for byte.
    pub elapsed: Duration,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<34} {}", self.name, self.detail)?;
        if let Some(cx) = &self.counterexample {
            write!(f, "\n      counterexample: {cx}")?;
        }
        Ok(())
    }
}

fn rng_for(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mixed = seed
        ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03)
        ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Runs `trials` independent trials; each returns `Some(description)` on
/// failure.
fn run_trials(
    name: &str,
    trials: usize,
    detail: impl FnOnce(usize) -> String,
    trial: impl Fn(usize) -> Result<Option<String>> + Sync,
) -> Check {
    let start = Instant::now();
    let outcomes: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|i| trial(i).unwrap_or_else(|e| Some(format!("trial {i}: error {e}"))))
        .collect();
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    Check {
        name: name.to_string(),
        passed: failures == 0,
        detail: format!("{} ({failures} failures / {trials})", detail(failures)),
        counterexample: outcomes.into_iter().flatten().next(),
        elapsed: start.elapsed(),
    }
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let k = rng.gen_range(-bound..=bound);
        if k != 0 {
            return k;
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    ratio(nonzero(rng, num), rng.gen_range(1..=den))
}

fn places_up_to(bound: u64) -> Vec<Place> {
    std::iter::once(Place::Infinite)
        .chain(primes_below(bound + 1).into_iter().map(Place::Finite))
        .collect()
}

/// `hilbert = hilbert_oracle` on `a, b ∈ ±{1, …, bound}` at `∞` and every
/// prime up to `prime_bound`.
pub fn hilbert_grid(bound: i64, prime_bound: u64) -> Check {
    let places = places_up_to(prime_bound);
    let values: Vec<i64> = (-bound..=bound).filter(|&k| k != 0).collect();
    let n = values.len();
    run_trials(
        "hilbert = oracle (grid)",
        n * n,
        |_| format!("a, b in ±[1, {bound}], {} places", places.len()),
        |i| {
            let (a, b) = (rat(values[i / n]), rat(values[i % n]));
            for v in &places {
                let (x, y) = (hilbert(&a, &b, v)?, hilbert_oracle_at(&a, &b, v)?);
                if x != y {
                    return Ok(Some(format!("hilbert {a} {b} {v} gives {x}, oracle {y}")));
                }
            }
            Ok(None)
        },
    )
}

/// Agreement on random rationals with small numerators and denominators.
pub fn hilbert_random(cfg: &VerifyConfig) -> Check {
    let places = places_up_to(50);
    run_trials(
        "hilbert = oracle (random rationals)",
        cfg.samples,
        |_| "num ≤ 200, den ≤ 30".into(),
        |i| {
            let mut rng = rng_for(cfg.seed, 1, i as u64);
            let a = random_rational(&mut rng, 200, 30);
            let b = random_rational(&mut rng, 200, 30);
            let v = *places.choose(&mut rng).expect("nonempty");
            let (x, y) = (hilbert(&a, &b, &v)?, hilbert_oracle_at(&a, &b, &v)?);
            Ok((x != y).then(|| {
                format!("hilbert {} {} {v} gives {x}, oracle {y}", format_rational(&a), format_rational(&b))
            }))
        },
    )
}

/// `∏_v (a, b)_v = 1` over the places where the symbol can be `−1`.
pub fn reciprocity(cfg: &VerifyConfig) -> Check {
    run_trials(
        "hilbert reciprocity",
        cfg.samples,
        |_| "num ≤ 10^6, den ≤ 10^3".into(),
        |i| {
            let mut rng = rng_for(cfg.seed, 2, i as u64);
            let a = random_rational(&mut rng, 1_000_000, 1_000);
            let b = random_rational(&mut rng, 1_000_000, 1_000);
            Ok((!reciprocity_check(&a, &b)?)
                .then(|| format!("product of symbols of ({}, {}) is -1", format_rational(&a), format_rational(&b))))
        },
    )
}

/// `construct_omega` realizes every subset of `{2, 3, 5, 7}` and `trials`
/// random sets of at most four primes below 100, each within
/// [`CONSTRUCTION_LIMIT`].
pub fn construction_roundtrip(cfg: &VerifyConfig, trials: usize) -> Check {
    let small = [2u64, 3, 5, 7];
    let pool: Vec<u64> = primes_below(100).into_iter().map(|p| p.get()).collect();
    let mut sets: Vec<Vec<u64>> =
        (0..16u32).map(|m| small.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, p)| *p).collect()).collect();
    for i in 0..trials {
        let mut rng = rng_for(cfg.seed, 3, i as u64);
        let k = rng.gen_range(0..=4);
        let mut s: Vec<u64> = pool.choose_multiple(&mut rng, k).copied().collect();
        s.sort_unstable();
        sets.push(s);
    }
    let search = cfg.search;
    run_trials(
        "construct_omega round trip",
        sets.len(),
        |_| format!("16 subsets of {{2,3,5,7}} + {trials} random sets"),
        |i| {
            let s = PlaceSet::from_primes(sets[i].iter().copied())?;
            let start = Instant::now();
            let report = construct_omega(&s, &search)?;
            let took = start.elapsed();
            let cmd = format!("construct {}", sets[i].iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
            Ok(if !report.succeeded() {
                Some(format!("{cmd}: achieved {}", report.achieved))
            } else if took >= CONSTRUCTION_LIMIT {
                Some(format!("{cmd}: took {took:?}"))
            } else {
                None
            })
        },
    )
}

fn random_place_set(rng: &mut ChaCha8Rng) -> PlaceSet {
    let pool: Vec<u64> = primes_below(30).into_iter().map(|p| p.get()).collect();
    let k = rng.gen_range(0..=3);
    PlaceSet::from_primes(pool.choose_multiple(rng, k).copied()).expect("distinct primes")
}

/// An integer up to `bound` in absolute value built from small prime powers,
/// so that denominators carry interesting exponents.
fn smooth(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let primes = [2i64, 3, 5, 7, 11, 13];
    let mut x: i64 = 1;
    for _ in 0..rng.gen_range(0..8) {
        let p = *primes.choose(rng).expect("nonempty");
        if x.abs() * p > bound {
            break;
        }
        x *= p;
    }
    if rng.gen_bool(0.5) {
        -x
    } else {
        x
    }
}

/// The coordinate criterion for `[x0 : x1]` agrees with membership of
/// `x0/x1`.
pub fn campana_coordinates(cfg: &VerifyConfig) -> Check {
    run_trials(
        "campana coordinates = valuations",
        cfg.samples,
        |_| "|x| ≤ 10^6, n ≤ 6".into(),
        |i| {
            let mut rng = rng_for(cfg.seed, 5, i as u64);
            let bound = 1_000_000;
            let x0 = if rng.gen_bool(0.5) { smooth(&mut rng, bound) } else { rng.gen_range(-bound..=bound) };
            let x1 = if rng.gen_bool(0.7) { smooth(&mut rng, bound) } else { nonzero(&mut rng, bound) };
            let s = random_place_set(&mut rng);
            let n = rng.gen_range(1..=6);
            let (x0, x1) = (rat(x0), rat(x1));
            let direct = campana_member(&s, n, &(&x0 / &x1))?;
            let coords = campana_via_coordinates(&x0, &x1, &s, n)?;
            Ok((direct != coords).then(|| {
                format!("member campana --n {n} --s \"{}\" {}/{}: {direct} vs coordinates {coords}", set_arg(&s), x0, x1)
            }))
        },
    )
}

fn set_arg(s: &PlaceSet) -> String {
    s.primes().iter().map(|p| p.get().to_string()).collect::<Vec<_>>().join(",")
}

/// `C_{S,n+1} ⊆ C_{S,n}`, `C_{S,1} = ℚ`, and membership for `n` beyond the
/// largest denominator exponent coincides with being an `S`-integer.
pub fn filtration(cfg: &VerifyConfig) -> Check {
    const MAX_EXP: u32 = 10;
    run_trials(
        "campana filtration",
        cfg.samples,
        |_| format!("denominator exponents ≤ {MAX_EXP}"),
        |i| {
            let mut rng = rng_for(cfg.seed, 6, i as u64);
            let s = random_place_set(&mut rng);
            let mut den = num_bigint::BigInt::one();
            for p in [2u32, 3, 5, 7, 11] {
                if rng.gen_bool(0.4) {
                    den *= num_bigint::BigInt::from(p).pow(rng.gen_range(1..=MAX_EXP));
                }
            }
            let r = Rational::new(num_bigint::BigInt::from(nonzero(&mut rng, 1000)), den);
            let member: Vec<bool> = (1..=MAX_EXP + 2).map(|n| campana_member(&s, n, &r)).collect::<Result<_>>()?;
            let r_str = format_rational(&r);
            if !member[0] {
                return Ok(Some(format!("{r_str} not in C_(S,1) for S = {s}")));
            }
            if let Some(n) = (1..member.len()).find(|&k| member[k] && !member[k - 1]) {
                return Ok(Some(format!("{r_str} in C_(S,{}) but not C_(S,{n}) for S = {s}", n + 1)));
            }
            let limit = *member.last().expect("nonempty");
            let integral = s_integer_member(&s, &r)?;
            Ok((limit != integral).then(|| format!("{r_str}: C_(S,{}) gives {limit}, S-integers {integral}", MAX_EXP + 2)))
        },
    )
}

/// Expected `(∀, ∃, atoms, degree)` of a ledger entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub universals: usize,
    pub existentials: usize,
    pub atoms: usize,
    pub degree: u64,
}

const fn ex(universals: usize, existentials: usize, atoms: usize, degree: u64) -> Expected {
    Expected { universals, existentials, atoms, degree }
}

#[derive(Debug, Clone)]
pub struct LedgerRow {
    pub name: String,
    pub expected: Expected,
    pub actual: FormulaStats,
}

impl LedgerRow {
    pub fn matches(&self) -> bool {
        let a = &self.actual;
        let e = &self.expected;
        (a.universals, a.existentials, a.atoms, a.degree_bound) == (e.universals, e.existentials, e.atoms, e.degree)
    }
}

impl fmt::Display for LedgerRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.actual;
        let e = &self.expected;
        write!(
            f,
            "{:<22} {:>4} {:>4} {:>5} {:>6}   expected {:>4} {:>4} {:>5} {:>6}  {}",
            self.name,
            a.universals,
            a.existentials,
            a.atoms,
            a.degree_bound,
            e.universals,
            e.existentials,
            e.atoms,
            e.degree,
            if self.matches() { "ok" } else { "MISMATCH" }
        )
    }
}

/// Builds the whole tower and the final formulas for each `n` and records
/// their statistics next to the expected ledger.
pub fn ledger(ns: &[u32]) -> Result<Vec<LedgerRow>> {
    let mut rows = Vec::new();
    let mut push = |name: String, expected: Expected, actual: FormulaStats| {
        rows.push(LedgerRow { name, expected, actual });
    };
    let fixed = [
        (TowerSet::S, ex(0, 3, 1, 4)),
        (TowerSet::T, ex(0, 7, 2, 4)),
        (TowerSet::TUnit, ex(0, 15, 5, 4)),
        (TowerSet::I, ex(0, 34, 12, 4)),
        (TowerSet::J, ex(0, 138, 48, 4)),
        (TowerSet::Jabcd, ex(0, 277, 96, 4)),
        (TowerSet::InvJ, ex(0, 278, 97, 4)),
        (TowerSet::Disjoint, ex(0, 556, 193, 9)),
        (TowerSet::Premise, ex(0, 834, 290, 9)),
    ];
    for (set, e) in fixed {
        push(set.to_string(), e, conjunction(set)?.to_formula()?.stats());
    }
    let premise = conjunction(TowerSet::Premise)?;
    push("premise combined".into(), ex(0, 834, 1, 2610), premise.combined_formula(false)?.stats());
    push("premise combined (R)".into(), ex(0, 834, 1, 18), premise.combined_formula(true)?.stats());
    for &n in ns {
        let m = u64::from(n.max(4));
        let n64 = u64::from(n);
        push(format!("Jn n={n}"), ex(0, 556, 193, m), conjunction(TowerSet::Jn(n))?.to_formula()?.stats());
        push(format!("invJn n={n}"), ex(0, 557, 194, m), conjunction(TowerSet::InvJn(n))?.to_formula()?.stats());
        push(
            format!("campana n={n}"),
            ex(838, 558, 1, (194 * n64 + 2611).max(3387)),
            build_campana(n, false)?.stats(),
        );
        push(
            format!("campana n={n} (R)"),
            ex(838, 558, 1, (2 * n64 + 19).max(27)),
            build_campana(n, true)?.stats(),
        );
    }
    Ok(rows)
}

pub fn ledger_check(ns: &[u32]) -> Check {
    let start = Instant::now();
    let (passed, detail, counterexample) = match ledger(ns) {
        Ok(rows) => {
            let bad = rows.iter().find(|r| !r.matches()).map(|r| r.to_string());
            let ok = rows.iter().filter(|r| r.matches()).count();
            (bad.is_none(), format!("{ok}/{} rows match, n in {ns:?}", rows.len()), bad)
        }
        Err(e) => (false, "build failed".into(), Some(e.to_string())),
    };
    Check { name: "tower ledger".into(), passed, detail, counterexample, elapsed: start.elapsed() }
}

/// Combiner used by a soundness instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combiner {
    /// Balanced tree of `f² − 2g²`.
    Pair,
    /// Norm form of degree equal to the number of atoms.
    Norm,
    /// Sum of squares.
    Sos,
}

fn pair_tree(c: &mut Circuit, atoms: &[NodeId]) -> NodeId {
    if atoms.len() == 1 {
        return atoms[0];
    }
    let (l, r) = atoms.split_at(atoms.len() / 2);
    let a = pair_tree(c, l);
    let b = pair_tree(c, r);
    combine_pair(c, a, b)
}

/// The instances exercised by [`combiner_soundness`]: blocks that occur in
/// the final formulas, combined as they are there, plus small blocks for
/// the pair combiner and the expanded norm form.
pub fn combiner_instances() -> Vec<(TowerSet, Combiner)> {
    vec![
        (TowerSet::T, Combiner::Pair),
        (TowerSet::I, Combiner::Pair),
        (TowerSet::TUnit, Combiner::Norm),
        (TowerSet::Premise, Combiner::Norm),
        (TowerSet::InvJn(2), Combiner::Norm),
        (TowerSet::Premise, Combiner::Sos),
    ]
}

fn residues(c: &Circuit, env: &HashMap<String, Rational>, p: u64) -> Option<Vec<u64>> {
    c.var_names().iter().map(|n| env.get(n).map_or(Some(0), |r| rational_mod(r, p))).collect()
}

/// Free values with every quaternion pair split, so that the witness
/// builder applies.
fn split_free_values(conj: &Conjunction, rng: &mut ChaCha8Rng) -> HashMap<String, Rational> {
    let mut env: HashMap<String, Rational> =
        conj.free().iter().map(|v| (v.clone(), random_rational(rng, 30, 12))).collect();
    for (x, y) in [("a", "b"), ("c", "d"), ("a'", "b'"), ("c'", "d'")] {
        if env.contains_key(x) && env.contains_key(y) {
            let one = if rng.gen_bool(0.5) { x } else { y };
            env.insert(one.to_string(), rat(1));
        }
    }
    env
}

/// Number of distinct planted witnesses per combiner instance.
pub const WITNESS_POOL: usize = 64;

/// Zero-set preservation of one combiner instance: `F(pt) = 0` iff every
/// atom vanishes at `pt`, over `samples` points of which about 40% are
/// common zeros of the atoms, 40% are such zeros with one coordinate moved,
/// and 20% are uniformly random.
///
/// Planted points come from a pool of [`WITNESS_POOL`] split witnesses, each
/// checked exactly to be a common zero. `F` depends on the point only
/// through the atom values, so its value at common zeros is computed once. Elsewhere `F` is evaluated modulo a 61-bit
/// prime; a nonzero residue proves `F ≠ 0`, and otherwise the exact value
/// decides.
pub fn combiner_soundness(set: TowerSet, combiner: Combiner, cfg: &VerifyConfig, samples: usize) -> Check {
    let name = format!("{combiner:?} combiner on {set}").to_lowercase();
    let start = Instant::now();
    let setup = || -> Result<(Conjunction, NodeId, Vec<NodeId>)> {
        let mut conj = conjunction(set)?;
        let atoms = conj.atoms();
        let root = match combiner {
            Combiner::Pair => pair_tree(conj.circuit_mut(), &atoms),
            Combiner::Norm => conj.combine(false)?,
            Combiner::Sos => conj.combine(true)?,
        };
        Ok((conj, root, atoms))
    };
    let (conj, root, atoms) = match setup() {
        Ok(x) => x,
        Err(e) => {
            return Check {
                name,
                passed: false,
                detail: "setup failed".into(),
                counterexample: Some(e.to_string()),
                elapsed: start.elapsed(),
            }
        }
    };
    let c = conj.circuit();
    let p = MODULI[0];
    let atom_eval = ModEval::new(c, &atoms, p);
    let root_eval = ModEval::new(c, &[root], p);
    let bound = conj.bound();

    let fail = |detail: &str, e: Error| Check {
        name: name.clone(),
        passed: false,
        detail: detail.into(),
        counterexample: Some(e.to_string()),
        elapsed: start.elapsed(),
    };

    // split witnesses are costly on the large blocks, so draw from a pool
    let pool: Vec<HashMap<String, Rational>> = match (0..WITNESS_POOL.min(samples).max(1))
        .into_par_iter()
        .map(|k| {
            let mut rng = rng_for(cfg.seed, 7, u64::MAX - k as u64);
            let env = conj.witness(&split_free_values(&conj, &mut rng))?;
            if !c.eval_exact_many(&atoms, &env)?.iter().all(Zero::is_zero) {
                return Err(Error::Precondition(format!("planted witness {k} is not a common zero")));
            }
            Ok(env)
        })
        .collect::<Result<_>>()
    {
        Ok(pool) => pool,
        Err(e) => return fail("witness construction failed", e),
    };
    // value of F wherever all atoms vanish
    let common_zero = match c.eval_exact(root, &pool[0]) {
        Ok(v) => v.is_zero(),
        Err(e) => return fail("evaluation failed", e),
    };

    let point = |i: usize| -> (HashMap<String, Rational>, u8) {
        let mut rng = rng_for(cfg.seed, 7, i as u64);
        let mode = rng.gen_range(0..10u8);
        if mode >= 8 {
            let env = conj
                .free()
                .iter()
                .chain(bound.iter())
                .map(|v| (v.clone(), ratio(rng.gen_range(-20..=20), rng.gen_range(1..=10))))
                .collect();
            return (env, 2);
        }
        let mut env = pool.choose(&mut rng).expect("nonempty").clone();
        if mode >= 4 {
            let names: Vec<&String> = conj.free().iter().chain(bound.iter()).collect();
            let v = names.choose(&mut rng).expect("nonempty");
            let bump = random_rational(&mut rng, 10, 10);
            let moved = &env[*v] + bump;
            env.insert((*v).clone(), moved);
            return (env, 1);
        }
        (env, 0)
    };

    let mut check = run_trials(
        &name,
        samples,
        |_| format!("{} atoms, degree {}", atoms.len(), c.degree(root)),
        |i| {
            let (env, mode) = point(i);
            let atoms_vanish = match residues(c, &env, p) {
                Some(r) if atom_eval.eval(&r).iter().any(|x| *x != 0) => false,
                _ => c.eval_exact_many(&atoms, &env)?.iter().all(Zero::is_zero),
            };
            let f_vanishes = if atoms_vanish {
                common_zero
            } else {
                match residues(c, &env, p) {
                    Some(r) if root_eval.eval(&r)[0] != 0 => false,
                    _ => c.is_zero_at(root, &env)?,
                }
            };
            Ok((atoms_vanish != f_vanishes).then(|| {
                let mut pts: Vec<String> =
                    env.iter().map(|(k, v)| format!("{k}={}", format_rational(v))).collect();
                pts.sort();
                format!(
                    "sample {i} (mode {mode}): atoms vanish {atoms_vanish}, combined vanishes {f_vanishes} at {}",
                    pts.join(" ")
                )
            }))
        },
    );
    check.elapsed = start.elapsed();
    check
}

/// `norm_form(n)` for `n ≤ 6`: homogeneous of degree `n` as a polynomial and
/// as a circuit, and nonzero at `points` random nonzero rational vectors.
pub fn norm_forms(cfg: &VerifyConfig, points: usize) -> Check {
    let forms: Vec<Poly> = match (1..=6).map(norm_form).collect::<Result<_>>() {
        Ok(f) => f,
        Err(e) => {
            return Check {
                name: "norm forms anisotropic".into(),
                passed: false,
                detail: "construction failed".into(),
                counterexample: Some(e.to_string()),
                elapsed: Duration::ZERO,
            }
        }
    };
    let circuits: Vec<(Circuit, NodeId)> = forms
        .iter()
        .map(|g| {
            let mut c = Circuit::new();
            let root = g.to_circuit(&mut c);
            (c, root)
        })
        .collect();
    let total = forms.len() * points;
    run_trials(
        "norm forms anisotropic",
        total,
        |_| format!("n = 1..6, {points} points each"),
        |i| {
            let n = i / points + 1;
            let (c, root) = &circuits[n - 1];
            if i % points == 0 {
                let g = &forms[n - 1];
                if !g.is_homogeneous() || g.degree() != Some(n as u64) || c.degree(*root) != n as u64 {
                    return Ok(Some(format!("norm_form({n}) is not homogeneous of degree {n}")));
                }
            }
            let mut rng = rng_for(cfg.seed, 8, i as u64);
            let mut ys: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();
            if ys.iter().all(Zero::is_zero) {
                let k = rng.gen_range(0..n);
                ys[k] = random_rational(&mut rng, 9, 9);
            }
            let env: HashMap<String, Rational> =
                ys.iter().enumerate().map(|(j, y)| (format!("y{}", j + 1), y.clone())).collect();
            Ok(c.eval_exact(*root, &env)?.is_zero().then(|| {
                let ys: Vec<String> = ys.iter().map(format_rational).collect();
                format!("norm_form({n}) vanishes at ({})", ys.join(", "))
            }))
        },
    )
}

/// Norm-one trace witnesses satisfy the matrix of `S_{a,b}`.
pub fn trace_witnesses(cfg: &VerifyConfig, samples: usize) -> Check {
    let s = match build_s("a", "b", "r") {
        Ok(s) => s,
        Err(e) => {
            return Check {
                name: "trace witnesses satisfy S".into(),
                passed: false,
                detail: "build failed".into(),
                counterexample: Some(e.to_string()),
                elapsed: Duration::ZERO,
            }
        }
    };
    let bound: Vec<String> = s.bound().map(String::from).collect();
    run_trials(
        "trace witnesses satisfy S",
        samples,
        |_| "exact evaluation".into(),
        |i| {
            let mut rng = rng_for(cfg.seed, 9, i as u64);
            let a = random_rational(&mut rng, 50, 10);
            let b = random_rational(&mut rng, 50, 10);
            let sample = generate_trace_element(&a, &b, rng.gen())?;
            let mut env: HashMap<String, Rational> =
                [("a", a.clone()), ("b", b.clone()), ("r", sample.t.clone())].map(|(k, v)| (k.to_string(), v)).into();
            for (name, w) in bound.iter().zip(&sample.witness[1..]) {
                env.insert(name.clone(), w.clone());
            }
            Ok((!evaluate_matrix(&s, &env)?).then(|| {
                format!("a={} b={} t={}", format_rational(&a), format_rational(&b), format_rational(&sample.t))
            }))
        },
    )
}

/// JSON emission followed by parsing is the identity on the tower.
pub fn json_round_trip() -> Check {
    let sets: Vec<TowerSet> = TowerSet::ALL_FIXED.into_iter().chain([TowerSet::Jn(3), TowerSet::InvJn(2)]).collect();
    run_trials(
        "json round trip",
        sets.len(),
        |_| "tower members".into(),
        |i| {
            let f = conjunction(sets[i])?.to_formula()?;
            let back = parse_json(&emit(&f, Format::Json)?)?;
            Ok((back != f).then(|| format!("emit {} --format json does not parse back", sets[i])))
        },
    )
}

/// Ledger sizes used by `verify formulas` and the acceptance tests.
pub const LEDGER_NS: [u32; 4] = [2, 3, 10, 100];

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Vec<Check> {
    let tenth = (cfg.samples / 10).max(1);
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Hilbert) {
        out.push(hilbert_grid(50, 50));
        out.push(hilbert_random(cfg));
        out.push(reciprocity(cfg));
    }
    if matches!(suite, Suite::All | Suite::Construct) {
        out.push(construction_roundtrip(cfg, 50));
    }
    if matches!(suite, Suite::All | Suite::Semantics) {
        out.push(campana_coordinates(cfg));
        out.push(filtration(cfg));
    }
    if matches!(suite, Suite::All | Suite::Formulas) {
        out.push(ledger_check(&LEDGER_NS));
        for (set, comb) in combiner_instances() {
            out.push(combiner_soundness(set, comb, cfg, cfg.samples));
        }
        out.push(norm_forms(cfg, tenth));
        out.push(trace_witnesses(cfg, tenth));
        out.push(json_round_trip());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig { samples: 200, ..VerifyConfig::default() }
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = small();
        for check in [
            hilbert_grid(6, 13),
            hilbert_random(&cfg),
            reciprocity(&cfg),
            construction_roundtrip(&cfg, 5),
            campana_coordinates(&cfg),
            filtration(&cfg),
            norm_forms(&cfg, 20),
            trace_witnesses(&cfg, 50),
        ] {
            assert!(check.passed, "{check}");
        }
    }

    #[test]
    fn small_combiner_instances() {
        let cfg = small();
        for (set, comb) in [(TowerSet::T, Combiner::Pair), (TowerSet::TUnit, Combiner::Norm), (TowerSet::I, Combiner::Sos)] {
            let check = combiner_soundness(set, comb, &cfg, 100);
            assert!(check.passed, "{check}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small();
        let a = campana_coordinates(&cfg).to_string();
        let b = campana_coordinates(&cfg).to_string();
        assert_eq!(a, b);
    }

    #[test]
    fn failing_checks_show_counterexamples() {
        let check = run_trials("demo", 10, |_| "x".into(), |i| Ok((i == 3 || i == 7).then(|| format!("case {i}"))));
        assert!(!check.passed);
        assert_eq!(check.counterexample.as_deref(), Some("case 3"));
        assert!(check.to_string().contains("2 failures / 10"));
    }
}
