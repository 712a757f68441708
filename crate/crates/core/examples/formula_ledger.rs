//! Quantifier and degree statistics of every set in the tower and of the
//! final universal-existential formulas.
//!
//! cargo run --release --example formula_ledger

use campana::formulas::{build_campana, build_integrality, conjunction, TowerSet};
use campana::Result;

fn main() -> Result<()> {
    println!("{:<12} {:>5} {:>6} {:>7}", "set", "E", "atoms", "degree");
    for set in TowerSet::ALL_FIXED.into_iter().chain([TowerSet::Jn(5), TowerSet::InvJn(5)]) {
        let s = conjunction(set)?.to_formula()?.stats();
        println!("{:<12} {:>5} {:>6} {:>7}", set.to_string(), s.existentials, s.atoms, s.degree_bound);
    }
    println!();
    for n in [2, 3, 10, 100] {
        println!("campana n={n:<4} {}", build_campana(n, false)?.stats());
        println!("  real       {}", build_campana(n, true)?.stats());
    }
    println!("integrality  {}", build_integrality(false)?.stats());
    Ok(())
}
