//! Parameters `(a, b, c, d)` whose common ramification set is a prescribed
//! set of primes.
//!
//! cargo run --example construct_parameters -- 2 3 5

use campana::parametrize::{construct_omega, SearchConfig};
use campana::places::{delta, PlaceSet};
use campana::Result;

fn main() -> Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let targets: Vec<Vec<u64>> = if args.is_empty() {
        vec![vec![], vec![2], vec![3, 5], vec![2, 3, 5, 7], vec![11, 13, 97]]
    } else {
        vec![args]
    };
    for primes in targets {
        let s = PlaceSet::from_primes(primes)?;
        let report = construct_omega(&s, &SearchConfig::default())?;
        println!("S = {s}");
        println!("    a = {}, b = {}", report.a, report.b);
        println!("    c = {}, d = {}", report.c, report.d);
        println!("    ramification of (a,b): {}", delta(&report.a, &report.b)?);
        println!("    ramification of (c,d): {}", delta(&report.c, &report.d)?);
        println!("    omega = {} after {} search steps", report.achieved, report.search_steps);
        assert!(report.succeeded());
    }
    Ok(())
}
