//! Hilbert symbols at every relevant place, checked against the
//! brute-force oracle and the product formula.
//!
//! cargo run --example hilbert_symbols

use campana::arith::{parse_rational, Rational};
use campana::places::{delta, hilbert, hilbert_oracle_at, reciprocity_check, scan_places};
use campana::Result;

fn main() -> Result<()> {
    let pairs = [("-1", "-1"), ("2", "5"), ("3", "7"), ("-3/4", "10"), ("6", "-35")];
    for (a, b) in pairs {
        let (a, b): (Rational, Rational) = (parse_rational(a)?, parse_rational(b)?);
        print!("({a}, {b}):");
        for v in &scan_places(&a, &b)? {
            let symbol = hilbert(&a, &b, v)?;
            assert_eq!(symbol, hilbert_oracle_at(&a, &b, v)?);
            print!("  {v}:{symbol:+}");
        }
        println!();
        println!("    ramified at {}, product formula holds: {}", delta(&a, &b)?, reciprocity_check(&a, &b)?);
    }
    Ok(())
}
