//! Folding a conjunction of equations into one polynomial equation: the
//! pair combiner, norm forms, and sums of squares for the real variant.
//!
//! cargo run --release --example combiners

use std::collections::HashMap;

use campana::arith::{ratio, Rational};
use campana::formulas::{combine_pair, combine_sos, norm_form, norm_scale, Circuit};
use campana::Result;

fn main() -> Result<()> {
    for n in 1..=4 {
        println!("N_{n}(y) = {}", norm_form(n)?);
    }
    println!("circuit scale for n = 9: {}", norm_scale(9));

    let mut c = Circuit::new();
    let (x, y) = (c.var("x"), c.var("y"));
    let one = c.int(1);
    let f = c.sub(x, one);
    let g = c.sub(y, x);
    let pair = combine_pair(&mut c, f, g);
    let sos = combine_sos(&mut c, &[f, g]);
    println!("\nf = x - 1, g = y - x");
    for (xv, yv) in [(1, 1), (1, 2), (2, 2), (3, 1)] {
        let env: HashMap<String, Rational> = [("x".to_string(), ratio(xv, 1)), ("y".to_string(), ratio(yv, 1))].into();
        println!(
            "  (x, y) = ({xv}, {yv}): f^2 - 2g^2 = {}, f^2 + g^2 = {}",
            c.eval_exact(pair, &env)?,
            c.eval_exact(sos, &env)?
        );
    }
    Ok(())
}
