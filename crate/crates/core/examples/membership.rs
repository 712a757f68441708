//! Campana points, S-integers and the coordinate criterion on the
//! projective line.
//!
//! cargo run --example membership

use campana::arith::{parse_rational, rat};
use campana::places::PlaceSet;
use campana::semantics::{campana_member, campana_member_form, campana_via_coordinates, s_integer_member, BinaryForm};
use campana::Result;

fn main() -> Result<()> {
    let s = PlaceSet::from_primes([5])?;
    println!("S = {s}");
    println!("{:>8} {:>6} {:>6} {:>6} {:>6} {:>10}", "r", "n=1", "n=2", "n=3", "n=4", "S-integer");
    for r in ["7/25", "1/8", "1/4", "3/16", "9/2", "-1/27", "5/72"] {
        let q = parse_rational(r)?;
        print!("{r:>8}");
        for n in 1..=4 {
            print!(" {:>6}", campana_member(&s, n, &q)?);
        }
        println!(" {:>10}", s_integer_member(&s, &q)?);
    }

    // the same question asked of [x0 : x1]
    let (x0, x1) = (rat(3), rat(16));
    println!(
        "[3 : 16] in C(S,4): {} (coordinates) / {} (valuations)",
        campana_via_coordinates(&x0, &x1, &s, 4)?,
        campana_member(&s, 4, &(&x0 / &x1))?
    );

    let form: BinaryForm = "x^2 + y^2".parse()?;
    for lambda in ["1/2", "1/3", "2/7"] {
        let l = parse_rational(lambda)?;
        println!("{form} at lambda = {lambda}: {} in C(S,2): {}", form.eval_affine(&l), campana_member_form(&s, 2, &form, &l)?);
    }
    Ok(())
}
