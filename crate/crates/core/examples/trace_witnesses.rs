//! Norm-one quaternions give explicit witnesses for the trace set `S`, and
//! the tower's witness builder fills in every bound variable of a larger
//! conjunction.
//!
//! cargo run --release --example trace_witnesses

use std::collections::HashMap;

use campana::arith::{rat, ratio, Rational};
use campana::formulas::{build_s, conjunction, evaluate_matrix, TowerSet};
use campana::semantics::{generate_trace_element, reduced_norm};
use campana::Result;

fn main() -> Result<()> {
    let (a, b) = (rat(-1), rat(3));
    let s = build_s("a", "b", "r")?;
    let bound: Vec<String> = s.bound().map(String::from).collect();
    for seed in 0..5 {
        let sample = generate_trace_element(&a, &b, seed)?;
        let mut env: HashMap<String, Rational> =
            [("a".to_string(), a.clone()), ("b".to_string(), b.clone()), ("r".to_string(), sample.t.clone())].into();
        env.extend(bound.iter().cloned().zip(sample.witness[1..].iter().cloned()));
        println!(
            "z = [{}], nrd(z) = {}, t = {}, satisfies S: {}",
            sample.z.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            reduced_norm(&a, &b, &sample.z),
            sample.t,
            evaluate_matrix(&s, &env)?
        );
    }

    let conj = conjunction(TowerSet::Jabcd)?;
    let free: HashMap<String, Rational> = conj
        .free()
        .iter()
        .map(|v| {
            let value = match v.as_str() {
                "a" | "c" => rat(1),
                "b" => rat(-7),
                "d" => ratio(5, 3),
                _ => ratio(3, 7),
            };
            (v.clone(), value)
        })
        .collect();
    let env = conj.witness(&free)?;
    let f = conj.to_formula()?;
    println!("\nJabcd: {} bound variables filled, matrix holds: {}", conj.bound().len(), evaluate_matrix(&f, &env)?);
    Ok(())
}
