//! Writes the trace set and the Campana formula in each interchange format.
//!
//! cargo run --release --example emit_formula -- /tmp/campana-out

use std::path::PathBuf;

use campana::formulas::{build_campana, build_s, emit, parse_json, Format};
use campana::Result;

fn main() -> Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/emitted".into()));
    std::fs::create_dir_all(&dir).map_err(|e| campana::Error::Parse(e.to_string()))?;

    let s = build_s("a", "b", "r")?;
    println!("{}", emit(&s, Format::Sexpr)?);
    println!("{}", emit(&s, Format::Json)?);

    let f = build_campana(2, false)?;
    for (fmt, ext) in [(Format::Json, "json"), (Format::Sexpr, "sexp"), (Format::Latex, "tex")] {
        let text = emit(&f, fmt)?;
        let path = dir.join(format!("campana2.{ext}"));
        std::fs::write(&path, &text).map_err(|e| campana::Error::Parse(e.to_string()))?;
        println!("{} ({} bytes)", path.display(), text.len());
    }
    let back = parse_json(&std::fs::read_to_string(dir.join("campana2.json")).map_err(|e| campana::Error::Parse(e.to_string()))?)?;
    assert_eq!(back, f);
    println!("round trip ok: {}", back.stats());
    Ok(())
}
