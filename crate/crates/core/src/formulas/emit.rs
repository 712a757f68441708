//! Interchange formats for formulas.
//!
//! JSON is canonical and round-trips exactly:
//!
//! ```json
//! {"free": ["a", "b", "r"],
//!  "prefix": [["exists", "x1"], ["exists", "x2"]],
//!  "nodes": [{"op": "var", "name": "r"}, {"op": "int", "value": "4"},
//!            {"op": "pow", "arg": 0, "exp": 2}, {"op": "add", "lhs": 2, "rhs": 1}],
//!  "matrix": {"and": [{"eq": 3}]},
//!  "real_embedded": false}
//! ```
//!
//! Node children are indices into `nodes` and always point backwards.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Node, NodeId};
use super::formula::{Formula, Matrix, Quantifier};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Sexpr,
    Latex,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "sexpr" => Ok(Format::Sexpr),
            "latex" | "tex" => Ok(Format::Latex),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

pub fn emit(f: &Formula, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => to_json(f),
        Format::Sexpr => to_sexpr(f),
        Format::Latex => to_latex(f),
    })
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum JsonNode {
    Var { name: String },
    Int { value: String },
    Add { lhs: u32, rhs: u32 },
    Mul { lhs: u32, rhs: u32 },
    Neg { arg: u32 },
    Pow { arg: u32, exp: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum JsonMatrix {
    Eq(u32),
    Neq(u32),
    And(Vec<JsonMatrix>),
    Or(Vec<JsonMatrix>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFormula {
    free: Vec<String>,
    prefix: Vec<(Quantifier, String)>,
    nodes: Vec<JsonNode>,
    matrix: JsonMatrix,
    #[serde(default)]
    real_embedded: bool,
}

fn matrix_to_json(m: &Matrix) -> JsonMatrix {
    match m {
        Matrix::Eq(p) => JsonMatrix::Eq(p.0),
        Matrix::Neq(p) => JsonMatrix::Neq(p.0),
        Matrix::And(ms) => JsonMatrix::And(ms.iter().map(matrix_to_json).collect()),
        Matrix::Or(ms) => JsonMatrix::Or(ms.iter().map(matrix_to_json).collect()),
    }
}

fn matrix_from_json(m: JsonMatrix, len: usize) -> Result<Matrix> {
    let node = |i: u32| {
        if (i as usize) < len {
            Ok(NodeId(i))
        } else {
            Err(Error::Parse(format!("matrix refers to missing node {i}")))
        }
    };
    Ok(match m {
        JsonMatrix::Eq(i) => Matrix::Eq(node(i)?),
        JsonMatrix::Neq(i) => Matrix::Neq(node(i)?),
        JsonMatrix::And(ms) => Matrix::And(ms.into_iter().map(|m| matrix_from_json(m, len)).collect::<Result<_>>()?),
        JsonMatrix::Or(ms) => Matrix::Or(ms.into_iter().map(|m| matrix_from_json(m, len)).collect::<Result<_>>()?),
    })
}

fn to_json(f: &Formula) -> String {
    let c = f.circuit();
    let nodes = c
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Var(v) => JsonNode::Var { name: c.var_name(*v).to_string() },
            Node::Int(k) => JsonNode::Int { value: k.to_string() },
            Node::Add(l, r) => JsonNode::Add { lhs: l.0, rhs: r.0 },
            Node::Mul(l, r) => JsonNode::Mul { lhs: l.0, rhs: r.0 },
            Node::Neg(x) => JsonNode::Neg { arg: x.0 },
            Node::Pow(x, k) => JsonNode::Pow { arg: x.0, exp: *k },
        })
        .collect();
    let doc = JsonFormula {
        free: f.free().to_vec(),
        prefix: f.prefix().to_vec(),
        nodes,
        matrix: matrix_to_json(f.matrix()),
        real_embedded: f.real_embedded(),
    };
    serde_json::to_string(&doc).expect("formula serializes")
}

/// Reads the canonical JSON form.
pub fn parse_json(text: &str) -> Result<Formula> {
    let doc: JsonFormula = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut c = Circuit::new();
    for (i, n) in doc.nodes.into_iter().enumerate() {
        let child = |j: u32| {
            if (j as usize) < i {
                Ok(NodeId(j))
            } else {
                Err(Error::Parse(format!("node {i} refers forward to {j}")))
            }
        };
        match n {
            JsonNode::Var { name } => {
                c.push_var_raw(&name);
            }
            JsonNode::Int { value } => {
                let k = BigInt::from_str(&value).map_err(|e| Error::Parse(format!("integer {value}: {e}")))?;
                c.push_raw(Node::Int(k));
            }
            JsonNode::Add { lhs, rhs } => {
                c.push_raw(Node::Add(child(lhs)?, child(rhs)?));
            }
            JsonNode::Mul { lhs, rhs } => {
                c.push_raw(Node::Mul(child(lhs)?, child(rhs)?));
            }
            JsonNode::Neg { arg } => {
                c.push_raw(Node::Neg(child(arg)?));
            }
            JsonNode::Pow { arg, exp } => {
                if exp == 0 {
                    return Err(Error::Parse(format!("node {i} has exponent 0")));
                }
                c.push_raw(Node::Pow(child(arg)?, exp));
            }
        }
    }
    let matrix = matrix_from_json(doc.matrix, c.len())?;
    Formula::new(doc.free, doc.prefix, &c, matrix, doc.real_embedded)
}

fn sexpr_matrix(m: &Matrix, out: &mut String) {
    match m {
        Matrix::Eq(p) => write!(out, "(= {p})").unwrap(),
        Matrix::Neq(p) => write!(out, "(!= {p})").unwrap(),
        Matrix::And(ms) | Matrix::Or(ms) => {
            out.push_str(if matches!(m, Matrix::And(_)) { "(and" } else { "(or" });
            for m in ms {
                out.push(' ');
                sexpr_matrix(m, out);
            }
            out.push(')');
        }
    }
}

fn to_sexpr(f: &Formula) -> String {
    let c = f.circuit();
    let mut out = String::from("(formula\n  (free");
    for v in f.free() {
        write!(out, " {v}").unwrap();
    }
    out.push_str(")\n  (prefix");
    for (q, v) in f.prefix() {
        write!(out, " ({q} {v})").unwrap();
    }
    out.push_str(")\n  (nodes");
    for (i, n) in c.nodes().iter().enumerate() {
        let body = match n {
            Node::Var(v) => format!("(var {})", c.var_name(*v)),
            Node::Int(k) => format!("(int {k})"),
            Node::Add(l, r) => format!("(+ {l} {r})"),
            Node::Mul(l, r) => format!("(* {l} {r})"),
            Node::Neg(x) => format!("(- {x})"),
            Node::Pow(x, k) => format!("(^ {x} {k})"),
        };
        write!(out, "\n    (n{i} {body})").unwrap();
    }
    out.push_str(")\n  (matrix ");
    sexpr_matrix(f.matrix(), &mut out);
    writeln!(out, ")\n  (real-embedded {}))", f.real_embedded()).unwrap();
    out
}

/// Circuits up to this size are printed as a single expression per atom.
const LATEX_INLINE_LIMIT: usize = 400;

fn latex_var(name: &str) -> String {
    let (stem, primes) = name.split_at(name.trim_end_matches('\'').len());
    let digits = stem.trim_start_matches(|ch: char| ch.is_ascii_alphabetic());
    let letters = &stem[..stem.len() - digits.len()];
    let letters = if letters == "lambda" { "\\lambda".to_string() } else { letters.to_string() };
    if digits.is_empty() {
        format!("{letters}{primes}")
    } else {
        format!("{letters}{primes}_{{{digits}}}")
    }
}

/// Precedence levels: 0 sum, 1 product, 2 atom.
struct LatexPrinter<'a> {
    c: &'a Circuit,
    named: HashMap<NodeId, usize>,
}

impl LatexPrinter<'_> {
    fn show(&self, id: NodeId, top: bool) -> (String, u8) {
        if !top {
            if let Some(k) = self.named.get(&id) {
                return (format!("P_{{{k}}}"), 2);
            }
        }
        match self.c.node(id) {
            Node::Var(v) => (latex_var(self.c.var_name(*v)), 2),
            Node::Int(k) => (k.to_string(), if k.sign() == num_bigint::Sign::Minus { 0 } else { 2 }),
            Node::Add(l, r) => {
                let (ls, _) = self.show(*l, false);
                if let Node::Neg(x) = self.c.node(*r) {
                    if !self.named.contains_key(r) {
                        let (xs, xp) = self.show(*x, false);
                        return (format!("{ls} - {}", paren(xs, xp, 1)), 0);
                    }
                }
                let (rs, _) = self.show(*r, false);
                (format!("{ls} + {rs}"), 0)
            }
            Node::Mul(l, r) => {
                let (ls, lp) = self.show(*l, false);
                let (rs, rp) = self.show(*r, false);
                (format!("{} {}", paren(ls, lp, 1), paren(rs, rp, 2)), 1)
            }
            Node::Neg(x) => {
                let (xs, xp) = self.show(*x, false);
                (format!("-{}", paren(xs, xp, 1)), 0)
            }
            Node::Pow(x, k) => {
                let (xs, xp) = self.show(*x, false);
                (format!("{}^{{{k}}}", paren(xs, xp, 2)), 2)
            }
        }
    }
}

fn paren(s: String, prec: u8, need: u8) -> String {
    if prec >= need {
        s
    } else {
        format!("\\left({s}\\right)")
    }
}

fn latex_matrix(m: &Matrix, p: &LatexPrinter<'_>) -> String {
    match m {
        Matrix::Eq(id) => format!("{} = 0", p.show(*id, false).0),
        Matrix::Neq(id) => format!("{} \\neq 0", p.show(*id, false).0),
        Matrix::And(ms) | Matrix::Or(ms) => {
            let sep = if matches!(m, Matrix::And(_)) { " \\wedge \\\\\n  & " } else { " \\vee " };
            let parts: Vec<String> = ms.iter().map(|m| format!("\\left({}\\right)", latex_matrix(m, p))).collect();
            parts.join(sep)
        }
    }
}

fn to_latex(f: &Formula) -> String {
    let c = f.circuit();
    let mut named = HashMap::new();
    if c.len() > LATEX_INLINE_LIMIT {
        let mut uses = vec![0u32; c.len()];
        for n in c.nodes() {
            match n {
                Node::Add(l, r) | Node::Mul(l, r) => {
                    uses[l.index()] += 1;
                    uses[r.index()] += 1;
                }
                Node::Neg(x) | Node::Pow(x, _) => uses[x.index()] += 1,
                Node::Var(_) | Node::Int(_) => {}
            }
        }
        for (i, n) in c.nodes().iter().enumerate() {
            let shared = uses[i] > 1 && !matches!(n, Node::Var(_) | Node::Int(_));
            if shared {
                let k = named.len() + 1;
                named.insert(NodeId(i as u32), k);
            }
        }
    }
    let printer = LatexPrinter { c, named };
    let mut out = String::from(
        "\\documentclass{article}\n\\usepackage{amsmath}\n\\allowdisplaybreaks\n\\begin{document}\n",
    );
    let free: Vec<String> = f.free().iter().map(|v| latex_var(v)).collect();
    writeln!(out, "Free variables: ${}$.\n", free.join(", ")).unwrap();
    out.push_str("\\begin{align*}\n  & ");
    for (i, (q, v)) in f.prefix().iter().enumerate() {
        let sym = match q {
            Quantifier::Forall => "\\forall",
            Quantifier::Exists => "\\exists",
        };
        write!(out, "{sym} {} ", latex_var(v)).unwrap();
        if i % 10 == 9 {
            out.push_str("\\\\\n  & ");
        }
    }
    writeln!(out, "\\\\\n  & {}", latex_matrix(f.matrix(), &printer)).unwrap();
    out.push_str("\\end{align*}\n");
    if !printer.named.is_empty() {
        out.push_str("where\n\\begin{align*}\n");
        let mut defs: Vec<(usize, NodeId)> = printer.named.iter().map(|(id, k)| (*k, *id)).collect();
        defs.sort();
        for (k, id) in defs {
            writeln!(out, "  P_{{{k}}} &= {} \\\\", printer.show(id, true).0).unwrap();
        }
        out.push_str("\\end{align*}\n");
    }
    out.push_str("\\end{document}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::tower::{build_s, conjunction, TowerSet};

    #[test]
    fn json_schema_instance() {
        let f = build_s("a", "b", "r").unwrap();
        let s = emit(&f, Format::Json).unwrap();
        assert!(s.contains(r#""prefix":[["exists","x1"],["exists","x2"],["exists","x3"]]"#), "{s}");
        assert!(s.contains(r#""op":"var""#));
        assert!(s.contains(r#""matrix":{"and":[{"eq":"#));
        assert_eq!(parse_json(&s).unwrap(), f);
    }

    #[test]
    fn tower_round_trips() {
        for set in TowerSet::ALL_FIXED.into_iter().chain([TowerSet::Jn(3), TowerSet::InvJn(2)]) {
            let f = conjunction(set).unwrap().to_formula().unwrap();
            let back = parse_json(&emit(&f, Format::Json).unwrap()).unwrap();
            assert_eq!(back, f, "{set}");
            assert_eq!(back.stats(), f.stats());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!("yaml".parse::<Format>(), Err(Error::UnknownFormat(_))));
        let forward = r#"{"free":[],"prefix":[],"nodes":[{"op":"neg","arg":0}],"matrix":{"eq":0}}"#;
        assert!(matches!(parse_json(forward), Err(Error::Parse(_))));
        let unbound = r#"{"free":[],"prefix":[],"nodes":[{"op":"var","name":"x"}],"matrix":{"eq":0}}"#;
        assert!(matches!(parse_json(unbound), Err(Error::ShapeMismatch(_))));
        assert!(parse_json("{").is_err());
    }

    #[test]
    fn sexpr_and_latex_render() {
        let f = build_s("a", "b", "r").unwrap();
        let s = emit(&f, Format::Sexpr).unwrap();
        assert!(s.starts_with("(formula\n  (free a b r)\n  (prefix (exists x1) (exists x2) (exists x3))"));
        assert!(s.contains("(matrix (and (= n"));
        let t = emit(&f, Format::Latex).unwrap();
        assert!(t.contains("\\exists x_{1}"));
        assert!(t.contains("r^{2}"));
        assert!(t.contains("= 0"));
        let big = conjunction(TowerSet::Jabcd).unwrap().to_formula().unwrap();
        let t = emit(&big, Format::Latex).unwrap();
        assert!(t.contains("P_{1}"));
    }

    #[test]
    fn latex_variable_names() {
        assert_eq!(latex_var("x12"), "x_{12}");
        assert_eq!(latex_var("a'"), "a'");
        assert_eq!(latex_var("lambda"), "\\lambda");
    }
}
