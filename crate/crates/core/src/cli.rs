//! Command-line front end.
//!
//! Exit codes: `0` success, `1` verified failure or exhausted search, `2`
//! usage error (bad arguments, unparsable input, unknown names).
//!
//! # Config file
//!
//! `--config PATH` reads `key = value` lines; blank lines and lines starting
//! with `#` are ignored. Recognized keys:
//!
//! | key         | meaning                                        | default |
//! |-------------|------------------------------------------------|---------|
//! | `cap`       | candidate systems tried by the `b` search      | 100000  |
//! | `aux_bound` | largest auxiliary prime considered             | 1000    |
//! | `timeout_ms`| deadline for one construction, in milliseconds | none    |
//! | `seed`      | RNG seed for `verify`                          | 42      |
//! | `samples`   | sample count for `verify`                      | 10000   |
//!
//! Flags given on the command line override the file.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::parse_rational;
use crate::error::{Error, Result};
use crate::formulas::{build_campana, build_integrality, conjunction, emit, Format, Formula, TowerSet};
use crate::parametrize::{construct_omega, SearchConfig};
use crate::places::{hilbert, Abcd, Place, PlaceSet};
use crate::semantics::{campana_member, in_inv_jn, in_j, in_jn, s_integer_member};
use crate::verify::{self, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "campana", version, about = "Hilbert symbols, place-set constructions and Campana formulas over Q")]
pub struct Cli {
    /// File of `key = value` defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hilbert symbol (a, b)_v; prints 1 or -1.
    Hilbert {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        /// `inf` or a prime.
        place: String,
    },
    /// Parameters (a, b, c, d) whose ramification set is exactly the given primes.
    Construct {
        primes: Vec<String>,
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        aux_bound: Option<u64>,
        #[arg(long, value_name = "MS")]
        timeout_ms: Option<u64>,
    },
    /// Membership test; prints true or false.
    Member {
        #[arg(value_enum)]
        kind: MemberKind,
        #[arg(allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Primes, separated by commas or spaces.
        #[arg(long, default_value = "")]
        s: String,
        /// Parameters `a,b,c,d` for J, Jn and invJn.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
    },
    /// Writes a formula and prints its statistics.
    Emit {
        /// `campana`, `integrality` or a tower set (S, T, Tx, I, J, Jabcd, invJ, disjoint, Jn, invJn, premise).
        target: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value = "json")]
        format: String,
        /// Real-embedded variant.
        #[arg(long)]
        real: bool,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Runs property suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemberKind {
    Campana,
    Sintegers,
    #[value(name = "J")]
    J,
    #[value(name = "Jn")]
    Jn,
    #[value(name = "invJn")]
    InvJn,
}

/// Values read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub cap: Option<u64>,
    pub aux_bound: Option<u64>,
    pub timeout_ms: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("config line {}: {what}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            let num = || value.parse::<u64>().map_err(|_| bad("expected a non-negative integer"));
            match key.trim() {
                "cap" => cfg.cap = Some(num()?),
                "aux_bound" => cfg.aux_bound = Some(num()?),
                "timeout_ms" => cfg.timeout_ms = Some(num()?),
                "seed" => cfg.seed = Some(num()?),
                "samples" => cfg.samples = Some(num()? as usize),
                other => return Err(bad(&format!("unknown key {other}"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn search(&self, cap: Option<u64>, aux_bound: Option<u64>, timeout_ms: Option<u64>) -> SearchConfig {
        let base = SearchConfig::default();
        let timeout = timeout_ms.or(self.timeout_ms);
        SearchConfig {
            cap: cap.or(self.cap).unwrap_or(base.cap),
            aux_bound: aux_bound.or(self.aux_bound).unwrap_or(base.aux_bound),
            deadline: timeout.map(|ms| Instant::now() + Duration::from_millis(ms)),
        }
    }
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Failed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Failed(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchExhausted { .. } | Error::DeadlineExceeded { .. } | Error::DegenerateSampler { .. } => {
                Failure::Failed(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Parses a list of primes separated by commas and/or whitespace.
pub fn parse_place_set(text: &str) -> Result<PlaceSet> {
    let mut primes = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        primes.push(tok.parse::<u64>().map_err(|_| Error::Parse(format!("not a prime: {tok:?}")))?);
    }
    PlaceSet::from_primes(primes)
}

fn parse_params(text: &str) -> Result<Abcd> {
    let parts: Vec<&str> = text.split(',').collect();
    let [a, b, c, d] = parts.as_slice() else {
        return Err(Error::Parse(format!("expected a,b,c,d, got {text:?}")));
    };
    Abcd::new(parse_rational(a)?, parse_rational(b)?, parse_rational(c)?, parse_rational(d)?)
}

fn target_formula(target: &str, n: u32, real: bool) -> Result<Formula> {
    match target {
        "campana" => build_campana(n, real),
        "integrality" => build_integrality(real),
        name => {
            let conj = conjunction(TowerSet::parse(name, n)?)?;
            if real {
                conj.combined_formula(true)
            } else {
                conj.to_formula()
            }
        }
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn execute(cli: Cli, out: &mut dyn std::io::Write) -> std::result::Result<(), Failure> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let io = |e: std::io::Error| Failure::Failed(e.to_string());
    match cli.command {
        Command::Hilbert { a, b, place } => {
            let (a, b) = (parse_rational(&a)?, parse_rational(&b)?);
            let v: Place = place.parse()?;
            writeln!(out, "{}", hilbert(&a, &b, &v)?).map_err(io)?;
        }
        Command::Construct { primes, cap, aux_bound, timeout_ms } => {
            let s = parse_place_set(&primes.join(" "))?;
            let report = construct_omega(&s, &config.search(cap, aux_bound, timeout_ms))?;
            let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Failed(e.to_string()))?;
            writeln!(out, "{json}").map_err(io)?;
            if !report.succeeded() {
                return Err(Failure::Failed(format!("achieved {} instead of {}", report.achieved, report.target)));
            }
        }
        Command::Member { kind, r, n, s, params } => {
            let r = parse_rational(&r)?;
            let need_params = || -> Result<Abcd> {
                parse_params(params.as_deref().ok_or_else(|| Error::Parse("--params a,b,c,d is required".into()))?)
            };
            let verdict = match kind {
                MemberKind::Campana => campana_member(&parse_place_set(&s)?, n, &r)?,
                MemberKind::Sintegers => s_integer_member(&parse_place_set(&s)?, &r)?,
                MemberKind::J => in_j(&need_params()?, &r)?,
                MemberKind::Jn => in_jn(&need_params()?, n, &r)?,
                MemberKind::InvJn => in_inv_jn(&need_params()?, n, &r)?,
            };
            writeln!(out, "{verdict}").map_err(io)?;
        }
        Command::Emit { target, n, format, real, output } => {
            let fmt: Format = format.parse()?;
            let f = target_formula(&target, n, real)?;
            let text = emit(&f, fmt)?;
            match output {
                Some(path) => fs::write(&path, text).map_err(io)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            writeln!(out, "{}", f.stats()).map_err(io)?;
        }
        Command::Verify { suite, seed, samples } => {
            let suite: Suite = suite.parse()?;
            let cfg = VerifyConfig {
                seed: seed.or(config.seed).unwrap_or(verify::DEFAULT_SEED),
                samples: samples.or(config.samples).unwrap_or(verify::DEFAULT_SAMPLES),
                search: config.search(None, None, None),
            };
            if matches!(suite, Suite::All | Suite::Formulas) {
                writeln!(out, "{:<22} {:>4} {:>4} {:>5} {:>6}", "set", "A", "E", "atoms", "deg").map_err(io)?;
                for row in verify::ledger(&verify::LEDGER_NS)? {
                    writeln!(out, "{row}").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
            let checks = verify::run(suite, &cfg);
            for check in &checks {
                writeln!(out, "{check}").map_err(io)?;
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            writeln!(out, "{} checks, {failed} failed (seed {})", checks.len(), cfg.seed).map_err(io)?;
            if let Some(first) = checks.iter().find(|c| !c.passed) {
                let cx = first.counterexample.clone().unwrap_or_default();
                return Err(Failure::Failed(format!("{}: {cx}", first.name)));
            }
        }
    }
    Ok(())
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = lock.flush();
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Failed(m) => eprintln!("failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (std::result::Result<(), u8>, String) {
        let cli = Cli::try_parse_from(std::iter::once("campana").chain(args.iter().copied())).map_err(|_| 2u8);
        let mut buf = Vec::new();
        let res = match cli {
            Ok(cli) => execute(cli, &mut buf).map_err(|f| f.code()),
            Err(c) => Err(c),
        };
        (res, String::from_utf8(buf).expect("utf8"))
    }

    #[test]
    fn hilbert_command() {
        assert_eq!(run(&["hilbert", "-1", "-1", "inf"]), (Ok(()), "-1\n".into()));
        assert_eq!(run(&["hilbert", "2", "5", "5"]), (Ok(()), "-1\n".into()));
        assert_eq!(run(&["hilbert", "3", "x", "7"]).0, Err(2));
        assert_eq!(run(&["hilbert", "3", "5", "9"]).0, Err(2));
    }

    #[test]
    fn member_command() {
        assert_eq!(run(&["member", "campana", "--n", "3", "--s", "", "1/8"]).1, "true\n");
        assert_eq!(run(&["member", "campana", "--n", "3", "--s", "", "1/4"]).1, "false\n");
        assert_eq!(run(&["member", "sintegers", "--s", "5", "7/25"]).1, "true\n");
        assert_eq!(run(&["member", "sintegers", "--s", "5", "-7/3"]).1, "false\n");
        assert_eq!(run(&["member", "J", "1/2"]).0, Err(2));
        assert_eq!(run(&["member", "J", "--params", "1,1,1,1", "1/2"]).1, "true\n");
    }

    #[test]
    fn construct_command() {
        let (res, out) = run(&["construct", "3", "5"]);
        assert_eq!(res, Ok(()));
        let v: serde_json::Value = serde_json::from_str(&out).expect("json");
        assert_eq!(v["achieved"], serde_json::json!([3, 5]));
        assert_eq!(run(&["construct", "4"]).0, Err(2));
        assert_eq!(run(&["construct", "3", "3"]).0, Err(2));
    }

    #[test]
    fn emit_stats_line() {
        let (res, out) = run(&["emit", "S", "--format", "sexpr"]);
        assert_eq!(res, Ok(()));
        assert!(out.ends_with("universals=0 existentials=3 degree<=4\n"), "{out}");
        assert_eq!(run(&["emit", "nope"]).0, Err(2));
        assert_eq!(run(&["emit", "S", "--format", "xml"]).0, Err(2));
    }

    #[test]
    fn config_file_parsing() {
        let cfg = Config::parse("# defaults\ncap = 7\n\nsamples=12\n").expect("valid");
        assert_eq!(cfg.cap, Some(7));
        assert_eq!(cfg.samples, Some(12));
        assert!(Config::parse("cap 7").is_err());
        assert!(Config::parse("colour = red").is_err());
        let search = cfg.search(None, Some(11), None);
        assert_eq!((search.cap, search.aux_bound), (7, 11));
        assert_eq!(cfg.search(Some(3), None, None).cap, 3);
    }
}
