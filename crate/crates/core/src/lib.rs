//! Computational toolkit for the forall-exists definability of Campana points
//! over the rationals.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: exact rationals, factorization, valuations, CRT and residue symbols.
//! - [`places`]: places of the rationals, local Hilbert symbols and the place-set
//!   invariants built from them (`delta`, `delta_upper`, `omega`).
//! - [`parametrize`]: constructs `(a, b, c, d)` whose `omega` is any prescribed
//!   finite set of primes.
//! - [`semantics`]: valuation-based membership tests for every set in the
//!   definitional tower, plus a sampler of norm-one quaternion traces.
//! - [`formulas`]: the formula compiler, which builds the tower as prenex
//!   formulas over polynomial circuits and accounts for quantifiers, atoms
//!   and degrees exactly.
//! - [`verify`]: seeded property suites shared by the CLI and the tests.
//! - [`cli`]: the command-line front end used by the `campana` binary.
//!
//! ```
//! use campana::arith::parse_rational;
//! use campana::formulas::build_s;
//! use campana::places::{hilbert, Place, PlaceSet};
//! use campana::semantics::campana_member;
//!
//! let (a, b) = (parse_rational("2")?, parse_rational("5")?);
//! assert_eq!(hilbert(&a, &b, &Place::finite(5)?)?, -1);
//!
//! let s = PlaceSet::from_primes([5])?;
//! assert!(campana_member(&s, 3, &parse_rational("1/8")?)?);
//!
//! let f = build_s("a", "b", "r")?;
//! assert_eq!(f.stats().to_string(), "universals=0 existentials=3 degree<=4");
//! # Ok::<(), campana::Error>(())
//! ```

pub mod arith;
pub mod cli;
pub mod error;
pub mod formulas;
pub mod parametrize;
pub mod places;
pub mod semantics;
pub mod verify;

pub use arith::{Rational, Valuation};
pub use error::{Error, Result};
pub use places::{Abcd, Place, PlaceSet, Prime};
