//! The formula compiler.
//!
//! Formulas are prenex, with a matrix of polynomial equations and
//! inequations over a shared arithmetic circuit. Nothing is ever expanded:
//! degrees are tracked symbolically node by node, which is what makes the
//! large ∀∃ definitions representable at all.

pub mod circuit;
pub mod combine;
pub mod emit;
pub mod formula;
pub mod poly;
pub mod tower;
mod witness;

pub use circuit::{Circuit, Node, NodeId, VarId};
pub use combine::{combine_many, combine_pair, combine_sos, norm_circuit, norm_form, norm_scale};
pub use emit::{emit, parse_json, Format};
pub use formula::{evaluate_matrix, prenex_or, stats, Formula, FormulaStats, Matrix, Quantifier};
pub use poly::{expand, Poly};
pub use tower::{
    build_campana, build_disjoint, build_i, build_integrality, build_inv_j, build_inv_jn, build_j,
    build_jabcd, build_jn, build_premise, build_s, build_t, build_t_unit, conjunction, substitute_form,
    Conjunction, TowerSet,
};
