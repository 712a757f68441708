use campana::formulas::{build_campana, build_integrality, substitute_form};
use campana::semantics::BinaryForm;

#[test]
fn integrality_formula_stats() {
    let s = build_integrality(false).expect("builds").stats();
    assert_eq!((s.universals, s.existentials, s.atoms, s.degree_bound), (838, 278, 1, 2995));
}

#[test]
fn form_substitution_scales_degree() {
    let base = build_campana(2, false).expect("builds");
    let form: BinaryForm = "x^2 + y^2".parse().expect("form");
    let f = substitute_form(&base, &form).expect("integer coefficients");
    let (b, s) = (base.stats(), f.stats());
    assert_eq!((s.universals, s.existentials), (b.universals, b.existentials));
    assert!(f.free().iter().any(|v| v == "lambda"));
    // r only occurs in atoms of degree at most 2, so the circuit bound stays
    // well under deg(F) times the base bound
    assert_eq!(s.degree_bound, 3387);
    assert!(s.degree_bound <= u64::from(form.degree()) * b.degree_bound);

    let identity: BinaryForm = "x".parse().expect("form");
    assert_eq!(substitute_form(&base, &identity).expect("substitutes").stats(), b);
    assert!(substitute_form(&base, &"1/2 x^2 + y^2".parse().expect("form")).is_err());
}
