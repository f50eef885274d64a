mod common;

use common::{all_fixtures, generic_strategy};
use dlexplain::model::{ClassExpression, Signature};
use dlexplain::text::{
    parse_expression, parse_expression_open, parse_kb, parse_problem, render_expression, render_raw, render_unicode,
    serialize_kb, serialize_problem,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn raw_rendering_round_trips(e in generic_strategy()) {
        prop_assert_eq!(parse_expression_open(&render_raw(&e)).unwrap(), e);
    }

    #[test]
    fn canonical_rendering_parses_to_canonical_form(e in generic_strategy()) {
        let c = e.canonicalize();
        let parsed = parse_expression_open(&render_expression(&e)).unwrap();
        prop_assert!(parsed.is_canonical());
        prop_assert_eq!(parsed, c);
    }

    #[test]
    fn canonicalize_is_idempotent(e in generic_strategy()) {
        let c = e.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.length() <= e.length());
    }

    #[test]
    fn canonical_form_ignores_operand_order(a in generic_strategy(), b in generic_strategy(), c in generic_strategy()) {
        let left = ClassExpression::and(ClassExpression::and(a.clone(), b.clone()), c.clone());
        let right = ClassExpression::and(c.clone(), ClassExpression::and(b.clone(), a.clone()));
        prop_assert_eq!(left.canonicalize(), right.canonicalize());
        let left = ClassExpression::or(a.clone(), ClassExpression::or(b.clone(), a.clone()));
        let right = ClassExpression::or(b, a);
        prop_assert_eq!(left.canonicalize(), right.canonicalize());
    }

    #[test]
    fn unicode_rendering_uses_no_keywords(e in generic_strategy()) {
        let u = render_unicode(&e);
        for word in u.split(|c: char| !c.is_alphanumeric() && c != '_') {
            prop_assert!(!["some", "only", "and", "or", "not", "Thing", "Nothing"].contains(&word), "{}", u);
        }
    }
}

#[test]
fn fixture_files_round_trip_through_serialization() {
    for f in all_fixtures() {
        let text = serialize_kb(&f.kb);
        let again = parse_kb(&text).unwrap();
        assert_eq!(again, f.kb, "{}", f.name);
        assert_eq!(serialize_kb(&again), text, "{}", f.name);
        assert!(f.kb.check_well_formed().is_empty(), "{}", f.name);

        let p = serialize_problem(&f.problem);
        assert_eq!(parse_problem(&p, &f.kb.signature).unwrap(), f.problem);
    }
}

#[test]
fn precedence_and_associativity() {
    let sig = Signature::new().with_classes(["A", "B", "C"]).with_roles(["r"]);
    let p = |s: &str| parse_expression(s, &sig).unwrap();
    let a = || ClassExpression::atomic("A");
    let b = || ClassExpression::atomic("B");
    let c = || ClassExpression::atomic("C");
    assert_eq!(p("A or B and C"), ClassExpression::or(a(), ClassExpression::and(b(), c())));
    assert_eq!(p("A and B and C"), ClassExpression::and(a(), ClassExpression::and(b(), c())));
    assert_eq!(p("not A and B"), ClassExpression::and(ClassExpression::not(a()), b()));
    assert_eq!(p("r some A and B"), ClassExpression::and(ClassExpression::exists("r", a()), b()));
    assert_eq!(p("r only not A"), ClassExpression::forall("r", ClassExpression::not(a())));
    assert_eq!(p("not r some A"), ClassExpression::not(ClassExpression::exists("r", a())));
    assert_eq!(
        p("r some r only Thing"),
        ClassExpression::exists("r", ClassExpression::forall("r", ClassExpression::Top))
    );
    assert_eq!(p("(A or B) and C"), ClassExpression::and(ClassExpression::or(a(), b()), c()));
}

#[test]
fn strict_parsing_rejects_undeclared_names() {
    let sig = Signature::new().with_classes(["A"]).with_roles(["r"]);
    let err = parse_expression("r some Q", &sig).unwrap_err();
    assert_eq!((err.span.line, err.span.column), (1, 8));
    assert!(parse_expression("A some A", &sig).is_err());
    assert!(parse_expression("A and", &sig).is_err());
    assert!(parse_expression("(A", &sig).is_err());
    assert!(parse_expression("A)", &sig).is_err());
}
