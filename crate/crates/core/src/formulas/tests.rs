use proptest::prelude::*;

use super::*;

fn lukneg(text: &str) -> UpperFormula {
    parse_upper(text, Dialect::LukNeg).unwrap()
}

fn b(name: &str) -> UpperExpr {
    UpperExpr::modal(LowerFormula::atom(name))
}

#[test]
fn lower_grammar_cases() {
    let p = LowerFormula::atom("p");
    let q = LowerFormula::atom("q");
    assert_eq!(parse_lower("p & !q").unwrap(), LowerFormula::and(p.clone(), LowerFormula::neg(q.clone())));
    assert_eq!(parse_lower("!(p | q)").unwrap(), LowerFormula::neg(LowerFormula::or(p.clone(), q.clone())));
    assert_eq!(
        parse_lower("p | q & p").unwrap(),
        LowerFormula::or(p.clone(), LowerFormula::and(q.clone(), p.clone()))
    );
    assert_eq!(parse_lower("  p_1  ").unwrap(), LowerFormula::atom("p_1"));
}

#[test]
fn lower_errors_carry_offsets() {
    let err = parse_lower("p &").unwrap_err();
    assert_eq!(err.offset, 3);
    assert_eq!(err.to_string(), "syntax error at offset 3: expected formula, found end of input");
    let err = parse_lower("p $ q").unwrap_err();
    assert_eq!(err.offset, 2);
    assert!(matches!(err.kind, ParseErrorKind::UnknownToken(_)));
    assert!(parse_lower("p && q").is_err());
    assert!(parse_lower("(p").is_err());
    assert!(parse_lower("P").is_err());
    assert!(parse_lower("B(p)").is_err());
}

#[test]
fn lower_printing_is_canonical() {
    let f = parse_lower("(p&q)|!(r | s)").unwrap();
    assert_eq!(f.to_string(), "p & q | !(r | s)");
    let f = parse_lower("p & (q & r)").unwrap();
    assert_eq!(f.to_string(), "p & (q & r)");
    assert_eq!(parse_lower("!!p").unwrap().to_string(), "!!p");
}

#[test]
fn upper_grammar_cases() {
    let f = lukneg("B(p) -> B(p|q)");
    let pq = LowerFormula::or(LowerFormula::atom("p"), LowerFormula::atom("q"));
    assert_eq!(f.expr(), &UpperExpr::imp(b("p"), UpperExpr::modal(pq)));

    let f = lukneg("B(p) (+) B(q)");
    assert_eq!(f.expr(), &UpperExpr::imp(UpperExpr::strong_neg(b("p")), b("q")));

    let f = parse_upper("B(p) /\\k 0", Dialect::Bilat).unwrap();
    assert_eq!(f.expr(), &UpperExpr::meet_k(b("p"), UpperExpr::Zero));

    let f = lukneg("B(p) -> B(q) -> B(p)");
    assert_eq!(f.expr(), &UpperExpr::imp(b("p"), UpperExpr::imp(b("q"), b("p"))));
}

#[test]
fn derived_connectives_expand() {
    assert_eq!(
        lukneg("B(p) (-) B(q)").expr(),
        &UpperExpr::strong_neg(UpperExpr::imp(b("p"), b("q")))
    );
    assert_eq!(
        lukneg("B(p) * B(q)").expr(),
        &UpperExpr::strong_neg(UpperExpr::imp(b("p"), UpperExpr::strong_neg(b("q"))))
    );
    assert_eq!(lukneg("B(p) <-> B(q)").expr(), &UpperExpr::luk_equiv(b("p"), b("q")));
    assert_eq!(
        parse_upper("~B(p)", Dialect::Bilat).unwrap().expr(),
        &UpperExpr::bilat_strong_neg(b("p"))
    );
    assert_eq!(
        parse_upper("B(p) -> B(q)", Dialect::Bilat).unwrap().expr(),
        &UpperExpr::bilat_imp(b("p"), b("q"))
    );
    assert_eq!(
        parse_upper("B(p) <= B(q)", Dialect::Bilat).unwrap().expr(),
        &UpperExpr::sup(b("q"), b("p"))
    );
}

#[test]
fn dialect_violations_are_rejected() {
    let err = parse_upper("B(p) /\\k B(q)", Dialect::LukNeg).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Dialect(_)));
    assert_eq!(err.offset, 5);
    assert!(parse_upper("B(p) => B(q)", Dialect::LukNeg).is_err());
    assert!(parse_upper("0", Dialect::LukNeg).is_err());
    assert!(parse_upper("B(p) -> B(q)", Dialect::Bd).is_err());
    assert!(parse_upper("B(p) & !B(q)", Dialect::Bd).is_ok());
    assert!(parse_upper("B(B(p))", Dialect::LukNeg).is_err());
    assert!(UpperFormula::new(Dialect::LukNeg, UpperExpr::meet_t(b("p"), b("q"))).is_err());
    assert!(UpperFormula::new(Dialect::Bilat, UpperExpr::imp(b("p"), b("q"))).is_err());
}

#[test]
fn upper_printing() {
    let f = lukneg("!~B(p) -> (B(q) -> B(p & q))");
    assert_eq!(f.to_string(), "!~B(p) -> B(q) -> B(p & q)");
    let f = lukneg("(B(p) -> B(q)) -> B(p)");
    assert_eq!(f.to_string(), "(B(p) -> B(q)) -> B(p)");
    let f = parse_upper("B(p) | B(q) & !B(r)", Dialect::Bd).unwrap();
    assert_eq!(f.to_string(), "B(p) | B(q) & !B(r)");
    let f = parse_upper("(B(p) \\/t B(q)) /\\t x", Dialect::Bilat).unwrap();
    assert_eq!(f.to_string(), "(B(p) \\/t B(q)) /\\t x");
}

#[test]
fn nnf_examples() {
    assert_eq!(nnf(&lukneg("!~B(p)")), lukneg("~!B(p)"));
    assert_eq!(nnf(&lukneg("!(B(p) -> B(q))")), lukneg("~(~!B(p) -> ~!B(q))"));
    assert_eq!(nnf(&lukneg("!!B(p)")), lukneg("B(p)"));
    assert_eq!(nnf(&lukneg("!~~B(p)")), lukneg("!B(p)"));
}

#[test]
fn neg_translate_examples() {
    assert_eq!(neg_translate(&lukneg("B(p)")), lukneg("!B(p)"));
    assert_eq!(neg_translate(&lukneg("!B(p)")), lukneg("B(p)"));
    assert_eq!(neg_translate(&lukneg("~B(p)")), lukneg("~!B(p)"));
    assert_eq!(neg_translate(&lukneg("B(p) -> B(q)")), lukneg("~(~!B(p) -> ~!B(q))"));
}

#[test]
fn literals_and_atoms() {
    let f = lukneg("!B(p) -> x");
    let atoms: Vec<String> = f.expr().atoms().iter().map(|a| a.to_string()).collect();
    assert_eq!(atoms, ["x", "B(p)"]);
    let lit = UpperExpr::bneg(b("p")).as_literal().unwrap();
    assert_eq!(lit.polarity, Polarity::BNeg);
    assert_eq!(lit.to_string(), "!B(p)");
    assert!(UpperExpr::bneg(UpperExpr::strong_neg(b("p"))).as_literal().is_none());
}

// ---- property tests ----

fn atom_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["p", "q", "r", "s1"]).prop_map(str::to_string)
}

fn lower_formula() -> impl Strategy<Value = LowerFormula> {
    atom_name().prop_map(LowerFormula::Atom).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(LowerFormula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| LowerFormula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| LowerFormula::or(a, b)),
        ]
    })
}

fn upper_leaf(dialect: Dialect) -> BoxedStrategy<UpperExpr> {
    let modal = prop::collection::vec(lower_formula(), 1)
        .prop_map(|mut v| UpperExpr::modal(v.pop().unwrap()));
    let prop_atom = atom_name().prop_map(UpperExpr::Atom);
    if dialect == Dialect::Bilat {
        prop_oneof![modal, prop_atom, Just(UpperExpr::Zero)].boxed()
    } else {
        prop_oneof![modal, prop_atom].boxed()
    }
}

fn upper_expr(dialect: Dialect) -> BoxedStrategy<UpperExpr> {
    upper_leaf(dialect)
        .prop_recursive(4, 24, 2, move |inner| {
            let un = inner.clone();
            let bin = (inner.clone(), inner);
            match dialect {
                Dialect::LukNeg => prop_oneof![
                    un.clone().prop_map(UpperExpr::strong_neg),
                    un.prop_map(UpperExpr::bneg),
                    bin.prop_map(|(a, b)| UpperExpr::imp(a, b)),
                ]
                .boxed(),
                Dialect::Bd => prop_oneof![
                    un.prop_map(UpperExpr::bneg),
                    bin.clone().prop_map(|(a, b)| UpperExpr::meet_t(a, b)),
                    bin.prop_map(|(a, b)| UpperExpr::join_t(a, b)),
                ]
                .boxed(),
                Dialect::Bilat => prop_oneof![
                    un.prop_map(UpperExpr::bneg),
                    bin.clone().prop_map(|(a, b)| UpperExpr::meet_t(a, b)),
                    bin.clone().prop_map(|(a, b)| UpperExpr::join_t(a, b)),
                    bin.clone().prop_map(|(a, b)| UpperExpr::meet_k(a, b)),
                    bin.clone().prop_map(|(a, b)| UpperExpr::join_k(a, b)),
                    bin.prop_map(|(a, b)| UpperExpr::sup(a, b)),
                ]
                .boxed(),
            }
        })
        .boxed()
}

fn upper_formula() -> impl Strategy<Value = UpperFormula> {
    prop_oneof![Just(Dialect::LukNeg), Just(Dialect::Bilat), Just(Dialect::Bd)].prop_flat_map(|d| {
        upper_expr(d).prop_map(move |e| UpperFormula::new(d, e).unwrap())
    })
}

proptest! {
    #[test]
    fn lower_round_trip(f in lower_formula()) {
        let printed = f.to_string();
        let reparsed = parse_lower(&printed).unwrap();
        prop_assert_eq!(&reparsed, &f);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn upper_round_trip(f in upper_formula()) {
        let printed = f.to_string();
        let reparsed = parse_upper(&printed, f.dialect()).unwrap();
        prop_assert_eq!(&reparsed, &f);
    }

    #[test]
    fn nnf_is_idempotent_and_normal(e in upper_expr(Dialect::LukNeg)) {
        let f = UpperFormula::new(Dialect::LukNeg, e).unwrap();
        let n = nnf(&f);
        prop_assert!(is_nnf(n.expr()));
        prop_assert_eq!(nnf(&n), n.clone());
        prop_assert!(is_nnf(neg_translate(&f).expr()));
    }

    #[test]
    fn neg_translate_is_an_involution_up_to_nnf(e in upper_expr(Dialect::LukNeg)) {
        let f = UpperFormula::new(Dialect::LukNeg, e).unwrap();
        prop_assert_eq!(nnf(&neg_translate(&neg_translate(&f))), nnf(&f));
    }
}
