use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebras::designated_pair;
use crate::formulas::parse_upper;
use crate::random;
use crate::rational::{int, rat};

fn luk(text: &str) -> UpperExpr {
    parse_upper(text, Dialect::LukNeg).unwrap().into_expr()
}

fn ln(text: &str) -> UpperFormula {
    parse_upper(text, Dialect::LukNeg).unwrap()
}

fn cfg() -> DecideConfig {
    DecideConfig::default()
}

fn point_of(c: &Countermodel) -> &RationalPoint {
    match c {
        Countermodel::Point { point, .. } => point,
        other => panic!("expected a point, got {other:?}"),
    }
}

/// Independent check of a pair-valued countermodel in the product algebra.
fn genuine_pairs(gamma: &[UpperFormula], alpha: &UpperFormula, c: &Countermodel) -> bool {
    let Countermodel::Pairs { assignment, value } = c else { return false };
    let ev = |f: &UpperFormula| eval_upper(AlgebraId::MvProd, f.expr(), assignment).unwrap();
    gamma.iter().all(|g| designated_pair(AlgebraId::MvProd, &ev(g)))
        && !designated_pair(AlgebraId::MvProd, &ev(alpha))
        && &ev(alpha) == value
}

fn genuine_point(gamma: &[UpperExpr], alpha: &UpperExpr, c: &Countermodel) -> bool {
    let Countermodel::Point { point, value } = c else { return false };
    gamma.iter().all(|g| luk_value(g, point).unwrap() == int(1))
        && &luk_value(alpha, point).unwrap() == value
        && value < &int(1)
}

#[test]
fn encoding_shapes() {
    let (enc, value, _) = encode(&luk("p")).unwrap();
    assert_eq!(enc.vars.len(), 1);
    assert!(enc.constraints.is_empty());
    assert_eq!(value, LinExpr::var(0));

    let (enc, value, _) = encode(&luk("~p")).unwrap();
    assert!(enc.branch_vars().is_empty());
    assert_eq!(value, LinExpr::var(0).complement());

    let (enc, _, _) = encode(&luk("p -> q")).unwrap();
    assert_eq!(enc.branch_vars().len(), 1);
    assert_eq!(enc.constraints.len(), 3);

    // Shared subterms are encoded once.
    let (enc, _, _) = encode(&luk("(p -> q) -> (p -> q)")).unwrap();
    assert_eq!(enc.branch_vars().len(), 2);

    assert_eq!(encode(&UpperExpr::meet_t(luk("p"), luk("q"))).unwrap_err(), DecideError::Unsupported("truth meet"));
}

#[test]
fn lp_export_names() {
    let text = lp_export(&[luk("p")], &luk("p -> (q -> p)")).unwrap();
    assert!(text.starts_with("\\ objective constant 1\nMinimize\n obj:"));
    assert!(text.contains("Binaries\n b"));
    assert!(text.contains(" 1 <= v0 <= 1"));
    assert!(text.ends_with("End\n"));
}

#[test]
fn luk_consequence_examples() {
    for ax in [
        "p -> (q -> p)",
        "(p -> q) -> ((q -> r) -> (p -> r))",
        "((p -> q) -> q) -> ((q -> p) -> p)",
        "(~q -> ~p) -> (p -> q)",
    ] {
        assert_eq!(luk_consequence(&[], &luk(ax), &cfg()).unwrap(), LukVerdict::Valid, "{ax}");
    }
    let LukVerdict::Invalid(c) = luk_consequence(&[], &luk("(p (+) p) -> p"), &cfg()).unwrap() else {
        panic!("expected a countermodel")
    };
    assert_eq!(point_of(&c).0.get(&luk("p")), Some(&rat(1, 2)));
    assert!(matches!(&c, Countermodel::Point { value, .. } if value == &rat(1, 2)));

    assert!(luk_consequence(&[luk("p")], &luk("p * p"), &cfg()).unwrap().is_valid());
    assert!(luk_consequence(&[luk("p"), luk("p -> q")], &luk("q"), &cfg()).unwrap().is_valid());
    assert!(!luk_consequence(&[luk("p -> q")], &luk("q"), &cfg()).unwrap().is_valid());
    // Contradictory premises entail anything.
    assert!(luk_consequence(&[luk("p"), luk("~p")], &luk("q"), &cfg()).unwrap().is_valid());

    let wide = (0..9).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" -> ");
    assert_eq!(
        luk_consequence(&[], &luk(&wide), &cfg()),
        Err(DecideError::AtomBudget { atoms: 9, cap: 8 })
    );
}

#[test]
fn lukneg_consequence_examples() {
    assert!(lukneg_consequence(&[], &ln("!~B(p) <-> ~!B(p)"), &cfg()).unwrap().is_valid());
    assert!(lukneg_consequence(&[ln("B(p)")], &ln("~!B(p)"), &cfg()).unwrap().is_valid());
    let LukVerdict::Invalid(c) = lukneg_consequence(&[], &ln("B(p)"), &cfg()).unwrap() else { panic!() };
    let Countermodel::Pairs { assignment, .. } = &c else { panic!() };
    assert_eq!(assignment.values().collect::<Vec<_>>(), [&PairValue::zero()]);

    let bilat = parse_upper("B(p) /\\t B(q)", Dialect::Bilat).unwrap();
    assert_eq!(lukneg_consequence(&[], &bilat, &cfg()), Err(DecideError::Dialect(Dialect::Bilat)));

    // A designated premise pins both components of B(p).
    assert!(lukneg_consequence(&[ln("B(p)")], &ln("!B(p) -> B(q)"), &cfg()).unwrap().is_valid());
    assert!(!lukneg_consequence(&[ln("B(p)")], &ln("B(q)"), &cfg()).unwrap().is_valid());
}

fn axiom_instances(a: &UpperExpr, b: &UpperExpr, c: &UpperExpr) -> Vec<UpperExpr> {
    use UpperExpr as U;
    let imp = U::imp;
    let sn = U::strong_neg;
    let bn = U::bneg;
    vec![
        imp(a.clone(), imp(b.clone(), a.clone())),
        imp(imp(a.clone(), b.clone()), imp(imp(b.clone(), c.clone()), imp(a.clone(), c.clone()))),
        imp(imp(imp(a.clone(), b.clone()), b.clone()), imp(imp(b.clone(), a.clone()), a.clone())),
        imp(imp(sn(b.clone()), sn(a.clone())), imp(a.clone(), b.clone())),
        U::luk_equiv(bn(bn(a.clone())), a.clone()),
        U::luk_equiv(bn(sn(a.clone())), sn(bn(a.clone()))),
        U::luk_equiv(imp(sn(bn(a.clone())), sn(bn(b.clone()))), sn(bn(imp(a.clone(), b.clone())))),
    ]
}

#[test]
fn axioms_are_valid_and_rules_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let atoms = random::atom_names(2);
    for round in 0..12 {
        let size = if round < 2 { 0 } else { 2 };
        let [a, b, c] = [0, 1, 2].map(|_| random::lukneg_formula(&mut rng, &atoms, size));
        for ax in axiom_instances(&a, &b, &c) {
            let f = UpperFormula::new(Dialect::LukNeg, ax).unwrap();
            assert!(lukneg_consequence(&[], &f, &cfg()).unwrap().is_valid(), "{}", f.expr().display(Dialect::LukNeg));
        }
        let (fa, fb) = (
            UpperFormula::new(Dialect::LukNeg, a.clone()).unwrap(),
            UpperFormula::new(Dialect::LukNeg, b.clone()).unwrap(),
        );
        let fab = UpperFormula::new(Dialect::LukNeg, UpperExpr::imp(a.clone(), b)).unwrap();
        assert!(lukneg_consequence(&[fa.clone(), fab], &fb, &cfg()).unwrap().is_valid());
        let boxed = UpperFormula::new(Dialect::LukNeg, UpperExpr::strong_neg(UpperExpr::bneg(a))).unwrap();
        assert!(lukneg_consequence(&[fa], &boxed, &cfg()).unwrap().is_valid());
    }
}

#[test]
fn grid_examples() {
    let Some(c) = grid_falsify(&[], &luk("(p (+) p) -> p"), 2, DEFAULT_GRID_BUDGET).unwrap() else { panic!() };
    assert_eq!(point_of(&c).0, BTreeMap::from([(luk("p"), rat(1, 2))]));
    for d in 1..=6 {
        assert_eq!(grid_falsify(&[], &luk("p -> p"), d, DEFAULT_GRID_BUDGET).unwrap(), None);
    }
    let wide = (0..10).map(|i| format!("x{i}")).collect::<Vec<_>>().join(" -> ");
    assert!(matches!(
        grid_falsify(&[], &luk(&wide), 6, DEFAULT_GRID_BUDGET),
        Err(DecideError::GridBudget { budget: DEFAULT_GRID_BUDGET, .. })
    ));
    assert_eq!(grid_falsify(&[], &luk("p"), 0, 10), Err(DecideError::GridDenominator(0)));

    // Lexicographic order: the first coordinate varies slowest.
    let Some(c) = grid_falsify(&[], &luk("p -> q"), 1, 100).unwrap() else { panic!() };
    assert_eq!(point_of(&c).0, BTreeMap::from([(luk("p"), int(1)), (luk("q"), int(0))]));

    let Some(c) = grid_falsify_lukneg(&[], &ln("B(p)").into_expr(), 1, 100).unwrap() else { panic!() };
    assert!(genuine_pairs(&[], &ln("B(p)"), &c));
    assert_eq!(grid_falsify_lukneg(&[], &ln("!~B(p) <-> ~!B(p)").into_expr(), 4, 100_000).unwrap(), None);
}

#[test]
fn decision_agrees_with_grid_on_small_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    let atoms = random::atom_names(2);
    for _ in 0..40 {
        let n = rng.gen_range(0..=6);
        let alpha = random::luk_formula(&mut rng, &atoms, n);
        let gamma: Vec<UpperExpr> =
            (0..rng.gen_range(0..=1)).map(|_| random::luk_formula(&mut rng, &atoms, 2)).collect();
        let verdict = luk_consequence(&gamma, &alpha, &cfg()).unwrap();
        let grid = grid_falsify(&gamma, &alpha, 6, DEFAULT_GRID_BUDGET).unwrap();
        if let Some(c) = &grid {
            assert!(genuine_point(&gamma, &alpha, c));
            assert!(!verdict.is_valid());
        }
        if let LukVerdict::Invalid(c) = &verdict {
            assert!(genuine_point(&gamma, &alpha, c), "{c}");
        }

        let alpha = UpperFormula::new(Dialect::LukNeg, random::lukneg_formula(&mut rng, &atoms, n)).unwrap();
        let verdict = lukneg_consequence(&[], &alpha, &cfg()).unwrap();
        let grid = grid_falsify_lukneg(&[], alpha.expr(), 4, DEFAULT_GRID_BUDGET).unwrap();
        if let Some(c) = &grid {
            assert!(genuine_pairs(&[], &alpha, c));
            assert!(!verdict.is_valid());
        }
        if let LukVerdict::Invalid(c) = &verdict {
            assert!(genuine_pairs(&[], &alpha, c), "{c}");
        }
    }
}

#[test]
fn branch_and_bound_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(79);
    let atoms = random::atom_names(3);
    let mut checked = 0;
    while checked < 40 {
        let (n, k) = (rng.gen_range(1..=7), rng.gen_range(0..=2));
        let alpha = random::luk_formula(&mut rng, &atoms, n);
        let premise = random::luk_formula(&mut rng, &atoms, k);
        let mut dag = TermDag::default();
        let g = dag.intern(&premise).unwrap();
        let top = dag.intern(&alpha).unwrap();
        let mut enc = Encoder::new(&dag);
        if rng.gen_bool(0.5) {
            enc.force(g, true);
        }
        let obj = enc.value(top);
        if enc.enc.branch_vars().len() > 6 {
            continue;
        }
        checked += 1;
        let (sol, _) = minimize(&enc.enc, &obj, None);
        assert_eq!(sol.as_ref().map(|s| s.value.clone()), minimize_by_enumeration(&enc.enc, &obj));
        if let Some(s) = sol {
            assert!(enc.enc.satisfied_by(&s.x));
            assert_eq!(dag.eval(top, &s.x[..dag.leaves().len()]), s.value);
        }
    }
}

#[test]
fn encoding_reproduces_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let atoms = random::atom_names(5);
    for _ in 0..150 {
        let n = rng.gen_range(0..=10);
        let alpha = random::luk_formula(&mut rng, &atoms, n);
        let (mut enc, value, dag) = encode(&alpha).unwrap();
        let point: Vec<Rational> = dag.leaves().iter().map(|_| random::unit_rational(&mut rng, 7)).collect();
        let expected = luk_value(&alpha, &RationalPoint(dag.leaves().iter().cloned().zip(point.clone()).collect()))
            .unwrap();
        for (i, v) in point.iter().enumerate() {
            enc.vars[i].lo = v.clone();
            enc.vars[i].hi = v.clone();
        }
        let (lo, _) = minimize(&enc, &value, None);
        let (hi, _) = minimize(&enc, &LinExpr::default().sub(&value), None);
        assert_eq!(lo.unwrap().value, expected);
        assert_eq!(-hi.unwrap().value, expected);
    }
}

#[test]
fn boxdot_examples() {
    let t = boxdot_translate(&[ln("B(p)")], &ln("B(p)"));
    assert_eq!(t.gamma, vec![luk("~!B(p)"), luk("B(p)")]);
    let t = boxdot_translate(&[], &ln("B(p)"));
    assert_eq!(t.delta, vec![UpperExpr::luk_equiv(luk("!!B(p)"), luk("B(p)"))]);
    let t = boxdot_translate(&[], &ln("~B(p) -> B(q)"));
    assert_eq!(t.delta.len(), 6);
    assert_eq!(t.premises().len(), 6);
}

#[test]
fn boxdot_translation_agrees_with_product_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(89);
    let atoms = random::atom_names(2);
    let wide = DecideConfig { atom_cap: 64 };
    for _ in 0..25 {
        let n = rng.gen_range(0..=5);
        let alpha = UpperFormula::new(Dialect::LukNeg, random::lukneg_formula(&mut rng, &atoms, n)).unwrap();
        let gamma: Vec<UpperFormula> = (0..rng.gen_range(0..=2))
            .map(|_| UpperFormula::new(Dialect::LukNeg, random::lukneg_formula(&mut rng, &atoms, 2)).unwrap())
            .collect();
        let direct = lukneg_consequence(&gamma, &alpha, &cfg()).unwrap();
        let t = boxdot_translate(&gamma, &alpha);
        let translated = luk_consequence(&t.premises(), &t.alpha, &wide).unwrap();
        assert_eq!(direct.is_valid(), translated.is_valid(), "{}", alpha.expr().display(Dialect::LukNeg));
    }
}
