use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebras::{pair_op, AlgebraId, Connective, FourValue};
use crate::bd_core::universe;
use crate::formulas::parse_lower;
use crate::rational::{int, rat};

fn f(text: &str) -> LowerFormula {
    parse_lower(text).unwrap()
}

fn pv(a: (i64, i64), b: (i64, i64)) -> PairValue {
    PairValue::from_ratios(a, b)
}

fn mass(entries: &[(&str, (i64, i64))]) -> MassFunction {
    MassFunction::new(entries.iter().map(|(s, (n, d))| (s.to_string(), rat(*n, *d)))).unwrap()
}

fn uni(forms: &[&str]) -> Universe {
    Universe::new(forms.iter().map(|t| f(t)).collect()).unwrap()
}

#[test]
fn mass_validation() {
    assert!(matches!(
        MassFunction::new([("s", rat(1, 2))]),
        Err(SourceError::MassSum(ref t)) if t == "1/2"
    ));
    assert!(matches!(
        MassFunction::new([("s", rat(-1, 2)), ("t", rat(3, 2))]),
        Err(SourceError::NegativeMass { .. })
    ));
    assert!(matches!(
        MassFunction::new([("s", rat(1, 2)), ("s", rat(1, 2))]),
        Err(SourceError::DuplicateState(_))
    ));
    let m = BDModel::new(["s"], ["p"]).unwrap();
    assert!(matches!(
        prob_pair(&m, &mass(&[("x", (1, 1))]), &f("p")),
        Err(SourceError::UnknownState(_))
    ));
    assert!(Source::new("a", int(0), mass(&[("s", (1, 1))])).is_err());
}

#[test]
fn prob_pair_examples() {
    let mut m = BDModel::new(["s1", "s2"], ["p"]).unwrap();
    m.support_pos("s1", "p").unwrap();
    m.support_neg("s2", "p").unwrap();
    let half = mass(&[("s1", (1, 2)), ("s2", (1, 2))]);
    assert_eq!(prob_pair(&m, &half, &f("p")).unwrap(), pv((1, 2), (1, 2)));

    let mut glut = BDModel::new(["s1", "s2"], ["p"]).unwrap();
    for s in ["s1", "s2"] {
        glut.set_value(s, "p", FourValue::B).unwrap();
    }
    assert_eq!(prob_pair(&glut, &half, &f("p")).unwrap(), pv((1, 1), (1, 1)));

    let empty = BDModel::new(["s1", "s2"], ["p"]).unwrap();
    assert_eq!(prob_pair(&empty, &half, &f("p")).unwrap(), PairValue::zero());
}

fn two_point_sources() -> Vec<Source> {
    vec![
        Source::new("a", int(1), mass(&[("s1", (1, 1))])).unwrap(),
        Source::new("b", int(1), mass(&[("s2", (1, 1))])).unwrap(),
    ]
}

#[test]
fn aggregation_examples() {
    let mut m = BDModel::new(["s1", "s2"], ["p"]).unwrap();
    m.support_pos("s1", "p").unwrap();
    let sources = two_point_sources();
    assert_eq!(aggregate(AggStrategy::Wa, &sources, &m, &f("p")).unwrap(), pv((1, 2), (0, 1)));
    assert_eq!(aggregate(AggStrategy::Min, &[], &m, &f("p")), Err(SourceError::NoSources));

    // Sources whose outputs on p are (3/5, 1/5) and (2/5, 1/2).
    let s1 = Source::new("one", int(1), mass(&[("a", (2, 5)), ("c", (1, 5)), ("b", (0, 1)), ("n", (2, 5))]))
        .unwrap();
    let s2 = Source::new("two", int(1), mass(&[("a", (0, 1)), ("b", (1, 10)), ("c", (2, 5)), ("n", (1, 2))]))
        .unwrap();
    let mut m = BDModel::new(["a", "b", "c", "n"], ["p"]).unwrap();
    m.set_value("a", "p", FourValue::T).unwrap();
    m.set_value("b", "p", FourValue::F).unwrap();
    m.set_value("c", "p", FourValue::B).unwrap();
    let srcs = [s1, s2];
    assert_eq!(prob_pair(&m, srcs[0].mass(), &f("p")).unwrap(), pv((3, 5), (1, 5)));
    assert_eq!(prob_pair(&m, srcs[1].mass(), &f("p")).unwrap(), pv((2, 5), (1, 2)));
    assert_eq!(aggregate(AggStrategy::Min, &srcs, &m, &f("p")).unwrap(), pv((2, 5), (1, 5)));
    assert_eq!(aggregate(AggStrategy::Max, &srcs, &m, &f("p")).unwrap(), pv((3, 5), (1, 2)));
}

#[test]
fn model_assignments_satisfy_the_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let atoms = crate::random::atom_names(2);
    let u = Universe::new(universe(&atoms, 1, true)).unwrap();
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let m = crate::random::bd_model(&mut rng, n, &atoms);
        let mass = crate::random::mass_function(&mut rng, m.states(), 5);
        let report = check_axioms(&ModelAssignment { model: &m, mass: &mass }, &u).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.items.len(), 4);
    }
}

#[test]
fn constructed_violations_are_listed() {
    let mut t = ProbTable::default();
    let (p, q) = (f("p"), f("q"));
    t.insert(p.clone(), rat(1, 2), int(0));
    t.insert(q.clone(), rat(1, 2), int(0));
    t.insert(f("p & q"), int(0), int(0));
    t.insert(f("p | q"), rat(1, 2), int(0));
    let report = check_axioms(&t, &uni(&["p", "q"])).unwrap();
    let a3 = report.item("A3").unwrap();
    assert_eq!(a3.violations.len(), 1);
    assert!(a3.violations[0].contains("phi = p, psi = q"));

    let mut t = ProbTable::default();
    t.insert(p.clone(), rat(1, 4), int(0));
    t.insert(f("p & q"), rat(1, 2), int(0));
    let report = check_axioms(&t, &uni(&["p & q", "p"])).unwrap();
    assert_eq!(report.item("A2").unwrap().violations.len(), 1);
    assert!(report.item("A1").unwrap().passed());

    let mut t = ProbTable::default();
    t.insert(p, rat(3, 2), int(0));
    let report = check_axioms(&t, &uni(&["p"])).unwrap();
    assert!(!report.item("A1").unwrap().passed());
}

#[test]
fn min_and_max_are_knowledge_meet_and_join() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let atoms = crate::random::atom_names(3);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let m = crate::random::bd_model(&mut rng, n, &atoms);
        let k = rng.gen_range(1..=4);
        let sources = crate::random::sources(&mut rng, &m, k);
        let phi = crate::random::lower_formula(&mut rng, &atoms, 4);
        let pairs: Vec<PairValue> = sources.iter().map(|s| prob_pair(&m, s.mass(), &phi).unwrap()).collect();
        for (strategy, op) in [(AggStrategy::Min, Connective::MeetK), (AggStrategy::Max, Connective::JoinK)] {
            let folded = pairs[1..].iter().fold(pairs[0].clone(), |acc, p| {
                pair_op(AlgebraId::KleeneBilat, op, &[acc, p.clone()]).unwrap()
            });
            assert_eq!(aggregate(strategy, &sources, &m, &phi).unwrap(), folded);
        }
        for strategy in [AggStrategy::Wa, AggStrategy::Min, AggStrategy::Max] {
            assert_eq!(aggregate(strategy, &sources[..1], &m, &phi).unwrap(), pairs[0]);
        }
        let c = rat(rng.gen_range(1..=7), rng.gen_range(1..=7));
        let scaled: Vec<Source> = sources.iter().map(|s| s.with_weight(s.weight() * &c).unwrap()).collect();
        assert_eq!(
            aggregate(AggStrategy::Wa, &scaled, &m, &phi).unwrap(),
            aggregate(AggStrategy::Wa, &sources, &m, &phi).unwrap()
        );
    }
}

#[test]
fn strategy_property_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let atoms = crate::random::atom_names(2);
    let u = Universe::new(universe(&atoms, 1, true)).unwrap();
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let m = crate::random::bd_model(&mut rng, n, &atoms);
        let sources = crate::random::sources(&mut rng, &m, 3);
        let wa = strategy_properties(AggStrategy::Wa, &sources, &m, &u).unwrap();
        assert!(wa.monotone && wa.neg_compatible && wa.preserves_probability, "{:?}", wa.witnesses);
        for s in [AggStrategy::Min, AggStrategy::Max] {
            let r = strategy_properties(s, &sources, &m, &u).unwrap();
            assert!(r.monotone && r.neg_compatible);
            let single = strategy_properties(s, &sources[..1], &m, &u).unwrap();
            assert!(single.preserves_probability);
        }
    }
}

#[test]
fn min_breaks_import_export_on_two_point_sources() {
    let mut m = BDModel::new(["s1", "s2"], ["p", "q"]).unwrap();
    m.support_pos("s1", "p").unwrap();
    m.support_pos("s2", "q").unwrap();
    let sources = two_point_sources();
    let (p, q) = (f("p"), f("q"));
    assert!(!a3_holds(AggStrategy::Min, &sources, &m, &p, &q).unwrap());
    assert!(a3_holds(AggStrategy::Wa, &sources, &m, &p, &q).unwrap());
    let r = strategy_properties(AggStrategy::Min, &sources, &m, &uni(&["p", "q"])).unwrap();
    assert!(r.monotone && r.neg_compatible && !r.preserves_probability);
}

#[test]
fn search_finds_min_violation() {
    let w = search_a3_violation(AggStrategy::Min, 2024, 500).expect("witness within budget");
    assert!(!a3_holds(AggStrategy::Min, &w.sources, &w.model, &w.phi, &w.psi).unwrap());
    assert!(a3_holds(AggStrategy::Wa, &w.sources, &w.model, &w.phi, &w.psi).unwrap());
    assert!(search_a3_violation(AggStrategy::Wa, 2024, 200).is_none());
}

#[test]
fn frozen_min_violation() {
    let mut m = BDModel::new(["s1", "s2"], ["p", "q"]).unwrap();
    m.set_value("s1", "p", FourValue::T).unwrap();
    m.set_value("s1", "q", FourValue::B).unwrap();
    m.set_value("s2", "p", FourValue::F).unwrap();
    m.set_value("s2", "q", FourValue::F).unwrap();
    let sources = vec![
        Source::new("src1", int(2), mass(&[("s1", (3, 5)), ("s2", (2, 5))])).unwrap(),
        Source::new("src2", int(2), mass(&[("s1", (0, 1)), ("s2", (1, 1))])).unwrap(),
    ];
    assert!(!a3_holds(AggStrategy::Min, &sources, &m, &f("!p"), &f("p | q")).unwrap());
    assert!(a3_holds(AggStrategy::Wa, &sources, &m, &f("!p"), &f("p | q")).unwrap());
}
