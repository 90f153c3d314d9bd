//! Seeded generators for formulas, models and sources, shared by the test
//! suites and the bounded searches.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebras::{FourValue, PairValue};
use crate::bd_core::BDModel;
use crate::formulas::{LowerFormula, UpperExpr};
use crate::rational::{rat, Rational};
use crate::sources::{MassFunction, Source};

/// Atom names `p`, `q`, `r`, `s`, `p4`, `p5`, ...
pub fn atom_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0..=3 => ["p", "q", "r", "s"][i].to_string(),
            _ => format!("p{i}"),
        })
        .collect()
}

/// A random event formula over `atoms` with at most `max_connectives`
/// connectives.
pub fn lower_formula<R: Rng>(rng: &mut R, atoms: &[String], max_connectives: usize) -> LowerFormula {
    let budget = rng.gen_range(0..=max_connectives);
    lower_with_budget(rng, atoms, budget)
}

fn lower_with_budget<R: Rng>(rng: &mut R, atoms: &[String], budget: usize) -> LowerFormula {
    if budget == 0 {
        return LowerFormula::atom(atoms.choose(rng).expect("at least one atom").clone());
    }
    match rng.gen_range(0..3) {
        0 => LowerFormula::neg(lower_with_budget(rng, atoms, budget - 1)),
        k => {
            let left = rng.gen_range(0..budget);
            let l = lower_with_budget(rng, atoms, left);
            let r = lower_with_budget(rng, atoms, budget - 1 - left);
            if k == 1 {
                LowerFormula::and(l, r)
            } else {
                LowerFormula::or(l, r)
            }
        }
    }
}

/// State ids `s1 .. sn`.
pub fn state_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

/// A model with `n_states` states and uniformly random atom values.
pub fn bd_model<R: Rng>(rng: &mut R, n_states: usize, atoms: &[String]) -> BDModel {
    let states = state_names(n_states);
    let mut m = BDModel::new(states.clone(), atoms.to_vec()).expect("generated names are valid");
    for s in &states {
        for a in atoms {
            let v = *FourValue::ALL.choose(rng).unwrap();
            m.set_value(s, a, v).unwrap();
        }
    }
    m
}

/// A rational in `[0,1]` with denominator at most `max_denominator`.
pub fn unit_rational<R: Rng>(rng: &mut R, max_denominator: i64) -> Rational {
    let d = rng.gen_range(1..=max_denominator);
    rat(rng.gen_range(0..=d), d)
}

pub fn pair_value<R: Rng>(rng: &mut R, max_denominator: i64) -> PairValue {
    PairValue::new(unit_rational(rng, max_denominator), unit_rational(rng, max_denominator)).unwrap()
}

/// A mass function drawing integer weights in `0..=granularity` per state
/// (at least one positive), normalised exactly.
pub fn mass_function<R: Rng>(rng: &mut R, states: &[String], granularity: i64) -> MassFunction {
    let mut weights: Vec<i64> = states.iter().map(|_| rng.gen_range(0..=granularity)).collect();
    if weights.iter().all(|w| *w == 0) {
        let i = rng.gen_range(0..weights.len());
        weights[i] = 1;
    }
    let total: i64 = weights.iter().sum();
    MassFunction::new(states.iter().cloned().zip(weights.into_iter().map(|w| rat(w, total))))
        .expect("normalised by construction")
}

/// `n` sources with random masses and weights in `1..=4`.
pub fn sources<R: Rng>(rng: &mut R, model: &BDModel, n: usize) -> Vec<Source> {
    (0..n)
        .map(|i| {
            let mass = mass_function(rng, model.states(), 4);
            let weight = rat(rng.gen_range(1..=4), 1);
            Source::new(format!("src{}", i + 1), weight, mass).expect("positive weight")
        })
        .collect()
}

/// A random Łukasiewicz formula (`~`, `->`) over plain atoms with exactly
/// `connectives` connectives.
pub fn luk_formula<R: Rng>(rng: &mut R, atoms: &[String], connectives: usize) -> UpperExpr {
    upper_with_budget(rng, &|rng: &mut R| UpperExpr::atom(atoms.choose(rng).unwrap().clone()), false, connectives)
}

/// A random `LukNeg` formula over belief atoms `B(a)` with exactly
/// `connectives` connectives among `~`, `!`, `->`.
pub fn lukneg_formula<R: Rng>(rng: &mut R, atoms: &[String], connectives: usize) -> UpperExpr {
    upper_with_budget(
        rng,
        &|rng: &mut R| UpperExpr::modal(LowerFormula::atom(atoms.choose(rng).unwrap().clone())),
        true,
        connectives,
    )
}

fn upper_with_budget<R: Rng>(
    rng: &mut R,
    leaf: &dyn Fn(&mut R) -> UpperExpr,
    with_bneg: bool,
    budget: usize,
) -> UpperExpr {
    if budget == 0 {
        return leaf(rng);
    }
    let kinds = if with_bneg { 3 } else { 2 };
    match rng.gen_range(0..kinds) {
        0 => UpperExpr::strong_neg(upper_with_budget(rng, leaf, with_bneg, budget - 1)),
        2 => UpperExpr::bneg(upper_with_budget(rng, leaf, with_bneg, budget - 1)),
        _ => {
            let left = rng.gen_range(0..budget);
            let l = upper_with_budget(rng, leaf, with_bneg, left);
            let r = upper_with_budget(rng, leaf, with_bneg, budget - 1 - left);
            UpperExpr::imp(l, r)
        }
    }
}
