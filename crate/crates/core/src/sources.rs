//! Mass functions over BD states, the non-standard probabilities they
//! induce, and aggregation of several sources.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebras::{AlgebraError, PairValue};
use crate::bd_core::{BDModel, BdError, Universe};
use crate::formulas::LowerFormula;
use crate::random;
use crate::rational::{self, format_rational, Rational};
use crate::report::{CheckItem, CheckReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SourceError {
    #[error("negative mass {mass} on state `{state}`")]
    NegativeMass { state: String, mass: String },
    #[error("masses sum to {0}, not 1")]
    MassSum(String),
    #[error("mass assigned twice to state `{0}`")]
    DuplicateState(String),
    #[error("mass assigned to unknown state `{0}`")]
    UnknownState(String),
    #[error("source weight {0} is not positive")]
    NonPositiveWeight(String),
    #[error("aggregation needs at least one source")]
    NoSources,
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Non-negative masses on states summing to exactly one. States without an
/// entry carry mass zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassFunction {
    masses: BTreeMap<String, Rational>,
}

impl MassFunction {
    pub fn new<I, S>(entries: I) -> Result<Self, SourceError>
    where
        I: IntoIterator<Item = (S, Rational)>,
        S: Into<String>,
    {
        let mut masses = BTreeMap::new();
        let mut total = Rational::zero();
        for (state, mass) in entries {
            let state = state.into();
            if mass < Rational::zero() {
                return Err(SourceError::NegativeMass { state, mass: format_rational(&mass) });
            }
            total += &mass;
            if masses.insert(state.clone(), mass).is_some() {
                return Err(SourceError::DuplicateState(state));
            }
        }
        if !total.is_one() {
            return Err(SourceError::MassSum(format_rational(&total)));
        }
        Ok(MassFunction { masses })
    }

    pub fn mass(&self, state: &str) -> Rational {
        self.masses.get(state).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.masses.iter().map(|(s, m)| (s.as_str(), m))
    }

    /// Rejects masses on states the model does not have.
    pub fn check_model(&self, m: &BDModel) -> Result<(), SourceError> {
        for state in self.masses.keys() {
            m.state_index(state).map_err(|_| SourceError::UnknownState(state.clone()))?;
        }
        Ok(())
    }
}

/// A source: a mass function with a reliability weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Source {
    label: String,
    weight: Rational,
    mass: MassFunction,
}

impl Source {
    pub fn new(label: impl Into<String>, weight: Rational, mass: MassFunction) -> Result<Self, SourceError> {
        if weight <= Rational::zero() {
            return Err(SourceError::NonPositiveWeight(format_rational(&weight)));
        }
        Ok(Source { label: label.into(), weight, mass })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn mass(&self) -> &MassFunction {
        &self.mass
    }

    pub fn with_weight(&self, weight: Rational) -> Result<Self, SourceError> {
        Source::new(self.label.clone(), weight, self.mass.clone())
    }
}

/// `(p⁺(phi), p⁻(phi))`: the masses of the positive and negative extensions.
pub fn prob_pair(m: &BDModel, mass: &MassFunction, phi: &LowerFormula) -> Result<PairValue, SourceError> {
    mass.check_model(m)?;
    let values = m.eval_all(phi)?;
    let mut pos = Rational::zero();
    let mut neg = Rational::zero();
    for (state, v) in m.states().iter().zip(values) {
        let (p, n) = v.bits();
        if p || n {
            let w = mass.mass(state);
            if p {
                pos += &w;
            }
            if n {
                neg += &w;
            }
        }
    }
    Ok(PairValue::new(pos, neg)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggStrategy {
    /// Weighted average.
    Wa,
    /// Componentwise minimum (knowledge meet).
    Min,
    /// Componentwise maximum (knowledge join).
    Max,
}

impl fmt::Display for AggStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggStrategy::Wa => "wa",
            AggStrategy::Min => "min",
            AggStrategy::Max => "max",
        })
    }
}

impl FromStr for AggStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wa" => Ok(AggStrategy::Wa),
            "min" => Ok(AggStrategy::Min),
            "max" => Ok(AggStrategy::Max),
            other => Err(format!("unknown strategy `{other}` (expected wa, min or max)")),
        }
    }
}

/// Aggregates the sources' probabilities of `phi`.
pub fn aggregate(
    strategy: AggStrategy,
    sources: &[Source],
    m: &BDModel,
    phi: &LowerFormula,
) -> Result<PairValue, SourceError> {
    if sources.is_empty() {
        return Err(SourceError::NoSources);
    }
    let pairs = sources
        .iter()
        .map(|s| prob_pair(m, &s.mass, phi))
        .collect::<Result<Vec<_>, _>>()?;
    match strategy {
        AggStrategy::Wa => {
            let mut pos = Rational::zero();
            let mut neg = Rational::zero();
            let mut total = Rational::zero();
            for (s, p) in sources.iter().zip(&pairs) {
                pos += &s.weight * p.pos();
                neg += &s.weight * p.neg();
                total += &s.weight;
            }
            Ok(PairValue::new(pos / &total, neg / &total)?)
        }
        AggStrategy::Min | AggStrategy::Max => {
            let pick = if strategy == AggStrategy::Min { rational::min } else { rational::max };
            let mut pos = pairs[0].pos().clone();
            let mut neg = pairs[0].neg().clone();
            for p in &pairs[1..] {
                pos = pick(&pos, p.pos());
                neg = pick(&neg, p.neg());
            }
            Ok(PairValue::new(pos, neg)?)
        }
    }
}

/// Something that assigns positive and negative probabilities to event
/// formulas. `Ok(None)` means the assignment has no entry for the formula.
pub trait ProbAssignment {
    fn prob(&self, phi: &LowerFormula) -> Result<Option<(Rational, Rational)>, SourceError>;
}

/// The assignment induced by one mass function on a model.
pub struct ModelAssignment<'a> {
    pub model: &'a BDModel,
    pub mass: &'a MassFunction,
}

impl ProbAssignment for ModelAssignment<'_> {
    fn prob(&self, phi: &LowerFormula) -> Result<Option<(Rational, Rational)>, SourceError> {
        let p = prob_pair(self.model, self.mass, phi)?;
        Ok(Some((p.pos().clone(), p.neg().clone())))
    }
}

/// The assignment obtained by aggregating several sources.
pub struct AggregatedAssignment<'a> {
    pub strategy: AggStrategy,
    pub sources: &'a [Source],
    pub model: &'a BDModel,
}

impl ProbAssignment for AggregatedAssignment<'_> {
    fn prob(&self, phi: &LowerFormula) -> Result<Option<(Rational, Rational)>, SourceError> {
        let p = aggregate(self.strategy, self.sources, self.model, phi)?;
        Ok(Some((p.pos().clone(), p.neg().clone())))
    }
}

/// An explicitly tabulated assignment; components need not lie in `[0,1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbTable(pub BTreeMap<LowerFormula, (Rational, Rational)>);

impl ProbTable {
    pub fn insert(&mut self, phi: LowerFormula, pos: Rational, neg: Rational) {
        self.0.insert(phi, (pos, neg));
    }
}

impl ProbAssignment for ProbTable {
    fn prob(&self, phi: &LowerFormula) -> Result<Option<(Rational, Rational)>, SourceError> {
        Ok(self.0.get(phi).cloned())
    }
}

fn show(p: &(Rational, Rational)) -> String {
    format!("({}, {})", p.0, p.1)
}

/// Checks normalisation (A1), monotonicity (A2), import-export (A3) and
/// negation duality on the formulas of `universe`. Instances that need a
/// value the assignment does not provide are skipped.
pub fn check_axioms(pa: &dyn ProbAssignment, universe: &Universe) -> Result<CheckReport, SourceError> {
    let forms = universe.formulas();
    let values = forms.iter().map(|f| pa.prob(f)).collect::<Result<Vec<_>, _>>()?;

    let mut a1 = CheckItem::new("A1");
    for (f, v) in forms.iter().zip(&values) {
        if let Some(v) = v {
            let ok = rational::in_unit_interval(&v.0) && rational::in_unit_interval(&v.1);
            a1.record(ok, || format!("p({f}) = {} leaves [0,1]", show(v)));
        }
    }

    let mut a2 = CheckItem::new("A2");
    for &(i, j) in universe.entailments() {
        if let (Some(a), Some(b)) = (&values[i], &values[j]) {
            let ok = a.0 <= b.0 && b.1 <= a.1;
            a2.record(ok, || {
                format!("{} entails {} but p = {} vs {}", forms[i], forms[j], show(a), show(b))
            });
        }
    }

    let mut a3 = CheckItem::new("A3");
    for i in 0..forms.len() {
        for j in i..forms.len() {
            let (phi, psi) = (&forms[i], &forms[j]);
            let (Some(a), Some(b)) = (&values[i], &values[j]) else { continue };
            let conj = LowerFormula::and(phi.clone(), psi.clone());
            let disj = LowerFormula::or(phi.clone(), psi.clone());
            let (Some(c), Some(d)) = (pa.prob(&conj)?, pa.prob(&disj)?) else { continue };
            let lhs = (&c.0 + &d.0, &c.1 + &d.1);
            let rhs = (&a.0 + &b.0, &a.1 + &b.1);
            a3.record(lhs == rhs, || {
                format!(
                    "phi = {phi}, psi = {psi}: p(phi & psi) + p(phi | psi) = {} but p(phi) + p(psi) = {}",
                    show(&lhs),
                    show(&rhs)
                )
            });
        }
    }

    let mut dual = CheckItem::new("neg-duality");
    for (f, v) in forms.iter().zip(&values) {
        let Some(v) = v else { continue };
        let Some(n) = pa.prob(&LowerFormula::neg(f.clone()))? else { continue };
        dual.record(v.1 == n.0, || format!("p-({f}) = {} but p+(!{f}) = {}", v.1, n.0));
    }

    Ok(CheckReport { items: vec![a1, a2, a3, dual] })
}

/// Verdicts on the three properties an aggregation strategy may have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyReport {
    pub monotone: bool,
    pub neg_compatible: bool,
    pub preserves_probability: bool,
    pub witnesses: Vec<String>,
    pub axioms: CheckReport,
}

pub fn strategy_properties(
    strategy: AggStrategy,
    sources: &[Source],
    m: &BDModel,
    universe: &Universe,
) -> Result<StrategyReport, SourceError> {
    let forms = universe.formulas();
    let agg = forms
        .iter()
        .map(|f| aggregate(strategy, sources, m, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut witnesses = Vec::new();

    let mut monotone = true;
    for &(i, j) in universe.entailments() {
        if !agg[i].leq_t(&agg[j]) {
            monotone = false;
            witnesses.push(format!(
                "monotone: {} entails {} but {} is not below {}",
                forms[i], forms[j], agg[i], agg[j]
            ));
        }
    }

    let mut neg_compatible = true;
    for (f, v) in forms.iter().zip(&agg) {
        let n = aggregate(strategy, sources, m, &LowerFormula::neg(f.clone()))?;
        if v.neg() != n.pos() {
            neg_compatible = false;
            witnesses.push(format!("neg-compatible: Agg({f})- = {} but Agg(!{f})+ = {}", v.neg(), n.pos()));
        }
    }

    let axioms = check_axioms(&AggregatedAssignment { strategy, sources, model: m }, universe)?;
    let preserves_probability = axioms.passed();
    for item in &axioms.items {
        witnesses.extend(item.violations.iter().map(|v| format!("{}: {v}", item.name)));
    }
    Ok(StrategyReport { monotone, neg_compatible, preserves_probability, witnesses, axioms })
}

/// A multi-source instance on which an aggregation strategy breaks A3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A3Witness {
    pub model: BDModel,
    pub sources: Vec<Source>,
    pub phi: LowerFormula,
    pub psi: LowerFormula,
}

impl fmt::Display for A3Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phi = {}, psi = {}", self.phi, self.psi)?;
        for state in self.model.states() {
            let values: Vec<String> = self
                .model
                .atoms()
                .map(|a| format!("{a}={}", self.model.atom_value(state, a).expect("own state")))
                .collect();
            writeln!(f, "state {state}: {}", values.join(" "))?;
        }
        for s in &self.sources {
            let masses: Vec<String> = s.mass.iter().map(|(st, m)| format!("{st}:{m}")).collect();
            writeln!(f, "source {} weight {}: {}", s.label, s.weight, masses.join(" "))?;
        }
        Ok(())
    }
}

/// Whether `strategy` satisfies A3 on the single pair `(phi, psi)`.
pub fn a3_holds(
    strategy: AggStrategy,
    sources: &[Source],
    m: &BDModel,
    phi: &LowerFormula,
    psi: &LowerFormula,
) -> Result<bool, SourceError> {
    let p = |f: &LowerFormula| aggregate(strategy, sources, m, f);
    let (a, b) = (p(phi)?, p(psi)?);
    let c = p(&LowerFormula::and(phi.clone(), psi.clone()))?;
    let d = p(&LowerFormula::or(phi.clone(), psi.clone()))?;
    Ok(c.pos() + d.pos() == a.pos() + b.pos() && c.neg() + d.neg() == a.neg() + b.neg())
}

/// Seeded random search over small instances (at most 3 states, 2 sources
/// and 2 atoms) for an A3 failure of `strategy`.
pub fn search_a3_violation(strategy: AggStrategy, seed: u64, tries: usize) -> Option<A3Witness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = random::atom_names(2);
    for _ in 0..tries {
        let n_states = rng.gen_range(1..=3);
        let model = random::bd_model(&mut rng, n_states, &atoms);
        let sources = random::sources(&mut rng, &model, 2);
        let phi = random::lower_formula(&mut rng, &atoms, 1);
        let psi = random::lower_formula(&mut rng, &atoms, 1);
        if !a3_holds(strategy, &sources, &model, &phi, &psi).expect("generated instance is well formed") {
            return Some(A3Witness { model, sources, phi, psi });
        }
    }
    None
}

#[cfg(test)]
mod tests;
