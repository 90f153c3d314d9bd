//! Two-layer belief models: a BD model of events, a family of sources, an
//! aggregation strategy and an upper algebra in which belief formulas are
//! evaluated.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::algebras::{designated_pair, eval_upper, AlgebraId, EvalError, PairValue};
use crate::bd_core::{entails_bd, BDModel, BdError, Universe, Verdict};
use crate::formulas::{Dialect, LiteralAtom, LowerFormula, UpperExpr, UpperFormula};
use crate::rational::Rational;
use crate::report::{CheckItem, CheckReport};
use crate::sources::{aggregate, AggStrategy, Source, SourceError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwoLayerError {
    #[error("a model needs at least one source")]
    NoSources,
    #[error("upper algebra {0} cannot interpret belief formulas")]
    UnsupportedAlgebra(AlgebraId),
    #[error("{dialect} formulas are not evaluated in {algebra}")]
    DialectMismatch { dialect: Dialect, algebra: AlgebraId },
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The dialect whose formulas an upper algebra interprets.
pub fn dialect_for(algebra: AlgebraId) -> Option<Dialect> {
    match algebra {
        AlgebraId::MvProd => Some(Dialect::LukNeg),
        AlgebraId::ResBilat => Some(Dialect::Bilat),
        AlgebraId::KleeneBilat => Some(Dialect::Bd),
        AlgebraId::Four => None,
    }
}

pub struct TwoLayerModel {
    base: BDModel,
    sources: Vec<Source>,
    strategy: AggStrategy,
    upper: AlgebraId,
    memo: RwLock<HashMap<LowerFormula, PairValue>>,
}

impl fmt::Debug for TwoLayerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoLayerModel")
            .field("base", &self.base)
            .field("sources", &self.sources)
            .field("strategy", &self.strategy)
            .field("upper", &self.upper)
            .finish()
    }
}

impl TwoLayerModel {
    pub fn new(
        base: BDModel,
        sources: Vec<Source>,
        strategy: AggStrategy,
        upper: AlgebraId,
    ) -> Result<Self, TwoLayerError> {
        if sources.is_empty() {
            return Err(TwoLayerError::NoSources);
        }
        if dialect_for(upper).is_none() {
            return Err(TwoLayerError::UnsupportedAlgebra(upper));
        }
        for s in &sources {
            s.mass().check_model(&base)?;
        }
        Ok(TwoLayerModel { base, sources, strategy, upper, memo: RwLock::new(HashMap::new()) })
    }

    pub fn base(&self) -> &BDModel {
        &self.base
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn strategy(&self) -> AggStrategy {
        self.strategy
    }

    pub fn upper(&self) -> AlgebraId {
        self.upper
    }

    /// `||B phi||`, the aggregated probability pair of `phi`.
    pub fn modal_value(&self, phi: &LowerFormula) -> Result<PairValue, TwoLayerError> {
        if let Some(v) = self.memo.read().expect("memo lock").get(phi) {
            return Ok(v.clone());
        }
        let v = aggregate(self.strategy, &self.sources, &self.base, phi)?;
        self.memo.write().expect("memo lock").insert(phi.clone(), v.clone());
        Ok(v)
    }

    /// Snapshot of the memoised belief values.
    pub fn modal_table(&self) -> BTreeMap<LowerFormula, PairValue> {
        self.memo.read().expect("memo lock").iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    /// Evaluates `expr` in `algebra` regardless of the model's own upper
    /// algebra. Plain upper atoms have no value in a model.
    pub fn eval_in(&self, algebra: AlgebraId, expr: &UpperExpr) -> Result<PairValue, TwoLayerError> {
        let mut env = BTreeMap::new();
        for atom in expr.atoms() {
            if let LiteralAtom::Modal(phi) = &atom {
                let v = self.modal_value(phi)?;
                env.insert(atom, v);
            }
        }
        Ok(eval_upper(algebra, expr, &env)?)
    }

    pub fn eval_upper_in_model(&self, alpha: &UpperFormula) -> Result<PairValue, TwoLayerError> {
        self.check_dialect(alpha.dialect())?;
        self.eval_in(self.upper, alpha.expr())
    }

    pub fn valid_in_model(&self, alpha: &UpperFormula) -> Result<bool, TwoLayerError> {
        Ok(designated_pair(self.upper, &self.eval_upper_in_model(alpha)?))
    }

    fn check_dialect(&self, dialect: Dialect) -> Result<(), TwoLayerError> {
        if dialect_for(self.upper) == Some(dialect) {
            Ok(())
        } else {
            Err(TwoLayerError::DialectMismatch { dialect, algebra: self.upper })
        }
    }
}

/// Which modal axiom set to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomSet {
    /// Additivity, negation commutation and the monotonicity rule, read in a
    /// Łukasiewicz upper algebra.
    Additive,
    /// Negation interderivability and the monotonicity rule, read in the
    /// Kleene bilattice.
    Monotone,
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomSet::Additive => "additive",
            AxiomSet::Monotone => "monotone",
        })
    }
}

struct Builders {
    algebra: AlgebraId,
    dialect: Dialect,
    equiv: fn(UpperExpr, UpperExpr) -> UpperExpr,
    imp: fn(UpperExpr, UpperExpr) -> UpperExpr,
    oplus: fn(UpperExpr, UpperExpr) -> UpperExpr,
    ominus: fn(UpperExpr, UpperExpr) -> UpperExpr,
}

fn additive_builders(upper: AlgebraId) -> Builders {
    if upper == AlgebraId::ResBilat {
        Builders {
            algebra: AlgebraId::ResBilat,
            dialect: Dialect::Bilat,
            equiv: UpperExpr::bilat_equiv,
            imp: UpperExpr::bilat_imp,
            oplus: UpperExpr::bilat_oplus,
            ominus: UpperExpr::bilat_ominus,
        }
    } else {
        Builders {
            algebra: AlgebraId::MvProd,
            dialect: Dialect::LukNeg,
            equiv: UpperExpr::luk_equiv,
            imp: UpperExpr::imp,
            oplus: UpperExpr::luk_oplus,
            ominus: UpperExpr::luk_ominus,
        }
    }
}

fn b(phi: &LowerFormula) -> UpperExpr {
    UpperExpr::modal(phi.clone())
}

/// Checks a modal axiom set on every instance drawn from `universe`.
///
/// The additive set is evaluated in the model's upper algebra when that is
/// the residuated bilattice and in the product MV algebra otherwise; the
/// numeric identities behind the additivity axiom are checked directly on
/// the aggregated values as well. The monotone set is evaluated in the
/// Kleene bilattice.
pub fn check_modal_axioms(
    m: &TwoLayerModel,
    universe: &Universe,
    axioms: AxiomSet,
) -> Result<CheckReport, TwoLayerError> {
    match axioms {
        AxiomSet::Additive => check_additive(m, universe),
        AxiomSet::Monotone => check_monotone(m, universe),
    }
}

fn check_additive(m: &TwoLayerModel, universe: &Universe) -> Result<CheckReport, TwoLayerError> {
    let k = additive_builders(m.upper());
    let forms = universe.formulas();
    let valid = |e: &UpperExpr| -> Result<bool, TwoLayerError> {
        Ok(designated_pair(k.algebra, &m.eval_in(k.algebra, e)?))
    };

    let mut additivity = CheckItem::new("additivity");
    let mut exact = CheckItem::new("additivity-exact");
    let mut pos_sum = CheckItem::new("numeric-additivity-pos");
    let mut neg_sum = CheckItem::new("numeric-additivity-neg");
    for phi in forms {
        for psi in forms {
            let conj = LowerFormula::and(phi.clone(), psi.clone());
            let disj = LowerFormula::or(phi.clone(), psi.clone());
            let lhs = b(&disj);
            let rhs = (k.oplus)((k.ominus)(b(phi), b(&conj)), b(psi));
            let axiom = (k.equiv)(lhs.clone(), rhs.clone());
            additivity.record(valid(&axiom)?, || {
                format!("phi = {phi}, psi = {psi}: {} not designated", axiom.display(k.dialect))
            });
            let (l, r) = (m.eval_in(k.algebra, &lhs)?, m.eval_in(k.algebra, &rhs)?);
            exact.record(l == r, || format!("phi = {phi}, psi = {psi}: {l} vs {r}"));

            let (a, c, d, e) = (m.modal_value(phi)?, m.modal_value(psi)?, m.modal_value(&conj)?, m.modal_value(&disj)?);
            let pos: Rational = a.pos() - d.pos() + c.pos();
            pos_sum.record(e.pos() == &pos, || {
                format!("phi = {phi}, psi = {psi}: p+(phi | psi) = {} but p+(phi) - p+(phi & psi) + p+(psi) = {pos}", e.pos())
            });
            let neg: Rational = a.neg() - d.neg() + c.neg();
            neg_sum.record(e.neg() == &neg, || {
                format!("phi = {phi}, psi = {psi}: p-(phi | psi) = {} but p-(phi) - p-(phi & psi) + p-(psi) = {neg}", e.neg())
            });
        }
    }

    let mut commute = CheckItem::new("neg-commutes");
    let mut duality = CheckItem::new("numeric-neg-duality");
    for phi in forms {
        let nphi = LowerFormula::neg(phi.clone());
        let axiom = (k.equiv)(b(&nphi), UpperExpr::bneg(b(phi)));
        commute.record(valid(&axiom)?, || format!("phi = {phi}: {} not designated", axiom.display(k.dialect)));
        let (v, n) = (m.modal_value(phi)?, m.modal_value(&nphi)?);
        duality.record(n == v.swap(), || format!("phi = {phi}: B!phi = {n} but !Bphi = {}", v.swap()));
    }

    let mut rule = CheckItem::new("monotonicity-rule");
    for &(i, j) in universe.entailments() {
        let inst = (k.imp)(b(&forms[i]), b(&forms[j]));
        rule.record(valid(&inst)?, || {
            format!("{} entails {} but {} not designated", forms[i], forms[j], inst.display(k.dialect))
        });
    }

    Ok(CheckReport { items: vec![additivity, exact, pos_sum, neg_sum, commute, duality, rule] })
}

fn check_monotone(m: &TwoLayerModel, universe: &Universe) -> Result<CheckReport, TwoLayerError> {
    let forms = universe.formulas();

    let mut commute = CheckItem::new("neg-interderivable");
    for phi in forms {
        let n = m.modal_value(&LowerFormula::neg(phi.clone()))?;
        let v = m.eval_in(AlgebraId::KleeneBilat, &UpperExpr::bneg(b(phi)))?;
        commute.record(n == v, || format!("phi = {phi}: B!phi = {n} but !Bphi = {v}"));
    }

    let mut rule = CheckItem::new("monotonicity-rule");
    for &(i, j) in universe.entailments() {
        let (a, c) = (m.modal_value(&forms[i])?, m.modal_value(&forms[j])?);
        rule.record(a.leq_t(&c), || format!("{} entails {} but B values {a} and {c}", forms[i], forms[j]));
    }

    Ok(CheckReport { items: vec![commute, rule] })
}

/// Consequence between event formulas inside the two-layer logic. Belief
/// premises never contribute to a lower-layer conclusion, so this is
/// consequence in BD.
pub fn lower_consequence(gamma: &[LowerFormula], phi: &LowerFormula) -> Result<Verdict, BdError> {
    entails_bd(gamma, phi)
}
