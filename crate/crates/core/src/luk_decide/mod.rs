//! Exact decision procedures for Łukasiewicz consequence over `[0,1]` and
//! for its extension with the bilattice negation over the product MV
//! algebra, plus an independent grid falsifier.
//!
//! Consequence is decided semantically: premises are asserted to take the
//! value 1 and the conclusion's value is minimised by branch and bound
//! over a mixed-integer encoding, every relaxation being solved by an exact
//! rational simplex. The conclusion follows iff the minimum is 1.

mod bnb;
mod boxdot;
mod encode;
mod grid;
mod simplex;
mod term;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

pub use bnb::{minimize, minimize_by_enumeration, BnbStats, MilpSolution};
pub use boxdot::{boxdot_translate, BoxdotTranslation};
pub use encode::{Constraint, Encoder, LinExpr, PlEncoding, VarInfo, VarKind};
pub use grid::{grid_falsify, grid_falsify_lukneg, DEFAULT_GRID_BUDGET};
pub use simplex::{solve, Lp, LpOutcome, Row, Sense};
pub use term::{Node, NodeId, TermDag};

use crate::algebras::{eval_upper, luk, AlgebraId, PairValue};
use crate::formulas::{neg_translate_of, nnf_of, Dialect, LiteralAtom, UpperExpr, UpperFormula};
use crate::rational::Rational;

pub const DEFAULT_ATOM_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("{atoms} atoms exceed the cap of {cap}")]
    AtomBudget { atoms: usize, cap: usize },
    #[error("connective `{0}` is outside the Łukasiewicz language")]
    Unsupported(&'static str),
    #[error("expected a lukneg formula, got {0}")]
    Dialect(Dialect),
    #[error("grid of {points} points exceeds the budget of {budget}")]
    GridBudget { points: u128, budget: u128 },
    #[error("grid denominator {0} out of range")]
    GridDenominator(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    /// Maximum number of distinct leaves (atoms, belief atoms, `!`-prefixed
    /// formulas) in one query.
    pub atom_cap: usize,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig { atom_cap: DEFAULT_ATOM_CAP }
    }
}

/// A `[0,1]`-valuation of leaves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPoint(pub BTreeMap<UpperExpr, Rational>);

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.0.iter().map(|(k, v)| format!("{} = {v}", k.display(Dialect::LukNeg))).collect();
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Countermodel {
    /// A point for plain Łukasiewicz consequence, with the conclusion's
    /// value there.
    Point { point: RationalPoint, value: Rational },
    /// A pair-valued assignment of atoms for `LukNeg` consequence, with the
    /// conclusion's value there.
    Pairs { assignment: BTreeMap<LiteralAtom, PairValue>, value: PairValue },
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Countermodel::Point { point, value } => write!(f, "{point} (conclusion = {value})"),
            Countermodel::Pairs { assignment, value } => {
                let parts: Vec<String> = assignment.iter().map(|(a, v)| format!("{a} = {v}")).collect();
                write!(f, "{} (conclusion = {value})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LukVerdict {
    Valid,
    Invalid(Countermodel),
}

impl LukVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, LukVerdict::Valid)
    }
}

impl fmt::Display for LukVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LukVerdict::Valid => f.write_str("VALID"),
            LukVerdict::Invalid(c) => write!(f, "INVALID: {c}"),
        }
    }
}

fn clamp01(v: Rational) -> Rational {
    if v < Rational::zero() {
        Rational::zero()
    } else if v > Rational::one() {
        Rational::one()
    } else {
        v
    }
}

/// Łukasiewicz value of `expr` at `point`, leaves read from the point.
pub fn luk_value(expr: &UpperExpr, point: &RationalPoint) -> Result<Rational, DecideError> {
    match expr {
        UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::BNeg(_) => {
            Ok(point.0.get(expr).cloned().unwrap_or_else(Rational::zero))
        }
        UpperExpr::StrongNeg(a) => Ok(luk::neg(&luk_value(a, point)?)),
        UpperExpr::Imp(a, b) => Ok(luk::imp(&luk_value(a, point)?, &luk_value(b, point)?)),
        other => Err(DecideError::Unsupported(other.connective_name())),
    }
}

/// The encoding of a single formula and the expression of its value.
pub fn encode(alpha: &UpperExpr) -> Result<(PlEncoding, LinExpr, TermDag), DecideError> {
    let mut dag = TermDag::default();
    let top = dag.intern(alpha)?;
    let mut enc = Encoder::new(&dag);
    let value = enc.value(top);
    let enc = enc.enc;
    Ok((enc, value, dag))
}

fn check_cap(dag: &TermDag, cfg: &DecideConfig) -> Result<(), DecideError> {
    let atoms = dag.leaves().len();
    if atoms > cfg.atom_cap {
        return Err(DecideError::AtomBudget { atoms, cap: cfg.atom_cap });
    }
    Ok(())
}

/// A query over a shared DAG: premises forced to 1 and to 0, and an
/// objective node whose value is minimised (or maximised).
struct Query<'a> {
    dag: &'a TermDag,
    ones: &'a [NodeId],
    zeros: &'a [NodeId],
}

impl Query<'_> {
    fn encoder(&self) -> Encoder<'_> {
        let mut enc = Encoder::new(self.dag);
        for &g in self.ones {
            enc.force(g, true);
        }
        for &g in self.zeros {
            enc.force(g, false);
        }
        enc
    }

    /// A point where `node` is below 1, minimising its value.
    fn below_one(&self, node: NodeId) -> Option<Vec<Rational>> {
        let mut enc = self.encoder();
        let obj = enc.objective(node);
        let (sol, _) = minimize(&enc.enc, &obj, Some(&Rational::one()));
        sol.map(|s| s.x)
    }

    /// A point where `node` is above 0, maximising its value.
    fn above_zero(&self, node: NodeId) -> Option<Vec<Rational>> {
        let mut enc = self.encoder();
        let obj = LinExpr::default().sub(&enc.objective(node));
        let (sol, _) = minimize(&enc.enc, &obj, Some(&Rational::zero()));
        sol.map(|s| s.x)
    }

    fn point(&self, x: &[Rational]) -> RationalPoint {
        RationalPoint(self.dag.leaves().iter().cloned().zip(x.iter().cloned()).collect())
    }
}

/// Decides whether every `[0,1]`-valuation sending all of `gamma` to 1
/// sends `alpha` to 1. `!`-prefixed subformulas are treated as atoms.
/// A countermodel minimises the conclusion's value.
pub fn luk_consequence(
    gamma: &[UpperExpr],
    alpha: &UpperExpr,
    cfg: &DecideConfig,
) -> Result<LukVerdict, DecideError> {
    let mut dag = TermDag::default();
    let ones = gamma.iter().map(|g| dag.intern(g)).collect::<Result<Vec<_>, _>>()?;
    let top = dag.intern(alpha)?;
    check_cap(&dag, cfg)?;
    let q = Query { dag: &dag, ones: &ones, zeros: &[] };
    Ok(match q.below_one(top) {
        None => LukVerdict::Valid,
        Some(x) => {
            let point = q.point(&x);
            let value = clamp01(dag.eval(top, &x[..dag.leaves().len()]));
            LukVerdict::Invalid(Countermodel::Point { point, value })
        }
    })
}

fn require_lukneg(f: &UpperFormula) -> Result<(), DecideError> {
    match f.dialect() {
        Dialect::LukNeg => Ok(()),
        d => Err(DecideError::Dialect(d)),
    }
}

/// Decides consequence over the product MV algebra with designated value
/// `(1,0)`.
///
/// Every formula is put into negation normal form, whose literals `a` and
/// `!a` become independent variables carrying the two components of `a`.
/// A formula's value is then `(e(nnf b), e(nnf !b))`, so premises force the
/// first to 1 and the second to 0, and the conclusion holds iff the minimum
/// of its first component is 1 and the maximum of its second is 0.
pub fn lukneg_consequence(
    gamma: &[UpperFormula],
    alpha: &UpperFormula,
    cfg: &DecideConfig,
) -> Result<LukVerdict, DecideError> {
    for f in gamma.iter().chain([alpha]) {
        require_lukneg(f)?;
    }
    let mut dag = TermDag::default();
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for g in gamma {
        ones.push(dag.intern(&nnf_of(g.expr()))?);
        zeros.push(dag.intern(&neg_translate_of(g.expr()))?);
    }
    let pos = dag.intern(&nnf_of(alpha.expr()))?;
    let neg = dag.intern(&neg_translate_of(alpha.expr()))?;
    check_cap(&dag, cfg)?;
    let q = Query { dag: &dag, ones: &ones, zeros: &zeros };
    let Some(x) = q.below_one(pos).or_else(|| q.above_zero(neg)) else {
        return Ok(LukVerdict::Valid);
    };

    let point = q.point(&x);
    let mut atoms = std::collections::BTreeSet::new();
    for f in gamma.iter().chain([alpha]) {
        atoms.extend(f.expr().atoms());
    }
    let literal = |e: UpperExpr| point.0.get(&e).cloned().unwrap_or_else(Rational::zero);
    let assignment: BTreeMap<LiteralAtom, PairValue> = atoms
        .into_iter()
        .map(|a| {
            let e = a.to_expr();
            let v = PairValue::new(literal(e.clone()), literal(UpperExpr::bneg(e))).expect("values in [0,1]");
            (a, v)
        })
        .collect();
    let value = eval_upper(AlgebraId::MvProd, alpha.expr(), &assignment).expect("every atom assigned");
    Ok(LukVerdict::Invalid(Countermodel::Pairs { assignment, value }))
}

/// LP-format text of the query minimising `alpha` under `gamma`.
pub fn lp_export(gamma: &[UpperExpr], alpha: &UpperExpr) -> Result<String, DecideError> {
    let mut dag = TermDag::default();
    let ones = gamma.iter().map(|g| dag.intern(g)).collect::<Result<Vec<_>, _>>()?;
    let top = dag.intern(alpha)?;
    let q = Query { dag: &dag, ones: &ones, zeros: &[] };
    let mut enc = q.encoder();
    let obj = enc.objective(top);
    Ok(enc.enc.to_lp_format(&obj))
}

#[cfg(test)]
mod tests;
