//! Truth-value algebras: the Belnap-Dunn square and three algebras on
//! pairs of rationals in `[0,1]`.
//!
//! * [`AlgebraId::Four`]: the four-element bilattice `2 ⊙ 2` over `{t,f,b,n}`.
//! * [`AlgebraId::MvProd`]: the product MV algebra `[0,1]_Ł × [0,1]^op_Ł`,
//!   designated value `(1,0)` only.
//! * [`AlgebraId::ResBilat`]: the product residuated bilattice
//!   `[0,1]_Ł ⊙ [0,1]_Ł`, designated values `(1,a)`.
//! * [`AlgebraId::KleeneBilat`]: the product bilattice over `([0,1], min, max)`,
//!   designated values `(1,a)`.
//!
//! A pair `(a1, a2)` reads as positive support `a1` and negative support `a2`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::formulas::{LiteralAtom, UpperExpr};
use crate::rational::{self, format_rational, in_unit_interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("operation {op:?} expects {expected} argument(s), got {got}")]
    Arity { op: &'static str, expected: usize, got: usize },
    #[error("operation {op} is not in the signature of {algebra}")]
    NotInSignature { op: Connective, algebra: AlgebraId },
    #[error("pair component {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("value does not belong to the carrier of {0}")]
    WrongCarrier(AlgebraId),
}

// ---------------------------------------------------------------------------
// Belnap-Dunn square
// ---------------------------------------------------------------------------

/// An element of the Belnap-Dunn square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FourValue {
    T,
    F,
    B,
    N,
}

impl FourValue {
    /// Enumeration order used for countermodel search.
    pub const ALL: [FourValue; 4] = [FourValue::T, FourValue::F, FourValue::B, FourValue::N];

    /// `(told true, told false)` bits; this is the `2 ⊙ 2` representation.
    pub fn bits(self) -> (bool, bool) {
        match self {
            FourValue::T => (true, false),
            FourValue::F => (false, true),
            FourValue::B => (true, true),
            FourValue::N => (false, false),
        }
    }

    pub fn from_bits(pos: bool, neg: bool) -> Self {
        match (pos, neg) {
            (true, false) => FourValue::T,
            (false, true) => FourValue::F,
            (true, true) => FourValue::B,
            (false, false) => FourValue::N,
        }
    }

    pub fn meet_t(self, other: Self) -> Self {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        Self::from_bits(a1 && b1, a2 || b2)
    }

    pub fn join_t(self, other: Self) -> Self {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        Self::from_bits(a1 || b1, a2 && b2)
    }

    pub fn meet_k(self, other: Self) -> Self {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        Self::from_bits(a1 && b1, a2 && b2)
    }

    pub fn join_k(self, other: Self) -> Self {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        Self::from_bits(a1 || b1, a2 || b2)
    }

    /// Bilattice negation: swaps the two kinds of support.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        let (a1, a2) = self.bits();
        Self::from_bits(a2, a1)
    }

    pub fn leq_t(self, other: Self) -> bool {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        (!a1 || b1) && (!b2 || a2)
    }

    pub fn leq_k(self, other: Self) -> bool {
        let ((a1, a2), (b1, b2)) = (self.bits(), other.bits());
        (!a1 || b1) && (!a2 || b2)
    }

    /// Designated values `{t, b}`.
    pub fn is_designated(self) -> bool {
        self.bits().0
    }
}

impl fmt::Display for FourValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FourValue::T => "t",
            FourValue::F => "f",
            FourValue::B => "b",
            FourValue::N => "n",
        })
    }
}

impl FromStr for FourValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "t" | "T" => Ok(FourValue::T),
            "f" | "F" => Ok(FourValue::F),
            "b" | "B" => Ok(FourValue::B),
            "n" | "N" => Ok(FourValue::N),
            other => Err(format!("`{other}` is not one of t, f, b, n")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FourOp {
    MeetT,
    JoinT,
    MeetK,
    JoinK,
    Neg,
}

impl FourOp {
    fn name(self) -> &'static str {
        match self {
            FourOp::MeetT => "meet_t",
            FourOp::JoinT => "join_t",
            FourOp::MeetK => "meet_k",
            FourOp::JoinK => "join_k",
            FourOp::Neg => "neg",
        }
    }
}

pub fn four_op(op: FourOp, args: &[FourValue]) -> Result<FourValue, AlgebraError> {
    let expected = if op == FourOp::Neg { 1 } else { 2 };
    if args.len() != expected {
        return Err(AlgebraError::Arity { op: op.name(), expected, got: args.len() });
    }
    Ok(match op {
        FourOp::Neg => args[0].neg(),
        FourOp::MeetT => args[0].meet_t(args[1]),
        FourOp::JoinT => args[0].join_t(args[1]),
        FourOp::MeetK => args[0].meet_k(args[1]),
        FourOp::JoinK => args[0].join_k(args[1]),
    })
}

// ---------------------------------------------------------------------------
// Scalar Łukasiewicz operations on [0,1]
// ---------------------------------------------------------------------------

pub mod luk {
    use super::Rational;
    use crate::rational::{max, min, one, zero};

    /// `~a = 1 - a`
    pub fn neg(a: &Rational) -> Rational {
        one() - a
    }

    /// `a -> b = min(1, 1 - a + b)`
    pub fn imp(a: &Rational, b: &Rational) -> Rational {
        min(&one(), &(one() - a + b))
    }

    /// `a & b = max(0, a + b - 1)`
    pub fn times(a: &Rational, b: &Rational) -> Rational {
        max(&zero(), &(a + b - one()))
    }

    /// `a (+) b = min(1, a + b)`
    pub fn oplus(a: &Rational, b: &Rational) -> Rational {
        min(&one(), &(a + b))
    }

    /// `a (-) b = max(0, a - b)`
    pub fn ominus(a: &Rational, b: &Rational) -> Rational {
        max(&zero(), &(a - b))
    }
}

// ---------------------------------------------------------------------------
// Pair algebras
// ---------------------------------------------------------------------------

/// A pair `(pos, neg)` of rationals in `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairValue {
    pos: Rational,
    neg: Rational,
}

impl PairValue {
    pub fn new(pos: Rational, neg: Rational) -> Result<Self, AlgebraError> {
        for c in [&pos, &neg] {
            if !in_unit_interval(c) {
                return Err(AlgebraError::OutOfRange(format_rational(c)));
            }
        }
        Ok(PairValue { pos, neg })
    }

    /// Builds a pair from `(numer, denom)` tuples.
    ///
    /// # Panics
    /// If a component is outside `[0,1]` or a denominator is zero.
    pub fn from_ratios(pos: (i64, i64), neg: (i64, i64)) -> Self {
        Self::new(rational::rat(pos.0, pos.1), rational::rat(neg.0, neg.1))
            .expect("pair components must lie in [0,1]")
    }

    // Operations only ever combine in-range values with in-range results.
    fn raw(pos: Rational, neg: Rational) -> Self {
        debug_assert!(in_unit_interval(&pos) && in_unit_interval(&neg));
        PairValue { pos, neg }
    }

    pub fn zero() -> Self {
        Self::raw(Rational::zero(), Rational::zero())
    }

    pub fn pos(&self) -> &Rational {
        &self.pos
    }

    pub fn neg(&self) -> &Rational {
        &self.neg
    }

    /// Truth order: more positive support, less negative support.
    pub fn leq_t(&self, other: &Self) -> bool {
        self.pos <= other.pos && other.neg <= self.neg
    }

    /// Knowledge order: more support of both kinds.
    pub fn leq_k(&self, other: &Self) -> bool {
        self.pos <= other.pos && self.neg <= other.neg
    }

    pub fn swap(&self) -> Self {
        Self::raw(self.neg.clone(), self.pos.clone())
    }

    pub fn meet_t(&self, o: &Self) -> Self {
        Self::raw(rational::min(&self.pos, &o.pos), rational::max(&self.neg, &o.neg))
    }

    pub fn join_t(&self, o: &Self) -> Self {
        Self::raw(rational::max(&self.pos, &o.pos), rational::min(&self.neg, &o.neg))
    }

    pub fn meet_k(&self, o: &Self) -> Self {
        Self::raw(rational::min(&self.pos, &o.pos), rational::min(&self.neg, &o.neg))
    }

    pub fn join_k(&self, o: &Self) -> Self {
        Self::raw(rational::max(&self.pos, &o.pos), rational::max(&self.neg, &o.neg))
    }
}

impl fmt::Display for PairValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.pos, self.neg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraId {
    Four,
    MvProd,
    ResBilat,
    KleeneBilat,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraId::Four => "four",
            AlgebraId::MvProd => "mv_prod",
            AlgebraId::ResBilat => "res_bilat",
            AlgebraId::KleeneBilat => "kleene_bilat",
        })
    }
}

/// Connectives of the pair algebras. Which ones an algebra supports is
/// given by [`AlgebraId::supports`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    /// Bilattice negation `¬`, swapping components.
    Neg,
    /// Łukasiewicz negation `∼`.
    StrongNeg,
    Imp,
    /// Residuated bilattice implication `⊃`.
    Sup,
    /// Co-implication `⊂`.
    Sub,
    MeetT,
    JoinT,
    MeetK,
    JoinK,
    Times,
    Oplus,
    Ominus,
    Zero,
}

impl Connective {
    pub fn arity(self) -> usize {
        match self {
            Connective::Zero => 0,
            Connective::Neg | Connective::StrongNeg => 1,
            _ => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Connective::Neg => "neg",
            Connective::StrongNeg => "strong_neg",
            Connective::Imp => "imp",
            Connective::Sup => "sup",
            Connective::Sub => "sub",
            Connective::MeetT => "meet_t",
            Connective::JoinT => "join_t",
            Connective::MeetK => "meet_k",
            Connective::JoinK => "join_k",
            Connective::Times => "times",
            Connective::Oplus => "oplus",
            Connective::Ominus => "ominus",
            Connective::Zero => "zero",
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl AlgebraId {
    pub fn supports(self, op: Connective) -> bool {
        use Connective::*;
        match self {
            AlgebraId::Four => matches!(op, Neg | MeetT | JoinT | MeetK | JoinK),
            AlgebraId::MvProd => matches!(op, Imp | StrongNeg | Neg | Oplus | Ominus | Times),
            AlgebraId::ResBilat => true,
            AlgebraId::KleeneBilat => matches!(op, Neg | MeetT | JoinT | MeetK | JoinK),
        }
    }

    pub fn is_pair_algebra(self) -> bool {
        self != AlgebraId::Four
    }
}

// Product MV algebra primitives.
fn mv_strong_neg(a: &PairValue) -> PairValue {
    PairValue::raw(luk::neg(&a.pos), luk::neg(&a.neg))
}

fn mv_imp(a: &PairValue, b: &PairValue) -> PairValue {
    PairValue::raw(luk::imp(&a.pos, &b.pos), luk::times(&luk::neg(&a.neg), &b.neg))
}

// Product residuated bilattice primitive.
fn rb_sup(a: &PairValue, b: &PairValue) -> PairValue {
    PairValue::raw(luk::imp(&a.pos, &b.pos), luk::times(&b.neg, &a.pos))
}

fn rb_sub(a: &PairValue, b: &PairValue) -> PairValue {
    PairValue::raw(luk::imp(&b.pos, &a.pos), luk::times(&b.pos, &a.neg))
}

fn rb_strong_neg(a: &PairValue) -> PairValue {
    let zero = PairValue::zero();
    rb_sup(a, &zero).join_k(&rb_sup(&a.swap(), &zero).swap())
}

fn rb_imp(a: &PairValue, b: &PairValue) -> PairValue {
    rb_sup(a, b).meet_t(&rb_sub(&a.swap(), &b.swap()))
}

fn mv_op(op: Connective, a: &PairValue, b: &PairValue) -> PairValue {
    match op {
        Connective::Neg => a.swap(),
        Connective::StrongNeg => mv_strong_neg(a),
        Connective::Imp => mv_imp(a, b),
        Connective::Oplus => mv_imp(&mv_strong_neg(a), b),
        Connective::Ominus => mv_strong_neg(&mv_imp(a, b)),
        Connective::Times => mv_strong_neg(&mv_imp(a, &mv_strong_neg(b))),
        _ => unreachable!("signature checked by caller"),
    }
}

fn rb_op(op: Connective, a: &PairValue, b: &PairValue) -> PairValue {
    match op {
        Connective::Zero => PairValue::zero(),
        Connective::Neg => a.swap(),
        Connective::MeetT => a.meet_t(b),
        Connective::JoinT => a.join_t(b),
        Connective::MeetK => a.meet_k(b),
        Connective::JoinK => a.join_k(b),
        Connective::Sup => rb_sup(a, b),
        Connective::Sub => rb_sub(a, b),
        Connective::StrongNeg => rb_strong_neg(a),
        Connective::Imp => rb_imp(a, b),
        Connective::Times => rb_imp(b, &a.swap()).swap(),
        Connective::Oplus => {
            rb_sup(&rb_strong_neg(a), b).join_k(&rb_sup(&rb_strong_neg(&a.swap()), &b.swap()).swap())
        }
        Connective::Ominus => rb_strong_neg(&rb_sup(a, b))
            .meet_k(&rb_strong_neg(&rb_sup(&a.swap(), &b.swap())).swap()),
    }
}

fn kleene_op(op: Connective, a: &PairValue, b: &PairValue) -> PairValue {
    match op {
        Connective::Neg => a.swap(),
        Connective::MeetT => a.meet_t(b),
        Connective::JoinT => a.join_t(b),
        Connective::MeetK => a.meet_k(b),
        Connective::JoinK => a.join_k(b),
        _ => unreachable!("signature checked by caller"),
    }
}

/// Applies `op` in one of the pair algebras. Derived connectives are
/// computed through their defining equations over the primitives.
pub fn pair_op(algebra: AlgebraId, op: Connective, args: &[PairValue]) -> Result<PairValue, AlgebraError> {
    if !algebra.is_pair_algebra() {
        return Err(AlgebraError::WrongCarrier(algebra));
    }
    if !algebra.supports(op) {
        return Err(AlgebraError::NotInSignature { op, algebra });
    }
    if args.len() != op.arity() {
        return Err(AlgebraError::Arity { op: op.name(), expected: op.arity(), got: args.len() });
    }
    let zero = PairValue::zero();
    let a = args.first().unwrap_or(&zero);
    let b = args.get(1).unwrap_or(a);
    Ok(match algebra {
        AlgebraId::MvProd => mv_op(op, a, b),
        AlgebraId::ResBilat => rb_op(op, a, b),
        AlgebraId::KleeneBilat => kleene_op(op, a, b),
        AlgebraId::Four => unreachable!(),
    })
}

/// A value of any of the four algebras.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    Four(FourValue),
    Pair(PairValue),
}

impl From<FourValue> for TruthValue {
    fn from(v: FourValue) -> Self {
        TruthValue::Four(v)
    }
}

impl From<PairValue> for TruthValue {
    fn from(v: PairValue) -> Self {
        TruthValue::Pair(v)
    }
}

/// Membership in the designated set of `algebra`. Values from the wrong
/// carrier are never designated.
pub fn designated(algebra: AlgebraId, value: &TruthValue) -> bool {
    match (algebra, value) {
        (AlgebraId::Four, TruthValue::Four(v)) => v.is_designated(),
        (AlgebraId::MvProd, TruthValue::Pair(p)) => p.pos.is_one() && p.neg.is_zero(),
        (AlgebraId::ResBilat | AlgebraId::KleeneBilat, TruthValue::Pair(p)) => p.pos.is_one(),
        _ => false,
    }
}

pub fn designated_pair(algebra: AlgebraId, value: &PairValue) -> bool {
    designated(algebra, &TruthValue::Pair(value.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value for atom {0}")]
    Unbound(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Evaluates an upper expression in a pair algebra, reading atom and
/// belief-atom values from `env`.
pub fn eval_upper(
    algebra: AlgebraId,
    expr: &UpperExpr,
    env: &BTreeMap<LiteralAtom, PairValue>,
) -> Result<PairValue, EvalError> {
    let unary = |op: Connective, a: &UpperExpr| -> Result<PairValue, EvalError> {
        let a = eval_upper(algebra, a, env)?;
        Ok(pair_op(algebra, op, &[a])?)
    };
    let binary = |op: Connective, a: &UpperExpr, b: &UpperExpr| -> Result<PairValue, EvalError> {
        let a = eval_upper(algebra, a, env)?;
        let b = eval_upper(algebra, b, env)?;
        Ok(pair_op(algebra, op, &[a, b])?)
    };
    match expr {
        UpperExpr::Atom(_) | UpperExpr::Modal(_) => {
            let key = match expr {
                UpperExpr::Atom(name) => LiteralAtom::Prop(name.clone()),
                UpperExpr::Modal(arg) => LiteralAtom::Modal(arg.clone()),
                _ => unreachable!(),
            };
            env.get(&key).cloned().ok_or_else(|| EvalError::Unbound(key.to_string()))
        }
        UpperExpr::Zero => Ok(pair_op(algebra, Connective::Zero, &[])?),
        UpperExpr::StrongNeg(a) => unary(Connective::StrongNeg, a),
        UpperExpr::BNeg(a) => unary(Connective::Neg, a),
        UpperExpr::Imp(a, b) => binary(Connective::Imp, a, b),
        UpperExpr::MeetT(a, b) => binary(Connective::MeetT, a, b),
        UpperExpr::JoinT(a, b) => binary(Connective::JoinT, a, b),
        UpperExpr::MeetK(a, b) => binary(Connective::MeetK, a, b),
        UpperExpr::JoinK(a, b) => binary(Connective::JoinK, a, b),
        UpperExpr::Sup(a, b) => binary(Connective::Sup, a, b),
    }
}
