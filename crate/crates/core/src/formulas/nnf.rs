//! Negation normal form for the `LukNeg` dialect.
//!
//! `!` is pushed to literals using
//!
//! ```text
//! !!a      = a
//! !~a      = ~!a
//! !(a -> b) = ~(~!a -> ~!b)
//! ```
//!
//! and double Łukasiewicz negations `~~a` are cancelled, so that
//! `nnf(neg_translate(neg_translate(a))) == nnf(a)` holds structurally.

use super::upper::{Dialect, UpperExpr, UpperFormula};

fn strong_neg(inner: UpperExpr) -> UpperExpr {
    match inner {
        UpperExpr::StrongNeg(x) => *x,
        other => UpperExpr::strong_neg(other),
    }
}

fn nnf_expr(expr: &UpperExpr) -> UpperExpr {
    match expr {
        UpperExpr::StrongNeg(a) => strong_neg(nnf_expr(a)),
        UpperExpr::Imp(a, b) => UpperExpr::imp(nnf_expr(a), nnf_expr(b)),
        UpperExpr::BNeg(a) => push_neg(a),
        leaf => leaf.clone(),
    }
}

/// NNF of `!expr`.
fn push_neg(expr: &UpperExpr) -> UpperExpr {
    match expr {
        UpperExpr::BNeg(a) => nnf_expr(a),
        UpperExpr::StrongNeg(a) => strong_neg(push_neg(a)),
        UpperExpr::Imp(a, b) => strong_neg(UpperExpr::imp(
            strong_neg(push_neg(a)),
            strong_neg(push_neg(b)),
        )),
        leaf => UpperExpr::bneg(leaf.clone()),
    }
}

fn assert_lukneg(alpha: &UpperFormula) {
    assert_eq!(
        alpha.dialect(),
        Dialect::LukNeg,
        "negation normal form is defined for the lukneg dialect only"
    );
}

/// Negation normal form: `!` only on atoms and belief atoms.
///
/// # Panics
/// If `alpha` is not in the `LukNeg` dialect.
pub fn nnf(alpha: &UpperFormula) -> UpperFormula {
    assert_lukneg(alpha);
    UpperFormula::new(Dialect::LukNeg, nnf_expr(alpha.expr())).expect("nnf stays in dialect")
}

/// The formula `alpha^!`: the NNF of `!alpha`, whose value is the negative
/// component of `alpha`'s value.
///
/// # Panics
/// If `alpha` is not in the `LukNeg` dialect.
pub fn neg_translate(alpha: &UpperFormula) -> UpperFormula {
    assert_lukneg(alpha);
    UpperFormula::new(Dialect::LukNeg, push_neg(alpha.expr())).expect("nnf stays in dialect")
}

/// Expression-level variants, for callers that already work on trees.
pub fn nnf_of(expr: &UpperExpr) -> UpperExpr {
    nnf_expr(expr)
}

pub fn neg_translate_of(expr: &UpperExpr) -> UpperExpr {
    push_neg(expr)
}

/// True when `!` occurs only directly above atoms.
pub fn is_nnf(expr: &UpperExpr) -> bool {
    match expr {
        UpperExpr::BNeg(a) => a.is_leaf(),
        other => other.children().into_iter().all(is_nnf),
    }
}
