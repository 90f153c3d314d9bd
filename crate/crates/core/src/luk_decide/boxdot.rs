//! Translation of `LukNeg` consequence into plain Łukasiewicz consequence
//! in which `!`-prefixed formulas count as atoms.

use std::collections::BTreeSet;

use crate::formulas::{nnf_of, UpperExpr, UpperFormula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxdotTranslation {
    /// `~!g` and `g` for every premise `g`.
    pub gamma: Vec<UpperExpr>,
    /// Instances of the negation axioms over all subformulas.
    pub delta: Vec<UpperExpr>,
    pub alpha: UpperExpr,
}

impl BoxdotTranslation {
    /// `gamma` followed by `delta`.
    pub fn premises(&self) -> Vec<UpperExpr> {
        self.gamma.iter().chain(&self.delta).cloned().collect()
    }
}

fn subformulas(e: &UpperExpr, seen: &mut BTreeSet<UpperExpr>, out: &mut Vec<UpperExpr>) {
    for c in e.children() {
        subformulas(c, seen, out);
    }
    if seen.insert(e.clone()) {
        out.push(e.clone());
    }
}

/// Puts premises and conclusion into negation normal form, then returns
/// the boxed premises and the negation-axiom instances
///
/// ```text
/// !!b <-> b                     for every subformula b
/// !~b <-> ~!b                   for every subformula ~b
/// (~!a -> ~!b) <-> ~!(a -> b)   for every subformula a -> b
/// ```
pub fn boxdot_translate(gamma: &[UpperFormula], alpha: &UpperFormula) -> BoxdotTranslation {
    let gamma: Vec<UpperExpr> = gamma.iter().map(|g| nnf_of(g.expr())).collect();
    let alpha = nnf_of(alpha.expr());
    let sn = UpperExpr::strong_neg;
    let bn = UpperExpr::bneg;

    let mut boxed = Vec::new();
    for g in &gamma {
        boxed.push(sn(bn(g.clone())));
        boxed.push(g.clone());
    }

    let mut seen = BTreeSet::new();
    let mut subs = Vec::new();
    for e in gamma.iter().chain([&alpha]) {
        subformulas(e, &mut seen, &mut subs);
    }
    let mut delta = Vec::new();
    for b in &subs {
        delta.push(UpperExpr::luk_equiv(bn(bn(b.clone())), b.clone()));
        match b {
            UpperExpr::StrongNeg(inner) => {
                delta.push(UpperExpr::luk_equiv(bn(b.clone()), sn(bn((**inner).clone()))));
            }
            UpperExpr::Imp(x, y) => {
                delta.push(UpperExpr::luk_equiv(
                    UpperExpr::imp(sn(bn((**x).clone())), sn(bn((**y).clone()))),
                    sn(bn(b.clone())),
                ));
            }
            _ => {}
        }
    }
    BoxdotTranslation { gamma: boxed, delta, alpha }
}
