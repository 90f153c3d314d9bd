//! Depth-first branch and bound over the branch variables of an encoding.

use num_traits::{One, Signed, Zero};

use super::encode::{LinExpr, PlEncoding};
use super::simplex::{solve, LpOutcome};
use crate::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpSolution {
    /// Optimum of the objective including its constant.
    pub value: Rational,
    pub x: Vec<Rational>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BnbStats {
    pub nodes: usize,
}

/// Exact minimum of `objective` over the integral points of `enc` whose
/// value is strictly below `cutoff`, if any.
///
/// Branching picks the most fractional branch variable (ties to the lower
/// index) and explores the child nearer the relaxed value first. Only
/// strictly better incumbents replace the current one, so the returned
/// point is deterministic.
pub fn minimize(enc: &PlEncoding, objective: &LinExpr, cutoff: Option<&Rational>) -> (Option<MilpSolution>, BnbStats) {
    let mut stats = BnbStats::default();
    if enc.contradictory {
        return (None, stats);
    }
    let branches = enc.branch_vars();
    let base = enc.relaxation(objective);
    let half = rat(1, 2);
    let mut best: Option<MilpSolution> = None;
    let mut stack: Vec<Vec<(usize, bool)>> = vec![Vec::new()];

    while let Some(fixed) = stack.pop() {
        stats.nodes += 1;
        let mut lp = base.clone();
        for &(v, one) in &fixed {
            let b = if one { Rational::one() } else { Rational::zero() };
            lp.lo[v] = b.clone();
            lp.hi[v] = b;
        }
        let LpOutcome::Optimal { value, x } = solve(&lp) else { continue };
        let value = value + &objective.constant;
        let bound = best.as_ref().map(|b| &b.value).or(cutoff);
        if matches!(bound, Some(b) if &value >= b) {
            continue;
        }
        let fractional = branches
            .iter()
            .filter(|&&v| !x[v].is_integer())
            .min_by(|&&a, &&b| (&x[a] - &half).abs().cmp(&(&x[b] - &half).abs()).then(a.cmp(&b)));
        match fractional {
            None => best = Some(MilpSolution { value, x }),
            Some(&v) => {
                let up_first = x[v] >= half;
                let mut lo_child = fixed.clone();
                lo_child.push((v, false));
                let mut hi_child = fixed;
                hi_child.push((v, true));
                // The stack is LIFO: push the preferred child last.
                if up_first {
                    stack.push(lo_child);
                    stack.push(hi_child);
                } else {
                    stack.push(hi_child);
                    stack.push(lo_child);
                }
            }
        }
    }
    (best, stats)
}

/// Minimum over every 0/1 assignment of the branch variables, each solved
/// as a plain linear program. Exponential; an oracle for small encodings.
pub fn minimize_by_enumeration(enc: &PlEncoding, objective: &LinExpr) -> Option<Rational> {
    if enc.contradictory {
        return None;
    }
    let branches = enc.branch_vars();
    let base = enc.relaxation(objective);
    let mut best: Option<Rational> = None;
    for mask in 0u64..(1u64 << branches.len()) {
        let mut lp = base.clone();
        for (k, &v) in branches.iter().enumerate() {
            let b = if mask >> k & 1 == 1 { Rational::one() } else { Rational::zero() };
            lp.lo[v] = b.clone();
            lp.hi[v] = b;
        }
        if let LpOutcome::Optimal { value, .. } = solve(&lp) {
            let value = value + &objective.constant;
            if best.as_ref().is_none_or(|b| &value < b) {
                best = Some(value);
            }
        }
    }
    best
}
