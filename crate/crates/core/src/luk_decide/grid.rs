//! Exhaustive search for countermodels on a finite grid of rationals.
//!
//! All grid values `k/d` with `d <= max_denominator` are multiples of
//! `1/L` for `L = lcm(1..=max_denominator)`, and the Łukasiewicz operations
//! keep that property, so evaluation runs on integers in units of `1/L`.
//! Formulas are evaluated directly from their syntax trees.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::{Countermodel, DecideError, RationalPoint};
use crate::algebras::PairValue;
use crate::formulas::{LiteralAtom, UpperExpr};
use crate::rational::{rat, Rational};

pub const DEFAULT_GRID_BUDGET: u128 = 10_000_000;

/// Denominators beyond this make `lcm(1..=d)` overflow.
const MAX_DENOMINATOR: i64 = 80;

#[derive(Clone, Copy, Debug)]
enum Op {
    Load(usize),
    Not,
    Swap,
    Imp,
}

/// Postfix program over value slots.
struct Program(Vec<Op>);

fn compile(expr: &UpperExpr, slot: &dyn Fn(&UpperExpr) -> Option<Op>, out: &mut Vec<Op>) -> Result<(), DecideError> {
    if let Some(op) = slot(expr) {
        out.push(op);
        return Ok(());
    }
    match expr {
        UpperExpr::StrongNeg(a) => {
            compile(a, slot, out)?;
            out.push(Op::Not);
        }
        UpperExpr::BNeg(a) => {
            compile(a, slot, out)?;
            out.push(Op::Swap);
        }
        UpperExpr::Imp(a, b) => {
            compile(a, slot, out)?;
            compile(b, slot, out)?;
            out.push(Op::Imp);
        }
        other => return Err(DecideError::Unsupported(other.connective_name())),
    }
    Ok(())
}

impl Program {
    /// Runs the program on pairs; `Load(i)` reads `(x[i], x[i+1])` and in
    /// single-component mode the second slot is ignored.
    fn run(&self, x: &[i128], unit: i128, stack: &mut Vec<(i128, i128)>) -> (i128, i128) {
        stack.clear();
        for op in &self.0 {
            match *op {
                Op::Load(i) => stack.push((x[i], x.get(i + 1).copied().unwrap_or(0))),
                Op::Not => {
                    let (a, b) = stack.pop().unwrap();
                    stack.push((unit - a, unit - b));
                }
                Op::Swap => {
                    let (a, b) = stack.pop().unwrap();
                    stack.push((b, a));
                }
                Op::Imp => {
                    let (b1, b2) = stack.pop().unwrap();
                    let (a1, a2) = stack.pop().unwrap();
                    stack.push(((unit - a1 + b1).min(unit), (b2 - a2).max(0)));
                }
            }
        }
        stack.pop().unwrap()
    }
}

/// Grid values in increasing order, as numerators over `unit`.
fn farey(max_denominator: i64) -> Result<(Vec<i128>, i128), DecideError> {
    if !(1..=MAX_DENOMINATOR).contains(&max_denominator) {
        return Err(DecideError::GridDenominator(max_denominator));
    }
    let unit = (1..=max_denominator as i128).fold(1i128, |l, d| l.lcm(&d));
    let set: BTreeSet<i128> =
        (1..=max_denominator as i128).flat_map(|d| (0..=d).map(move |k| k * (unit / d))).collect();
    Ok((set.into_iter().collect(), unit))
}

fn check_budget(values: usize, dims: usize, budget: u128) -> Result<(), DecideError> {
    let mut points: u128 = 1;
    for _ in 0..dims {
        points = points.saturating_mul(values as u128);
    }
    if points > budget {
        return Err(DecideError::GridBudget { points, budget });
    }
    Ok(())
}

/// Visits grid points in lexicographic order (first coordinate slowest)
/// until `visit` returns true.
fn odometer(values: &[i128], dims: usize, mut visit: impl FnMut(&[i128]) -> bool) -> Option<Vec<i128>> {
    let mut idx = vec![0usize; dims];
    let mut x: Vec<i128> = vec![values[0]; dims];
    loop {
        if visit(&x) {
            return Some(x);
        }
        let mut k = dims;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                x[k] = values[idx[k]];
                break;
            }
            idx[k] = 0;
            x[k] = values[0];
        }
    }
}

fn to_rational(v: i128, unit: i128) -> Rational {
    let g = v.gcd(&unit);
    rat((v / g) as i64, (unit / g) as i64)
}

/// Searches the grid for a `[0,1]`-valuation sending every premise to 1
/// and `alpha` below 1. Leaves (atoms, belief atoms and `!`-prefixed
/// formulas) are the coordinates, in sorted order.
pub fn grid_falsify(
    gamma: &[UpperExpr],
    alpha: &UpperExpr,
    max_denominator: i64,
    budget: u128,
) -> Result<Option<Countermodel>, DecideError> {
    let mut leaves = BTreeSet::new();
    for e in gamma.iter().chain([alpha]) {
        collect_leaves(e, &mut leaves);
    }
    let leaves: Vec<UpperExpr> = leaves.into_iter().collect();
    let (values, unit) = farey(max_denominator)?;
    check_budget(values.len(), leaves.len(), budget)?;

    let slot = |e: &UpperExpr| -> Option<Op> {
        if is_opaque(e) {
            leaves.binary_search(e).ok().map(Op::Load)
        } else {
            None
        }
    };
    let programs = gamma
        .iter()
        .chain([alpha])
        .map(|e| {
            let mut ops = Vec::new();
            compile(e, &slot, &mut ops).map(|_| Program(ops))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (premises, conclusion) = programs.split_at(gamma.len());

    let mut stack = Vec::new();
    let hit = odometer(&values, leaves.len(), |x| {
        premises.iter().all(|p| p.run(x, unit, &mut stack).0 == unit) && conclusion[0].run(x, unit, &mut stack).0 < unit
    });
    Ok(hit.map(|x| {
        let value = to_rational(conclusion[0].run(&x, unit, &mut stack).0, unit);
        let point = leaves.into_iter().zip(x.iter().map(|v| to_rational(*v, unit))).collect();
        Countermodel::Point { point: RationalPoint(point), value }
    }))
}

/// Searches the grid for a pair-valued assignment sending every premise to
/// `(1,0)` and `alpha` elsewhere, evaluating in the product MV algebra.
/// Each atom contributes two coordinates, positive before negative.
pub fn grid_falsify_lukneg(
    gamma: &[UpperExpr],
    alpha: &UpperExpr,
    max_denominator: i64,
    budget: u128,
) -> Result<Option<Countermodel>, DecideError> {
    let mut atoms = BTreeSet::new();
    for e in gamma.iter().chain([alpha]) {
        atoms.extend(e.atoms());
    }
    let atoms: Vec<LiteralAtom> = atoms.into_iter().collect();
    let (values, unit) = farey(max_denominator)?;
    check_budget(values.len(), 2 * atoms.len(), budget)?;

    let slot = |e: &UpperExpr| -> Option<Op> {
        let key = match e {
            UpperExpr::Atom(n) => LiteralAtom::Prop(n.clone()),
            UpperExpr::Modal(phi) => LiteralAtom::Modal(phi.clone()),
            _ => return None,
        };
        atoms.binary_search(&key).ok().map(|i| Op::Load(2 * i))
    };
    let programs = gamma
        .iter()
        .chain([alpha])
        .map(|e| {
            let mut ops = Vec::new();
            compile(e, &slot, &mut ops).map(|_| Program(ops))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (premises, conclusion) = programs.split_at(gamma.len());

    let mut stack = Vec::new();
    let designated = |v: (i128, i128)| v == (unit, 0);
    let hit = odometer(&values, 2 * atoms.len(), |x| {
        premises.iter().all(|p| designated(p.run(x, unit, &mut stack)))
            && !designated(conclusion[0].run(x, unit, &mut stack))
    });
    Ok(hit.map(|x| {
        let (v1, v2) = conclusion[0].run(&x, unit, &mut stack);
        let pair = |a: i128, b: i128| PairValue::new(to_rational(a, unit), to_rational(b, unit)).expect("grid values");
        let assignment = atoms.into_iter().enumerate().map(|(i, a)| (a, pair(x[2 * i], x[2 * i + 1]))).collect();
        Countermodel::Pairs { assignment, value: pair(v1, v2) }
    }))
}

fn is_opaque(e: &UpperExpr) -> bool {
    matches!(e, UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::BNeg(_))
}

fn collect_leaves(e: &UpperExpr, out: &mut BTreeSet<UpperExpr>) {
    if is_opaque(e) {
        out.insert(e.clone());
    } else {
        for c in e.children() {
            collect_leaves(c, out);
        }
    }
}
