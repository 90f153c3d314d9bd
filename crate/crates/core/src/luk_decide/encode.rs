//! Mixed-integer encoding of Łukasiewicz terms.
//!
//! Each leaf gets a value variable in `[0,1]`; `~a` is the affine
//! expression `1 - a` and needs no variable. An implication node with
//! `t = 1 - a + b` gets a value variable `z` and a branch variable `d`:
//!
//! ```text
//! z <= t        z >= 1 - d        z >= t - 1 + d
//! ```
//!
//! With `d = 0` this forces `z = 1 <= t`, with `d = 1` it forces
//! `z = t <= 1`, so every integral completion has `z = min(1, t)`.
//!
//! Premises asserted to be 1 (or 0) are decomposed instead of encoded where
//! possible: `a -> b = 1` is the linear constraint `a <= b`, `a -> b = 0`
//! forces `a = 1` and `b = 0`, and `~a = v` forces `a = 1 - v`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use super::simplex::{Lp, Row, Sense};
use super::term::{Node, NodeId, TermDag};
use crate::rational::{format_rational, int, Rational};

/// `constant + sum coeff * var`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinExpr {
    pub terms: BTreeMap<usize, Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn var(v: usize) -> Self {
        LinExpr { terms: BTreeMap::from([(v, Rational::one())]), constant: Rational::zero() }
    }

    pub fn constant(c: Rational) -> Self {
        LinExpr { terms: BTreeMap::new(), constant: c }
    }

    pub fn scaled_add(&self, k: &Rational, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            let e = out.terms.entry(*v).or_insert_with(Rational::zero);
            *e += k * c;
            if e.is_zero() {
                out.terms.remove(v);
            }
        }
        out.constant += k * &other.constant;
        out
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        self.scaled_add(&Rational::one(), other)
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.scaled_add(&-Rational::one(), other)
    }

    /// `1 - self`.
    pub fn complement(&self) -> LinExpr {
        LinExpr::constant(Rational::one()).sub(self)
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut v = self.constant.clone();
        for (j, c) in &self.terms {
            v += c * &x[*j];
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Value,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub kind: VarKind,
    pub lo: Rational,
    pub hi: Rational,
}

/// `expr (sense) 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub expr: LinExpr,
    pub sense: Sense,
}

#[derive(Clone, Debug, Default)]
pub struct PlEncoding {
    pub vars: Vec<VarInfo>,
    pub constraints: Vec<Constraint>,
    /// Set when forced premises contradict each other outright.
    pub contradictory: bool,
}

impl PlEncoding {
    pub fn branch_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&v| self.vars[v].kind == VarKind::Branch).collect()
    }

    /// The linear program minimising `objective` with branch variables
    /// relaxed to `[0,1]`.
    pub fn relaxation(&self, objective: &LinExpr) -> Lp {
        let rows = self
            .constraints
            .iter()
            .map(|c| Row {
                coeffs: c.expr.terms.iter().map(|(v, a)| (*v, a.clone())).collect(),
                sense: c.sense,
                rhs: -c.expr.constant.clone(),
            })
            .collect();
        Lp {
            lo: self.vars.iter().map(|v| v.lo.clone()).collect(),
            hi: self.vars.iter().map(|v| v.hi.clone()).collect(),
            rows,
            objective: objective.terms.iter().map(|(v, a)| (*v, a.clone())).collect(),
        }
    }

    /// Whether `x` meets every bound and constraint, with branch variables
    /// integral.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let bounds = self.vars.iter().zip(x).all(|(v, value)| {
            value >= &v.lo && value <= &v.hi && (v.kind == VarKind::Value || value.is_integer())
        });
        bounds
            && self.constraints.iter().all(|c| {
                let v = c.expr.eval(x);
                match c.sense {
                    Sense::Le => !v.is_positive(),
                    Sense::Ge => !v.is_negative(),
                    Sense::Eq => v.is_zero(),
                }
            })
    }

    /// LP-format text minimising `objective`. Value variables are `v<n>`,
    /// branch variables `b<n>`.
    pub fn to_lp_format(&self, objective: &LinExpr) -> String {
        let name = |j: usize| match self.vars[j].kind {
            VarKind::Value => format!("v{j}"),
            VarKind::Branch => format!("b{j}"),
        };
        let render = |e: &LinExpr| -> String {
            let mut s = String::new();
            for (j, c) in &e.terms {
                let sign = if c.is_negative() { "-" } else { "+" };
                let mag = c.abs();
                if mag.is_one() {
                    write!(s, " {sign} {}", name(*j)).unwrap();
                } else {
                    write!(s, " {sign} {} {}", format_rational(&mag), name(*j)).unwrap();
                }
            }
            if s.is_empty() {
                s.push_str(" 0");
            }
            s
        };
        let mut out = String::from("\\ objective constant ");
        out.push_str(&format_rational(&objective.constant));
        out.push_str("\nMinimize\n obj:");
        out.push_str(&render(objective));
        out.push_str("\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let op = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            writeln!(out, " c{}:{} {op} {}", i + 1, render(&c.expr), format_rational(&-c.expr.constant.clone()))
                .unwrap();
        }
        out.push_str("Bounds\n");
        for j in 0..self.vars.len() {
            let v = &self.vars[j];
            writeln!(out, " {} <= {} <= {}", format_rational(&v.lo), name(j), format_rational(&v.hi)).unwrap();
        }
        let branches = self.branch_vars();
        if !branches.is_empty() {
            out.push_str("Binaries\n");
            for j in branches {
                writeln!(out, " {}", name(j)).unwrap();
            }
        }
        out.push_str("End\n");
        out
    }
}

impl fmt::Display for PlEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_lp_format(&LinExpr::default()))
    }
}

/// Builds an encoding incrementally over a shared term DAG.
pub struct Encoder<'a> {
    dag: &'a TermDag,
    pub enc: PlEncoding,
    values: HashMap<NodeId, LinExpr>,
    /// The `(z, d)` variables of each encoded implication.
    pub imp_vars: HashMap<NodeId, (usize, usize)>,
}

impl<'a> Encoder<'a> {
    /// Creates one value variable per leaf of `dag`, in leaf order.
    pub fn new(dag: &'a TermDag) -> Self {
        let mut enc = PlEncoding::default();
        for _ in dag.leaves() {
            enc.vars.push(VarInfo { kind: VarKind::Value, lo: int(0), hi: int(1) });
        }
        Encoder { dag, enc, values: HashMap::new(), imp_vars: HashMap::new() }
    }

    fn new_var(&mut self, kind: VarKind) -> usize {
        self.enc.vars.push(VarInfo { kind, lo: int(0), hi: int(1) });
        self.enc.vars.len() - 1
    }

    fn constrain(&mut self, expr: LinExpr, sense: Sense) {
        self.enc.constraints.push(Constraint { expr, sense });
    }

    /// The value of `id` as an affine expression, encoding implications on
    /// first use.
    pub fn value(&mut self, id: NodeId) -> LinExpr {
        if let Some(e) = self.values.get(&id) {
            return e.clone();
        }
        let e = match self.dag.node(id) {
            Node::Leaf(i) => LinExpr::var(i),
            Node::Not(a) => self.value(a).complement(),
            Node::Imp(a, b) => {
                let t = self.value(b).add(&self.value(a).complement());
                let z = self.new_var(VarKind::Value);
                let d = self.new_var(VarKind::Branch);
                let zv = LinExpr::var(z);
                let dv = LinExpr::var(d);
                self.constrain(zv.sub(&t), Sense::Le);
                self.constrain(zv.add(&dv).sub(&LinExpr::constant(int(1))), Sense::Ge);
                self.constrain(zv.sub(&t).sub(&dv).add(&LinExpr::constant(int(1))), Sense::Ge);
                self.imp_vars.insert(id, (z, d));
                zv
            }
        };
        self.values.insert(id, e.clone());
        e
    }

    /// Asserts that `id` takes the value 1 (`one`) or 0.
    pub fn force(&mut self, id: NodeId, one: bool) {
        match self.dag.node(id) {
            Node::Leaf(i) => {
                let v = &mut self.enc.vars[i];
                let target = if one { int(1) } else { int(0) };
                if v.lo > target || v.hi < target {
                    self.enc.contradictory = true;
                }
                v.lo = target.clone();
                v.hi = target;
            }
            Node::Not(a) => self.force(a, !one),
            Node::Imp(a, b) if one => {
                let diff = self.value(a).sub(&self.value(b));
                self.constrain(diff, Sense::Le);
            }
            Node::Imp(a, b) => {
                self.force(a, true);
                self.force(b, false);
            }
        }
    }

    /// An affine expression `L` with `value(id) = clamp(L)` to `[0,1]`,
    /// saving the branch variable of a top-level implication.
    pub fn objective(&mut self, id: NodeId) -> LinExpr {
        match self.dag.node(id) {
            Node::Imp(a, b) => self.value(b).add(&self.value(a).complement()),
            Node::Not(a) => self.objective(a).complement(),
            Node::Leaf(_) => self.value(id),
        }
    }
}
