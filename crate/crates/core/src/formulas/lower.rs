use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A formula of the event language: Belnap-Dunn connectives over atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LowerFormula {
    Atom(String),
    Neg(Box<LowerFormula>),
    And(Box<LowerFormula>, Box<LowerFormula>),
    Or(Box<LowerFormula>, Box<LowerFormula>),
}

impl LowerFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        LowerFormula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: LowerFormula) -> Self {
        LowerFormula::Neg(Box::new(inner))
    }

    pub fn and(lhs: LowerFormula, rhs: LowerFormula) -> Self {
        LowerFormula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: LowerFormula, rhs: LowerFormula) -> Self {
        LowerFormula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            LowerFormula::Atom(name) => {
                out.insert(name.clone());
            }
            LowerFormula::Neg(inner) => inner.collect_atoms(out),
            LowerFormula::And(l, r) | LowerFormula::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Number of connective occurrences.
    pub fn size(&self) -> usize {
        match self {
            LowerFormula::Atom(_) => 0,
            LowerFormula::Neg(inner) => 1 + inner.size(),
            LowerFormula::And(l, r) | LowerFormula::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            LowerFormula::Or(..) => 1,
            LowerFormula::And(..) => 2,
            LowerFormula::Neg(_) | LowerFormula::Atom(_) => 3,
        }
    }
}

/// Checks the atom naming rule `[a-z][a-z0-9_]*`.
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn write_operand(f: &mut fmt::Formatter<'_>, child: &LowerFormula, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for LowerFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerFormula::Atom(name) => f.write_str(name),
            LowerFormula::Neg(inner) => {
                f.write_str("!")?;
                write_operand(f, inner, 3)
            }
            // Binary connectives are left-associative: a right child at the
            // same level needs parentheses.
            LowerFormula::And(l, r) => {
                write_operand(f, l, 2)?;
                f.write_str(" & ")?;
                write_operand(f, r, 3)
            }
            LowerFormula::Or(l, r) => {
                write_operand(f, l, 1)?;
                f.write_str(" | ")?;
                write_operand(f, r, 2)
            }
        }
    }
}
