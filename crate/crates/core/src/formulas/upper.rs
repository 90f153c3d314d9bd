use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lower::LowerFormula;

/// Which upper-layer language a formula belongs to.
///
/// * `LukNeg`: Łukasiewicz logic extended with the bilattice negation,
///   primitives `~`, `!`, `->`.
/// * `Bilat`: the product residuated bilattice language, primitives
///   `/\t`, `\/t`, `/\k`, `\/k`, `=>`, `!`, `0`.
/// * `Bd`: Belnap-Dunn connectives `!`, `&`, `|` over belief atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dialect {
    LukNeg,
    Bilat,
    Bd,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dialect::LukNeg => "lukneg",
            Dialect::Bilat => "bilat",
            Dialect::Bd => "bd",
        })
    }
}

/// Syntax tree of the upper language. Derived connectives never appear here;
/// the parser expands them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UpperExpr {
    /// A plain propositional variable of the upper language.
    Atom(String),
    /// `B(phi)`.
    Modal(LowerFormula),
    /// Łukasiewicz negation `~`.
    StrongNeg(Box<UpperExpr>),
    /// Bilattice negation `!`.
    BNeg(Box<UpperExpr>),
    Imp(Box<UpperExpr>, Box<UpperExpr>),
    MeetT(Box<UpperExpr>, Box<UpperExpr>),
    JoinT(Box<UpperExpr>, Box<UpperExpr>),
    MeetK(Box<UpperExpr>, Box<UpperExpr>),
    JoinK(Box<UpperExpr>, Box<UpperExpr>),
    /// Residuated bilattice implication `=>`.
    Sup(Box<UpperExpr>, Box<UpperExpr>),
    Zero,
}

impl UpperExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        UpperExpr::Atom(name.into())
    }

    pub fn modal(arg: LowerFormula) -> Self {
        UpperExpr::Modal(arg)
    }

    pub fn strong_neg(inner: UpperExpr) -> Self {
        UpperExpr::StrongNeg(Box::new(inner))
    }

    pub fn bneg(inner: UpperExpr) -> Self {
        UpperExpr::BNeg(Box::new(inner))
    }

    pub fn imp(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::Imp(Box::new(lhs), Box::new(rhs))
    }

    pub fn meet_t(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::MeetT(Box::new(lhs), Box::new(rhs))
    }

    pub fn join_t(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::JoinT(Box::new(lhs), Box::new(rhs))
    }

    pub fn meet_k(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::MeetK(Box::new(lhs), Box::new(rhs))
    }

    pub fn join_k(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::JoinK(Box::new(lhs), Box::new(rhs))
    }

    pub fn sup(lhs: UpperExpr, rhs: UpperExpr) -> Self {
        UpperExpr::Sup(Box::new(lhs), Box::new(rhs))
    }

    // Łukasiewicz-dialect derived connectives.

    /// `a (+) b := ~a -> b`
    pub fn luk_oplus(a: UpperExpr, b: UpperExpr) -> Self {
        Self::imp(Self::strong_neg(a), b)
    }

    /// `a (-) b := ~(a -> b)`
    pub fn luk_ominus(a: UpperExpr, b: UpperExpr) -> Self {
        Self::strong_neg(Self::imp(a, b))
    }

    /// `a * b := ~(a -> ~b)`
    pub fn luk_times(a: UpperExpr, b: UpperExpr) -> Self {
        Self::strong_neg(Self::imp(a, Self::strong_neg(b)))
    }

    /// `a <-> b := (a -> b) * (b -> a)`
    pub fn luk_equiv(a: UpperExpr, b: UpperExpr) -> Self {
        Self::luk_times(Self::imp(a.clone(), b.clone()), Self::imp(b, a))
    }

    // Bilattice-dialect derived connectives.

    /// `~a := (a => 0) \/k !(!a => 0)`
    pub fn bilat_strong_neg(a: UpperExpr) -> Self {
        Self::join_k(
            Self::sup(a.clone(), UpperExpr::Zero),
            Self::bneg(Self::sup(Self::bneg(a), UpperExpr::Zero)),
        )
    }

    /// `a -> b := (a => b) /\t (!b => !a)`
    pub fn bilat_imp(a: UpperExpr, b: UpperExpr) -> Self {
        Self::meet_t(
            Self::sup(a.clone(), b.clone()),
            Self::sup(Self::bneg(b), Self::bneg(a)),
        )
    }

    /// `a * b := !(b -> !a)`
    pub fn bilat_times(a: UpperExpr, b: UpperExpr) -> Self {
        Self::bneg(Self::bilat_imp(b, Self::bneg(a)))
    }

    /// `a (+) b := (~a => b) \/k !(~!a => !b)`
    pub fn bilat_oplus(a: UpperExpr, b: UpperExpr) -> Self {
        Self::join_k(
            Self::sup(Self::bilat_strong_neg(a.clone()), b.clone()),
            Self::bneg(Self::sup(
                Self::bilat_strong_neg(Self::bneg(a)),
                Self::bneg(b),
            )),
        )
    }

    /// `a (-) b := ~(a => b) /\k !~(!a => !b)`
    pub fn bilat_ominus(a: UpperExpr, b: UpperExpr) -> Self {
        Self::meet_k(
            Self::bilat_strong_neg(Self::sup(a.clone(), b.clone())),
            Self::bneg(Self::bilat_strong_neg(Self::sup(
                Self::bneg(a),
                Self::bneg(b),
            ))),
        )
    }

    /// Co-implication `a <= b`; over a commutative monoid it coincides
    /// with `b => a`.
    pub fn bilat_sub(a: UpperExpr, b: UpperExpr) -> Self {
        Self::sup(b, a)
    }

    /// `a <-> b := (a -> b) * (b -> a)`
    pub fn bilat_equiv(a: UpperExpr, b: UpperExpr) -> Self {
        Self::bilat_times(Self::bilat_imp(a.clone(), b.clone()), Self::bilat_imp(b, a))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::Zero)
    }

    /// Number of connective occurrences (leaves and `0` count as zero).
    pub fn size(&self) -> usize {
        match self {
            UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::Zero => 0,
            UpperExpr::StrongNeg(a) | UpperExpr::BNeg(a) => 1 + a.size(),
            UpperExpr::Imp(a, b)
            | UpperExpr::MeetT(a, b)
            | UpperExpr::JoinT(a, b)
            | UpperExpr::MeetK(a, b)
            | UpperExpr::JoinK(a, b)
            | UpperExpr::Sup(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Children in left-to-right order.
    pub fn children(&self) -> Vec<&UpperExpr> {
        match self {
            UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::Zero => vec![],
            UpperExpr::StrongNeg(a) | UpperExpr::BNeg(a) => vec![a],
            UpperExpr::Imp(a, b)
            | UpperExpr::MeetT(a, b)
            | UpperExpr::JoinT(a, b)
            | UpperExpr::MeetK(a, b)
            | UpperExpr::JoinK(a, b)
            | UpperExpr::Sup(a, b) => vec![a, b],
        }
    }

    /// All subformulas, each listed once, in post-order of first occurrence.
    pub fn subformulas(&self) -> Vec<UpperExpr> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.collect_subformulas(&mut seen, &mut out);
        out
    }

    fn collect_subformulas(&self, seen: &mut BTreeSet<UpperExpr>, out: &mut Vec<UpperExpr>) {
        for child in self.children() {
            child.collect_subformulas(seen, out);
        }
        if seen.insert(self.clone()) {
            out.push(self.clone());
        }
    }

    /// The literal this node is, if it is one: an atom, a belief atom, or
    /// `!` applied to either.
    pub fn as_literal(&self) -> Option<Literal> {
        match self {
            UpperExpr::Atom(name) => Some(Literal::new(Polarity::Plain, LiteralAtom::Prop(name.clone()))),
            UpperExpr::Modal(arg) => Some(Literal::new(Polarity::Plain, LiteralAtom::Modal(arg.clone()))),
            UpperExpr::BNeg(inner) => match inner.as_ref() {
                UpperExpr::Atom(name) => Some(Literal::new(Polarity::BNeg, LiteralAtom::Prop(name.clone()))),
                UpperExpr::Modal(arg) => Some(Literal::new(Polarity::BNeg, LiteralAtom::Modal(arg.clone()))),
                _ => None,
            },
            _ => None,
        }
    }

    /// Propositional and belief atoms occurring anywhere.
    pub fn atoms(&self) -> BTreeSet<LiteralAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<LiteralAtom>) {
        match self {
            UpperExpr::Atom(name) => {
                out.insert(LiteralAtom::Prop(name.clone()));
            }
            UpperExpr::Modal(arg) => {
                out.insert(LiteralAtom::Modal(arg.clone()));
            }
            other => {
                for child in other.children() {
                    child.collect_atoms(out);
                }
            }
        }
    }

    /// The first node kind not admitted by `dialect`, if any.
    pub fn first_violation(&self, dialect: Dialect) -> Option<&'static str> {
        let own = match (self, dialect) {
            (UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::BNeg(_), _) => None,
            (UpperExpr::StrongNeg(_), Dialect::LukNeg) => None,
            (UpperExpr::Imp(..), Dialect::LukNeg) => None,
            (UpperExpr::MeetT(..) | UpperExpr::JoinT(..), Dialect::Bilat | Dialect::Bd) => None,
            (
                UpperExpr::MeetK(..) | UpperExpr::JoinK(..) | UpperExpr::Sup(..) | UpperExpr::Zero,
                Dialect::Bilat,
            ) => None,
            (node, _) => Some(node.connective_name()),
        };
        own.or_else(|| self.children().into_iter().find_map(|c| c.first_violation(dialect)))
    }

    pub fn connective_name(&self) -> &'static str {
        match self {
            UpperExpr::Atom(_) => "atom",
            UpperExpr::Modal(_) => "belief atom",
            UpperExpr::StrongNeg(_) => "~",
            UpperExpr::BNeg(_) => "!",
            UpperExpr::Imp(..) => "->",
            UpperExpr::MeetT(..) => "truth meet",
            UpperExpr::JoinT(..) => "truth join",
            UpperExpr::MeetK(..) => "/\\k",
            UpperExpr::JoinK(..) => "\\/k",
            UpperExpr::Sup(..) => "=>",
            UpperExpr::Zero => "0",
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            UpperExpr::Imp(..) | UpperExpr::Sup(..) => 0,
            UpperExpr::JoinT(..) | UpperExpr::JoinK(..) => 1,
            UpperExpr::MeetT(..) | UpperExpr::MeetK(..) => 2,
            _ => 3,
        }
    }

    /// Renders the expression with the token spelling of `dialect`.
    pub fn display(&self, dialect: Dialect) -> DisplayUpper<'_> {
        DisplayUpper { expr: self, dialect }
    }
}

pub struct DisplayUpper<'a> {
    expr: &'a UpperExpr,
    dialect: Dialect,
}

impl DisplayUpper<'_> {
    fn child<'b>(&self, expr: &'b UpperExpr) -> DisplayUpper<'b> {
        DisplayUpper { expr, dialect: self.dialect }
    }

    fn operand(&self, f: &mut fmt::Formatter<'_>, child: &UpperExpr, min_prec: u8) -> fmt::Result {
        if child.precedence() < min_prec {
            write!(f, "({})", self.child(child))
        } else {
            write!(f, "{}", self.child(child))
        }
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        lhs: &UpperExpr,
        op: &str,
        rhs: &UpperExpr,
        prec: u8,
        right_assoc: bool,
    ) -> fmt::Result {
        let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
        self.operand(f, lhs, lmin)?;
        write!(f, " {op} ")?;
        self.operand(f, rhs, rmin)
    }
}

impl fmt::Display for DisplayUpper<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bd = self.dialect == Dialect::Bd;
        match self.expr {
            UpperExpr::Atom(name) => f.write_str(name),
            UpperExpr::Modal(arg) => write!(f, "B({arg})"),
            UpperExpr::Zero => f.write_str("0"),
            UpperExpr::StrongNeg(a) => {
                f.write_str("~")?;
                self.operand(f, a, 3)
            }
            UpperExpr::BNeg(a) => {
                f.write_str("!")?;
                self.operand(f, a, 3)
            }
            UpperExpr::Imp(a, b) => self.binary(f, a, "->", b, 0, true),
            UpperExpr::Sup(a, b) => self.binary(f, a, "=>", b, 0, true),
            UpperExpr::JoinT(a, b) => self.binary(f, a, if bd { "|" } else { "\\/t" }, b, 1, false),
            UpperExpr::JoinK(a, b) => self.binary(f, a, "\\/k", b, 1, false),
            UpperExpr::MeetT(a, b) => self.binary(f, a, if bd { "&" } else { "/\\t" }, b, 2, false),
            UpperExpr::MeetK(a, b) => self.binary(f, a, "/\\k", b, 2, false),
        }
    }
}

/// An upper-layer formula together with the dialect it is written in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpperFormula {
    dialect: Dialect,
    expr: UpperExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("connective `{connective}` is not part of the {dialect} dialect")]
pub struct DialectError {
    pub dialect: Dialect,
    pub connective: &'static str,
}

impl UpperFormula {
    pub fn new(dialect: Dialect, expr: UpperExpr) -> Result<Self, DialectError> {
        match expr.first_violation(dialect) {
            Some(connective) => Err(DialectError { dialect, connective }),
            None => Ok(UpperFormula { dialect, expr }),
        }
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn expr(&self) -> &UpperExpr {
        &self.expr
    }

    pub fn into_expr(self) -> UpperExpr {
        self.expr
    }
}

impl fmt::Display for UpperFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr.display(self.dialect))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Plain,
    BNeg,
}

/// The atomic part of a literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LiteralAtom {
    Prop(String),
    Modal(LowerFormula),
}

impl LiteralAtom {
    pub fn to_expr(&self) -> UpperExpr {
        match self {
            LiteralAtom::Prop(name) => UpperExpr::Atom(name.clone()),
            LiteralAtom::Modal(arg) => UpperExpr::Modal(arg.clone()),
        }
    }
}

impl fmt::Display for LiteralAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiteralAtom::Prop(name) => f.write_str(name),
            LiteralAtom::Modal(arg) => write!(f, "B({arg})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub polarity: Polarity,
    pub atom: LiteralAtom,
}

impl Literal {
    pub fn new(polarity: Polarity, atom: LiteralAtom) -> Self {
        Literal { polarity, atom }
    }

    pub fn to_expr(&self) -> UpperExpr {
        match self.polarity {
            Polarity::Plain => self.atom.to_expr(),
            Polarity::BNeg => UpperExpr::bneg(self.atom.to_expr()),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Plain => write!(f, "{}", self.atom),
            Polarity::BNeg => write!(f, "!{}", self.atom),
        }
    }
}
