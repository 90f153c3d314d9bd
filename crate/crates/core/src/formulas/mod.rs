//! Formula syntax for both layers: event formulas over Belnap-Dunn
//! connectives, and upper-layer formulas over belief atoms `B(phi)`.

mod lower;
mod nnf;
mod parse;
mod upper;

pub use lower::{is_valid_atom_name, LowerFormula};
pub use nnf::{is_nnf, neg_translate, neg_translate_of, nnf, nnf_of};
pub use parse::{parse_lower, parse_upper, ParseError, ParseErrorKind};
pub use upper::{
    Dialect, DialectError, DisplayUpper, Literal, LiteralAtom, Polarity, UpperExpr, UpperFormula,
};

#[cfg(test)]
mod tests;
