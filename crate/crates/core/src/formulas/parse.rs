//! Recursive-descent parser for both formula layers.
//!
//! ```text
//! lower   := or
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | IDENT | '(' or ')'
//!
//! upper   := imp ('<->' upper)?
//! imp     := join (('->' | '=>' | '<=') imp)?
//! join    := meet (('(+)' | '(-)' | '\/t' | '\/k' | '|') meet)*
//! meet    := unary (('*' | '/\t' | '/\k' | '&') unary)*
//! unary   := ('!' | '~') unary | 'B' '(' lower ')' | IDENT | '0' | '(' upper ')'
//! ```
//!
//! Which upper tokens are admitted depends on the dialect; derived
//! connectives are expanded while parsing.

use std::fmt;

use super::lower::LowerFormula;
use super::upper::{Dialect, DialectError, UpperExpr, UpperFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Ident,
    Belief,
    Zero,
    LParen,
    RParen,
    Bang,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Equiv,
    Sup,
    Sub,
    Oplus,
    Ominus,
    Star,
    MeetT,
    JoinT,
    MeetK,
    JoinK,
}

impl Tok {
    fn spelling(self) -> &'static str {
        match self {
            Tok::Ident => "identifier",
            Tok::Belief => "B",
            Tok::Zero => "0",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Bang => "!",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Arrow => "->",
            Tok::Equiv => "<->",
            Tok::Sup => "=>",
            Tok::Sub => "<=",
            Tok::Oplus => "(+)",
            Tok::Ominus => "(-)",
            Tok::Star => "*",
            Tok::MeetT => "/\\t",
            Tok::JoinT => "\\/t",
            Tok::MeetK => "/\\k",
            Tok::JoinK => "\\/k",
        }
    }

    fn admitted_in(self, dialect: Dialect) -> bool {
        use Tok::*;
        match self {
            Ident | Belief | LParen | RParen | Bang => true,
            Tilde | Arrow | Equiv | Oplus | Ominus | Star => {
                matches!(dialect, Dialect::LukNeg | Dialect::Bilat)
            }
            Amp | Pipe => dialect == Dialect::Bd,
            Zero | Sup | Sub | MeetT | JoinT | MeetK | JoinK => dialect == Dialect::Bilat,
        }
    }
}

#[derive(Clone, Debug)]
struct Token<'a> {
    kind: Tok,
    text: &'a str,
    offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(String),
    Unexpected { expected: &'static str, found: String },
    Dialect(DialectError),
}

/// A parse failure, with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnknownToken(t) => {
                write!(f, "unknown token `{t}` at offset {}", self.offset)
            }
            ParseErrorKind::Unexpected { expected, found } => write!(
                f,
                "syntax error at offset {}: expected {expected}, found {found}",
                self.offset
            ),
            ParseErrorKind::Dialect(e) => write!(f, "{e} (at offset {})", self.offset),
        }
    }
}

const SYMBOLS: &[(&str, Tok)] = &[
    ("(+)", Tok::Oplus),
    ("(-)", Tok::Ominus),
    ("<->", Tok::Equiv),
    ("->", Tok::Arrow),
    ("=>", Tok::Sup),
    ("<=", Tok::Sub),
    ("/\\t", Tok::MeetT),
    ("/\\k", Tok::MeetK),
    ("\\/t", Tok::JoinT),
    ("\\/k", Tok::JoinK),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("!", Tok::Bang),
    ("~", Tok::Tilde),
    ("&", Tok::Amp),
    ("|", Tok::Pipe),
    ("*", Tok::Star),
];

fn tokenize(text: &str) -> Result<Vec<Token<'_>>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        for (sym, kind) in SYMBOLS {
            if rest.starts_with(sym) {
                out.push(Token { kind: *kind, text: &text[i..i + sym.len()], offset: i });
                i += sym.len();
                continue 'outer;
            }
        }
        let word_len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        if word_len > 0 {
            let word = &text[i..i + word_len];
            let kind = if word == "B" {
                Some(Tok::Belief)
            } else if word == "0" {
                Some(Tok::Zero)
            } else if super::lower::is_valid_atom_name(word) {
                Some(Tok::Ident)
            } else {
                None
            };
            match kind {
                Some(kind) => out.push(Token { kind, text: word, offset: i }),
                None => {
                    return Err(ParseError {
                        offset: i,
                        kind: ParseErrorKind::UnknownToken(word.to_string()),
                    })
                }
            }
            i += word_len;
            continue;
        }
        let ch = rest.chars().next().unwrap_or('?');
        return Err(ParseError { offset: i, kind: ParseErrorKind::UnknownToken(ch.to_string()) });
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    end: usize,
    dialect: Option<Dialect>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, dialect: Option<Dialect>) -> Result<Self, ParseError> {
        Ok(Parser { tokens: tokenize(text)?, pos: 0, end: text.len(), dialect })
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<Tok> {
        self.peek().map(|t| t.kind)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of input".to_string(),
        };
        ParseError { offset: self.offset(), kind: ParseErrorKind::Unexpected { expected, found } }
    }

    fn bump(&mut self) -> Token<'a> {
        let t = self.tokens[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, kind: Tok, expected: &'static str) -> Result<Token<'a>, ParseError> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.tokens.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }

    // ---- lower language ----

    fn lower_or(&mut self) -> Result<LowerFormula, ParseError> {
        let mut lhs = self.lower_and()?;
        while self.peek_kind() == Some(Tok::Pipe) {
            self.bump();
            let rhs = self.lower_and()?;
            lhs = LowerFormula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn lower_and(&mut self) -> Result<LowerFormula, ParseError> {
        let mut lhs = self.lower_unary()?;
        while self.peek_kind() == Some(Tok::Amp) {
            self.bump();
            let rhs = self.lower_unary()?;
            lhs = LowerFormula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn lower_unary(&mut self) -> Result<LowerFormula, ParseError> {
        match self.peek_kind() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(LowerFormula::neg(self.lower_unary()?))
            }
            Some(Tok::Ident) => Ok(LowerFormula::atom(self.bump().text)),
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.lower_or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("formula")),
        }
    }

    // ---- upper language ----

    fn dialect(&self) -> Dialect {
        self.dialect.expect("upper parsing requires a dialect")
    }

    /// Consumes the next token if it is one of `kinds`, checking that the
    /// dialect admits it.
    fn take_op(&mut self, kinds: &[Tok]) -> Result<Option<Tok>, ParseError> {
        let Some(tok) = self.peek() else { return Ok(None) };
        if !kinds.contains(&tok.kind) {
            return Ok(None);
        }
        let dialect = self.dialect();
        if !tok.kind.admitted_in(dialect) {
            return Err(ParseError {
                offset: tok.offset,
                kind: ParseErrorKind::Dialect(DialectError { dialect, connective: tok.kind.spelling() }),
            });
        }
        Ok(Some(self.bump().kind))
    }

    fn upper_equiv(&mut self) -> Result<UpperExpr, ParseError> {
        let lhs = self.upper_imp()?;
        if self.take_op(&[Tok::Equiv])?.is_some() {
            let rhs = self.upper_equiv()?;
            return Ok(match self.dialect() {
                Dialect::Bilat => UpperExpr::bilat_equiv(lhs, rhs),
                _ => UpperExpr::luk_equiv(lhs, rhs),
            });
        }
        Ok(lhs)
    }

    fn upper_imp(&mut self) -> Result<UpperExpr, ParseError> {
        let lhs = self.upper_join()?;
        match self.take_op(&[Tok::Arrow, Tok::Sup, Tok::Sub])? {
            Some(op) => {
                let rhs = self.upper_imp()?;
                Ok(match (op, self.dialect()) {
                    (Tok::Arrow, Dialect::Bilat) => UpperExpr::bilat_imp(lhs, rhs),
                    (Tok::Arrow, _) => UpperExpr::imp(lhs, rhs),
                    (Tok::Sup, _) => UpperExpr::sup(lhs, rhs),
                    (_, _) => UpperExpr::bilat_sub(lhs, rhs),
                })
            }
            None => Ok(lhs),
        }
    }

    fn upper_join(&mut self) -> Result<UpperExpr, ParseError> {
        let mut lhs = self.upper_meet()?;
        while let Some(op) =
            self.take_op(&[Tok::Oplus, Tok::Ominus, Tok::JoinT, Tok::JoinK, Tok::Pipe])?
        {
            let rhs = self.upper_meet()?;
            let bilat = self.dialect() == Dialect::Bilat;
            lhs = match op {
                Tok::Oplus if bilat => UpperExpr::bilat_oplus(lhs, rhs),
                Tok::Oplus => UpperExpr::luk_oplus(lhs, rhs),
                Tok::Ominus if bilat => UpperExpr::bilat_ominus(lhs, rhs),
                Tok::Ominus => UpperExpr::luk_ominus(lhs, rhs),
                Tok::JoinK => UpperExpr::join_k(lhs, rhs),
                _ => UpperExpr::join_t(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn upper_meet(&mut self) -> Result<UpperExpr, ParseError> {
        let mut lhs = self.upper_unary()?;
        while let Some(op) = self.take_op(&[Tok::Star, Tok::MeetT, Tok::MeetK, Tok::Amp])? {
            let rhs = self.upper_unary()?;
            lhs = match op {
                Tok::Star if self.dialect() == Dialect::Bilat => UpperExpr::bilat_times(lhs, rhs),
                Tok::Star => UpperExpr::luk_times(lhs, rhs),
                Tok::MeetK => UpperExpr::meet_k(lhs, rhs),
                _ => UpperExpr::meet_t(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn upper_unary(&mut self) -> Result<UpperExpr, ParseError> {
        if let Some(op) = self.take_op(&[Tok::Bang, Tok::Tilde])? {
            let inner = self.upper_unary()?;
            return Ok(match (op, self.dialect()) {
                (Tok::Bang, _) => UpperExpr::bneg(inner),
                (_, Dialect::Bilat) => UpperExpr::bilat_strong_neg(inner),
                (_, _) => UpperExpr::strong_neg(inner),
            });
        }
        if self.take_op(&[Tok::Zero])?.is_some() {
            return Ok(UpperExpr::Zero);
        }
        match self.peek_kind() {
            Some(Tok::Belief) => {
                self.bump();
                self.expect(Tok::LParen, "`(` after B")?;
                let arg = self.lower_or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(UpperExpr::modal(arg))
            }
            Some(Tok::Ident) => Ok(UpperExpr::atom(self.bump().text)),
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.upper_equiv()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("formula")),
        }
    }
}

/// Parses an event-language formula (`!`, `&`, `|`).
pub fn parse_lower(text: &str) -> Result<LowerFormula, ParseError> {
    let mut parser = Parser::new(text, None)?;
    let formula = parser.lower_or()?;
    parser.finish()?;
    Ok(formula)
}

/// Parses an upper-language formula in the given dialect, expanding derived
/// connectives.
pub fn parse_upper(text: &str, dialect: Dialect) -> Result<UpperFormula, ParseError> {
    let mut parser = Parser::new(text, Some(dialect))?;
    let expr = parser.upper_equiv()?;
    parser.finish()?;
    UpperFormula::new(dialect, expr)
        .map_err(|e| ParseError { offset: 0, kind: ParseErrorKind::Dialect(e) })
}
