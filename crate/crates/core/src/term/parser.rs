//! Recursive-descent parser for the identity language.
//!
//! ```text
//! input   := [ 'vars' ident (',' ident)* ';' ] expr
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := '0' | [rat '*'] factor ('*' factor)*
//! factor  := ident | 'a(' expr ')' | 'a2(' expr ')'
//!          | 'J(' expr ',' expr ',' expr ')'
//!          | 'G(' expr ',' expr ',' expr ',' expr ')'
//!          | '(' expr ')' | '-' factor
//! rat     := integer ['/' positive-integer]
//! ident   := [a-z][a-z0-9_]* ['#' digits]      (not `a`, `a2`)
//! ```
//!
//! `*` is the algebra product and associates to the left. Macros are expanded
//! while parsing, so the result never contains `J` or `G`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{expand_macros, Macro, RawExpr, RawTerm, Vars};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    InvalidCharacter(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("{name} expects {expected} arguments, got {got}")]
    Arity { name: &'static str, expected: usize, got: usize },
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("{0:?} is reserved and cannot be used as a variable")]
    ReservedName(String),
    #[error("a nonzero scalar needs a factor")]
    ScalarWithoutFactor,
    #[error("denominator must be a positive integer")]
    BadDenominator,
    #[error("variable {0:?} declared twice")]
    DuplicateVar(String),
}

/// Result of parsing a complete input: the expression and its variable table.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub vars: Vars,
    pub expr: RawExpr<Rational>,
}

/// Parses `text` with a fresh variable table. A `vars ...;` header fixes the
/// variable order; without one, variables are sorted by name (`x#2` before
/// `x#10`).
pub fn parse_expr(text: &str) -> Result<Parsed, ParseError> {
    let mut vars = Vars::new();
    let (expr, had_header) = parse_into(text, &mut vars)?;
    if had_header {
        return Ok(Parsed { vars, expr });
    }
    let mut names: Vec<&str> = vars.names().iter().map(String::as_str).collect();
    names.sort_by_key(|n| name_key(n));
    let sorted = Vars::from_names(names);
    let expr = expr.substitute(&|v| RawExpr::term(RawTerm::leaf(sorted.get(vars.name(v)).expect("same names"))));
    Ok(Parsed { vars: sorted, expr })
}

fn name_key(name: &str) -> (&str, Option<u64>) {
    match name.rsplit_once('#') {
        Some((base, n)) => (base, n.parse().ok()),
        None => (name, None),
    }
}

/// Parses `text` against an existing table, registering new names at its end.
pub fn parse_expr_in(text: &str, vars: &mut Vars) -> Result<RawExpr<Rational>, ParseError> {
    parse_into(text, vars).map(|(e, _)| e)
}

fn parse_into(text: &str, vars: &mut Vars) -> Result<(RawExpr<Rational>, bool), ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0, vars };
    let had_header = p.header()?;
    let e = p.expr()?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok((e, had_header))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Upper(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Upper(s) => write!(f, "{s:?}"),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::Semi => f.write_str("';'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l0, column: c0 });
            advance(1, &mut i);
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_lowercase() {
            while i < chars.len() && (chars[i].is_ascii_lowercase() || chars[i].is_ascii_digit() || chars[i] == '_') {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '#' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_uppercase() {
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Upper(s), line: l0, column: c0 });
            continue;
        }
        return Err(ParseError { line: l0, column: c0, kind: ParseErrorKind::InvalidCharacter(c) });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'v> {
    tokens: Vec<Spanned>,
    pos: usize,
    vars: &'v mut Vars,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.tokens[self.pos];
        ParseError { line: s.line, column: s.column, kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.error_here(ParseErrorKind::Unexpected { expected, found: self.peek().to_string() })
    }

    fn expect(&mut self, tok: &Tok, expected: &'static str) -> PResult<()> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn header(&mut self) -> PResult<bool> {
        let is_header = matches!(self.peek(), Tok::Ident(s) if s == "vars") && matches!(self.peek_at(1), Tok::Ident(_));
        if !is_header {
            return Ok(false);
        }
        self.bump();
        loop {
            let name = match self.peek().clone() {
                Tok::Ident(name) => name,
                _ => return Err(self.unexpected("variable name")),
            };
            self.check_name(&name)?;
            if self.vars.get(&name).is_some() {
                return Err(self.error_here(ParseErrorKind::DuplicateVar(name)));
            }
            self.vars.intern(&name);
            self.bump();
            match self.bump() {
                Tok::Comma => continue,
                Tok::Semi => return Ok(true),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("',' or ';'"));
                }
            }
        }
    }

    fn check_name(&self, name: &str) -> PResult<()> {
        if name == "a" || name == "a2" {
            Err(self.error_here(ParseErrorKind::ReservedName(name.to_string())))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> PResult<RawExpr<Rational>> {
        let mut negate = false;
        match self.peek() {
            Tok::Plus => {
                self.bump();
            }
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<RawExpr<Rational>> {
        let mut scalar = None;
        if matches!(self.peek(), Tok::Int(_)) {
            let q = self.rational()?;
            if self.peek() != &Tok::Star {
                if q.is_zero() {
                    return Ok(RawExpr::zero());
                }
                return Err(self.error_here(ParseErrorKind::ScalarWithoutFactor));
            }
            self.bump();
            scalar = Some(q);
        }
        let mut acc = self.factor()?;
        while self.peek() == &Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            acc = acc.mul(&rhs);
        }
        Ok(match scalar {
            Some(q) => acc.scale(&q),
            None => acc,
        })
    }

    fn rational(&mut self) -> PResult<Rational> {
        let Tok::Int(n) = self.bump() else { unreachable!("caller checked for an integer") };
        if self.peek() != &Tok::Slash {
            return Ok(Rational::from_integer(n));
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(d) if !d.is_zero() => {
                self.bump();
                Ok(Rational::new(n, d))
            }
            _ => Err(self.error_here(ParseErrorKind::BadDenominator)),
        }
    }

    fn factor(&mut self) -> PResult<RawExpr<Rational>> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(-self.factor()?)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.peek_at(1) == &Tok::LParen {
                    let depth = match name.as_str() {
                        "a" => 1,
                        "a2" => 2,
                        _ => return Err(self.error_here(ParseErrorKind::UnknownFunction(name))),
                    };
                    self.bump();
                    self.bump();
                    let mut e = self.expr()?;
                    self.expect(&Tok::RParen, "')'")?;
                    for _ in 0..depth {
                        e = e.twist();
                    }
                    return Ok(e);
                }
                self.check_name(&name)?;
                self.bump();
                let id = self.vars.intern(&name);
                Ok(RawExpr::term(RawTerm::Leaf(id)))
            }
            Tok::Upper(name) => {
                let call = match name.as_str() {
                    "J" => Macro::J,
                    "G" => Macro::G,
                    _ => return Err(self.error_here(ParseErrorKind::UnknownFunction(name))),
                };
                let at = self.pos;
                self.bump();
                self.expect(&Tok::LParen, "'('")?;
                let mut args = vec![self.expr()?];
                while self.peek() == &Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(&Tok::RParen, "')'")?;
                expand_macros(call, &args).map_err(|e| {
                    let s = &self.tokens[at];
                    ParseError {
                        line: s.line,
                        column: s.column,
                        kind: ParseErrorKind::Arity { name: e.name, expected: e.expected, got: e.got },
                    }
                })
            }
            _ => Err(self.unexpected("a factor")),
        }
    }
}
