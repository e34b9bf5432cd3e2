//! Text grammar for cirquents.
//!
//! ```text
//! cirquent := "top" | "bot" | literal | "(" cirquent binop cirquent ")"
//! binop    := "and" | "or" | "chand." nat | "chor." nat
//! literal  := ["~"] letter ["@" nat]
//! ```
//!
//! Whitespace is insignificant. A parenthesized chain `(A op B op C)` with a
//! single repeated operator is accepted and read left-associated, as is an
//! unparenthesized chain at the top level.

use thiserror::Error;

use crate::cirquent::{ChoiceKind, Cirquent, Cluster, Letter, Literal, ParKind, Polarity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("elementary letter `{letter}` at {pos} is not allowed outside mixed mode")]
    MixedNotAllowed { pos: usize, letter: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::MixedNotAllowed { pos, .. } => *pos,
        }
    }
}

const KEYWORDS: [&str; 6] = ["top", "bot", "and", "or", "chand", "chor"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Par(ParKind),
    Choice(ChoiceKind, Cluster),
}

/// Character cursor shared by the cirquent, run and proof-line parsers.
#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    mixed: bool,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str, mixed: bool) -> Cursor<'a> {
        Cursor { src, pos: 0, mixed }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    /// `[A-Za-z][A-Za-z0-9_]*`, without consuming it if absent.
    pub fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return None;
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        Some(&rest[..len])
    }

    pub fn peek_ident(&mut self) -> Option<&'a str> {
        let save = self.pos;
        let id = self.ident();
        self.pos = save;
        id
    }

    /// `[A-Za-z0-9_]+`: move payload tokens.
    pub fn token(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return None;
        }
        self.pos += len;
        Some(&rest[..len])
    }

    pub fn nat(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return self.error("expected a natural number");
        }
        let value = rest[..len].parse().or_else(|_| self.error("number out of range"))?;
        self.pos += len;
        Ok(value)
    }

    /// `["~"] letter ["@" nat]`.
    pub fn literal(&mut self) -> Result<Literal, ParseError> {
        let polarity = if self.eat('~') {
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        self.skip_ws();
        let name_pos = self.pos;
        let Some(name) = self.ident() else {
            return self.error("expected a letter");
        };
        if KEYWORDS.contains(&name) {
            self.pos = name_pos;
            return self.error(format!("keyword `{name}` cannot be used as a letter"));
        }
        let letter = Letter::named(name);
        if letter.is_general() {
            if !self.eat('@') {
                return self.error(format!("general letter `{name}` needs a cluster `@n`"));
            }
            let cluster = self.nat()?;
            Ok(Literal::new(letter, cluster, polarity))
        } else {
            if !self.mixed {
                return Err(ParseError::MixedNotAllowed {
                    pos: name_pos,
                    letter: name.to_string(),
                });
            }
            if self.peek() == Some('@') {
                return self.error(format!("elementary letter `{name}` cannot carry a cluster"));
            }
            Ok(Literal::new(letter, 0, polarity))
        }
    }

    fn binop(&mut self) -> Result<Option<BinOp>, ParseError> {
        let save = self.pos;
        let op = match self.peek_ident() {
            Some("and") => {
                self.ident();
                BinOp::Par(ParKind::Pand)
            }
            Some("or") => {
                self.ident();
                BinOp::Par(ParKind::Por)
            }
            Some(kw @ ("chand" | "chor")) => {
                self.ident();
                let kind = if kw == "chand" {
                    ChoiceKind::Chand
                } else {
                    ChoiceKind::Chor
                };
                if !self.eat('.') {
                    return self.error(format!("expected `.` and a cluster after `{kw}`"));
                }
                BinOp::Choice(kind, self.nat()?)
            }
            _ => {
                self.pos = save;
                return Ok(None);
            }
        };
        Ok(Some(op))
    }

    fn atom(&mut self) -> Result<Cirquent, ParseError> {
        match self.peek() {
            None => self.error("unexpected end of input"),
            Some('(') => {
                self.eat('(');
                let c = self.chain()?;
                self.expect(')')?;
                Ok(c)
            }
            Some(_) => match self.peek_ident() {
                Some("top") => {
                    self.ident();
                    Ok(Cirquent::Top)
                }
                Some("bot") => {
                    self.ident();
                    Ok(Cirquent::Bot)
                }
                _ => self.literal().map(Cirquent::Lit),
            },
        }
    }

    fn chain(&mut self) -> Result<Cirquent, ParseError> {
        let mut acc = self.atom()?;
        let mut first_op: Option<BinOp> = None;
        while let Some(op) = self.binop()? {
            match first_op {
                None => first_op = Some(op),
                Some(prev) if prev != op => {
                    return self.error("mixed operators in one group need parentheses");
                }
                Some(_) => {}
            }
            let rhs = self.atom()?;
            acc = match op {
                BinOp::Par(k) => Cirquent::par(k, acc, rhs),
                BinOp::Choice(k, c) => Cirquent::choice(k, c, acc, rhs),
            };
        }
        Ok(acc)
    }

    /// A complete cirquent (possibly an unparenthesized chain).
    pub fn cirquent(&mut self) -> Result<Cirquent, ParseError> {
        self.chain()
    }
}

/// Parses cirquent text. With `mixed == false`, elementary (lowercase)
/// letters are rejected.
pub fn parse_cirquent(text: &str, mixed: bool) -> Result<Cirquent, ParseError> {
    let mut cur = Cursor::new(text, mixed);
    let c = cur.cirquent()?;
    if !cur.at_end() {
        return cur.error("trailing input");
    }
    Ok(c)
}

/// Parses a general-base cirquent, panicking on error. Meant for literals in
/// tests and built-in corpora.
pub fn cq(text: &str) -> Cirquent {
    parse_cirquent(text, true).unwrap_or_else(|e| panic!("bad cirquent {text:?}: {e}"))
}
