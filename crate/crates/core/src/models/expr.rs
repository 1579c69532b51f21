//! Boolean expressions for network update functions.
//!
//! Precedence from loosest to tightest: `->` (right associative), `|` and
//! `^` (left associative, same level), `&`, `!`. Atoms are identifiers,
//! `0`, `1` and parenthesized expressions.

use std::collections::BTreeSet;
use std::fmt;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Var(String),
    Const(bool),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(name: &str) -> BoolExpr {
        BoolExpr::Var(name.to_string())
    }

    pub fn eval(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            BoolExpr::Var(v) => value(v),
            BoolExpr::Const(c) => *c,
            BoolExpr::Not(a) => !a.eval(value),
            BoolExpr::And(a, b) => a.eval(value) && b.eval(value),
            BoolExpr::Or(a, b) => a.eval(value) || b.eval(value),
            BoolExpr::Xor(a, b) => a.eval(value) ^ b.eval(value),
            BoolExpr::Implies(a, b) => !a.eval(value) || b.eval(value),
        }
    }

    /// Variable names occurring in the expression.
    pub fn support(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            BoolExpr::Var(v) => {
                out.insert(v.as_str());
            }
            BoolExpr::Const(_) => {}
            BoolExpr::Not(a) => a.collect(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) | BoolExpr::Implies(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Implies(..) => 0,
            BoolExpr::Or(..) | BoolExpr::Xor(..) => 1,
            BoolExpr::And(..) => 2,
            BoolExpr::Not(_) => 3,
            BoolExpr::Var(_) | BoolExpr::Const(_) => 4,
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &BoolExpr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        let p = self.precedence();
        match self {
            BoolExpr::Var(v) => f.write_str(v),
            BoolExpr::Const(c) => f.write_str(if *c { "1" } else { "0" }),
            BoolExpr::Not(a) => {
                f.write_str("!")?;
                wrap(f, a, p)
            }
            BoolExpr::Implies(a, b) => {
                wrap(f, a, p + 1)?;
                f.write_str(" -> ")?;
                wrap(f, b, p)
            }
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) | BoolExpr::Xor(a, b) => {
                let sym = match self {
                    BoolExpr::And(..) => " & ",
                    BoolExpr::Or(..) => " | ",
                    _ => " ^ ",
                };
                wrap(f, a, p)?;
                f.write_str(sym)?;
                wrap(f, b, p + 1)
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<BoolExpr> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.implies()?;
            return Ok(BoolExpr::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<BoolExpr> {
        let mut lhs = self.and()?;
        loop {
            if self.eat("|") {
                lhs = BoolExpr::Or(Box::new(lhs), Box::new(self.and()?));
            } else if self.eat("^") {
                lhs = BoolExpr::Xor(Box::new(lhs), Box::new(self.and()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn and(&mut self) -> Result<BoolExpr> {
        let mut lhs = self.not()?;
        while self.eat("&") {
            lhs = BoolExpr::And(Box::new(lhs), Box::new(self.not()?));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<BoolExpr> {
        if self.eat("!") {
            return Ok(BoolExpr::Not(Box::new(self.not()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<BoolExpr> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Err(self.error("unexpected end of expression"));
        };
        if c == '(' {
            self.pos += 1;
            let e = self.implies()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(e);
        }
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let word = &rest[..len];
        match word {
            "" => Err(self.error(format!("unexpected `{c}`"))),
            "0" => {
                self.pos += 1;
                Ok(BoolExpr::Const(false))
            }
            "1" => {
                self.pos += 1;
                Ok(BoolExpr::Const(true))
            }
            w if w.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') => {
                self.pos += len;
                Ok(BoolExpr::Var(w.to_string()))
            }
            w => Err(self.error(format!("invalid identifier `{w}`"))),
        }
    }
}

/// Parse an expression; errors carry the byte offset of the problem.
pub fn parse_bool_expr(text: &str) -> Result<BoolExpr> {
    let mut p = Parser { text, pos: 0 };
    let e = p.implies()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}
