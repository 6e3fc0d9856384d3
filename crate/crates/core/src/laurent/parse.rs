//! Text grammar for Laurent polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' ['-'] int)?
//! atom   := int | ident | 'E(' int ')' | '(' expr ')'
//! ```
//!
//! Division and negative powers need a single-term (invertible) operand.

use super::{LaurentPoly, VarSet};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token::Int(chars[start..i].iter().collect()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::parse(format!("unexpected character '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    ring: &'a Ring,
    source: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, what: &str) -> Error {
        Error::parse(format!("{what} at token {} in '{}'", self.pos, self.source))
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{op}'")))
        }
    }

    fn expect_int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Token::Int(s)) => {
                let v = s.parse::<u64>().map_err(|_| self.error("integer too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat_op('-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat_op('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = d.monomial_inverse().map_err(|_| self.error("division by a non-monomial"))?;
                acc = acc.try_mul(&inv)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentPoly> {
        if self.eat_op('-') {
            Ok(self.unary()?.neg())
        } else if self.eat_op('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let negative = self.eat_op('-');
        let e = u32::try_from(self.expect_int()?).map_err(|_| self.error("exponent too large"))?;
        if negative {
            if base.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let inv = base
                .monomial_inverse()
                .map_err(|_| self.error("negative power of a non-monomial"))?;
            inv.pow(e)
        } else {
            base.pow(e)
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let empty = VarSet::empty();
        match self.peek().cloned() {
            Some(Token::Int(s)) => {
                self.pos += 1;
                let q: Rational = s.parse()?;
                Ok(LaurentPoly::constant(self.ring.from_rational(&q)?, &empty))
            }
            Some(Token::Ident(name)) if name == "E" => {
                self.pos += 1;
                self.expect_op('(')?;
                let n = self.expect_int()?;
                self.expect_op(')')?;
                Ok(LaurentPoly::constant(self.ring.root_of_unity(n)?, &empty))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                LaurentPoly::var(self.ring, &name)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_op(')')?;
                Ok(inner)
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

/// Parses `text` over `ring`. The result's variables are `vars` (when given)
/// together with any further names that occur in the text.
pub fn parse_poly(text: &str, ring: &Ring, vars: Option<&VarSet>) -> Result<LaurentPoly> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::parse("empty expression"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        ring,
        source: text,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    match vars {
        Some(v) => poly.with_vars(&v.union(poly.vars())),
        None => Ok(poly),
    }
}
