//! A tiny exact evaluator for the closed-form entries stored as text.
//!
//! Every hard-coded table entry and asymptotic formula in this crate is kept
//! as a string written the way it appears in the published tables, e.g.
//! `"(N-1)*(N-2)/(2*N^3)"`. Keeping them as data makes the tables diffable
//! against their source, and evaluation over [`Q`] keeps the results exact.
//!
//! Grammar: `+ - * / ^`, parentheses, unary minus, integer literals and
//! identifiers. The exponent of `^` must evaluate to an integer.

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

/// Variable bindings for evaluation.
pub type Env = HashMap<&'static str, Q>;

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser { tokens: &tokens, pos: 0 };
        let e = p.sum()?;
        if p.pos != tokens.len() {
            return Err(parse_err(src, "trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, env: &Env) -> Result<Q> {
        Ok(match self {
            Expr::Num(n) => Q::from_integer((*n).into()),
            Expr::Var(v) => env
                .get(v.as_str())
                .cloned()
                .ok_or_else(|| Error::Invariant(format!("unbound variable {v}")))?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            Expr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
            Expr::Mul(a, b) => a.eval(env)? * b.eval(env)?,
            Expr::Div(a, b) => {
                let d = b.eval(env)?;
                if d.is_zero() {
                    return Err(Error::Validation("division by zero in formula".into()));
                }
                a.eval(env)? / d
            }
            Expr::Pow(a, b) => {
                let base = a.eval(env)?;
                let e = b.eval(env)?;
                if !e.is_integer() {
                    return Err(Error::Invariant("non-integer exponent".into()));
                }
                let k = e.to_integer().to_i32().ok_or_else(|| Error::Invariant("exponent too large".into()))?;
                if k < 0 && base.is_zero() {
                    return Err(Error::Validation("division by zero in formula".into()));
                }
                num_traits::pow::Pow::pow(base, k)
            }
        })
    }
}

/// Parses and evaluates in one go.
pub fn eval_str(src: &str, env: &Env) -> Result<Q> {
    Expr::parse(src)?.eval(env)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn parse_err(src: &str, why: &str) -> Error {
    Error::Invariant(format!("cannot parse formula {src:?}: {why}"))
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
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
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| parse_err(src, "integer overflow"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(parse_err(src, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // `^` binds tighter than unary minus and is right-associative.
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Invariant("unbalanced parenthesis in formula".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(Error::Invariant("unexpected end of formula".into())),
        }
    }
}
