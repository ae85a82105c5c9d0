//! The textual polynomial syntax shared by every module.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" integer)?
//! atom  := integer | name | "(" expr ")"
//! name  := [a-zA-Z][a-zA-Z0-9_']*
//! ```
//!
//! Rational literals are written as quotients (`1/2`). Points are written
//! `(x ; y)` or `O`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Field, RatFunc, Rational, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {position}: {message}")]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

/// Failure to evaluate a parsed expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("division is not allowed here")]
    DivisionNotAllowed,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_division(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::Var(_) => false,
            Expr::Div(..) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.contains_division(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.contains_division() || b.contains_division(),
        }
    }

    /// Evaluates in a field, resolving names through `lookup`.
    pub fn eval<F: Field>(&self, one: &F, lookup: &dyn Fn(&str) -> Option<F>) -> Result<F, EvalError> {
        Ok(match self {
            Expr::Int(k) => one.from_rational_like(&Rational::from_integer(k.clone())),
            Expr::Var(v) => lookup(v).ok_or_else(|| EvalError::UnknownVariable(v.clone()))?,
            Expr::Neg(a) => -a.eval(one, lookup)?,
            Expr::Add(a, b) => a.eval(one, lookup)? + &b.eval(one, lookup)?,
            Expr::Sub(a, b) => a.eval(one, lookup)? - &b.eval(one, lookup)?,
            Expr::Mul(a, b) => a.eval(one, lookup)? * &b.eval(one, lookup)?,
            Expr::Div(a, b) => a.eval(one, lookup)?.try_div(&b.eval(one, lookup)?)?,
            Expr::Pow(a, e) => a.eval(one, lookup)?.pow(*e),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        // Left operands keep equal precedence bare; right operands need a
        // strictly tighter one (all binary operators are left-associative).
        let side = |f: &mut fmt::Formatter<'_>, e: &Expr, right: bool| -> fmt::Result {
            let q = e.precedence();
            if q < p || (right && q == p) {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                side(f, a, false)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => " / ",
                };
                side(f, a, false)?;
                f.write_str(op)?;
                side(f, b, true)
            }
            Expr::Pow(a, e) => {
                if a.precedence() < 5 {
                    write!(f, "({a})^{e}")
                } else {
                    write!(f, "{a}^{e}")
                }
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError { position: self.pos, message: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("exponent must be a nonnegative integer literal");
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
            let e: u32 = match digits.parse() {
                Ok(e) => e,
                Err(_) => {
                    self.pos = start;
                    return self.err("exponent too large");
                }
            };
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(Expr::Int(digits.parse().expect("digits parse")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_' || self.s[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                Ok(Expr::Var(std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string()))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a complete expression.
pub fn parse(input: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { s: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses an element of ℚ(`var`).
pub fn parse_ratfunc(input: &str, var: &str) -> Result<RatFunc, EvalError> {
    let e = parse(input)?;
    let v = Var::new(var);
    let one = RatFunc::one(v.clone());
    e.eval(&one, &|name| (name == var).then(|| RatFunc::variable(v.clone())))
}

/// Parses a rational number such as `-3/4`.
pub fn parse_rational(input: &str) -> Result<Rational, EvalError> {
    let e = parse(input)?;
    e.eval(&Rational::one(), &|_| None)
}

/// A point literal: `O` or a coordinate pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointLiteral {
    Infinity,
    Affine(Expr, Expr),
}

pub fn parse_point(input: &str) -> Result<PointLiteral, SyntaxError> {
    let t = input.trim();
    if t == "O" {
        return Ok(PointLiteral::Infinity);
    }
    let offset = input.len() - input.trim_start().len();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or(SyntaxError { position: offset, message: "expected '(x ; y)' or 'O'".into() })?;
    let Some(semi) = inner.find(';') else {
        return Err(SyntaxError { position: offset + 1, message: "expected ';' between coordinates".into() });
    };
    let shift = |e: SyntaxError, by: usize| SyntaxError { position: e.position + by, ..e };
    let x = parse(&inner[..semi]).map_err(|e| shift(e, offset + 1))?;
    let y = parse(&inner[semi + 1..]).map_err(|e| shift(e, offset + semi + 2))?;
    Ok(PointLiteral::Affine(x, y))
}

/// `Expr` for a rational constant, as a quotient when needed.
pub fn rational_expr(q: &Rational) -> Expr {
    let n = Expr::Int(q.numer().magnitude().clone().into());
    let body = if q.denom().is_one() {
        n
    } else {
        Expr::Div(Box::new(n), Box::new(Expr::Int(q.denom().clone())))
    };
    if q.numer() < &BigInt::zero() {
        Expr::Neg(Box::new(body))
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("1 - 2 - 3").unwrap().to_string(), "1 - 2 - 3");
        assert_eq!(parse("1 - (2 - 3)").unwrap().to_string(), "1 - (2 - 3)");
        assert_eq!(parse("(x+1)^2*y").unwrap().to_string(), "(x + 1)^2*y");
        assert_eq!(parse("-x^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var("x".into())), 2))));
        assert_eq!(parse("x/(y*z)").unwrap().to_string(), "x / (y*z)");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x + * 2").unwrap_err();
        assert_eq!(e.position, 4);
        assert_eq!(parse("x^y").unwrap_err().position, 2);
        assert_eq!(parse("(x").unwrap_err().message, "expected ')'");
        assert!(parse("x y").is_err());
    }

    #[test]
    fn ratfunc_round_trip_examples() {
        for s in ["(t^2 - 1) / (t - 1)", "2*t/4", "1/(t^3+t+1)", "-t^2/3 + 5"] {
            let f = parse_ratfunc(s, "t").unwrap();
            assert_eq!(parse_ratfunc(&f.to_string(), "t").unwrap(), f, "{s} -> {f}");
        }
        assert_eq!(parse_ratfunc("(t^2-1)/(t-1)", "t").unwrap().to_string(), "t + 1");
        assert!(matches!(parse_ratfunc("s", "t"), Err(EvalError::UnknownVariable(_))));
        assert!(matches!(parse_ratfunc("1/(t-t)", "t"), Err(EvalError::Algebra(_))));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point(" O ").unwrap(), PointLiteral::Infinity);
        let PointLiteral::Affine(x, y) = parse_point("(t ; 1)").unwrap() else { panic!() };
        assert_eq!((x.to_string(), y.to_string()), ("t".into(), "1".into()));
        assert!(parse_point("(t, 1)").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..20).prop_map(|k| Expr::Int(k.into())),
            prop::sample::select(vec!["x", "y", "t"]).prop_map(|v| Expr::Var(v.into())),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner, 0u32..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
