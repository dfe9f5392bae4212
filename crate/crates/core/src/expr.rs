//! Arithmetic expressions over the point coordinate `t` and the argument `u`.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | primary
//! primary := number | "inf" | "t" | "u" | "(" expr ")"
//!          | "pow" "(" expr "," expr ")"
//!          | ("min" | "max") "(" expr ("," expr)+ ")"
//! number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    T,
    U,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser::new(src, 0);
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::parse(p.offset(), "unexpected trailing input"));
        }
        Ok(e)
    }

    /// Parses an expression embedded at byte offset `base` of a larger source,
    /// so errors report positions in the outer text.
    pub(crate) fn parse_at(src: &str, base: usize) -> Result<Expr> {
        let mut p = Parser::new(src, base);
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::parse(p.offset(), "unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self, t: f64, u: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::T => t,
            Expr::U => u,
            Expr::Neg(e) => -e.eval(t, u),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(t, u), b.eval(t, u));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => {
                        // 0 * inf = 0, matching the extended-real convention
                        if x == 0.0 || y == 0.0 {
                            0.0
                        } else {
                            x * y
                        }
                    }
                    BinOp::Div => x / y,
                }
            }
            Expr::Pow(a, b) => libm::pow(a.eval(t, u), b.eval(t, u)),
            Expr::Min(args) => args
                .iter()
                .map(|e| e.eval(t, u))
                .fold(f64::INFINITY, f64::min),
            Expr::Max(args) => args
                .iter()
                .map(|e| e.eval(t, u))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn uses_u(&self) -> bool {
        match self {
            Expr::U => true,
            Expr::Const(_) | Expr::T => false,
            Expr::Neg(e) => e.uses_u(),
            Expr::Bin(_, a, b) | Expr::Pow(a, b) => a.uses_u() || b.uses_u(),
            Expr::Min(v) | Expr::Max(v) => v.iter().any(Expr::uses_u),
        }
    }

    /// The value if the expression does not depend on `t` or `u`.
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            Expr::T | Expr::U => None,
            Expr::Neg(e) => e.as_const().map(|c| -c),
            Expr::Bin(..) | Expr::Pow(..) | Expr::Min(_) | Expr::Max(_) => {
                if self.is_closed() {
                    Some(self.eval(0.0, 0.0))
                } else {
                    None
                }
            }
        }
    }

    fn is_closed(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::T | Expr::U => false,
            Expr::Neg(e) => e.is_closed(),
            Expr::Bin(_, a, b) | Expr::Pow(a, b) => a.is_closed() && b.is_closed(),
            Expr::Min(v) | Expr::Max(v) => v.iter().all(Expr::is_closed),
        }
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Self {
        Expr::Const(c)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if c.is_infinite() && *c > 0.0 => f.write_str("inf"),
            Expr::Const(c) if *c < 0.0 => write!(f, "({c})"),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::T => f.write_str("t"),
            Expr::U => f.write_str("u"),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Pow(a, b) => write!(f, "pow({a}, {b})"),
            Expr::Min(v) | Expr::Max(v) => {
                f.write_str(if matches!(self, Expr::Min(_)) { "min(" } else { "max(" })?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, base: usize) -> Self {
        Parser { src: src.as_bytes(), pos: 0, base }
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.offset(), format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let e = self.unary()?;
            return Ok(match e {
                Expr::Const(c) => Expr::Const(-c),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                match ident {
                    b"t" => Ok(Expr::T),
                    b"u" => Ok(Expr::U),
                    b"inf" => Ok(Expr::Const(f64::INFINITY)),
                    b"pow" => {
                        let mut args = self.args()?;
                        if args.len() != 2 {
                            return Err(Error::parse(self.base + start, "pow takes two arguments"));
                        }
                        let b = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        Ok(Expr::Pow(Box::new(a), Box::new(b)))
                    }
                    b"min" | b"max" => {
                        let args = self.args()?;
                        if args.len() < 2 {
                            return Err(Error::parse(
                                self.base + start,
                                "min/max take at least two arguments",
                            ));
                        }
                        Ok(if ident == b"min" { Expr::Min(args) } else { Expr::Max(args) })
                    }
                    _ => Err(Error::parse(
                        self.base + start,
                        format!("unknown identifier '{}'", core::str::from_utf8(ident).unwrap_or("?")),
                    )),
                }
            }
            Some(c) => Err(Error::parse(self.offset(), format!("unexpected '{}'", c as char))),
            None => Err(Error::parse(self.offset(), "unexpected end of expression")),
        }
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        loop {
            out.push(self.expr()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(Error::parse(self.offset(), "expected ',' or ')'")),
            }
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(Error::parse(self.base + start, "malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e') | Some(b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(Error::parse(self.base + start, "malformed exponent"));
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| Error::parse(self.base + start, "malformed number"))
    }
}
