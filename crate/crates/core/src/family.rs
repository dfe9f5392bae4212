//! Text form of Musielak–Orlicz function families.
//!
//! ```text
//! family  := name "(" [arg ("," arg)*] ")"
//! arg     := ident "=" value
//! name    := "nakano" | "power" | "hinge" | "linear" | "indicator"
//!          | "capped" | "table" | "custom"
//! ```
//!
//! | family      | arguments                                              | value                      |
//! |-------------|--------------------------------------------------------|----------------------------|
//! | `nakano`    | `p` (expr in t), `normalized` (`true`/`false`, default false) | `u^p` or `u^p / p`   |
//! | `power`     | `p` (constant), `scale` (constant, default 1)          | `scale * u^p`              |
//! | `hinge`     | `shift` (expr in t)                                    | `max(u - shift, 0)`        |
//! | `linear`    | `weight` (expr in t, default 1)                        | `weight * u`               |
//! | `indicator` | `b` (expr in t)                                        | `0` on `[0, b]`, inf after |
//! | `capped`    | `inner` (family), `b` (expr in t)                      | `inner` on `[0, b]`, inf after |
//! | `table`     | `file` (double-quoted path)                            | piecewise linear, see [`Tabulated`] |
//! | `custom`    | `f` (expr in t and u)                                  | `f(t, u)`                  |
//!
//! Expressions follow the grammar of [`crate::expr`]. Parameter expressions
//! may use `t` but not `u`. Whitespace between tokens is ignored. Error
//! positions are byte offsets into the full source.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::young::{Family, MOFunction, Tabulated};

/// Parses a family that does not reference a table file.
pub fn parse(src: &str) -> Result<MOFunction> {
    parse_with_tables(src, &mut |_| {
        Err(Error::InvalidFunction("table families need a table loader".into()))
    })
}

/// Parses a family, resolving `table(file = "...")` through `load`.
pub fn parse_with_tables(
    src: &str,
    load: &mut dyn FnMut(&str) -> Result<Tabulated>,
) -> Result<MOFunction> {
    let mut p = P { src, pos: 0, load };
    let fam = p.family()?;
    p.ws();
    if p.pos < src.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(MOFunction::new(fam))
}

struct P<'a, 'b> {
    src: &'a str,
    pos: usize,
    load: &'b mut dyn FnMut(&str) -> Result<Tabulated>,
}

enum Value {
    Text(usize, usize),
    Str(String),
}

impl P<'_, '_> {
    fn ws(&mut self) {
        while self.src.as_bytes().get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<(usize, &str)> {
        self.ws();
        let start = self.pos;
        let b = self.src.as_bytes();
        while self.pos < b.len() && (b[self.pos].is_ascii_alphanumeric() || b[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a name"));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.src.as_bytes().get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    /// Scans one argument value up to the next top-level ',' or ')'.
    fn value(&mut self) -> Result<Value> {
        self.ws();
        let b = self.src.as_bytes();
        if b.get(self.pos) == Some(&b'"') {
            let start = self.pos + 1;
            let end = self.src[start..]
                .find('"')
                .ok_or_else(|| Error::parse(self.pos, "unterminated string"))?;
            self.pos = start + end + 1;
            return Ok(Value::Str(self.src[start..start + end].to_string()));
        }
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < b.len() {
            match b[self.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                b',' if depth == 0 => break,
                _ => {}
            }
            self.pos += 1;
        }
        if self.src[start..self.pos].trim().is_empty() {
            return Err(Error::parse(start, "missing value"));
        }
        Ok(Value::Text(start, self.pos))
    }

    fn family(&mut self) -> Result<Family> {
        let (name_pos, name) = self.ident()?;
        let name = name.to_string();
        self.expect(b'(')?;
        let mut args: Vec<(usize, String, Value)> = Vec::new();
        self.ws();
        if self.src.as_bytes().get(self.pos) != Some(&b')') {
            loop {
                let (kp, key) = self.ident()?;
                let key = key.to_string();
                if args.iter().any(|a| a.1 == key) {
                    return Err(Error::parse(kp, format!("duplicate argument '{key}'")));
                }
                self.expect(b'=')?;
                let v = self.value()?;
                args.push((kp, key, v));
                self.ws();
                if self.src.as_bytes().get(self.pos) == Some(&b',') {
                    self.pos += 1;
                    continue;
                }
                break;
            }
        }
        self.expect(b')')?;
        let end = self.pos;
        let mut a = Args { args };
        let fam = match name.as_str() {
            "nakano" => {
                let p = self.param(&mut a, "p", name_pos)?;
                let normalized = match a.take("normalized") {
                    None => false,
                    Some((pos, Value::Text(s, e))) => match self.src[s..e].trim() {
                        "true" => true,
                        "false" => false,
                        _ => return Err(Error::parse(pos, "normalized must be true or false")),
                    },
                    Some((pos, _)) => return Err(Error::parse(pos, "normalized must be true or false")),
                };
                Family::Nakano { p, normalized }
            }
            "power" => {
                let p = self.constant(&mut a, "p", name_pos, None)?;
                let scale = self.constant(&mut a, "scale", name_pos, Some(1.0))?;
                Family::Power { p, scale }
            }
            "hinge" => Family::Hinge { shift: self.param(&mut a, "shift", name_pos)? },
            "linear" => Family::Linear {
                weight: self.param_or(&mut a, "weight", Expr::Const(1.0))?,
            },
            "indicator" => Family::Indicator { b: self.param(&mut a, "b", name_pos)? },
            "capped" => {
                let inner = match a.take("inner") {
                    Some((_, Value::Text(s, e))) => {
                        let save = self.pos;
                        self.pos = s;
                        let f = self.family()?;
                        self.ws();
                        if self.pos != e && !self.src[self.pos..e].trim().is_empty() {
                            return Err(Error::parse(self.pos, "unexpected input after inner family"));
                        }
                        self.pos = save;
                        f
                    }
                    Some((pos, _)) => return Err(Error::parse(pos, "inner must be a family")),
                    None => return Err(Error::parse(name_pos, "capped needs 'inner'")),
                };
                let b = self.param(&mut a, "b", name_pos)?;
                Family::Capped { inner: Box::new(inner), b }
            }
            "table" => match a.take("file") {
                Some((_, Value::Str(path))) => {
                    let table = (self.load)(&path)?;
                    Family::Tabulated { table: alloc::sync::Arc::new(table), source: path }
                }
                Some((pos, _)) => return Err(Error::parse(pos, "file must be a quoted path")),
                None => return Err(Error::parse(name_pos, "table needs 'file'")),
            },
            "custom" => match a.take("f") {
                Some((_, Value::Text(s, e))) => {
                    Family::Custom(alloc::sync::Arc::new(Expr::parse_at(&self.src[s..e], s)?))
                }
                Some((pos, _)) => return Err(Error::parse(pos, "f must be an expression")),
                None => return Err(Error::parse(name_pos, "custom needs 'f'")),
            },
            _ => return Err(Error::parse(name_pos, format!("unknown family '{name}'"))),
        };
        if let Some((pos, key)) = a.leftover() {
            return Err(Error::parse(pos, format!("unknown argument '{key}' for {name}")));
        }
        self.pos = end;
        Ok(fam)
    }

    fn expr_value(&self, pos: usize, v: Value) -> Result<Expr> {
        match v {
            Value::Text(s, e) => {
                let ex = Expr::parse_at(&self.src[s..e], s)?;
                if ex.uses_u() {
                    return Err(Error::parse(s, "parameters may not depend on u"));
                }
                Ok(ex)
            }
            Value::Str(_) => Err(Error::parse(pos, "expected an expression")),
        }
    }

    fn param(&self, a: &mut Args, key: &str, name_pos: usize) -> Result<Expr> {
        match a.take(key) {
            Some((pos, v)) => self.expr_value(pos, v),
            None => Err(Error::parse(name_pos, format!("missing argument '{key}'"))),
        }
    }

    fn param_or(&self, a: &mut Args, key: &str, default: Expr) -> Result<Expr> {
        match a.take(key) {
            Some((pos, v)) => self.expr_value(pos, v),
            None => Ok(default),
        }
    }

    fn constant(&self, a: &mut Args, key: &str, name_pos: usize, default: Option<f64>) -> Result<f64> {
        match a.take(key) {
            Some((pos, v)) => self
                .expr_value(pos, v)?
                .as_const()
                .ok_or_else(|| Error::parse(pos, format!("'{key}' must be a constant"))),
            None => default.ok_or_else(|| Error::parse(name_pos, format!("missing argument '{key}'"))),
        }
    }
}

struct Args {
    args: Vec<(usize, String, Value)>,
}

impl Args {
    fn take(&mut self, key: &str) -> Option<(usize, Value)> {
        let i = self.args.iter().position(|a| a.1 == key)?;
        let (pos, _, v) = self.args.remove(i);
        Some((pos, v))
    }

    fn leftover(&self) -> Option<(usize, &str)> {
        self.args.first().map(|a| (a.0, a.1.as_str()))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Nakano { p, normalized } => write!(f, "nakano(p = {p}, normalized = {normalized})"),
            Family::Power { p, scale } => write!(f, "power(p = {p}, scale = {scale})"),
            Family::Hinge { shift } => write!(f, "hinge(shift = {shift})"),
            Family::Linear { weight } => write!(f, "linear(weight = {weight})"),
            Family::Indicator { b } => write!(f, "indicator(b = {b})"),
            Family::Capped { inner, b } => write!(f, "capped(inner = {inner}, b = {b})"),
            Family::Tabulated { source, .. } => write!(f, "table(file = \"{source}\")"),
            Family::Custom(e) => write!(f, "custom(f = {e})"),
        }
    }
}

impl fmt::Display for MOFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self.family(), f)
    }
}
