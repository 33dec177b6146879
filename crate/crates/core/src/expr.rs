//! Parsing and canonical printing of rational-function expressions.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (['*'] factor | '/' factor)*
//! factor := ['-'] base ['^' ['-'] integer]
//! base   := 'x' index | integer | 't' | '(' expr ')'
//! ```
//!
//! `t` denotes the root of the field modulus and is only available when
//! `s > 1`. Juxtaposition multiplies, so `x0x1` and `2x0` are accepted.

use crate::context::PFormCtx;
use crate::error::{Error, Result};
use crate::field::FFElem;
use crate::mpoly::{Monomial, MPoly};
use crate::ratfunc::RatFunc;

pub fn parse(ctx: &PFormCtx, text: &str) -> Result<RatFunc> {
    let mut p = Parser { ctx, src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let f = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(f)
}

struct Parser<'a> {
    ctx: &'a PFormCtx,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::SyntaxError { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphanumeric())
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                acc = acc.div(&d).map_err(|e| match e {
                    Error::DivideByZeroFunction => Error::SyntaxError { pos: at, msg: "division by zero".into() },
                    other => other,
                })?;
            } else if self.starts_factor() {
                acc = acc.mul(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        if self.eat(b'-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error("expected integer exponent"));
        }
        let k: i64 = digits.parse().map_err(|_| Error::SyntaxError { pos: at, msg: "exponent too large".into() })?;
        let k = if neg { -k } else { k };
        base.pow(k).map_err(|_| Error::SyntaxError { pos: at, msg: "negative power of zero".into() })
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<RatFunc> {
        let ctx = self.ctx;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = ctx.field().p();
                let v = self.digits().bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(RatFunc::constant(ctx, FFElem(v as u32)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                if name == "x" {
                    let digits = self.digits();
                    if digits.is_empty() {
                        return Err(self.error("expected variable index after 'x'"));
                    }
                    let idx: usize = digits.parse().unwrap_or(usize::MAX);
                    if idx >= ctx.n() {
                        return Err(Error::IndexOutOfRange(idx, ctx.n()));
                    }
                    Ok(RatFunc::var(ctx, idx))
                } else if name == "t" && ctx.field().s() > 1 {
                    Ok(RatFunc::constant(ctx, ctx.field().gen()))
                } else {
                    let digits = self.digits();
                    Err(Error::UnknownVariable(name + &digits))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn format_coeff(ctx: &PFormCtx, c: FFElem) -> String {
    ctx.field().format_elem(c)
}

fn format_monomial(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
        .collect();
    parts.join("*")
}

/// Terms in the printing order, joined by `+`.
pub fn format_poly(f: &MPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let ctx = f.ctx();
    let parts: Vec<String> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            if m.is_one() {
                return format_coeff(ctx, *c);
            }
            let mono = format_monomial(m);
            if *c == FFElem::ONE {
                return mono;
            }
            let coeff = format_coeff(ctx, *c);
            if coeff.contains('+') {
                format!("({coeff})*{mono}")
            } else {
                format!("{coeff}*{mono}")
            }
        })
        .collect();
    parts.join("+")
}

/// Canonical form: monomial content cancelled, denominator leading
/// coefficient 1, `/1` omitted.
pub fn print(f: &RatFunc) -> String {
    let r = f.content_reduce();
    let num = format_poly(r.num());
    if r.den().is_one() {
        return num;
    }
    let den = format_poly(r.den());
    let num = if num.contains('+') { format!("({num})") } else { num };
    let den = if den.contains('+') || den.contains('*') { format!("({den})") } else { den };
    format!("{num}/{den}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u64, n: usize) -> PFormCtx {
        PFormCtx::with_q(q, n).unwrap()
    }

    #[test]
    fn parse_examples() {
        let c = ctx(2, 2);
        let q2 = parse(&c, "(x0^2+x1+1)/(x0*x1)").unwrap();
        assert_eq!(print(&q2), "(x0^2+x1+1)/(x0*x1)");
        assert_eq!(parse(&c, "x0").unwrap(), RatFunc::identity(&c));
        let f = parse(&c, "x0^-1*x1").unwrap();
        assert!(f.rat_eq(&parse(&c, "x1/x0").unwrap()));
        assert_eq!(print(&f), "x1/x0");
        assert!(parse(&c, "x0x1").unwrap().rat_eq(&parse(&c, "x0*x1").unwrap()));
    }

    #[test]
    fn parse_errors() {
        let c = ctx(2, 2);
        assert_eq!(parse(&c, "x2"), Err(Error::IndexOutOfRange(2, 2)));
        assert_eq!(parse(&c, "y0"), Err(Error::UnknownVariable("y0".into())));
        assert_eq!(parse(&c, "t"), Err(Error::UnknownVariable("t".into())));
        assert!(matches!(parse(&c, "x0+"), Err(Error::SyntaxError { pos: 3, .. })));
        assert!(matches!(parse(&c, "(x0"), Err(Error::SyntaxError { .. })));
        assert!(matches!(parse(&c, ""), Err(Error::SyntaxError { pos: 0, .. })));
        assert!(matches!(parse(&c, "x0/0"), Err(Error::SyntaxError { .. })));
    }

    #[test]
    fn print_examples() {
        let c = ctx(2, 2);
        assert_eq!(print(&RatFunc::zero(&c)), "0");
        let c3 = ctx(3, 2);
        assert_eq!(print(&parse(&c3, "-x0").unwrap()), "2*x0");
        assert_eq!(print(&parse(&c3, "(2x0)/(2x1)").unwrap()), "x0/x1");
        assert_eq!(print(&parse(&c3, "x0/(2*x1+1)").unwrap()), "2*x0/(x1+2)");
        let c4 = ctx(4, 3);
        let f = parse(&c4, "(1+t)*x0 + t").unwrap();
        assert_eq!(print(&f), "(1+t)*x0+t");
        assert!(parse(&c4, &print(&f)).unwrap().rat_eq(&f));
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let c = ctx(3, 1);
        assert_eq!(print(&parse(&c, "7*x0 + 100000000000000000000000").unwrap()), "x0+1");
    }
}
