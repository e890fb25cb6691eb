//! Text syntax for polynomials and localized elements.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := power (('*' power) | ('/' power))*
//! power   := atom ['^' ['-'] int]
//! atom    := int | 'x' int | '(' expr ')'
//! ```
//!
//! Division is only allowed by constants or by polynomials, which then
//! become denominator units; negative powers likewise. `3/2*x0^2*x1 - x2`
//! and `(x1^2)/(x0)^2` are both valid.

use alloc::string::String;

use num_bigint::BigInt;

use super::loc::LocElem;
use super::poly::{Poly, Rational};
use crate::error::Error;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: String::from(msg) }
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

    fn int(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.err("utf8"))?;
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    fn small_int(&mut self) -> Result<u32, Error> {
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.err("exponent too large"))
    }

    fn expr(&mut self) -> Result<LocElem, Error> {
        let mut acc = LocElem::zero(self.nvars);
        let mut first = true;
        loop {
            let neg = self.eat(b'-');
            if !neg && !self.eat(b'+') && !first {
                break;
            }
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LocElem, Error> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                let p = self.power()?;
                acc = &acc * &p;
            } else if self.eat(b'/') {
                // the divisor's exponent applies to the unit, not to an expanded power
                let at = self.pos;
                let d = self.atom()?;
                let e = if self.eat(b'^') { self.small_int()? } else { 1 };
                for _ in 0..e {
                    acc = divide(&acc, &d).map_err(|msg| Error::Parse { pos: at, msg: msg.into() })?;
                }
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<LocElem, Error> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.small_int()?;
            if neg {
                let one = LocElem::one(self.nvars);
                let mut out = one.clone();
                for _ in 0..e {
                    out = divide(&out, &base).map_err(|m| self.err(m))?;
                }
                Ok(out)
            } else {
                Ok(base.pow(e))
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<LocElem, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let k = self.small_int()? as usize;
                if k >= self.nvars {
                    return Err(self.err("variable index out of range"));
                }
                Ok(LocElem::from_poly(Poly::var(self.nvars, k)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(LocElem::constant(self.nvars, Rational::from_integer(n)))
            }
            _ => Err(self.err("expected number, variable or '('")),
        }
    }
}

fn divide(a: &LocElem, d: &LocElem) -> Result<LocElem, &'static str> {
    if d.is_zero() {
        return Err("division by zero");
    }
    let inv = d.inverse_via_units(&[d.num().clone()]).ok_or("divisor is not invertible")?;
    Ok(a * &inv)
}

/// Parses a localized element in `nvars` variables.
pub fn parse_loc(src: &str, nvars: usize) -> Result<LocElem, Error> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, nvars };
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses a polynomial; any denominator is an error.
pub fn parse_poly(src: &str, nvars: usize) -> Result<Poly, Error> {
    let e = parse_loc(src, nvars)?;
    if !e.is_polynomial() {
        return Err(Error::Parse { pos: 0, msg: String::from("expected a polynomial") });
    }
    Ok(e.num().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_frac};
    use alloc::string::ToString;

    #[test]
    fn spec_syntax() {
        let p = parse_poly("3/2*x0^2*x1 - x2", 3).unwrap();
        assert_eq!(p.to_string(), "3/2*x0^2*x1 - x2");
        let q = parse_poly(" 3 / 2 * x0 ^ 2 * x1-x2 ", 3).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parenthesized_expansion() {
        let p = parse_poly("(x0+1)*(x0-1)", 1).unwrap();
        assert_eq!(p.to_string(), "x0^2 - 1");
        assert_eq!(parse_poly("-(x0)^2/4", 1).unwrap(), Poly::var(1, 0).pow(2).scale(&rat_frac(-1, 4)));
    }

    #[test]
    fn localized_round_trip() {
        let e = parse_loc("x0^-1*x1^-1*x2^-1", 3).unwrap();
        assert_eq!(e.to_string(), "(1)/(x2)/(x1)/(x0)");
        let back = parse_loc(&e.to_string(), 3).unwrap();
        assert_eq!(back, e);
        let f = parse_loc("(x1^2 + x0*x1)/(x0 + x1)^3", 2).unwrap();
        assert_eq!(f, parse_loc("x1/(x0+x1)^2", 2).unwrap());
        assert_eq!(parse_loc(&f.to_string(), 2).unwrap(), f);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_poly("x3", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0 +", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x0/x1", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_loc("1/0", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_loc("", 2), Err(Error::Parse { .. })));
        assert_eq!(parse_poly("7", 2).unwrap(), Poly::constant(2, rat(7)));
    }
}
