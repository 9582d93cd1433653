//! String grammar for scalars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | ident | '(' expr ')'
//! ident  := qt | q | z | al | be | u | v
//! ```
//! `q` is shorthand for `qt^4`.

use super::mono::var_index;
use super::ratfun::{Scalar, ScalarError};
use num_bigint::BigInt;
use std::str::FromStr;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, ScalarError> {
        Err(ScalarError::Parse { pos: self.pos, msg: msg.to_string() })
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

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.try_div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Scalar, ScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn power(&mut self) -> Result<Scalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let mut neg = false;
            let paren = self.peek() == Some(b'(');
            if paren {
                self.pos += 1;
            }
            if self.peek() == Some(b'-') {
                self.pos += 1;
                neg = true;
            }
            let e = self.integer()?;
            if paren {
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
            }
            let e: i32 = match i32::try_from(e) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            };
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(ScalarError::DivisionByZero);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(Scalar::from_bigint(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if name == "q" {
                    return Ok(Scalar::qt_pow(4));
                }
                match var_index(name) {
                    Some(k) => Ok(Scalar::var(k)),
                    None => {
                        self.pos = start;
                        self.err(&format!("unknown symbol '{name}'"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Scalar, ScalarError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let v = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

/// Parse helper that panics on malformed input; for literals in code.
pub fn sc(s: &str) -> Scalar {
    s.parse().unwrap_or_else(|e| panic!("bad scalar literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["(qt^2 - 1)/(z*qt)", "1/(qt^2)", "-3*al^2*z/(qt + 1)", "0", "7/(2)", "q"] {
            let x: Scalar = s.parse().unwrap();
            let y: Scalar = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
    }

    #[test]
    fn errors() {
        assert!("qt +".parse::<Scalar>().is_err());
        assert!("w".parse::<Scalar>().is_err());
        assert_eq!("1/(qt-qt)".parse::<Scalar>(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn q_alias() {
        assert_eq!(sc("q"), sc("qt^4"));
        assert_eq!(sc("q^(-1)"), sc("qt^-4"));
    }
}
