//! Text grammar for rational functions.
//!
//! ```text
//! ratfunc := poly | "(" poly ")" "/" "(" poly ")"
//! poly    := term (("+"|"-") term)*
//! term    := nat | nat "*t" ("^" nat)? | "t" ("^" nat)?
//! ```
//!
//! Whitespace is ignored and coefficients are reduced mod p. A leading sign
//! on the first term is also accepted.

use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

pub fn parse_ratfunc(src: &str, p: u32) -> Result<RatFunc> {
    parse_ratfunc_var(src, p, 't')
}

pub fn parse_poly(src: &str, p: u32) -> Result<Poly> {
    parse_poly_var(src, p, 't')
}

pub fn parse_poly_var(src: &str, p: u32, var: char) -> Result<Poly> {
    let mut cur = Cursor::new(src, var);
    let poly = cur.poly(p)?;
    cur.end()?;
    Ok(poly)
}

pub fn parse_ratfunc_var(src: &str, p: u32, var: char) -> Result<RatFunc> {
    let mut cur = Cursor::new(src, var);
    if cur.peek() == Some('(') {
        cur.bump();
        let num = cur.poly(p)?;
        cur.expect(')')?;
        if cur.peek().is_none() {
            return Ok(RatFunc::from_poly(num));
        }
        cur.expect('/')?;
        cur.expect('(')?;
        let den_pos = cur.pos();
        let den = cur.poly(p)?;
        cur.expect(')')?;
        cur.end()?;
        return RatFunc::new(num, den).map_err(|e| match e {
            Error::DivisionByZero => Error::Parse {
                pos: den_pos,
                msg: "zero denominator".into(),
            },
            other => other,
        });
    }
    let num = cur.poly(p)?;
    cur.end()?;
    RatFunc::new(num, Poly::one(p))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    var: char,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, var: char) -> Self {
        Cursor { src, pos: 0, var }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn err<T>(&mut self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.bump();
                Ok(())
            }
            Some(d) => self.err(format!("expected '{c}', found '{d}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(d) => self.err(format!("unexpected '{d}'")),
        }
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos();
        let digits: String = self.src[start..]
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .collect();
        if digits.is_empty() {
            return self.err("expected a number");
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "number too large".into(),
        })
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        let at = self.pos();
        let e = self.nat()?;
        if e > super::ratfunc::DEGREE_LIMIT as u64 {
            return Err(Error::Parse {
                pos: at,
                msg: format!("exponent {e} exceeds the degree limit"),
            });
        }
        Ok(e as usize)
    }

    fn term(&mut self, p: u32) -> Result<Poly> {
        match self.peek() {
            Some(c) if c == self.var => {
                self.bump();
                let e = self.exponent()?;
                Ok(Poly::monomial(p, 1, e))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                let c = (n % p as u64) as i64;
                if self.peek() != Some('*') {
                    return Ok(Poly::constant(p, c));
                }
                self.bump();
                if self.peek() != Some(self.var) {
                    return self.err(format!("expected '{}' after '*'", self.var));
                }
                self.bump();
                let e = self.exponent()?;
                Ok(Poly::monomial(p, c, e))
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn poly(&mut self, p: u32) -> Result<Poly> {
        let negate_first = match self.peek() {
            Some('-') => {
                self.bump();
                true
            }
            Some('+') => {
                self.bump();
                false
            }
            _ => false,
        };
        let first = self.term(p)?;
        let mut acc = if negate_first { -&first } else { first };
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term(p)?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term(p)?;
                }
                _ => return Ok(acc),
            }
        }
    }
}
