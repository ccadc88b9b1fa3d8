//! Parser for the ASCII polynomial grammar.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := [coef '*'] factor ('*' factor)*
//! factor := var ['^' nat]
//! var    := 'x0' | 'x1' | 'y0' | 'y1'
//! coef   := ['-'] nat ['/' nat]
//! ```
//!
//! Whitespace is insignificant between tokens. Two accepted extensions:
//! a bare `coef` is a complete term, so constants like `5` or `-2/3`
//! parse directly (the printer relies on this for bidegree-(0,0)
//! polynomials), and a `-` directly before a variable negates the term,
//! so the printer's leading `-x0*...` for a coefficient of minus one
//! parses back.
//!
//! Every parsed term is checked against the expected bidegree; terms whose
//! coefficient embeds to zero are dropped without the check, since the
//! zero polynomial belongs to every graded piece.

use num_bigint::BigInt;
use num_traits::One;

use crate::bipoly::{BiDegree, BiPoly, Monomial};
use crate::error::Error;
use crate::field::Field;

const MAX_EXPONENT: u64 = 1_000_000;

/// Parses `text` as a polynomial of the expected bidegree.
pub fn parse_bipoly<F: Field>(field: F, text: &str, expected: BiDegree) -> Result<BiPoly<F>, Error> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("expected a term"));
    }
    let mut terms: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut negate = false;
    loop {
        let term_start = p.pos;
        let (monomial, num, den) = p.term()?;
        let signed_num = if negate { -num } else { num };
        let coeff = field.from_ratio(&signed_num, &den).map_err(|e| match e {
            Error::ZeroDenominator | Error::DenominatorDivisibleByP(_) => Error::Parse {
                pos: term_start,
                msg: e.to_string(),
            },
            other => other,
        })?;
        if !field.is_zero(&coeff) {
            if monomial.degree() != expected {
                return Err(Error::DegreeMismatch {
                    pos: term_start,
                    term: p.slice(term_start),
                    found: monomial.degree(),
                    expected,
                });
            }
            terms.push((monomial, coeff));
        }
        p.skip_ws();
        if p.at_end() {
            break;
        }
        match p.bump() {
            b'+' => negate = false,
            b'-' => negate = true,
            other => {
                return Err(Error::Parse {
                    pos: p.pos - 1,
                    msg: format!("expected '+' or '-', found '{}'", other as char),
                })
            }
        }
        p.skip_ws();
        if p.at_end() {
            return Err(p.err("expected a term after the sign"));
        }
    }
    BiPoly::from_terms(field, expected, terms)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> u8 {
        let b = self.bytes[self.pos];
        self.pos += 1;
        b
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn slice(&self, from: usize) -> String {
        String::from_utf8_lossy(&self.bytes[from..self.pos]).trim().to_string()
    }

    /// One term: optional coefficient, then star-separated factors.
    /// Returns the accumulated monomial and the coefficient as num/den.
    ///
    /// A `-` directly followed by a variable negates the term, so the
    /// printer's `-x0*...` for a leading coefficient of minus one parses
    /// back.
    fn term(&mut self) -> Result<(Monomial, BigInt, BigInt), Error> {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut have_coef = false;

        match self.peek() {
            Some(b'-') => {
                let save = self.pos;
                self.pos += 1;
                self.skip_ws();
                if matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos = save;
                    let (n, d) = self.coef()?;
                    num = n;
                    den = d;
                    have_coef = true;
                } else {
                    num = -num;
                }
            }
            Some(b'0'..=b'9') => {
                let (n, d) = self.coef()?;
                num = n;
                den = d;
                have_coef = true;
            }
            _ => {}
        }

        let mut monomial = Monomial::ONE;
        let mut have_factor = false;
        if have_coef {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                monomial = self.factor_chain()?;
                have_factor = true;
            } else if matches!(self.peek(), Some(b'x') | Some(b'y')) {
                return Err(self.err("expected '*' between coefficient and variable"));
            }
        } else {
            monomial = self.factor_chain()?;
            have_factor = true;
        }
        let _ = have_factor;
        Ok((monomial, num, den))
    }

    fn factor_chain(&mut self) -> Result<Monomial, Error> {
        let mut m = self.factor()?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                m = m.times(&self.factor()?);
            } else {
                self.pos = save;
                return Ok(m);
            }
        }
    }

    fn factor(&mut self) -> Result<Monomial, Error> {
        let letter = match self.peek() {
            Some(b @ (b'x' | b'y')) => {
                self.pos += 1;
                b
            }
            Some(other) => {
                return Err(Error::Parse {
                    pos: self.pos,
                    msg: format!("expected a variable, found '{}'", other as char),
                })
            }
            None => return Err(self.err("expected a variable")),
        };
        let index = match self.peek() {
            Some(b @ (b'0' | b'1')) => {
                self.pos += 1;
                b - b'0'
            }
            _ => return Err(self.err("variable index must be 0 or 1")),
        };
        let mut exp: u64 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            exp = self.nat_u64()?;
        }
        let e = exp as u32;
        Ok(match (letter, index) {
            (b'x', 0) => Monomial::new(e, 0, 0, 0),
            (b'x', 1) => Monomial::new(0, e, 0, 0),
            (b'y', 0) => Monomial::new(0, 0, e, 0),
            _ => Monomial::new(0, 0, 0, e),
        })
    }

    fn coef(&mut self) -> Result<(BigInt, BigInt), Error> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        };
        let mut num = self.nat_bigint()?;
        if negative {
            num = -num;
        }
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.nat_bigint()?;
            Ok((num, den))
        } else {
            self.pos = save;
            Ok((num, BigInt::one()))
        }
    }

    fn nat_bigint(&mut self) -> Result<BigInt, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok(BigInt::parse_bytes(&self.bytes[start..self.pos], 10).expect("digits only"))
    }

    fn nat_u64(&mut self) -> Result<u64, Error> {
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b) = self.peek() {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .saturating_mul(10)
                .saturating_add((b - b'0') as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an exponent"));
        }
        if value > MAX_EXPONENT {
            return Err(Error::Parse {
                pos: start,
                msg: format!("exponent exceeds {MAX_EXPONENT}"),
            });
        }
        Ok(value)
    }
}
