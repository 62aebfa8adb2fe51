//! Weight-expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'l' | '(' expr ')'
//! ```
//!
//! `p/q` fractions fall out of integer division. Decimal points are refused:
//! coefficients are exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::function::RationalFunction;
use super::poly::{Polynomial, Scalar, DEGREE_CAP};
use crate::error::{Error, Result};

pub fn parse(input: &str) -> Result<RationalFunction> {
    let mut parser = Parser {
        src: input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    if parser.at_end() {
        return Err(parser.error("empty expression"));
    }
    let value = parser.expr()?;
    parser.skip_ws();
    if !parser.at_end() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, offset: usize, message: &str) -> Error {
        let start = offset.min(self.src.len());
        let fragment: String = self.src[start..].chars().take(12).collect();
        Error::Expression {
            offset,
            fragment,
            message: message.to_string(),
        }
    }

    // Division by zero is reported at the offset of the `/` operator.
    fn lift(&self, offset: usize, r: Result<RationalFunction>) -> Result<RationalFunction> {
        r.map_err(|e| match e {
            Error::DivisionByZero => self.error_at(offset, "division by zero"),
            other => other,
        })
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.checked_add(&rhs)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = acc.checked_sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.lift(at, acc.checked_div(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        self.skip_ws();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let exp = self.integer()?;
        let exp: u32 = u32::try_from(&exp)
            .ok()
            .filter(|&e| e as usize <= DEGREE_CAP)
            .ok_or_else(|| self.error_at(at, "exponent out of range"))?;
        let base_degree = base
            .num()
            .degree()
            .unwrap_or(0)
            .max(base.den().degree().unwrap_or(0));
        if base_degree * exp as usize > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: base_degree * exp as usize,
                cap: DEGREE_CAP,
            });
        }
        base.pow(exp)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error_at(open, "unbalanced parenthesis"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'l') => {
                self.pos += 1;
                Ok(RationalFunction::lambda())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFunction::constant(Scalar::from_integer(n)))
            }
            Some(_) => Err(self.error("expected a number, `l` or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        if matches!(self.peek(), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.error_at(start, "floating-point coefficients are not accepted"));
        }
        Ok(self.src[start..self.pos].parse().expect("ascii digits"))
    }
}

/// Canonical text for a polynomial, highest power first: `l^2+2*l+1`.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (power, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let term = format_term(c, power);
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    out
}

fn format_term(c: &Scalar, power: usize) -> String {
    let var = match power {
        0 => String::new(),
        1 => "l".to_string(),
        k => format!("l^{k}"),
    };
    if power == 0 {
        return c.to_string();
    }
    if c.is_one() {
        var
    } else if (-c).is_one() {
        format!("-{var}")
    } else {
        format!("{c}*{var}")
    }
}

fn term_count(p: &Polynomial) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

/// Canonical text for a rational function, e.g. `(l^2+2*l+1)/l^4`.
pub fn format_rational(f: &RationalFunction) -> String {
    let num = format_polynomial(f.num());
    if f.den().is_one() {
        return num;
    }
    let num = if term_count(f.num()) > 1 {
        format!("({num})")
    } else {
        num
    };
    let den = f.den();
    let den_text = format_polynomial(den);
    // A monic monomial denominator binds tighter than `/` without parentheses.
    if term_count(den) == 1 {
        format!("{num}/{den_text}")
    } else {
        format!("{num}/({den_text})")
    }
}
