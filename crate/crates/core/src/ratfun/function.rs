//! Canonical rational functions of the spectral parameter.
//!
//! A value is stored as `num / den` with `gcd(num, den) = 1`, `den` monic and
//! zero represented as `0 / 1`. Two values are equal iff their
//! representations are identical, so graph comparison is structural.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::poly::{Polynomial, Scalar, DEGREE_CAP};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// Field operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Build the canonical form of `num / den`.
pub fn normalize(num: Polynomial, den: Polynomial) -> Result<RationalFunction> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let (num, den) = if den.is_constant() {
        (num, den)
    } else {
        let g = Polynomial::gcd(&num, &den);
        if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        }
    };
    let lc = den.leading().expect("nonzero denominator").clone();
    let (num, den) = if lc.is_one() {
        (num, den)
    } else {
        let inv = lc.recip();
        (num.scale(&inv), den.scale(&inv))
    };
    for p in [&num, &den] {
        let degree = p.degree().unwrap_or(0);
        if degree > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree,
                cap: DEGREE_CAP,
            });
        }
    }
    Ok(RationalFunction { num, den })
}

/// Exact field arithmetic on canonical forms.
pub fn arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(Scalar::from_integer(c.into()))
    }

    /// The function `l`.
    pub fn lambda() -> Self {
        RationalFunction {
            num: Polynomial::lambda(),
            den: Polynomial::one(),
        }
    }

    /// Polynomials are already canonical over the denominator 1.
    pub fn from_polynomial(p: Polynomial) -> Result<Self> {
        normalize(p, Polynomial::one())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `l`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_lambda(&self) -> bool {
        self.den.is_one() && self.num == Polynomial::lambda()
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.den == rhs.den {
            return normalize(&self.num + &rhs.num, self.den.clone());
        }
        normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero());
        }
        normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        normalize(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// `num(z) / den(z)` in double precision.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(z);
        if d.norm() == 0.0 {
            return Err(Error::PoleAtPoint(z));
        }
        Ok(self.num.eval_complex(z) / d)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, x: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            let xf = num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
            return Err(Error::PoleAtPoint(Complex64::new(xf, 0.0)));
        }
        Ok(self.num.eval(x) / d)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::expr::format_rational(self))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::expr::parse(s)
    }
}
