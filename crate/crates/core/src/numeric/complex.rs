use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use super::{format_rational, PrecisionContext, Scalar};
use crate::error::Result;

/// A complex number over any real scalar type (including `Rational`).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Cplx<T> {
    pub re: T,
    pub im: T,
}

impl<T> Cplx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cplx { re, im }
    }
}

impl Cplx<Rational> {
    pub fn from_real(re: Rational) -> Self {
        Cplx { re, im: Rational::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// `|z|^2` as an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: Rational::from(-&self.im) }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let re = Rational::from(&self.re * &other.re) - Rational::from(&self.im * &other.im);
        let im = Rational::from(&self.re * &other.im) + Rational::from(&self.im * &other.re);
        Cplx { re, im }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        Cplx { re: Rational::from(&self.re + &other.re), im: Rational::from(&self.im + &other.im) }
    }

    /// Convert the components into a scalar type.
    pub fn to_scalar<T: Scalar>(&self, ctx: &PrecisionContext) -> Cplx<T> {
        Cplx { re: T::from_rational(&self.re, ctx), im: T::from_rational(&self.im, ctx) }
    }

    /// Literal form `a+bi` with exact components.
    pub fn to_literal(&self) -> String {
        if self.is_real() {
            return format_rational(&self.re);
        }
        let im = format_rational(&Rational::from(self.im.abs_ref()));
        let sign = if self.im.cmp0().is_lt() { '-' } else { '+' };
        if self.re.cmp0().is_eq() {
            let lead = if sign == '-' { "-" } else { "" };
            return format!("{lead}{im}i");
        }
        format!("{}{}{}i", format_rational(&self.re), sign, im)
    }
}

impl<T: Scalar> Cplx<T> {
    pub fn real(re: T, ctx: &PrecisionContext) -> Self {
        Cplx { re, im: T::zero(ctx) }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Cplx { re: T::zero(ctx), im: T::zero(ctx) }
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Cplx { re: T::one(ctx), im: T::zero(ctx) }
    }

    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.square() + self.im.square()
    }

    /// `|z|` at the given float precision.
    pub fn abs_float(&self, bits: u32) -> Float {
        let re = self.re.to_float(bits);
        let im = self.im.to_float(bits);
        re.hypot(&im)
    }

    pub fn scale(&self, s: &T) -> Self {
        Cplx { re: self.re.clone() * s, im: self.im.clone() * s }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn promote(&self, bits: u32) -> Self {
        Cplx { re: self.re.promote(bits), im: self.im.promote(bits) }
    }

    /// Division by a real, nonzero scalar.
    pub fn div_real(&self, s: &T) -> Result<Self> {
        let inv = s.recip()?;
        Ok(self.scale(&inv))
    }

    /// Serialize as `a+bi` using [`Scalar::to_decimal`] for the parts.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.im.is_zero() {
            return self.re.to_decimal(digits);
        }
        let im = self.im.abs().to_decimal(digits);
        let sign = if self.im.sign().is_lt() { '-' } else { '+' };
        if self.re.is_zero() {
            let lead = if sign == '-' { "-" } else { "" };
            return format!("{lead}{im}i");
        }
        format!("{}{}{}i", self.re.to_decimal(digits), sign, im)
    }
}

impl<T: Scalar> fmt::Display for Cplx<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}) + ({})i", self.re, self.im)
        }
    }
}

impl<T: Scalar> Add for Cplx<T> {
    type Output = Cplx<T>;
    fn add(self, rhs: Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a, T: Scalar> Add<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn add(self, rhs: &'a Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re + &rhs.re, im: self.im + &rhs.im }
    }
}

impl<T: Scalar> Sub for Cplx<T> {
    type Output = Cplx<T>;
    fn sub(self, rhs: Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a, T: Scalar> Sub<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn sub(self, rhs: &'a Cplx<T>) -> Cplx<T> {
        Cplx { re: self.re - &rhs.re, im: self.im - &rhs.im }
    }
}

impl<'a, T: Scalar> Mul<&'a Cplx<T>> for Cplx<T> {
    type Output = Cplx<T>;
    fn mul(self, rhs: &'a Cplx<T>) -> Cplx<T> {
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re * &rhs.im + self.im * &rhs.re;
        Cplx { re, im }
    }
}

impl<T: Scalar> Mul for Cplx<T> {
    type Output = Cplx<T>;
    fn mul(self, rhs: Cplx<T>) -> Cplx<T> {
        self * &rhs
    }
}

impl<T: Scalar> Neg for Cplx<T> {
    type Output = Cplx<T>;
    fn neg(self) -> Cplx<T> {
        Cplx { re: -self.re, im: -self.im }
    }
}
