use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use super::{digits_for_bits, format_float, PrecisionContext, Scalar};
use crate::error::{Error, Result};

/// A big float with its own mantissa width; binary operations run at the
/// wider of the two operand precisions.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Real(pub Float);

impl Real {
    pub fn new(f: Float) -> Self {
        Real(f)
    }

    pub fn with_val(bits: u32, v: f64) -> Self {
        Real(Float::with_val(bits, v))
    }

    pub fn into_inner(self) -> Float {
        self.0
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }
}

impl From<Float> for Real {
    fn from(f: Float) -> Self {
        Real(f)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_float(&self.0, digits_for_bits(self.0.prec())))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                let prec = self.0.prec().max(rhs.0.prec());
                Real(Float::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }

        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                let prec = self.0.prec().max(rhs.0.prec());
                Real(Float::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Scalar for Real {
    const EXACT: bool = false;

    fn from_rational(r: &Rational, ctx: &PrecisionContext) -> Self {
        Real(Float::with_val(ctx.bits(), r))
    }

    fn from_float(f: &Float) -> Result<Self> {
        Ok(Real(f.clone()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn sign(&self) -> Ordering {
        self.0.cmp0().unwrap_or(Ordering::Equal)
    }

    fn recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Real(Float::with_val(self.0.prec(), self.0.recip_ref())))
    }

    fn sqrt(&self) -> Result<Self> {
        if self.0.cmp0() == Some(Ordering::Less) {
            return Err(Error::NotRepresentable(format!("square root of negative value {}", self)));
        }
        Ok(Real(Float::with_val(self.0.prec(), self.0.sqrt_ref())))
    }

    fn to_float(&self, bits: u32) -> Float {
        Float::with_val(bits, &self.0)
    }

    fn promote(&self, bits: u32) -> Self {
        if bits > self.0.prec() {
            Real(Float::with_val(bits, &self.0))
        } else {
            self.clone()
        }
    }

    fn precision(&self) -> Option<u32> {
        Some(self.0.prec())
    }

    fn as_rational(&self) -> Option<Rational> {
        self.0.to_rational()
    }

    fn to_decimal(&self, digits: usize) -> String {
        format_float(&self.0, digits)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        if other.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let prec = self.0.prec().max(other.0.prec());
        Ok(Real(Float::with_val(prec, &self.0 / &other.0)))
    }
}
