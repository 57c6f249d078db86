//! Number types shared by every module.
//!
//! Algorithms are written once against [`Scalar`] and run either over exact
//! quadratic surds ([`Surd`], rationals plus square roots of rationals) or
//! over big floats ([`Real`], MPFR-backed with an explicit mantissa width).

mod complex;
mod decimal;
mod real;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use crate::error::{Error, Result};

pub use complex::Cplx;
pub use decimal::{format_float, format_rational, parse_complex, parse_complex_list, parse_rational};
pub use real::Real;
pub use surd::Surd;

/// Default number of moments any single request may ask for.
pub const DEFAULT_MOMENT_CAP: usize = 128;

/// Bits used when an exact-mode computation has to be shown or compared as a float.
pub const EXACT_DISPLAY_BITS: u32 = 256;

/// A real field element with the handful of operations the toolkit needs.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(r: &Rational, ctx: &PrecisionContext) -> Self;

    /// Fails for exact types.
    fn from_float(f: &Float) -> Result<Self>;

    fn is_zero(&self) -> bool;

    /// Sign of the value as an ordering against zero.
    fn sign(&self) -> Ordering;

    fn recip(&self) -> Result<Self>;

    fn sqrt(&self) -> Result<Self>;

    fn to_float(&self, bits: u32) -> Float;

    /// Raise the working precision to at least `bits`; a no-op for exact values.
    fn promote(&self, bits: u32) -> Self;

    /// Working precision in bits, `None` for exact values.
    fn precision(&self) -> Option<u32>;

    /// The value as a rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    /// Serialize: exact rationals as `p/q`, everything else as a decimal string.
    fn to_decimal(&self, digits: usize) -> String;

    fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_rational(&Rational::new(), ctx)
    }

    fn one(ctx: &PrecisionContext) -> Self {
        Self::from_rational(&Rational::from(1), ctx)
    }

    fn from_i64(v: i64, ctx: &PrecisionContext) -> Self {
        Self::from_rational(&Rational::from(v), ctx)
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(other.recip()? * self)
    }

    fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn square(&self) -> Self {
        self.clone() * self
    }
}

/// Arithmetic mode requested by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    BigFloat { bits: u32 },
}

/// Precision carried explicitly through every computation.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionContext {
    mode: Mode,
    tolerance: Float,
    moment_cap: usize,
    escalation_cap: u32,
}

impl PrecisionContext {
    pub fn exact() -> Self {
        PrecisionContext {
            mode: Mode::Exact,
            tolerance: Float::new(64),
            moment_cap: DEFAULT_MOMENT_CAP,
            escalation_cap: 16 * EXACT_DISPLAY_BITS,
        }
    }

    /// Big-float mode with `bits` of mantissa; the tolerance defaults to `2^-(bits/2)`.
    pub fn big_float(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::InvalidArgument(format!("big-float precision must be at least 64 bits, got {bits}")));
        }
        let exp = -((bits / 2) as i32);
        Ok(PrecisionContext {
            mode: Mode::BigFloat { bits },
            tolerance: Float::with_val(64, 1) << exp,
            moment_cap: DEFAULT_MOMENT_CAP,
            escalation_cap: 16 * bits,
        })
    }

    /// Replace the relative comparison tolerance; must be positive in big-float mode.
    pub fn with_tolerance(mut self, tolerance: Float) -> Result<Self> {
        if !self.is_exact() && tolerance.cmp0() != Some(Ordering::Greater) {
            return Err(Error::InvalidArgument("big-float tolerance must be positive".into()));
        }
        self.tolerance = Float::with_val(64, tolerance);
        Ok(self)
    }

    pub fn with_moment_cap(mut self, cap: usize) -> Self {
        self.moment_cap = cap;
        self
    }

    /// Upper limit for automatic precision escalation.
    pub fn with_escalation_cap(mut self, bits: u32) -> Self {
        self.escalation_cap = bits;
        self
    }

    /// The same context at a different mantissa width (big-float only).
    pub fn at_bits(&self, bits: u32) -> Self {
        match self.mode {
            Mode::Exact => self.clone(),
            Mode::BigFloat { .. } => PrecisionContext { mode: Mode::BigFloat { bits }, ..self.clone() },
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }

    /// Mantissa bits for float work; exact mode falls back to [`EXACT_DISPLAY_BITS`].
    pub fn bits(&self) -> u32 {
        match self.mode {
            Mode::Exact => EXACT_DISPLAY_BITS,
            Mode::BigFloat { bits } => bits,
        }
    }

    pub fn tolerance(&self) -> &Float {
        &self.tolerance
    }

    /// Tolerance used by float-valued side computations, also in exact mode.
    pub fn float_tolerance(&self) -> Float {
        if self.is_exact() {
            Float::with_val(64, 1) << -((EXACT_DISPLAY_BITS / 2) as i32)
        } else {
            self.tolerance.clone()
        }
    }

    pub fn moment_cap(&self) -> usize {
        self.moment_cap
    }

    pub fn escalation_cap(&self) -> u32 {
        self.escalation_cap
    }

    /// Number of significant decimal digits that `bits` can carry.
    pub fn decimal_digits(&self) -> usize {
        digits_for_bits(self.bits())
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext::exact()
    }
}

pub(crate) fn digits_for_bits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// `max |a_i - b_i|` style helper: absolute value of a scalar as a float.
pub fn abs_float<T: Scalar>(x: &T, bits: u32) -> Float {
    x.to_float(bits).abs()
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, a.abs_ref()).max(&Float::with_val(prec, b.abs_ref()));
    if scale.is_zero() {
        return Float::new(prec);
    }
    diff / scale
}

/// `2^-e` at 64 bits, handy for thresholds.
pub fn pow2_neg(e: u32) -> Float {
    Float::with_val(64, 1) >> e
}
