//! Real-valued integrands.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::numeric::format_rational;

/// A real function that can be integrated against a measure.
///
/// `eval_float` works at the precision of its argument and returns NaN where
/// the function is undefined. `eval_exact` is only needed on atoms in exact
/// mode, and `polynomial` lets density integrals go through moments.
pub trait RealFunction: Send + Sync {
    fn eval_float(&self, x: &Float) -> Float;

    fn eval_exact(&self, _x: &Rational) -> Option<Rational> {
        None
    }

    fn polynomial(&self) -> Option<&Polynomial> {
        None
    }
}

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0().is_eq()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Rational::new(); n + 1];
        coeffs[n] = Rational::from(1);
        Polynomial { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::default();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.cmp0().is_eq() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*x", format_rational(c))?,
                _ => write!(f, "{}*x^{k}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

impl RealFunction for Polynomial {
    fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        Some(self.eval(x))
    }

    fn polynomial(&self) -> Option<&Polynomial> {
        Some(self)
    }
}

/// Wraps a float closure.
pub struct FloatFn<F>(pub F);

impl<F> RealFunction for FloatFn<F>
where
    F: Fn(&Float) -> Float + Send + Sync,
{
    fn eval_float(&self, x: &Float) -> Float {
        (self.0)(x)
    }
}

/// A function given by its values at finitely many points and a fallback
/// polynomial elsewhere; used for indicators of atoms and for functions
/// living on the atoms of a discrete measure.
#[derive(Clone, Debug, PartialEq)]
pub struct PointValues {
    values: Vec<(Rational, Rational)>,
    elsewhere: Polynomial,
}

impl PointValues {
    pub fn new(values: Vec<(Rational, Rational)>, elsewhere: Polynomial) -> Self {
        PointValues { values, elsewhere }
    }

    /// Indicator of the single point `p`.
    pub fn indicator(p: Rational) -> Self {
        PointValues::new(vec![(p, Rational::from(1))], Polynomial::default())
    }

    pub fn values(&self) -> &[(Rational, Rational)] {
        &self.values
    }

    pub fn elsewhere(&self) -> &Polynomial {
        &self.elsewhere
    }
}

impl RealFunction for PointValues {
    fn eval_float(&self, x: &Float) -> Float {
        for (p, v) in &self.values {
            if *x == *p {
                return Float::with_val(x.prec(), v);
            }
        }
        self.elsewhere.eval_float(x)
    }

    fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        for (p, v) in &self.values {
            if x == p {
                return Some(v.clone());
            }
        }
        Some(self.elsewhere.eval(x))
    }
}

/// `t^n * f(t)`.
pub(crate) struct TimesPower<'a> {
    pub f: &'a dyn RealFunction,
    pub n: u32,
}

impl RealFunction for TimesPower<'_> {
    fn eval_float(&self, x: &Float) -> Float {
        let v = self.f.eval_float(x);
        Float::with_val(x.prec(), x.pow(self.n)) * v
    }

    fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        let v = self.f.eval_exact(x)?;
        Some(Rational::from(x.pow(self.n)) * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_trims_and_multiplies() {
        let p = Polynomial::new(vec![Rational::from(1), Rational::from(1), Rational::new()]);
        assert_eq!(p.degree(), Some(1));
        let sq = p.mul(&p);
        assert_eq!(sq.coeffs(), &[Rational::from(1), Rational::from(2), Rational::from(1)]);
        assert_eq!(sq.eval(&Rational::from(2)), Rational::from(9));
        assert_eq!(Polynomial::default().degree(), None);
        assert_eq!(sq.to_string(), "1 + 2*x + 1*x^2");
    }

    #[test]
    fn point_values_fall_back() {
        let chi = PointValues::indicator(Rational::from(1));
        assert_eq!(chi.eval_exact(&Rational::from(1)), Some(Rational::from(1)));
        assert_eq!(chi.eval_exact(&Rational::from((1, 2))), Some(Rational::new()));
        assert_eq!(chi.eval_float(&Float::with_val(64, 1)), 1);
        assert!(chi.eval_float(&Float::with_val(64, 0.999)).is_zero());
    }
}
