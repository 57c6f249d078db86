use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};

use super::{format_float, format_rational, PrecisionContext, Scalar};
use crate::error::{Error, Result};

/// One term `coeff * sqrt(radicand)` with a positive integer radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    coeff: Rational,
    radicand: Integer,
}

/// An exact real number `sum_i c_i * sqrt(r_i)` with rational `c_i` and
/// positive integer `r_i`.
///
/// Radicands are kept pairwise inequivalent modulo rational squares, so the
/// terms are linearly independent over the rationals and `is_zero` is exact.
/// Perfect-square radicands fold into the rational part (radicand 1).
#[derive(Clone, Debug, Default)]
pub struct Surd {
    terms: Vec<Term>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: Vec::new() }
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut s = Surd::zero();
        s.push(r, Integer::from(1));
        s
    }

    /// `sqrt(r)` for a nonnegative rational `r`.
    pub fn sqrt_of(r: &Rational) -> Result<Self> {
        if r.cmp0() == Ordering::Less {
            return Err(Error::NotRepresentable(format!("square root of negative {r}")));
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let (p, q) = r.clone().into_numer_denom();
        let mut s = Surd::zero();
        s.push(Rational::from((Integer::from(1), q.clone())), p * q);
        Ok(s)
    }

    /// Number of independent square classes in the value.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].radicand == 1)
    }

    /// Value is `c * sqrt(r)` for a single square class.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() <= 1
    }

    /// The rational `x^2` when `x` is a single term.
    pub fn square_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::new()),
            [t] => Some(Rational::from(&t.coeff * &t.coeff) * &t.radicand),
            _ => None,
        }
    }

    fn push(&mut self, coeff: Rational, radicand: Integer) {
        if coeff.cmp0() == Ordering::Equal {
            return;
        }
        debug_assert!(radicand > 0);
        let (coeff, radicand) = fold_square(coeff, radicand);
        if let Some(pos) = self.terms.iter().position(|t| t.radicand == radicand) {
            self.terms[pos].coeff += coeff;
            self.cleanup(pos);
            return;
        }
        for pos in 0..self.terms.len() {
            // sqrt(r) = sqrt(r * r_t) / r_t * sqrt(r_t) when r * r_t is a square
            let prod = Integer::from(&radicand * &self.terms[pos].radicand);
            if prod.is_perfect_square() {
                let root = prod.sqrt();
                let scale = Rational::from((root, self.terms[pos].radicand.clone()));
                self.terms[pos].coeff += coeff * scale;
                self.cleanup(pos);
                return;
            }
        }
        let at = self.terms.iter().position(|t| t.radicand > radicand).unwrap_or(self.terms.len());
        self.terms.insert(at, Term { coeff, radicand });
    }

    fn cleanup(&mut self, pos: usize) {
        if self.terms[pos].coeff.cmp0() == Ordering::Equal {
            self.terms.remove(pos);
        }
    }

    fn mul_ref(&self, other: &Surd) -> Surd {
        let mut out = Surd::zero();
        for a in &self.terms {
            for b in &other.terms {
                let g = Integer::from(a.radicand.gcd_ref(&b.radicand));
                let ra = Integer::from(a.radicand.div_exact_ref(&g));
                let rb = Integer::from(b.radicand.div_exact_ref(&g));
                let coeff = Rational::from(&a.coeff * &b.coeff) * g;
                out.push(coeff, ra * rb);
            }
        }
        out
    }

    fn add_ref(mut self, other: &Surd) -> Surd {
        for t in &other.terms {
            self.push(t.coeff.clone(), t.radicand.clone());
        }
        self
    }

    fn approx(&self, bits: u32) -> Float {
        let mut acc = Float::new(bits);
        for t in &self.terms {
            let root = Float::with_val(bits, &t.radicand).sqrt();
            acc += Float::with_val(bits, &t.coeff) * root;
        }
        acc
    }

    /// Symbolic rendering such as `3/2*sqrt(5) - 1/2`.
    pub fn to_symbolic(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.cmp0() == Ordering::Less;
            let mag = Rational::from(t.coeff.abs_ref());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if t.radicand == 1 {
                out.push_str(&format_rational(&mag));
            } else if mag == 1 {
                out.push_str(&format!("sqrt({})", t.radicand));
            } else {
                out.push_str(&format!("{}*sqrt({})", format_rational(&mag), t.radicand));
            }
        }
        out
    }
}

/// Square factors `p^2` with `p` below this are moved out of radicands.
const SMALL_SQUARE_LIMIT: u32 = 64;

fn fold_square(coeff: Rational, radicand: Integer) -> (Rational, Integer) {
    if radicand == 1 {
        return (coeff, radicand);
    }
    if radicand.is_perfect_square() {
        let root = radicand.sqrt();
        return (coeff * root, Integer::from(1));
    }
    let (mut coeff, mut radicand) = (coeff, radicand);
    for p in 2u32..SMALL_SQUARE_LIMIT {
        let sq = p * p;
        if radicand < sq {
            break;
        }
        while radicand.is_divisible_u(sq) {
            radicand /= sq;
            coeff *= p;
        }
    }
    (coeff, radicand)
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other).is_zero()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_symbolic())
    }
}

impl From<Rational> for Surd {
    fn from(r: Rational) -> Self {
        Surd::from_rational(r)
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Self {
        Surd::from_rational(Rational::from(v))
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Surd> for Surd {
    type Output = Surd;
    fn add(self, rhs: &'a Surd) -> Surd {
        self.add_ref(rhs)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self.add_ref(&-rhs)
    }
}

impl<'a> Sub<&'a Surd> for Surd {
    type Output = Surd;
    fn sub(self, rhs: &'a Surd) -> Surd {
        self.add_ref(&-rhs.clone())
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Surd> for Surd {
    type Output = Surd;
    fn mul(self, rhs: &'a Surd) -> Surd {
        self.mul_ref(rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for t in &mut self.terms {
            t.coeff = -std::mem::take(&mut t.coeff);
        }
        self
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn from_rational(r: &Rational, _ctx: &PrecisionContext) -> Self {
        Surd::from_rational(r.clone())
    }

    fn from_float(f: &Float) -> Result<Self> {
        Err(Error::ExactUnavailable(format!(
            "big-float value {} has no exact representation in this context",
            format_float(f, 20)
        )))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn sign(&self) -> Ordering {
        match self.terms.as_slice() {
            [] => Ordering::Equal,
            [t] => t.coeff.cmp0(),
            _ => {
                // Nonzero by construction; refine until the approximation is decisive.
                let mut bits = 128;
                loop {
                    let v = self.approx(bits);
                    let bound: Float = self
                        .terms
                        .iter()
                        .map(|t| Float::with_val(bits, &t.coeff).abs() * Float::with_val(bits, &t.radicand).sqrt())
                        .fold(Float::new(bits), |acc, x| acc + x)
                        >> (bits as i32 - 8);
                    if Float::with_val(bits, v.abs_ref()) > bound {
                        return v.cmp0().unwrap_or(Ordering::Equal);
                    }
                    bits *= 2;
                }
            }
        }
    }

    fn recip(&self) -> Result<Self> {
        match self.terms.as_slice() {
            [] => Err(Error::DivisionByZero),
            [t] => {
                // 1 / (c sqrt(r)) = sqrt(r) / (c r)
                let coeff = Rational::from(&t.coeff * &t.radicand).recip();
                let mut s = Surd::zero();
                s.push(coeff, t.radicand.clone());
                Ok(s)
            }
            _ => Err(Error::NotRepresentable(format!("reciprocal of multi-term surd {}", self))),
        }
    }

    fn sqrt(&self) -> Result<Self> {
        match self.as_rational() {
            Some(r) => Surd::sqrt_of(&r),
            None => Err(Error::NotRepresentable(format!("square root of irrational surd {}", self))),
        }
    }

    fn to_float(&self, bits: u32) -> Float {
        Float::with_val(bits, self.approx(bits + 32))
    }

    fn promote(&self, _bits: u32) -> Self {
        self.clone()
    }

    fn precision(&self) -> Option<u32> {
        None
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::new()),
            [t] if t.radicand == 1 => Some(t.coeff.clone()),
            _ => None,
        }
    }

    fn to_decimal(&self, digits: usize) -> String {
        match self.as_rational() {
            Some(r) => format_rational(&r),
            None => {
                let bits = ((digits as f64) / std::f64::consts::LOG10_2).ceil() as u32 + 16;
                format_float(&self.to_float(bits), digits)
            }
        }
    }

    fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn sqrt_folds_perfect_squares() {
        let s = Surd::sqrt_of(&q(9, 4)).unwrap();
        assert_eq!(s.as_rational(), Some(q(3, 2)));
        let t = Surd::sqrt_of(&q(1, 3)).unwrap();
        assert!(!t.is_rational());
        assert_eq!(t.square_rational(), Some(q(1, 3)));
    }

    #[test]
    fn products_of_conjugate_radicals_are_rational() {
        let d = q(46080, 7);
        let a = Surd::sqrt_of(&d).unwrap();
        let b = Surd::sqrt_of(&d.clone().recip()).unwrap();
        assert_eq!((a * b).as_rational(), Some(q(1, 1)));
    }

    #[test]
    fn equivalent_radicals_merge() {
        // sqrt(8) - 2 sqrt(2) == 0
        let a = Surd::sqrt_of(&q(8, 1)).unwrap();
        let b = Surd::sqrt_of(&q(2, 1)).unwrap() * Surd::from(2);
        assert!((a - b).is_zero());
        // sqrt(2/3) and sqrt(6) are in the same class
        let c = Surd::sqrt_of(&q(2, 3)).unwrap() * Surd::from(3) - Surd::sqrt_of(&q(6, 1)).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn reciprocal_of_monomial() {
        let a = Surd::sqrt_of(&q(5, 1)).unwrap() * Surd::from(3);
        let r = a.recip().unwrap();
        assert_eq!((a * r).as_rational(), Some(q(1, 1)));
        assert!(Surd::zero().recip().is_err());
        let two_terms = Surd::from(1) + Surd::sqrt_of(&q(2, 1)).unwrap();
        assert!(two_terms.recip().is_err());
    }

    #[test]
    fn sign_of_nearly_cancelling_sum() {
        // sqrt(2) - 141421356237/100000000000 > 0
        let s = Surd::sqrt_of(&q(2, 1)).unwrap() - Surd::from_rational(q(141421356237, 100000000000));
        assert_eq!(s.sign(), Ordering::Greater);
        assert_eq!((-s).sign(), Ordering::Less);
    }

    #[test]
    fn symbolic_rendering() {
        let s = Surd::sqrt_of(&q(5, 1)).unwrap() * Surd::from_rational(q(3, 2)) - Surd::from_rational(q(1, 2));
        assert_eq!(s.to_symbolic(), "-1/2 + 3/2*sqrt(5)");
        assert_eq!(Surd::sqrt_of(&q(180, 16)).unwrap().to_symbolic(), "3/2*sqrt(5)");
    }
}
