use std::fmt;

use rug::{Float, Rational};

use crate::error::Result;
use crate::numeric::{parse_complex_list, Cplx, PrecisionContext, Scalar};

/// A finitely supported complex sequence with exact rational parts.
/// Trailing zeros are dropped, so the zero sequence has no entries.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FiniteSequence {
    entries: Vec<Cplx<Rational>>,
}

impl FiniteSequence {
    pub fn new(mut entries: Vec<Cplx<Rational>>) -> Self {
        while entries.last().is_some_and(|z| z.is_zero()) {
            entries.pop();
        }
        FiniteSequence { entries }
    }

    pub fn zero() -> Self {
        FiniteSequence::default()
    }

    pub fn from_reals(values: Vec<Rational>) -> Self {
        FiniteSequence::new(values.into_iter().map(Cplx::from_real).collect())
    }

    /// The unit vector `e_n`.
    pub fn unit(n: usize) -> Self {
        let mut v = vec![Rational::new(); n + 1];
        v[n] = Rational::from(1);
        FiniteSequence::from_reals(v)
    }

    /// Comma-separated `a+bi` literal, e.g. `1,0,1/2-3i`.
    pub fn parse(input: &str) -> Result<Self> {
        Ok(FiniteSequence::new(parse_complex_list(input)?))
    }

    pub fn entries(&self) -> &[Cplx<Rational>] {
        &self.entries
    }

    /// Index of the last nonzero entry.
    pub fn degree(&self) -> Option<usize> {
        self.entries.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: usize) -> Cplx<Rational> {
        self.entries.get(k).cloned().unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.is_real())
    }

    /// `sum |g_k|^2`, exact.
    pub fn norm_squared(&self) -> Rational {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Entries `0..len` converted into a scalar type, zero padded.
    pub fn to_scalars<T: Scalar>(&self, len: usize, ctx: &PrecisionContext) -> Vec<Cplx<T>> {
        (0..len).map(|k| self.get(k).to_scalar(ctx)).collect()
    }
}

impl fmt::Display for FiniteSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.entries.iter().map(|z| z.to_literal()).collect();
        f.write_str(&parts.join(","))
    }
}

/// `||g||_2` at `bits` of precision.
pub fn ell2_norm(g: &FiniteSequence, bits: u32) -> Float {
    Float::with_val(bits, g.norm_squared()).sqrt()
}

/// A coefficient vector `xi_0..xi_N` known up to the truncation order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector<T> {
    entries: Vec<Cplx<T>>,
    partial: Vec<T>,
}

impl<T: Scalar> CoeffVector<T> {
    pub fn new(entries: Vec<Cplx<T>>, ctx: &PrecisionContext) -> Self {
        let mut acc = T::zero(ctx);
        let partial = entries
            .iter()
            .map(|z| {
                acc = acc.clone() + z.norm_sqr();
                acc.clone()
            })
            .collect();
        CoeffVector { entries, partial }
    }

    pub fn entries(&self) -> &[Cplx<T>] {
        &self.entries
    }

    pub fn get(&self, k: usize) -> Option<&Cplx<T>> {
        self.entries.get(k)
    }

    /// The truncation order `N`; entries beyond it were not computed.
    pub fn order(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// `sum_{k <= n} |xi_k|^2` for `n = 0..=N`.
    pub fn norm_partial_sums(&self) -> &[T] {
        &self.partial
    }

    /// Squared norm of the truncation.
    pub fn norm_squared(&self, ctx: &PrecisionContext) -> T {
        self.partial.last().cloned().unwrap_or_else(|| T::zero(ctx))
    }

    pub fn to_strings(&self, digits: usize) -> Vec<String> {
        self.entries.iter().map(|z| z.to_decimal(digits)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_norms() {
        let g = FiniteSequence::parse("1,1,0,0").unwrap();
        assert_eq!(g.degree(), Some(1));
        assert_eq!(g.to_string(), "1,1");
        assert_eq!(ell2_norm(&g, 128), Float::with_val(128, 2).sqrt());
        assert_eq!(ell2_norm(&FiniteSequence::zero(), 64), 0);
        let avg = FiniteSequence::from_reals(vec![Rational::from((1, 4)); 4]);
        assert_eq!(ell2_norm(&avg, 64), 0.5);
        assert_eq!(FiniteSequence::unit(3).get(3), Cplx::from_real(Rational::from(1)));
        assert_eq!(FiniteSequence::parse("0,1/2-3i").unwrap().to_string(), "0,1/2-3i");
    }

    #[test]
    fn partial_sums_are_cumulative() {
        let ctx = PrecisionContext::exact();
        let g = FiniteSequence::parse("1,2i,3").unwrap();
        let v = CoeffVector::<crate::numeric::Surd>::new(g.to_scalars(3, &ctx), &ctx);
        let sums: Vec<Option<Rational>> = v.norm_partial_sums().iter().map(|s| s.as_rational()).collect();
        assert_eq!(sums, vec![Some(1.into()), Some(5.into()), Some(14.into())]);
        assert_eq!(v.order(), 2);
    }
}
