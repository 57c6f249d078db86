use rug::{Float, Rational};

use super::Measure;
use crate::error::{Error, Result};
use crate::numeric::{format_float, format_rational, PrecisionContext, Scalar};

/// Stored moment values.
#[derive(Clone, Debug, PartialEq)]
pub enum MomentValues {
    Exact(Vec<Rational>),
    Float(Vec<Float>),
}

/// A finite prefix `q_0..q_N` of a moment sequence.
///
/// Float sequences remember the measure that produced them so that they can
/// be regenerated when a computation escalates its precision.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    values: MomentValues,
    source: Option<Measure>,
}

impl MomentSequence {
    /// User-supplied exact moments.
    pub fn from_rationals(values: Vec<Rational>) -> Result<Self> {
        let seq = MomentSequence { values: MomentValues::Exact(values), source: None };
        seq.validate()?;
        Ok(seq)
    }

    /// User-supplied float moments.
    pub fn from_floats(values: Vec<Float>) -> Result<Self> {
        let seq = MomentSequence { values: MomentValues::Float(values), source: None };
        seq.validate()?;
        Ok(seq)
    }

    pub(crate) fn generated(values: MomentValues, source: Measure) -> Self {
        MomentSequence { values, source: Some(source) }
    }

    fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InsufficientMoments { needed: 1, available: 0 });
        }
        for n in (0..self.len()).step_by(2) {
            let positive = match &self.values {
                MomentValues::Exact(v) => v[n].cmp0().is_gt(),
                MomentValues::Float(v) => v[n].is_sign_positive() && !v[n].is_zero(),
            };
            if !positive {
                return Err(Error::NonPositiveMoment(n));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match &self.values {
            MomentValues::Exact(v) => v.len(),
            MomentValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest available index.
    pub fn max_index(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, MomentValues::Exact(_))
    }

    pub fn values(&self) -> &MomentValues {
        &self.values
    }

    pub fn source(&self) -> Option<&Measure> {
        self.source.as_ref()
    }

    /// Precision of stored floats, `None` when exact.
    pub fn bits(&self) -> Option<u32> {
        match &self.values {
            MomentValues::Exact(_) => None,
            MomentValues::Float(v) => v.iter().map(|f| f.prec()).min(),
        }
    }

    pub fn exact(&self, n: usize) -> Option<&Rational> {
        match &self.values {
            MomentValues::Exact(v) => v.get(n),
            MomentValues::Float(_) => None,
        }
    }

    /// `q_n` as a float at `bits`.
    pub fn float(&self, n: usize, bits: u32) -> Float {
        match &self.values {
            MomentValues::Exact(v) => Float::with_val(bits, &v[n]),
            MomentValues::Float(v) => Float::with_val(bits, &v[n]),
        }
    }

    pub fn require(&self, count: usize) -> Result<()> {
        if self.len() < count {
            return Err(Error::InsufficientMoments { needed: count, available: self.len() });
        }
        Ok(())
    }

    /// The first `count` moments converted to `T`. Float values are
    /// regenerated from the source measure when the requested precision
    /// exceeds the stored one.
    pub fn scalars<T: Scalar>(&self, count: usize, ctx: &PrecisionContext) -> Result<Vec<T>> {
        self.require(count)?;
        match &self.values {
            MomentValues::Exact(v) => Ok(v[..count].iter().map(|q| T::from_rational(q, ctx)).collect()),
            MomentValues::Float(v) => {
                if T::EXACT {
                    return Err(Error::ExactUnavailable("moments are only known as floats; use big-float mode".into()));
                }
                let bits = ctx.bits();
                if self.bits().is_some_and(|b| b < bits) {
                    if let Some(src) = &self.source {
                        let fresh = src.moments(count - 1, ctx)?;
                        if fresh.bits().is_none_or(|b| b >= bits) {
                            return fresh.scalars(count, ctx);
                        }
                    }
                }
                v[..count].iter().map(|q| T::from_float(&Float::with_val(bits, q))).collect()
            }
        }
    }

    /// Prefix of length `count`.
    pub fn truncated(&self, count: usize) -> Result<Self> {
        self.require(count)?;
        let values = match &self.values {
            MomentValues::Exact(v) => MomentValues::Exact(v[..count].to_vec()),
            MomentValues::Float(v) => MomentValues::Float(v[..count].to_vec()),
        };
        Ok(MomentSequence { values, source: self.source.clone() })
    }

    /// Decimal strings: `p/q` for exact values, `digits` significant digits otherwise.
    pub fn to_strings(&self, digits: usize) -> Vec<String> {
        match &self.values {
            MomentValues::Exact(v) => v.iter().map(format_rational).collect(),
            MomentValues::Float(v) => v.iter().map(|f| format_float(f, digits)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Real, Surd};

    #[test]
    fn validation_rejects_bad_sequences() {
        assert!(MomentSequence::from_rationals(vec![]).is_err());
        assert_eq!(
            MomentSequence::from_rationals(vec![Rational::from(1), Rational::from(5), Rational::from(-1)]).unwrap_err(),
            Error::NonPositiveMoment(2)
        );
        let ok = MomentSequence::from_rationals(vec![Rational::from(2), Rational::from(-3)]).unwrap();
        assert_eq!(ok.max_index(), 1);
    }

    #[test]
    fn conversions() {
        let seq =
            MomentSequence::from_rationals(vec![Rational::from(1), Rational::new(), Rational::from((1, 3))]).unwrap();
        let ctx = PrecisionContext::exact();
        let s: Vec<Surd> = seq.scalars(3, &ctx).unwrap();
        assert_eq!(s[2], Surd::from(Rational::from((1, 3))));
        let fctx = PrecisionContext::big_float(128).unwrap();
        let r: Vec<Real> = seq.scalars(2, &fctx).unwrap();
        assert_eq!(r[0].prec(), 128);
        assert!(seq.scalars::<Real>(4, &fctx).is_err());
        assert_eq!(seq.to_strings(10), vec!["1", "0", "1/3"]);
    }

    #[test]
    fn float_sequences_refuse_exact_mode() {
        let seq = MomentSequence::from_floats(vec![Float::with_val(64, 1.5)]).unwrap();
        assert!(matches!(seq.scalars::<Surd>(1, &PrecisionContext::exact()), Err(Error::ExactUnavailable(_))));
    }
}
