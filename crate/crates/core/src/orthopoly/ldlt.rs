use std::cmp::Ordering;

use rug::Float;

use super::HankelMatrix;
use crate::error::{Error, Result};
use crate::numeric::{pow2_neg, relative_difference, PrecisionContext, Scalar};

/// Pivots whose relative change under doubled precision exceeds `2^-32` trigger a retry.
pub const PIVOT_STABILITY_BITS: u32 = 32;

/// `H = L D L^T` with `L` unit lower triangular and `D` positive.
#[derive(Clone, Debug)]
pub struct LdltFactorization<T> {
    /// Row `i` holds `L_{i,0..i}`; the unit diagonal is implicit.
    lower: Vec<Vec<T>>,
    pivots: Vec<T>,
    bits: Option<u32>,
}

impl<T: Scalar> LdltFactorization<T> {
    pub fn order(&self) -> usize {
        self.pivots.len() - 1
    }

    /// `L_{i,j}` for `j < i`, 1 on the diagonal, 0 above.
    pub fn l(&self, i: usize, j: usize, ctx: &PrecisionContext) -> T {
        match j.cmp(&i) {
            Ordering::Less => self.lower[i][j].clone(),
            Ordering::Equal => T::one(ctx),
            Ordering::Greater => T::zero(ctx),
        }
    }

    pub fn pivots(&self) -> &[T] {
        &self.pivots
    }

    pub fn pivot(&self, k: usize) -> &T {
        &self.pivots[k]
    }

    /// Working precision the factorization was accepted at.
    pub fn bits(&self) -> Option<u32> {
        self.bits
    }

    /// Context matching the accepted precision.
    pub(crate) fn context(&self, ctx: &PrecisionContext) -> PrecisionContext {
        match self.bits {
            Some(b) => ctx.at_bits(b),
            None => ctx.clone(),
        }
    }

    /// Row-major `L D L^T`.
    pub fn reconstruct(&self, ctx: &PrecisionContext) -> Vec<Vec<T>> {
        let n = self.pivots.len();
        let ctx = self.context(ctx);
        let mut out = vec![vec![T::zero(&ctx); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = T::zero(&ctx);
                for k in 0..=i.min(j) {
                    acc = acc + self.l(i, k, &ctx) * &self.l(j, k, &ctx) * &self.pivots[k];
                }
                *cell = acc;
            }
        }
        out
    }
}

fn factor<T: Scalar>(h: &HankelMatrix<T>, ctx: &PrecisionContext) -> Result<LdltFactorization<T>> {
    let n = h.size();
    let mut lower: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut pivots: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<T> = Vec::with_capacity(i);
        for j in 0..i {
            let mut acc = h.entry(i, j).clone();
            for k in 0..j {
                acc = acc - row[k].clone() * &lower[j][k] * &pivots[k];
            }
            row.push(acc.div(&pivots[j])?);
        }
        let mut d = h.entry(i, i).clone();
        for k in 0..i {
            d = d - row[k].square() * &pivots[k];
        }
        if d.sign() != Ordering::Greater {
            return Err(Error::NonPositivePivot { index: i, pivot: d.to_decimal(ctx.decimal_digits().min(40)) });
        }
        lower.push(row);
        pivots.push(d);
    }
    let bits = h.moments().iter().filter_map(|q| q.precision()).min();
    Ok(LdltFactorization { lower, pivots, bits })
}

fn pivots_agree<T: Scalar>(a: &LdltFactorization<T>, b: &LdltFactorization<T>, bits: u32) -> Option<usize> {
    let limit = pow2_neg(PIVOT_STABILITY_BITS);
    for (k, (x, y)) in a.pivots.iter().zip(&b.pivots).enumerate() {
        let rel: Float = relative_difference(&x.to_float(bits), &y.to_float(bits));
        if rel > limit {
            return Some(k);
        }
    }
    None
}

/// LDL^T factorization of a Hankel matrix.
///
/// Exact types factor once. Float types factor at the context precision and
/// at twice that, doubling until consecutive pivots agree to `2^-32` relative
/// or the escalation cap is reached; the finer factorization is returned.
pub fn ldlt<T: Scalar>(h: &HankelMatrix<T>, ctx: &PrecisionContext) -> Result<LdltFactorization<T>> {
    if T::EXACT || ctx.is_exact() {
        return factor(h, ctx);
    }
    let mut bits = ctx.bits();
    let mut current = factor(&h.at_bits(ctx, bits)?, &ctx.at_bits(bits));
    loop {
        let next = bits * 2;
        if next > ctx.escalation_cap() {
            return match current {
                Err(e) => Err(e),
                Ok(_) => Err(Error::PrecisionExhausted {
                    bits,
                    reason: "Hankel pivots did not stabilize under doubled precision".into(),
                }),
            };
        }
        let finer = factor(&h.at_bits(ctx, next)?, &ctx.at_bits(next));
        match (&current, &finer) {
            (Ok(a), Ok(b)) if pivots_agree(a, b, next).is_none() => return finer,
            (Err(Error::NonPositivePivot { index: i, .. }), Err(Error::NonPositivePivot { index: j, .. }))
                if i == j =>
            {
                return finer;
            }
            _ => {}
        }
        bits = next;
        current = finer;
    }
}
