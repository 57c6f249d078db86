use crate::error::Result;
use crate::measures::MomentSequence;
use crate::numeric::{PrecisionContext, Scalar};

/// The order-`N` Hankel matrix `h_{i,j} = q_{i+j}`, `0 <= i, j <= N`,
/// stored through its `2N + 1` defining moments.
#[derive(Clone, Debug)]
pub struct HankelMatrix<T> {
    order: usize,
    moments: Vec<T>,
    source: MomentSequence,
}

impl<T: Scalar> HankelMatrix<T> {
    pub fn new(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<Self> {
        let moments = q.scalars(2 * order + 1, ctx)?;
        Ok(HankelMatrix { order, moments, source: q.clone() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.order + 1
    }

    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.moments[i + j]
    }

    pub fn moments(&self) -> &[T] {
        &self.moments
    }

    pub fn source(&self) -> &MomentSequence {
        &self.source
    }

    /// Row-major copy of the full matrix.
    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.size()).map(|i| (0..self.size()).map(|j| self.entry(i, j).clone()).collect()).collect()
    }

    /// The same matrix rebuilt at another working precision.
    pub(crate) fn at_bits(&self, ctx: &PrecisionContext, bits: u32) -> Result<Self> {
        HankelMatrix::new(&self.source, self.order, &ctx.at_bits(bits))
    }
}
