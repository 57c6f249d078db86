use super::TriangularMatrix;
use crate::error::{Error, Result};
use crate::numeric::{Cplx, PrecisionContext, Scalar};

/// Orthonormal polynomials through their three-term recurrence
/// `x P_k = beta_{k+1} P_{k+1} + alpha_k P_k + beta_k P_{k-1}`.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis<T> {
    /// `alpha_0..alpha_{N-1}`.
    alpha: Vec<T>,
    /// `beta_1..beta_N`, stored from index 0.
    beta: Vec<T>,
    /// Leading coefficients `b_{k,k}`, `k = 0..=N`.
    leading: Vec<T>,
}

impl<T: Scalar> OrthonormalBasis<T> {
    /// Read the recurrence off consecutive columns of `B`.
    pub fn from_b(b: &TriangularMatrix<T>) -> Result<Self> {
        let n = b.order();
        let leading: Vec<T> = (0..=n).map(|k| b.diagonal(k).clone()).collect();
        let mut beta = Vec::with_capacity(n);
        for k in 0..n {
            beta.push(leading[k].div(&leading[k + 1])?);
        }
        let mut alpha = Vec::with_capacity(n);
        for k in 0..n {
            // coefficient of x^k in x P_k - beta_{k+1} P_{k+1}
            let sub = if k == 0 { None } else { b.get(k - 1, k).cloned() };
            let next = beta[k].clone() * b.get(k, k + 1).expect("upper entry");
            let num = match sub {
                Some(s) => s - next,
                None => -next,
            };
            alpha.push(num.div(&leading[k])?);
        }
        Ok(OrthonormalBasis { alpha, beta, leading })
    }

    pub fn order(&self) -> usize {
        self.leading.len() - 1
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    /// `beta_1..beta_N`.
    pub fn beta(&self) -> &[T] {
        &self.beta
    }

    pub fn leading(&self) -> &[T] {
        &self.leading
    }

    /// `P_0 = q_0^{-1/2}`.
    pub fn p0(&self) -> &T {
        &self.leading[0]
    }

    /// `P_0(z)..P_k(z)` by the recurrence.
    pub fn eval_upto(&self, k: usize, z: &Cplx<T>, ctx: &PrecisionContext) -> Result<Vec<Cplx<T>>> {
        if k > self.order() {
            return Err(Error::OutOfRange { index: k, order: self.order() });
        }
        let mut out = Vec::with_capacity(k + 1);
        out.push(Cplx::real(self.leading[0].clone(), ctx));
        for j in 0..k {
            let shifted = z.clone() - &Cplx::real(self.alpha[j].clone(), ctx);
            let mut next = shifted * &out[j];
            if j > 0 {
                next = next - out[j - 1].scale(&self.beta[j - 1]);
            }
            out.push(next.div_real(&self.beta[j])?);
        }
        Ok(out)
    }

    /// `P_k(z)`.
    pub fn eval(&self, k: usize, z: &Cplx<T>, ctx: &PrecisionContext) -> Result<Cplx<T>> {
        Ok(self.eval_upto(k, z, ctx)?.pop().expect("nonempty"))
    }
}

/// Horner evaluation of the polynomial whose monomial coefficients are column `k` of `b`.
pub fn eval_column<T: Scalar>(
    b: &TriangularMatrix<T>,
    k: usize,
    z: &Cplx<T>,
    ctx: &PrecisionContext,
) -> Result<Cplx<T>> {
    if k > b.order() {
        return Err(Error::OutOfRange { index: k, order: b.order() });
    }
    Ok(horner(b.column(k), z, ctx))
}

/// `sum_n c_n z^n` for real coefficients.
pub fn horner<T: Scalar>(coeffs: &[T], z: &Cplx<T>, ctx: &PrecisionContext) -> Cplx<T> {
    let mut acc = Cplx::zero(ctx);
    for c in coeffs.iter().rev() {
        acc = acc * z + &Cplx::real(c.clone(), ctx);
    }
    acc
}
