//! Orthonormal polynomials and the monomial/orthonormal transition matrices.
//!
//! From `H = L D L^T` the matrix `C = D^{1/2} L^T` expands monomials in the
//! orthonormal basis (`x^n = sum_k c_{k,n} P_k`) and `B = C^{-1}` gives the
//! monomial coefficients of each `P_n` column by column.

mod basis;
mod hankel;
mod ldlt;
mod triangular;

use rug::Float;

use crate::error::{Error, Result};
use crate::measures::{Measure, MomentSequence};
use crate::numeric::{pow2_neg, PrecisionContext, Scalar};

pub use basis::{eval_column, horner, OrthonormalBasis};
pub use hankel::HankelMatrix;
pub use ldlt::{ldlt, LdltFactorization, PIVOT_STABILITY_BITS};
pub use triangular::{matrix_csv, Role, TriangularMatrix};

/// `h_{i,j} = q_{i+j}` for `0 <= i, j <= order`.
pub fn hankel_matrix<T: Scalar>(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<HankelMatrix<T>> {
    HankelMatrix::new(q, order, ctx)
}

/// `c_{k,n} = L_{n,k} sqrt(d_k)`.
pub fn c_matrix<T: Scalar>(f: &LdltFactorization<T>, ctx: &PrecisionContext) -> Result<TriangularMatrix<T>> {
    let ctx = f.context(ctx);
    let roots = f.pivots().iter().map(|d| d.sqrt()).collect::<Result<Vec<T>>>()?;
    let columns = (0..=f.order()).map(|n| (0..=n).map(|k| f.l(n, k, &ctx) * &roots[k]).collect()).collect();
    TriangularMatrix::from_columns(columns, Role::C)
}

/// Inverse of an upper-triangular matrix with nonzero diagonal by back-substitution.
#[allow(clippy::needless_range_loop)]
pub fn invert_upper<T: Scalar>(c: &TriangularMatrix<T>) -> Result<TriangularMatrix<T>> {
    let n = c.size();
    let mut columns: Vec<Vec<T>> = Vec::with_capacity(n);
    for j in 0..n {
        if c.diagonal(j).is_zero() {
            return Err(Error::ZeroDiagonal(j));
        }
        let mut col: Vec<Option<T>> = vec![None; j + 1];
        col[j] = Some(c.diagonal(j).recip()?);
        for i in (0..j).rev() {
            let mut acc = c.get(i, i + 1).expect("upper").clone() * col[i + 1].as_ref().expect("filled");
            for k in i + 2..=j {
                acc = acc + c.get(i, k).expect("upper").clone() * col[k].as_ref().expect("filled");
            }
            col[i] = Some(-acc.div(c.diagonal(i))?);
        }
        columns.push(col.into_iter().map(|x| x.expect("filled")).collect());
    }
    let role = if c.role() == Role::C { Role::B } else { Role::Generic };
    TriangularMatrix::from_columns(columns, Role::Generic).map(|m| m.with_role(role))
}

/// `B = C^{-1}`.
///
/// For float entries both `B C - I` and `C B - I` must be at most
/// `2^-(bits/2)` in max norm, `bits` being the context precision. The
/// entries of `B` and `C` grow very fast for ill-conditioned moment problems,
/// so the inversion is repeated at doubled precision until both residuals
/// meet the bound or the escalation cap is reached.
pub fn b_matrix<T: Scalar>(c: &TriangularMatrix<T>, ctx: &PrecisionContext) -> Result<TriangularMatrix<T>> {
    if T::EXACT || ctx.is_exact() {
        return invert_upper(c);
    }
    let target = pow2_neg(ctx.bits() / 2);
    let mut bits = c.precision().unwrap_or(ctx.bits()).max(ctx.bits());
    loop {
        let cp = c.promote(bits);
        let b = invert_upper(&cp)?;
        let (bc, cb) = residuals(&b, &cp)?;
        if bc <= target && cb <= target {
            return Ok(b);
        }
        if bits * 2 > ctx.escalation_cap() {
            return Err(Error::PrecisionExhausted {
                bits,
                reason: format!("inverse residual {} exceeds 2^-{}", bc.max(&cb).to_f64(), ctx.bits() / 2),
            });
        }
        bits *= 2;
    }
}

/// Max-norm residuals of `B C - I` and `C B - I`.
pub fn residuals<T: Scalar>(b: &TriangularMatrix<T>, c: &TriangularMatrix<T>) -> Result<(Float, Float)> {
    let bits = b.precision().max(c.precision()).unwrap_or(crate::numeric::EXACT_DISPLAY_BITS);
    Ok((b.mul(c)?.identity_residual(bits), c.mul(b)?.identity_residual(bits)))
}

/// Recurrence coefficients read from `B`.
pub fn recurrence<T: Scalar>(b: &TriangularMatrix<T>) -> Result<OrthonormalBasis<T>> {
    OrthonormalBasis::from_b(b)
}

/// `sum_{n <= N} sum_{k <= n} b_{k,n}^2` for each `N` in `orders`.
pub fn hs_partial_sums<T: Scalar>(b: &TriangularMatrix<T>, orders: &[usize], ctx: &PrecisionContext) -> Result<Vec<T>> {
    b.column_mass_partial_sums(orders, ctx)
}

/// Everything derived from one moment sequence at one order.
#[derive(Clone, Debug)]
pub struct OrthoSystem<T> {
    pub hankel: HankelMatrix<T>,
    pub ldlt: LdltFactorization<T>,
    pub c: TriangularMatrix<T>,
    pub b: TriangularMatrix<T>,
    pub basis: OrthonormalBasis<T>,
}

impl<T: Scalar> OrthoSystem<T> {
    pub fn from_moments(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<Self> {
        let hankel = hankel_matrix(q, order, ctx)?;
        let ldlt = ldlt(&hankel, ctx)?;
        let c = c_matrix(&ldlt, ctx)?;
        let b = b_matrix(&c, ctx)?;
        let basis = recurrence(&b)?;
        Ok(OrthoSystem { hankel, ldlt, c, b, basis })
    }

    pub fn from_measure(m: &Measure, order: usize, ctx: &PrecisionContext) -> Result<Self> {
        let q = m.moments(2 * order, ctx)?;
        Self::from_moments(&q, order, ctx)
    }

    pub fn order(&self) -> usize {
        self.c.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Catalog;
    use crate::numeric::{Cplx, Real, Surd};
    use rug::Rational;

    fn uniform() -> Measure {
        Measure::catalog(Catalog::Uniform { a: Rational::from(-1), b: Rational::from(1) })
    }

    fn gaussian() -> Measure {
        Measure::catalog(Catalog::Gaussian { mean: Rational::new(), sd: Rational::from(1) })
    }

    fn s(r: (i64, i64)) -> Surd {
        Surd::from(Rational::from(r))
    }

    fn sqrt(r: (i64, i64)) -> Surd {
        Surd::sqrt_of(&Rational::from(r)).unwrap()
    }

    #[test]
    fn hankel_examples() {
        let ctx = PrecisionContext::exact();
        let q = uniform().moments(2, &ctx).unwrap();
        let h: HankelMatrix<Surd> = hankel_matrix(&q, 1, &ctx).unwrap();
        assert_eq!(h.rows(), vec![vec![s((1, 1)), s((0, 1))], vec![s((0, 1)), s((1, 3))]]);
        let qg = gaussian().moments(4, &ctx).unwrap();
        let hg: HankelMatrix<Surd> = hankel_matrix(&qg, 2, &ctx).unwrap();
        assert_eq!(hg.entry(2, 2), &s((3, 1)));
        let short = uniform().moments(2, &ctx).unwrap();
        assert!(matches!(
            hankel_matrix::<Surd>(&short, 2, &ctx),
            Err(Error::InsufficientMoments { needed: 5, available: 3 })
        ));
    }

    #[test]
    fn ldlt_examples() {
        let ctx = PrecisionContext::exact();
        let qg = gaussian().moments(4, &ctx).unwrap();
        let f = ldlt(&hankel_matrix::<Surd>(&qg, 2, &ctx).unwrap(), &ctx).unwrap();
        assert_eq!(f.pivots(), &[s((1, 1)), s((1, 1)), s((2, 1))]);
        assert_eq!(f.l(2, 0, &ctx), s((1, 1)));
        let atom = Measure::discrete(vec![(Rational::from(1), Rational::from(1))]).unwrap();
        let qa = atom.moments(2, &ctx).unwrap();
        let err = ldlt(&hankel_matrix::<Surd>(&qa, 1, &ctx).unwrap(), &ctx).unwrap_err();
        assert!(matches!(err, Error::NonPositivePivot { index: 1, .. }));
        assert_eq!(err.to_string(), "Hankel matrix not positive definite at order 1 (pivot 0)");
    }

    #[test]
    fn uniform_transition_matrices() {
        let ctx = PrecisionContext::exact();
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 2, &ctx).unwrap();
        assert_eq!(sys.c.column(2), &[s((1, 3)), s((0, 1)), sqrt((4, 45))]);
        assert_eq!(sys.b.diagonal(1), &sqrt((3, 1)));
        let five = sqrt((5, 1));
        assert_eq!(sys.b.column(2)[0], -(five.clone() * &s((1, 2))));
        assert_eq!(sys.b.column(2)[2], five * &s((3, 2)));
        assert!(sys.b.mul(&sys.c).unwrap().is_identity());
        assert!(sys.c.mul(&sys.b).unwrap().is_identity());
        assert!(sys.basis.alpha().iter().all(|a| a.is_zero()));
        assert_eq!(sys.basis.beta()[0], sqrt((1, 3)));
        let hs = hs_partial_sums(&sys.b, &[0, 1], &ctx).unwrap();
        assert_eq!(hs[1], s((4, 1)));
    }

    #[test]
    fn basis_evaluation() {
        let ctx = PrecisionContext::exact();
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 3, &ctx).unwrap();
        let one = Cplx::real(s((1, 1)), &ctx);
        assert_eq!(sys.basis.eval(1, &one, &ctx).unwrap().re, sqrt((3, 1)));
        let i = Cplx::new(s((0, 1)), s((1, 1)));
        let p2 = sys.basis.eval(2, &i, &ctx).unwrap();
        assert_eq!(p2.re, -(sqrt((5, 1)) * &s((2, 1))));
        assert!(p2.im.is_zero());
        for k in 0..=3 {
            let z = Cplx::new(s((1, 3)), s((-2, 5)));
            assert_eq!(sys.basis.eval(k, &z, &ctx).unwrap(), eval_column(&sys.b, k, &z, &ctx).unwrap());
        }
        assert!(matches!(sys.basis.eval(4, &one, &ctx), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gaussian_recurrence() {
        let ctx = PrecisionContext::exact();
        let sys = OrthoSystem::<Surd>::from_measure(&gaussian(), 6, &ctx).unwrap();
        for (k, b) in sys.basis.beta().iter().enumerate() {
            assert_eq!(*b, sqrt((k as i64 + 1, 1)));
        }
        assert_eq!(sys.c.column(1), &[s((0, 1)), s((1, 1))]);
    }

    #[test]
    fn identity_inverse() {
        let ctx = PrecisionContext::exact();
        let id = TriangularMatrix::<Surd>::identity(4, &ctx);
        assert_eq!(invert_upper(&id).unwrap(), id);
        let hs = hs_partial_sums(&id, &[4], &ctx).unwrap();
        assert_eq!(hs[0], s((5, 1)));
    }

    #[test]
    fn float_mode_matches_exact() {
        let ctx = PrecisionContext::big_float(256).unwrap();
        let sys = OrthoSystem::<Real>::from_measure(&gaussian(), 8, &ctx).unwrap();
        let (bc, cb) = residuals(&sys.b, &sys.c).unwrap();
        assert!(bc < pow2_neg(128) && cb < pow2_neg(128));
        for (k, b) in sys.basis.beta().iter().enumerate() {
            let want = Float::with_val(256, k + 1).sqrt();
            assert!(Float::with_val(256, b.as_float() - &want).abs() < pow2_neg(200));
        }
    }

    #[test]
    fn csv_dump_is_column_major() {
        let ctx = PrecisionContext::exact();
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 1, &ctx).unwrap();
        let csv = sys.b.to_csv(20, &ctx).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "row,col,value");
        assert_eq!(lines[1], "0,0,1");
        assert_eq!(lines[2], "1,0,0");
        assert!(lines[4].starts_with("1,1,1.73205080756887729"));
    }
}
