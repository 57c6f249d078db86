//! The Hankel form, the operator `A g = sum g_n x^n`, its adjoint
//! coefficients, the density witness `B^t eta` and the closure formula.

mod sequence;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::measures::{Measure, MomentSequence, Polynomial, RealFunction, TimesPower};
use crate::numeric::{Cplx, PrecisionContext, Scalar};
use crate::orthopoly::{OrthoSystem, OrthonormalBasis, TriangularMatrix};
use crate::probes::trend::{classify_increments, Trend};
use crate::probes::{Evidence, ProbeReport, Verdict};

pub use sequence::{ell2_norm, CoeffVector, FiniteSequence};

/// `q[g,g] = sum_{n,m} q_{n+m} g_n conj(g_m)`.
pub fn hankel_form<T: Scalar>(q: &MomentSequence, g: &FiniteSequence, ctx: &PrecisionContext) -> Result<T> {
    let Some(d) = g.degree() else {
        return Ok(T::zero(ctx));
    };
    let q: Vec<T> = q.scalars(2 * d + 1, ctx)?;
    let g = g.to_scalars::<T>(d + 1, ctx);
    let mut total = T::zero(ctx);
    for n in 0..=d {
        total = total + q[2 * n].clone() * &g[n].norm_sqr();
        for m in n + 1..=d {
            let re = g[n].re.clone() * &g[m].re + g[n].im.clone() * &g[m].im;
            total = total + T::from_i64(2, ctx) * &(q[n + m].clone() * &re);
        }
    }
    Ok(total)
}

/// `A g (z) = sum g_n z^n` by Horner's rule.
pub fn apply_a<T: Scalar>(g: &FiniteSequence, z: &Cplx<T>, ctx: &PrecisionContext) -> Cplx<T> {
    complex_horner(&g.to_scalars::<T>(g.entries().len(), ctx), z, ctx)
}

fn complex_horner<T: Scalar>(coeffs: &[Cplx<T>], z: &Cplx<T>, ctx: &PrecisionContext) -> Cplx<T> {
    coeffs.iter().rev().fold(Cplx::zero(ctx), |acc, c| acc * z + c)
}

/// `|A g(x)|^2` on the real line as a polynomial with rational coefficients.
pub fn squared_modulus(g: &FiniteSequence) -> Polynomial {
    let re = Polynomial::new(g.entries().iter().map(|z| z.re.clone()).collect());
    let im = Polynomial::new(g.entries().iter().map(|z| z.im.clone()).collect());
    let mut coeffs = re.mul(&re).coeffs().to_vec();
    let im2 = im.mul(&im);
    for (k, c) in im2.coeffs().iter().enumerate() {
        if k < coeffs.len() {
            coeffs[k] += c;
        } else {
            coeffs.push(c.clone());
        }
    }
    Polynomial::new(coeffs)
}

/// `||A g||^2` computed three independent ways.
#[derive(Clone, Debug, PartialEq)]
pub struct NormRoutes<T> {
    /// The double sum `q[g,g]`.
    pub form: T,
    /// `integral |A g|^2 dM`.
    pub integral: T,
    /// `||C g||^2`; absent when the Hankel matrix of the needed order is singular.
    pub coefficient: Option<T>,
    pub note: Option<String>,
}

impl<T: Scalar> NormRoutes<T> {
    /// Largest pairwise relative difference between the available routes.
    pub fn spread(&self, bits: u32) -> Float {
        let mut vals = vec![self.form.to_float(bits), self.integral.to_float(bits)];
        if let Some(c) = &self.coefficient {
            vals.push(c.to_float(bits));
        }
        let mut worst = Float::new(bits);
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                let d = crate::numeric::relative_difference(&vals[i], &vals[j]);
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

pub fn a_norm_squared<T: Scalar>(m: &Measure, g: &FiniteSequence, ctx: &PrecisionContext) -> Result<NormRoutes<T>> {
    let d = g.degree().unwrap_or(0);
    match OrthoSystem::<T>::from_measure(m, d, ctx) {
        Ok(system) => a_norm_squared_with(m, g, Some(&system), ctx),
        Err(e @ Error::NonPositivePivot { .. }) => {
            let mut routes = a_norm_squared_with(m, g, None, ctx)?;
            routes.note = Some(format!("coefficient route skipped: {e}"));
            Ok(routes)
        }
        Err(e) => Err(e),
    }
}

/// As [`a_norm_squared`], reusing a precomputed system whose order covers `deg g`.
pub fn a_norm_squared_with<T: Scalar>(
    m: &Measure,
    g: &FiniteSequence,
    system: Option<&OrthoSystem<T>>,
    ctx: &PrecisionContext,
) -> Result<NormRoutes<T>> {
    let d = g.degree().unwrap_or(0);
    let q = m.moments(2 * d, ctx)?;
    let form = hankel_form(&q, g, ctx)?;
    let integral = m.integrate::<T>(&squared_modulus(g), ctx)?;
    let coefficient = match system {
        Some(s) => {
            let cg = s.c.apply(&g.to_scalars::<T>(d + 1, ctx), ctx)?;
            Some(cg.iter().fold(T::zero(ctx), |acc, z| acc + z.norm_sqr()))
        }
        None => None,
    };
    Ok(NormRoutes { form, integral, coefficient, note: None })
}

/// What `u` in `u_n = integral u(t) t^n dM(t)` is.
#[derive(Clone, Copy)]
pub enum AdjointSource<'a> {
    /// A function of `t`.
    Function(&'a dyn RealFunction),
    /// `u = sum g_k P_k` in the orthonormal basis.
    PBasis(&'a FiniteSequence),
}

/// `u_0..u_N`.
pub fn adjoint_coefficients<T: Scalar>(
    u: AdjointSource<'_>,
    m: &Measure,
    order: usize,
    ctx: &PrecisionContext,
) -> Result<CoeffVector<T>> {
    match u {
        AdjointSource::Function(f) => {
            let entries = (0..=order)
                .map(|n| {
                    let v: T = match f.polynomial() {
                        Some(p) => m.integrate(&p.mul(&Polynomial::monomial(n)), ctx)?,
                        None => m.integrate(&TimesPower { f, n: n as u32 }, ctx)?,
                    };
                    Ok(Cplx::real(v, ctx))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CoeffVector::new(entries, ctx))
        }
        AdjointSource::PBasis(g) => {
            let system = OrthoSystem::<T>::from_measure(m, order, ctx)?;
            adjoint_from_c(&system.c, g, ctx)
        }
    }
}

/// `u_n = (C^t g)_n` for `n <= order(C)`.
pub fn adjoint_from_c<T: Scalar>(
    c: &TriangularMatrix<T>,
    g: &FiniteSequence,
    ctx: &PrecisionContext,
) -> Result<CoeffVector<T>> {
    let entries = c.transpose_apply(&g.to_scalars::<T>(c.size(), ctx), ctx)?;
    Ok(CoeffVector::new(entries, ctx))
}

/// Partial sums `sum_{n <= N} |u_n|^2` for each `N` in `orders` with a trend label.
pub fn dstar_diagnostic<T: Scalar>(
    u: AdjointSource<'_>,
    m: &Measure,
    orders: &[usize],
    ctx: &PrecisionContext,
) -> Result<ProbeReport> {
    let mut orders = orders.to_vec();
    orders.sort_unstable();
    orders.dedup();
    let top = *orders.last().ok_or_else(|| Error::InvalidArgument("no orders given".into()))?;
    let coeffs = adjoint_coefficients::<T>(u, m, top, ctx)?;
    let bits = ctx.bits();
    let digits = ctx.decimal_digits();
    let sums: Vec<Float> = orders.iter().map(|&n| coeffs.norm_partial_sums()[n].to_float(bits)).collect();
    let mut increments = Vec::with_capacity(sums.len());
    let mut prev = Float::new(bits);
    for s in &sums {
        increments.push(Float::with_val(bits, s - &prev));
        prev = s.clone();
    }
    let trend = classify_increments(&orders, &increments);

    let source = match u {
        AdjointSource::Function(_) => "function".to_string(),
        AdjointSource::PBasis(g) => format!("orthonormal coefficients {g}"),
    };
    let mut report = ProbeReport::new("dstar", "the adjoint coefficients u_n are square-summable")
        .input("measure", m)
        .input("u", source)
        .input("order", top)
        .columns(&["partial_sum", "increment"]);
    for (i, &n) in orders.iter().enumerate() {
        let partial = coeffs.norm_partial_sums()[n].to_decimal(digits);
        report.push_row(n, vec![partial, crate::numeric::format_float(&increments[i], digits)]);
    }
    report.note(format!("trend: {}", trend.trend));
    if let Some(r) = trend.fit.ratio {
        report.note(format!("geometric increment ratio {r:.6}"));
    }
    let verdict = match trend.trend {
        Trend::Plateauing => Verdict::EvidenceFor,
        Trend::Growing => Verdict::EvidenceAgainst,
        Trend::Inconclusive => Verdict::Inconclusive,
    };
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(report)
}

/// `g = B^t eta` truncated at the order of `B`, and `C^t g`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<T> {
    pub g: Vec<Cplx<T>>,
    pub roundtrip: Vec<Cplx<T>>,
}

impl<T: Scalar> Witness<T> {
    /// Whether `roundtrip` equals `eta` entry by entry with no rounding at all.
    pub fn is_exact(&self, eta: &FiniteSequence, ctx: &PrecisionContext) -> bool {
        self.roundtrip.iter().enumerate().all(|(k, v)| (v.clone() - &eta.get(k).to_scalar::<T>(ctx)).is_zero())
    }

    /// `max_k |roundtrip_k - eta_k|`.
    pub fn residual(&self, eta: &FiniteSequence, bits: u32, ctx: &PrecisionContext) -> Float {
        let mut worst = Float::new(bits);
        for (k, v) in self.roundtrip.iter().enumerate() {
            let d = (v.clone() - &eta.get(k).to_scalar::<T>(ctx)).abs_float(bits);
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

pub fn dstar_witness<T: Scalar>(
    eta: &FiniteSequence,
    b: &TriangularMatrix<T>,
    c: &TriangularMatrix<T>,
    ctx: &PrecisionContext,
) -> Result<Witness<T>> {
    if let Some(d) = eta.degree() {
        if d > b.order() || d > c.order() {
            return Err(Error::OutOfRange { index: d, order: b.order().min(c.order()) });
        }
    }
    let g = b.transpose_apply(&eta.to_scalars::<T>(b.size(), ctx), ctx)?;
    let roundtrip = c.transpose_apply(&g[..c.size().min(g.len())], ctx)?;
    Ok(Witness { g, roundtrip })
}

/// `xi = B y` with `sum xi_k z^k` (lhs) and `sum y_n P_n(z)` (rhs) at each point.
#[derive(Clone, Debug, PartialEq)]
pub struct Closure<T> {
    pub xi: CoeffVector<T>,
    pub points: Vec<Cplx<T>>,
    pub lhs: Vec<Cplx<T>>,
    pub rhs: Vec<Cplx<T>>,
}

impl<T: Scalar> Closure<T> {
    pub fn differences(&self) -> Vec<Cplx<T>> {
        self.lhs.iter().zip(&self.rhs).map(|(l, r)| l.clone() - r).collect()
    }

    /// Whether both sides agree exactly at every point.
    pub fn is_exact(&self) -> bool {
        self.differences().iter().all(|d| d.is_zero())
    }

    /// `max |lhs - rhs| / max(1, |rhs|)` over the points.
    pub fn max_relative_difference(&self, bits: u32) -> Float {
        let mut worst = Float::new(bits);
        for (d, r) in self.differences().iter().zip(&self.rhs) {
            let scale = r.abs_float(bits).max(&Float::with_val(bits, 1));
            let v = d.abs_float(bits) / scale;
            if v > worst {
                worst = v;
            }
        }
        worst
    }
}

pub fn closure_apply<T: Scalar>(
    y: &FiniteSequence,
    b: &TriangularMatrix<T>,
    basis: &OrthonormalBasis<T>,
    points: &[Cplx<Rational>],
    ctx: &PrecisionContext,
) -> Result<Closure<T>> {
    let len = y.degree().map_or(1, |d| d + 1);
    let ys = y.to_scalars::<T>(len, ctx);
    let xi = b.apply(&ys, ctx)?;
    let mut pts = Vec::with_capacity(points.len());
    let mut lhs = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    for p in points {
        let z: Cplx<T> = p.to_scalar(ctx);
        lhs.push(complex_horner(&xi, &z, ctx));
        let values = basis.eval_upto(len - 1, &z, ctx)?;
        rhs.push(ys.iter().zip(&values).fold(Cplx::zero(ctx), |acc, (yn, pn)| acc + yn.clone() * pn));
        pts.push(z);
    }
    Ok(Closure { xi: CoeffVector::new(xi, ctx), points: pts, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Catalog, PointValues};
    use crate::numeric::{Real, Surd};

    fn exact() -> PrecisionContext {
        PrecisionContext::exact()
    }

    fn uniform() -> Measure {
        Measure::catalog(Catalog::Uniform { a: Rational::from(-1), b: Rational::from(1) })
    }

    fn gaussian() -> Measure {
        Measure::parse("gaussian").unwrap()
    }

    fn rat(s: &Surd) -> Rational {
        s.as_rational().expect("rational value")
    }

    fn seq(s: &str) -> FiniteSequence {
        FiniteSequence::parse(s).unwrap()
    }

    #[test]
    fn hankel_form_examples() {
        let ctx = exact();
        let q = uniform().moments(4, &ctx).unwrap();
        assert_eq!(rat(&hankel_form(&q, &seq("1,1"), &ctx).unwrap()), Rational::from((4, 3)));
        assert_eq!(rat(&hankel_form(&q, &FiniteSequence::zero(), &ctx).unwrap()), 0);
        let qg = gaussian().moments(2, &ctx).unwrap();
        assert_eq!(rat(&hankel_form(&qg, &seq("0,1"), &ctx).unwrap()), 1);
        let qi = uniform().moments(2, &ctx).unwrap();
        assert_eq!(rat(&hankel_form(&qi, &seq("1,i"), &ctx).unwrap()), Rational::from((4, 3)));
        assert!(matches!(hankel_form::<Surd>(&qi, &seq("1,1,1"), &ctx), Err(Error::InsufficientMoments { .. })));
    }

    #[test]
    fn apply_a_examples() {
        let ctx = exact();
        let z = |s: &str| crate::numeric::parse_complex(s).unwrap().to_scalar::<Surd>(&ctx);
        assert_eq!(apply_a(&seq("1,1"), &z("1"), &ctx).re.as_rational().unwrap(), 2);
        assert_eq!(apply_a(&seq("1/2,1/2"), &z("0"), &ctx).re.as_rational().unwrap(), Rational::from((1, 2)));
        assert_eq!(apply_a(&FiniteSequence::unit(3), &z("2"), &ctx).re.as_rational().unwrap(), 8);
        let w = apply_a(&seq("0,1"), &z("2i"), &ctx);
        assert_eq!(w.im.as_rational().unwrap(), 2);
    }

    #[test]
    fn three_routes_exact() {
        let ctx = exact();
        let r = a_norm_squared::<Surd>(&uniform(), &seq("1,1"), &ctx).unwrap();
        assert_eq!(rat(&r.form), Rational::from((4, 3)));
        assert_eq!(rat(&r.integral), Rational::from((4, 3)));
        assert_eq!(rat(r.coefficient.as_ref().unwrap()), Rational::from((4, 3)));
        let e0 = a_norm_squared::<Surd>(&uniform(), &FiniteSequence::unit(0), &ctx).unwrap();
        assert_eq!(rat(&e0.form), 1);

        let delta = Measure::discrete(vec![(Rational::from(1), Rational::from(1))]).unwrap();
        let d = a_norm_squared::<Surd>(&delta, &seq("1,1"), &ctx).unwrap();
        assert_eq!(rat(&d.form), 4);
        assert_eq!(rat(&d.integral), 4);
        assert!(d.coefficient.is_none() && d.note.is_some());

        let c = a_norm_squared::<Surd>(&uniform(), &seq("1/2-i,0,3i,-2/3"), &ctx).unwrap();
        assert_eq!(c.form, c.integral);
        assert_eq!(Some(c.form.clone()), c.coefficient);
    }

    #[test]
    fn three_routes_float() {
        let ctx = PrecisionContext::big_float(256).unwrap();
        let r = a_norm_squared::<Real>(&gaussian(), &seq("1,-1/2,0,1/3,i"), &ctx).unwrap();
        assert!(r.spread(256) < 1e-25);
    }

    #[test]
    fn adjoint_function_path() {
        let ctx = exact();
        let t = Polynomial::monomial(1);
        let u = adjoint_coefficients::<Surd>(AdjointSource::Function(&t), &uniform(), 3, &ctx).unwrap();
        let got: Vec<Rational> = u.entries().iter().map(|z| rat(&z.re)).collect();
        assert_eq!(got, vec![0.into(), Rational::from((1, 3)), 0.into(), Rational::from((1, 5))]);
        assert_eq!(u.order(), 3);
    }

    #[test]
    fn adjoint_orthogonal_to_polynomials_on_atoms() {
        let ctx = exact();
        let m =
            Measure::discrete(vec![(Rational::from(-1), Rational::from(1)), (Rational::from(0), Rational::from(2))])
                .unwrap();
        let u = PointValues::new(
            vec![(Rational::from(-1), 0.into()), (Rational::from(0), 0.into())],
            Polynomial::monomial(5),
        );
        let v = adjoint_coefficients::<Surd>(AdjointSource::Function(&u), &m, 6, &ctx).unwrap();
        assert!(v.entries().iter().all(|z| z.is_zero()));
    }

    #[test]
    fn adjoint_paths_agree_on_polynomials() {
        let ctx = exact();
        let m = gaussian();
        // P_0 = 1 and P_1 = x for the standard gaussian
        let g = seq("2,-3");
        let p = Polynomial::new(vec![Rational::from(2), Rational::from(-3)]);
        let via_b = adjoint_coefficients::<Surd>(AdjointSource::PBasis(&g), &m, 5, &ctx).unwrap();
        let via_f = adjoint_coefficients::<Surd>(AdjointSource::Function(&p), &m, 5, &ctx).unwrap();
        assert_eq!(via_b.entries(), via_f.entries());
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 4, &ctx).unwrap();
        let e0 = adjoint_from_c(&sys.c, &FiniteSequence::unit(0), &ctx).unwrap();
        for n in 0..=4 {
            assert_eq!(e0.entries()[n].re, sys.c.entry(0, n, &ctx));
        }
    }

    #[test]
    fn adjoint_paths_agree_in_float_mode() {
        let ctx = PrecisionContext::big_float(192).unwrap();
        let m = uniform();
        let sys = OrthoSystem::<Real>::from_measure(&m, 8, &ctx).unwrap();
        let g = seq("1,-1/2,0,3/4,0,0,1/5,0,-2");
        let coeffs: Vec<Float> = (0..=8)
            .map(|k| {
                (k..=8).fold(Float::new(224), |acc, n| {
                    let y = g.get(n).re;
                    acc + sys.b.entry(k, n, &ctx).0 * Float::with_val(224, &y)
                })
            })
            .collect();
        let u = crate::measures::FloatFn(move |x: &Float| {
            coeffs.iter().rev().fold(Float::new(x.prec()), |acc, c| acc * x + c)
        });
        let via_f = adjoint_coefficients::<Real>(AdjointSource::Function(&u), &m, 8, &ctx).unwrap();
        let via_c = adjoint_from_c(&sys.c, &g, &ctx).unwrap();
        for (a, b) in via_f.entries().iter().zip(via_c.entries()) {
            assert!((a.clone() - b).abs_float(192) < 1e-40);
        }
    }

    #[test]
    fn dstar_trends() {
        let ctx = PrecisionContext::big_float(128).unwrap();
        let orders: Vec<usize> = (1..=30).collect();
        let t = Polynomial::monomial(1);
        let r = dstar_diagnostic::<Real>(AdjointSource::Function(&t), &uniform(), &orders, &ctx).unwrap();
        assert_eq!(r.verdict(), Verdict::EvidenceFor);
        let zero = Polynomial::default();
        let r0 = dstar_diagnostic::<Real>(AdjointSource::Function(&zero), &uniform(), &orders, &ctx).unwrap();
        assert_eq!(r0.verdict(), Verdict::EvidenceFor);
        let bump = crate::measures::FloatFn(|x: &Float| (Float::with_val(x.prec(), x * x) / 4u32).exp());
        let short: Vec<usize> = (1..=12).collect();
        let rg = dstar_diagnostic::<Real>(AdjointSource::Function(&bump), &gaussian(), &short, &ctx).unwrap();
        assert_eq!(rg.verdict(), Verdict::EvidenceAgainst);
    }

    #[test]
    fn witness_roundtrip() {
        let ctx = exact();
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 6, &ctx).unwrap();
        for eta in [FiniteSequence::unit(0), FiniteSequence::unit(2), seq("1,1,1"), seq("1/3-i,0,0,0,0,0,7")] {
            let w = dstar_witness(&eta, &sys.b, &sys.c, &ctx).unwrap();
            assert!(w.is_exact(&eta, &ctx), "{eta}");
        }
        let w0 = dstar_witness(&FiniteSequence::unit(0), &sys.b, &sys.c, &ctx).unwrap();
        for k in 0..=6 {
            assert_eq!(w0.g[k].re, sys.b.entry(0, k, &ctx));
        }
        assert!(dstar_witness(&FiniteSequence::unit(7), &sys.b, &sys.c, &ctx).is_err());
    }

    #[test]
    fn closure_examples() {
        let ctx = exact();
        let sys = OrthoSystem::<Surd>::from_measure(&uniform(), 4, &ctx).unwrap();
        let pts = crate::numeric::parse_complex_list("1,0,2i,-1/2+3/4i").unwrap();
        let c = closure_apply(&FiniteSequence::unit(2), &sys.b, &sys.basis, &pts, &ctx).unwrap();
        assert!(c.is_exact());
        assert_eq!(c.lhs[0].re, Surd::sqrt_of(&Rational::from(5)).unwrap());
        let c0 = closure_apply(&FiniteSequence::unit(0), &sys.b, &sys.basis, &pts, &ctx).unwrap();
        assert_eq!(c0.xi.entries().len(), 1);
        assert_eq!(rat(&c0.lhs[1].re), 1);
        let c12 = closure_apply(&seq("1,2"), &sys.b, &sys.basis, &pts, &ctx).unwrap();
        let expected = sys.b.entry(0, 0, &ctx) + Surd::from(2) * &sys.b.entry(0, 1, &ctx);
        assert_eq!(c12.lhs[1].re, expected);
        assert!(c12.is_exact());
    }

    #[test]
    fn closure_float() {
        let ctx = PrecisionContext::big_float(256).unwrap();
        let sys = OrthoSystem::<Real>::from_measure(&gaussian(), 10, &ctx).unwrap();
        let pts = crate::numeric::parse_complex_list("2i,-1.5+1i,0.25").unwrap();
        let c = closure_apply(&seq("1,0,-1/3,2i,0,0,0,0,0,0,5"), &sys.b, &sys.basis, &pts, &ctx).unwrap();
        assert!(c.max_relative_difference(256) < 1e-60);
    }
}
