//! The acceptance suite: eleven numbered checks against frozen oracle
//! values and exact identities. Shared by the `acceptance` test target and
//! the CLI `selftest` command.

mod fixtures;

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};

use crate::error::Result;
use crate::measures::{Measure, Polynomial};
use crate::numeric::{relative_difference, Cplx, PrecisionContext, Real, Scalar, Surd};
use crate::operator::{a_norm_squared_with, closure_apply, dstar_witness, FiniteSequence};
use crate::orthopoly::{hs_partial_sums, residuals, OrthoSystem};
use crate::probes::trend::{classify_increments, fit, increments, Trend};
use crate::probes::{
    carleman_partial_sums, fourier_transform, growth_ratio, mass_removal_bound_check, run_counterexample,
    CounterexampleScheme,
};

pub use fixtures::*;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// The four catalog measures most checks sweep over.
pub const CORE_MEASURES: [&str; 4] = ["uniform(-1,1)", "chebyshev", "gaussian", "lognormal_base2"];

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "transition matrices are mutually inverse"),
    (2, "C^t C reproduces the Hankel matrix"),
    (3, "Hankel form equals ||Ag||^2 three ways"),
    (4, "orthonormal polynomials match Gram-Schmidt"),
    (5, "averaging counterexample on uniform plus atom"),
    (6, "Carleman and growth contrast"),
    (7, "Hilbert-Schmidt contrast"),
    (8, "density witness round trip"),
    (9, "closure formula"),
    (10, "mass-removal bound"),
    (11, "Fourier transform bound"),
];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:>2} {} ({:.1}s): {}", self.id, self.name, self.seconds, self.detail)
    }
}

/// Run every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, seed)).collect()
}

/// Run one criterion; errors count as failures.
pub fn run(id: u8, seed: u64) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let start = Instant::now();
    let outcome = match id {
        1 => transition_identity(),
        2 => gram_identity(),
        3 => form_identity(seed),
        4 => gram_schmidt_oracle(),
        5 => counterexample(),
        6 => determinacy_contrast(),
        7 => hilbert_schmidt_contrast(),
        8 => witness_roundtrip(seed),
        9 => closure_formula(seed),
        10 => mass_removal(seed),
        11 => fourier_bound(),
        _ => Ok(Check::failed(format!("no criterion {id}"))),
    };
    let check = outcome.unwrap_or_else(|e| Check::failed(format!("error: {e}")));
    CriterionResult { id, name, passed: check.passed, detail: check.detail, seconds: start.elapsed().as_secs_f64() }
}

/// Accumulates sub-checks; the criterion passes when all of them do.
struct Check {
    passed: bool,
    detail: String,
}

impl Check {
    fn new() -> Self {
        Check { passed: true, detail: String::new() }
    }

    fn failed(detail: String) -> Self {
        Check { passed: false, detail }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.passed = false;
            self.push(format!("FAILED {what}"));
        } else {
            self.push(what);
        }
    }

    fn push(&mut self, s: String) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&s);
    }
}

fn exact() -> PrecisionContext {
    PrecisionContext::exact()
}

fn float(bits: u32) -> PrecisionContext {
    PrecisionContext::big_float(bits).expect("valid precision")
}

fn fixture(s: &str, bits: u32) -> Float {
    Float::with_val(bits, Float::parse(s).expect("fixture literal"))
}

fn sci(x: &Float) -> String {
    format!("{:.3e}", x.to_f64())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let den: i64 = rng.random_range(1..=64);
    let num: i64 = rng.random_range(-den..=den);
    Rational::from((num, den))
}

fn random_real_sequence(rng: &mut ChaCha8Rng, max_degree: usize) -> FiniteSequence {
    let d = rng.random_range(0..=max_degree);
    FiniteSequence::from_reals((0..=d).map(|_| random_rational(rng)).collect())
}

fn random_complex_sequence(rng: &mut ChaCha8Rng, max_degree: usize) -> FiniteSequence {
    let d = rng.random_range(0..=max_degree);
    FiniteSequence::new((0..=d).map(|_| Cplx::new(random_rational(rng), random_rational(rng))).collect())
}

/// A random rational point with `|z| <= 2`.
fn random_point(rng: &mut ChaCha8Rng) -> Cplx<Rational> {
    loop {
        let re = Rational::from((rng.random_range(-32i64..=32), 16));
        let im = Rational::from((rng.random_range(-32i64..=32), 16));
        let z = Cplx::new(re, im);
        if z.norm_sqr() <= 4 {
            return z;
        }
    }
}

fn transition_identity() -> Result<Check> {
    let mut check = Check::new();
    for spec in CORE_MEASURES {
        let m = Measure::parse(spec)?;
        let sys = OrthoSystem::<Surd>::from_measure(&m, 20, &exact())?;
        let ok = sys.b.mul(&sys.c)?.is_identity() && sys.c.mul(&sys.b)?.is_identity();
        check.expect(ok, format!("{spec} exact BC = CB = I"));
        let ctx = float(512);
        let sys = OrthoSystem::<Real>::from_measure(&m, 20, &ctx)?;
        let (bc, cb) = residuals(&sys.b, &sys.c)?;
        let worst = bc.max(&cb);
        check.expect(worst <= 1e-60, format!("{spec} 512-bit residual {}", sci(&worst)));
    }
    Ok(check)
}

fn gram_identity() -> Result<Check> {
    let mut check = Check::new();
    let ctx = exact();
    for spec in CORE_MEASURES {
        let m = Measure::parse(spec)?;
        let sys = OrthoSystem::<Surd>::from_measure(&m, 20, &ctx)?;
        let gram = sys.c.gram(&ctx);
        let ok = (0..=20).all(|i| (0..=20).all(|j| (gram[i][j].clone() - sys.hankel.entry(i, j)).is_zero()));
        check.expect(ok, format!("{spec} C^t C = H"));
    }
    Ok(check)
}

fn form_identity(seed: u64) -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let ctx = float(bits);
    let tol = Float::with_val(64, 1e-25);
    for spec in ["uniform(-1,1)", "gaussian", "uniform_plus_atom(1)"] {
        let m = Measure::parse(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fsys = OrthoSystem::<Real>::from_measure(&m, 8, &ctx)?;
        let esys = OrthoSystem::<Surd>::from_measure(&m, 8, &exact())?;
        let mut worst = Float::new(bits);
        let mut exact_ok = true;
        for _ in 0..200 {
            let g = random_real_sequence(&mut rng, 8);
            let r = a_norm_squared_with(&m, &g, Some(&fsys), &ctx)?;
            let s = r.spread(bits);
            if s > worst {
                worst = s;
            }
            let e = a_norm_squared_with(&m, &g, Some(&esys), &exact())?;
            exact_ok &= e.form.is_rational() && e.form == e.integral && e.coefficient.as_ref() == Some(&e.form);
        }
        check.expect(worst <= tol, format!("{spec} 256-bit spread {}", sci(&worst)));
        check.expect(exact_ok, format!("{spec} exact routes equal"));
    }
    Ok(check)
}

/// Monic orthogonal polynomials by classical Gram-Schmidt on exact moments,
/// independent of the LDL^T pipeline. Returns coefficients and squared norms.
fn monic_gram_schmidt(q: &[Rational], order: usize) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let inner = |a: &[Rational], b: &[Rational]| -> Rational {
        let mut s = Rational::new();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += Rational::from(x * y) * &q[i + j];
            }
        }
        s
    };
    let mut polys: Vec<Vec<Rational>> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    for n in 0..=order {
        let mut p = vec![Rational::new(); n + 1];
        p[n] = Rational::from(1);
        for (pm, hm) in polys.iter().zip(&norms) {
            let c = inner(&p, pm) / hm;
            for (i, x) in pm.iter().enumerate() {
                p[i] -= Rational::from(&c * x);
            }
        }
        norms.push(inner(&p, &p));
        polys.push(p);
    }
    (polys, norms)
}

fn gram_schmidt_oracle() -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let ctx = float(bits);
    let tol = Float::with_val(64, 1e-30);

    let uniform = Measure::parse("uniform(-1,1)")?;
    let q = uniform.moments(16, &exact())?;
    let qs: Vec<Rational> = (0..=16).map(|n| q.exact(n).expect("rational").clone()).collect();
    let (monic, norms) = monic_gram_schmidt(&qs, 8);
    let sys = OrthoSystem::<Real>::from_measure(&uniform, 8, &ctx)?;
    let mut worst = Float::new(bits);
    for (n, (p, h)) in monic.iter().zip(&norms).enumerate() {
        let scale = Float::with_val(bits, h).sqrt().recip();
        for (k, c) in p.iter().enumerate() {
            let oracle = Float::with_val(bits, c) * &scale;
            let d = Float::with_val(bits, &sys.b.entry(k, n, &ctx).0 - &oracle).abs();
            if d > worst {
                worst = d;
            }
        }
    }
    check.expect(worst <= tol, format!("uniform B vs Gram-Schmidt, n <= 8: {}", sci(&worst)));
    let sqrt = |v: u32| Float::with_val(bits, v).sqrt();
    let symbolic = [(1, 1, sqrt(3)), (0, 2, -sqrt(5) / 2u32), (2, 2, sqrt(5) * 3u32 / 2u32)];
    let mut sym_worst = Float::new(bits);
    for (k, n, v) in symbolic {
        let d = Float::with_val(bits, &sys.b.entry(k, n, &ctx).0 - &v).abs();
        if d > sym_worst {
            sym_worst = d;
        }
    }
    let zeros = sys.b.entry(0, 1, &ctx).0.is_zero() && sys.b.entry(1, 2, &ctx).0.is_zero();
    check.expect(sym_worst <= tol && zeros, format!("P_1 = sqrt3 x, P_2 = sqrt5 (3x^2 - 1)/2: {}", sci(&sym_worst)));

    let gaussian = Measure::parse("gaussian")?;
    let order = 20;
    let q = gaussian.moments(2 * order, &exact())?;
    let qs: Vec<Rational> = (0..=2 * order).map(|n| q.exact(n).expect("rational").clone()).collect();
    let (_, norms) = monic_gram_schmidt(&qs, order);
    let sys = OrthoSystem::<Real>::from_measure(&gaussian, order, &ctx)?;
    let mut worst = Float::new(bits);
    for k in 1..=order {
        let oracle = Float::with_val(bits, Rational::from(&norms[k] / &norms[k - 1])).sqrt();
        let got = &sys.basis.beta()[k - 1].0;
        let d1 = Float::with_val(bits, got - &oracle).abs();
        let d2 = Float::with_val(bits, got - &sqrt(k as u32)).abs();
        worst = worst.max(&d1).max(&d2);
    }
    check.expect(worst <= tol, format!("gaussian beta_k = sqrt(k), k <= {order}: {}", sci(&worst)));
    Ok(check)
}

fn counterexample() -> Result<Check> {
    let mut check = Check::new();
    let bits = 128;
    let m = Measure::parse("uniform_plus_atom(1)")?;
    let ns: Vec<usize> = COUNTEREXAMPLE_RESIDUALS.iter().map(|f| f.0).collect();
    let out = run_counterexample(&CounterexampleScheme::averaging_to_atom(), &m, &ns, &float(bits))?;
    let norms_exact = ns.iter().zip(&out.norms_squared).all(|(&n, s)| *s == Rational::from((1, n as u64)));
    check.expect(norms_exact, "||g^(n)||^2 = 1/n exactly");
    let r = &out.residuals;
    check.expect(r.windows(2).all(|w| w[1] < w[0]), "residual strictly decreasing");
    check.expect(
        Float::with_val(bits, &r[r.len() - 1] * 10u32) < r[0],
        format!("residual(1024) = {} < residual(4)/10", r[r.len() - 1].to_f64()),
    );
    let mut worst = Float::new(bits);
    for ((_, s), v) in COUNTEREXAMPLE_RESIDUALS.iter().zip(r) {
        worst = worst.max(&relative_difference(v, &fixture(s, bits)));
    }
    check.expect(worst <= 1e-6, format!("fixture match {}", sci(&worst)));
    Ok(check)
}

fn determinacy_contrast() -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let ctx = float(bits).with_moment_cap(512);
    let ectx = exact().with_moment_cap(512);

    let q = Measure::parse("gaussian")?.moments(400, &ectx)?;
    let growth = growth_ratio(&q, 40, &ctx)?;
    let r: Vec<Float> = (4..=40).map(|n| growth.ratio(n).clone()).collect();
    check.expect(r.windows(2).all(|w| w[1] < w[0]), "gaussian r_n strictly decreasing on 4..=40");
    let (r4, r40) = (growth.ratio(4), growth.ratio(40));
    check.expect(
        Float::with_val(bits, r40 * 2u32) < *r4,
        format!("r_40 = {:.6} < r_4/2 = {:.6}", r40.to_f64(), r4.to_f64() / 2.0),
    );
    let dr = relative_difference(r4, &fixture(GAUSSIAN_GROWTH_R4, bits))
        .max(&relative_difference(r40, &fixture(GAUSSIAN_GROWTH_R40, bits)));
    check.expect(dr <= 1e-18, format!("r_4, r_40 match closed form {}", sci(&dr)));
    let carleman = carleman_partial_sums(&q, 200, &ctx)?;
    let (s50, s200) = (carleman.sum(50), carleman.sum(200));
    check.expect(
        Float::with_val(bits, s50 * 1.5f64) <= *s200,
        format!("gaussian S_200 = {:.4} >= 1.5 S_50 = {:.4}", s200.to_f64(), 1.5 * s50.to_f64()),
    );
    let ds = relative_difference(s50, &fixture(GAUSSIAN_CARLEMAN_S50, bits))
        .max(&relative_difference(s200, &fixture(GAUSSIAN_CARLEMAN_S200, bits)));
    check.expect(ds <= 1e-22, format!("S_50, S_200 match closed form {}", sci(&ds)));

    let q = Measure::parse("lognormal_base2")?.moments(400, &ectx)?;
    let carleman = carleman_partial_sums(&q, 200, &ctx)?;
    let ratio = carleman.fit.ratio.unwrap_or(f64::INFINITY);
    check.expect(ratio <= 0.5, format!("lognormal_base2 increment ratio {ratio:.6}"));
    let gap = Float::with_val(bits, carleman.sum(200) - carleman.sum(50));
    check.expect(gap <= 1e-10, format!("S_200 - S_50 = {}", sci(&gap)));
    let dg = relative_difference(&gap, &fixture(LOGNORMAL_CARLEMAN_GAP, bits));
    let d50 = relative_difference(carleman.sum(50), &fixture(LOGNORMAL_CARLEMAN_S50, bits));
    check.expect(dg <= 1e-9 && d50 <= 1e-24, format!("gap and S_50 match closed form {}", sci(&dg.max(&d50))));
    Ok(check)
}

fn hilbert_schmidt_contrast() -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let ctx = exact();
    let orders: Vec<usize> = (10..=30).collect();
    let sums = |spec: &str| -> Result<Vec<Float>> {
        let sys = OrthoSystem::<Surd>::from_measure(&Measure::parse(spec)?, 30, &ctx)?;
        Ok(hs_partial_sums(&sys.b, &orders, &ctx)?.iter().map(|s| s.to_float(bits)).collect())
    };
    let at = |v: &[Float], n: usize| v[n - 10].clone();

    let ln = sums("lognormal_base2")?;
    let inc: Vec<Float> = increments(&ln)[1..].to_vec();
    let inc_orders: Vec<usize> = (11..=30).collect();
    let ratio = fit(&inc_orders, &inc).ratio.unwrap_or(f64::INFINITY);
    let trend = classify_increments(&inc_orders, &inc).trend;
    check.expect(
        ratio <= 0.9 && trend == Trend::Plateauing,
        format!("lognormal_base2 increment ratio {ratio:.4}, {trend}"),
    );
    let mut worst = Float::new(bits);
    for (n, s) in LOGNORMAL_HS {
        worst = worst.max(&relative_difference(&at(&ln, n), &fixture(s, bits)));
    }
    check.expect(worst <= 1e-30, format!("lognormal_base2 sums match oracle {}", sci(&worst)));

    let un = sums("uniform(-1,1)")?;
    let factor = Float::with_val(bits, at(&un, 30) / at(&un, 10));
    check.expect(factor >= 100, format!("uniform S_30/S_10 = {}", sci(&factor)));
    let mut worst = Float::new(bits);
    for (n, s) in UNIFORM_HS {
        worst = worst.max(&relative_difference(&at(&un, n), &fixture(s, bits)));
    }
    check.expect(worst <= 1e-30, format!("uniform sums match oracle {}", sci(&worst)));
    Ok(check)
}

fn witness_roundtrip(seed: u64) -> Result<Check> {
    let mut check = Check::new();
    let ctx = exact();
    for spec in CORE_MEASURES {
        let sys = OrthoSystem::<Surd>::from_measure(&Measure::parse(spec)?, 20, &ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut etas: Vec<FiniteSequence> = (0..=20).map(FiniteSequence::unit).collect();
        etas.extend((0..50).map(|_| random_complex_sequence(&mut rng, 20)));
        let mut bad = 0;
        for eta in &etas {
            if !dstar_witness(eta, &sys.b, &sys.c, &ctx)?.is_exact(eta, &ctx) {
                bad += 1;
            }
        }
        check.expect(bad == 0, format!("{spec}: {} of {} exact", etas.len() - bad, etas.len()));
    }
    Ok(check)
}

fn closure_formula(seed: u64) -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let fctx = float(bits);
    let ectx = exact();
    for spec in CORE_MEASURES {
        let m = Measure::parse(spec)?;
        let esys = OrthoSystem::<Surd>::from_measure(&m, 10, &ectx)?;
        let fsys = OrthoSystem::<Real>::from_measure(&m, 10, &fctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut exact_ok = true;
        let mut worst = Float::new(bits);
        for _ in 0..50 {
            let y = random_complex_sequence(&mut rng, 10);
            let points: Vec<Cplx<Rational>> = (0..20).map(|_| random_point(&mut rng)).collect();
            exact_ok &= closure_apply(&y, &esys.b, &esys.basis, &points, &ectx)?.is_exact();
            let f = closure_apply(&y, &fsys.b, &fsys.basis, &points, &fctx)?;
            worst = worst.max(&f.max_relative_difference(bits));
        }
        check.expect(exact_ok, format!("{spec} exact lhs = rhs"));
        check.expect(worst <= 1e-25, format!("{spec} 256-bit {}", sci(&worst)));
    }
    Ok(check)
}

fn mass_removal(seed: u64) -> Result<Check> {
    let mut check = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held = 0;
    for _ in 0..1000 {
        let g = random_complex_sequence(&mut rng, 16);
        let den: i64 = rng.random_range(2..=256);
        let lambda = Rational::from((rng.random_range(1 - den..den), den));
        if mass_removal_bound_check(&g, &lambda, 128)?.holds {
            held += 1;
        }
    }
    check.expect(held == 1000, format!("{held} of 1000 random cases hold"));
    let half = Rational::from((1, 2));
    let mut coeffs = Vec::with_capacity(64);
    let mut p = Rational::from(1);
    for _ in 0..64 {
        coeffs.push(p.clone());
        p *= &half;
    }
    let r = mass_removal_bound_check(&FiniteSequence::from_reals(coeffs), &half, 128)?;
    let ratio = Float::with_val(128, &r.lhs / &r.rhs);
    check.expect(ratio >= 0.999, format!("geometric length 64 lhs/rhs = {:.12}", ratio.to_f64()));
    Ok(check)
}

fn fourier_bound() -> Result<Check> {
    let mut check = Check::new();
    let bits = 256;
    let ctx = float(bits);
    let one = Polynomial::constant(Rational::from(1));
    let i = Cplx::new(Rational::new(), Rational::from(1));
    let g = fourier_transform(&one, &Measure::parse("gaussian")?, &i, 60, &ctx)?;
    let err = Float::with_val(bits, &g.value.re.0 - &fixture(SQRT_E, bits)).abs().max(&g.value.im.0.clone().abs());
    check.expect(err <= 1e-20, format!("gaussian F(i) - e^(1/2) = {}", sci(&err)));
    check.expect(g.series_agrees(ctx.tolerance()) == Some(true), "series matches quadrature");
    check.expect(g.within_bound() == Some(true), "|F(i)| <= bound");
    let l = fourier_transform(&one, &Measure::parse("lognormal_base2")?, &i, 30, &ctx)?;
    check.expect(l.divergent, "lognormal_base2 series reported divergent");
    Ok(check)
}
