//! Closability and determinacy diagnostics.
//!
//! Metadata facts (where the support lies, which atoms exist) are decided
//! exactly. Everything asymptotic is a finite table plus a fitted trend, and
//! the verdict says so.

mod report;
pub mod trend;

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::measures::{FloatFn, Measure, MomentSequence, PointValues, Polynomial, RealFunction, TimesPower};
use crate::numeric::{format_float, format_rational, Cplx, PrecisionContext, Real, Scalar, Surd};
use crate::operator::FiniteSequence;
use crate::orthopoly::{hs_partial_sums, OrthoSystem};

pub use report::{Evidence, ProbeReport, Row, Verdict};
use trend::{classify_increments, fit, fit_tail, DecayFit, Trend};

/// Fewest moments the tail probe accepts.
pub const MIN_TAIL_MOMENTS: usize = 16;

/// Log-log slope at or below which a decreasing sequence counts as tending to 0.
pub const MIN_DECAY_POWER: f64 = -0.25;

fn work_bits(ctx: &PrecisionContext) -> u32 {
    ctx.bits().max(128)
}

fn q_even(q: &MomentSequence, n: usize, bits: u32) -> Result<Float> {
    let v = q.float(2 * n, bits);
    if v <= 0 {
        return Err(Error::NonPositiveMoment(2 * n));
    }
    Ok(v)
}

fn strictly_decreasing(v: &[Float]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Strictly decreasing with a log-log slope of at most -1/4 against `orders`.
fn tends_to_zero(orders: &[usize], v: &[Float]) -> bool {
    v.len() >= 2 && strictly_decreasing(v) && fit(orders, v).power.is_some_and(|p| p <= MIN_DECAY_POWER)
}

/// Whether `q_n` tends to 0, judged from `q_{2n}`.
pub fn moment_tail_probe(q: &MomentSequence, ctx: &PrecisionContext) -> Result<ProbeReport> {
    q.require(MIN_TAIL_MOMENTS)?;
    let bits = work_bits(ctx);
    let mut report = ProbeReport::new("moment_tail", "q_n tends to 0").input("moments", q.len()).columns(&["q_n"]);
    for (n, s) in q.to_strings(ctx.decimal_digits()).into_iter().enumerate() {
        report.push_row(n, vec![s]);
    }
    let half = q.max_index() / 2;
    let evens = (0..=half).map(|n| q_even(q, n, bits)).collect::<Result<Vec<_>>>()?;
    let start = half.div_ceil(2);
    let tail = &evens[start.max(1)..];
    let orders: Vec<usize> = (start.max(1)..=half).collect();
    let slope = fit(&orders, tail).power;
    let increasing = tail.windows(2).all(|w| w[1] > w[0]);
    let verdict = if strictly_decreasing(tail) && slope.is_some_and(|p| p <= MIN_DECAY_POWER) {
        Verdict::EvidenceFor
    } else if increasing {
        Verdict::EvidenceAgainst
    } else {
        Verdict::Inconclusive
    };
    if let Some(p) = slope {
        report.note(format!("log-log slope of q_2n over n in {}..={}: {p:.4}", orders[0], half));
    }
    report.note(format!("order horizon: q_{}", q.max_index()));
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(report)
}

/// Support in `[-1, 1]` and no mass at `+1` or `-1`, decided from metadata.
pub fn support_probe(m: &Measure) -> ProbeReport {
    let info = m.support_info();
    let mut report = ProbeReport::new("support", "supp(M) lies in [-1,1] and M({1}) = M({-1}) = 0")
        .input("measure", m)
        .columns(&["bounded", "within_unit_interval", "atom_at_plus_1", "atom_at_minus_1", "discrete"]);
    report.push_row(
        0,
        [info.bounded, info.within_unit_interval, info.atom_at_plus_1, info.atom_at_minus_1, info.discrete]
            .iter()
            .map(|b| b.to_string())
            .collect(),
    );
    if !info.bounded {
        report.note("fails: unbounded support");
    } else if !info.within_unit_interval {
        report.note("fails: support extends outside [-1,1]");
    }
    if info.atom_at_plus_1 {
        report.note("fails: atom at +1");
    }
    if info.atom_at_minus_1 {
        report.note("fails: atom at -1");
    }
    let verdict = if info.condition_iii() { Verdict::Holds } else { Verdict::Fails };
    report.set_verdict(verdict, Evidence::Exact);
    report
}

/// Partial sums of `sum_{n >= 1} q_{2n}^{-1/(2n)}`.
#[derive(Clone, Debug)]
pub struct CarlemanOutcome {
    pub report: ProbeReport,
    /// `S_1..S_N`.
    pub sums: Vec<Float>,
    /// `q_{2n}^{-1/(2n)}` for `n = 1..=N`.
    pub increments: Vec<Float>,
    /// Fit over all increments.
    pub fit: DecayFit,
}

impl CarlemanOutcome {
    /// `S_k`, `k >= 1`.
    pub fn sum(&self, k: usize) -> &Float {
        &self.sums[k - 1]
    }
}

/// Evidence for divergence (the Carleman condition) when the increments
/// decay no faster than `n^-1`; evidence against when they decay
/// geometrically or like a summable power.
pub fn carleman_partial_sums(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<CarlemanOutcome> {
    if order == 0 {
        return Err(Error::InvalidArgument("Carleman sums need order >= 1".into()));
    }
    q.require(2 * order + 1)?;
    let bits = work_bits(ctx);
    let mut increments = Vec::with_capacity(order);
    let mut sums = Vec::with_capacity(order);
    let mut acc = Float::new(bits);
    for n in 1..=order {
        let qn = q_even(q, n, bits)?;
        let a = (-(qn.ln() / (2 * n) as u32)).exp();
        acc += &a;
        sums.push(acc.clone());
        increments.push(a);
    }
    let orders: Vec<usize> = (1..=order).collect();
    let tail = fit_tail(&orders, &increments);
    let verdict = if tail.geometric_decay() || tail.summable_power() {
        Verdict::EvidenceAgainst
    } else if tail.power.is_some_and(|p| p > -1.0) {
        Verdict::EvidenceFor
    } else {
        Verdict::Inconclusive
    };
    let digits = ctx.decimal_digits();
    let mut report = ProbeReport::new("carleman", "sum_n q_2n^(-1/(2n)) diverges")
        .input("order", order)
        .columns(&["partial_sum", "increment"]);
    for (i, (s, a)) in sums.iter().zip(&increments).enumerate() {
        report.push_row(i + 1, vec![format_float(s, digits), format_float(a, digits)]);
    }
    if let Some(r) = tail.ratio {
        report.note(format!("tail increment ratio {r:.6}"));
    }
    if let Some(p) = tail.power {
        report.note(format!("tail increment power {p:.4}"));
    }
    report.note(match verdict {
        Verdict::EvidenceFor => "increments decay no faster than 1/n: evidence for divergence, hence determinacy",
        Verdict::EvidenceAgainst => "increments are summable: evidence for convergence",
        _ => "no clear increment trend",
    });
    report.note(format!("order horizon: n = {order}"));
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(CarlemanOutcome { report, sums, increments: increments.clone(), fit: fit(&orders, &increments) })
}

/// `r_n = q_{2n}^{1/(2n)} / n` and `(sqrt(q_{2n}) / n!)^{1/n}`.
#[derive(Clone, Debug)]
pub struct GrowthOutcome {
    pub report: ProbeReport,
    /// `r_1..r_N`.
    pub ratios: Vec<Float>,
    pub stirling: Vec<Float>,
    pub fit: DecayFit,
}

impl GrowthOutcome {
    pub fn ratio(&self, n: usize) -> &Float {
        &self.ratios[n - 1]
    }
}

/// Evidence for `q_{2n}^{1/(2n)} = o(n)` when the tail of `r_n` decays geometrically.
pub fn growth_ratio(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<GrowthOutcome> {
    if order == 0 {
        return Err(Error::InvalidArgument("growth ratios need order >= 1".into()));
    }
    q.require(2 * order + 1)?;
    let bits = work_bits(ctx);
    let mut ratios = Vec::with_capacity(order);
    let mut stirling = Vec::with_capacity(order);
    for n in 1..=order {
        let qn = q_even(q, n, bits)?;
        let root = Float::with_val(bits, qn.ln_ref()) / (2 * n) as u32;
        ratios.push(root.exp() / n as u32);
        let fact = Float::with_val(bits, Integer::from(Integer::factorial(n as u32)));
        let s = (Float::with_val(bits, qn.ln_ref()) / 2u32 - fact.ln()) / n as u32;
        stirling.push(s.exp());
    }
    let orders: Vec<usize> = (1..=order).collect();
    let tail = fit_tail(&orders, &ratios);
    let verdict = match tail.ratio {
        Some(r) if r < 0.999 => Verdict::EvidenceFor,
        Some(r) if r > 1.001 => Verdict::EvidenceAgainst,
        _ => Verdict::Inconclusive,
    };
    let digits = ctx.decimal_digits();
    let mut report =
        ProbeReport::new("growth", "q_2n^(1/(2n)) = o(n)").input("order", order).columns(&["ratio", "stirling"]);
    for (i, (r, s)) in ratios.iter().zip(&stirling).enumerate() {
        report.push_row(i + 1, vec![format_float(r, digits), format_float(s, digits)]);
    }
    if let Some(r) = tail.ratio {
        report.note(format!("tail ratio of r_n: {r:.6}"));
    }
    report.note(format!("r_n strictly decreasing: {}", strictly_decreasing(&ratios)));
    report.note(format!("order horizon: n = {order}"));
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(GrowthOutcome { report, ratios: ratios.clone(), stirling, fit: fit(&orders, &ratios) })
}

type Generator = Arc<dyn Fn(usize) -> FiniteSequence + Send + Sync>;

/// A family `g^(n)` with a candidate limit `f` of `A g^(n)`.
#[derive(Clone)]
pub struct CounterexampleScheme {
    name: String,
    description: String,
    generator: Generator,
    limit: PointValues,
}

impl fmt::Debug for CounterexampleScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CounterexampleScheme").field("name", &self.name).field("limit", &self.limit).finish()
    }
}

fn averaging(n: usize) -> FiniteSequence {
    FiniteSequence::from_reals(vec![Rational::from((1, n as u64)); n])
}

impl CounterexampleScheme {
    pub fn new(
        name: &str,
        description: &str,
        generator: impl Fn(usize) -> FiniteSequence + Send + Sync + 'static,
        limit: PointValues,
    ) -> Self {
        CounterexampleScheme {
            name: name.to_string(),
            description: description.to_string(),
            generator: Arc::new(generator),
            limit,
        }
    }

    /// `g^(n)_k = 1/n` for `k < n`, so `A g^(n)(x) = (1 - x^n) / (n (1 - x))`,
    /// which tends to the indicator of `{1}` on `[-1, 1]`.
    pub fn averaging_to_atom() -> Self {
        CounterexampleScheme::new(
            "averaging",
            "g^(n)_k = 1/n for k < n; A g^(n) tends to the indicator of {1}",
            averaging,
            PointValues::indicator(Rational::from(1)),
        )
    }

    /// The same sequences compared against the zero function.
    pub fn averaging_to_zero() -> Self {
        CounterexampleScheme::new(
            "averaging-zero",
            "g^(n)_k = 1/n for k < n compared against f = 0",
            averaging,
            PointValues::new(Vec::new(), Polynomial::default()),
        )
    }

    /// `g^(n) = e_0` for every `n`; it does not tend to 0.
    pub fn constant_unit() -> Self {
        CounterexampleScheme::new(
            "constant",
            "g^(n) = e_0 for all n",
            |_| FiniteSequence::unit(0),
            PointValues::indicator(Rational::from(1)),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn limit(&self) -> &PointValues {
        &self.limit
    }

    pub fn sequence(&self, n: usize) -> Result<FiniteSequence> {
        if n == 0 {
            return Err(Error::InvalidArgument("counterexample index n must be >= 1".into()));
        }
        Ok((self.generator)(n))
    }
}

/// `|A g(x) - f(x)|^2`.
struct Residual<'a> {
    re: Polynomial,
    im: Polynomial,
    limit: &'a PointValues,
}

impl RealFunction for Residual<'_> {
    fn eval_float(&self, x: &Float) -> Float {
        let d = self.re.eval_float(x) - self.limit.eval_float(x);
        let i = self.im.eval_float(x);
        d.square() + i.square()
    }

    fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        let d = self.re.eval(x) - self.limit.eval_exact(x)?;
        let i = self.im.eval(x);
        Some(d.square() + i.square())
    }
}

#[derive(Clone, Debug)]
pub struct CounterexampleOutcome {
    pub report: ProbeReport,
    /// `||g^(n)||^2`, exact.
    pub norms_squared: Vec<Rational>,
    /// `||A g^(n) - f||_{L^2(M)}`.
    pub residuals: Vec<Float>,
    /// `||f||_{L^2(M)}`.
    pub limit_norm: Float,
}

pub fn run_counterexample(
    scheme: &CounterexampleScheme,
    m: &Measure,
    n_list: &[usize],
    ctx: &PrecisionContext,
) -> Result<CounterexampleOutcome> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("no n values given".into()));
    }
    let bits = ctx.bits();
    let tol = ctx.float_tolerance();
    let digits = ctx.decimal_digits();
    let limit = scheme.limit().clone();
    let limit_sq = FloatFn(move |x: &Float| limit.eval_float(x).square());
    let limit_norm = m.integrate_float(&limit_sq, bits, &tol)?.sqrt();

    let mut report = ProbeReport::new("counterexample", "A is closable")
        .input("measure", m)
        .input("scheme", scheme.name())
        .input("description", scheme.description())
        .columns(&["norm", "residual"]);
    let mut norms_squared = Vec::with_capacity(n_list.len());
    let mut norms = Vec::with_capacity(n_list.len());
    let mut residuals = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let g = scheme.sequence(n)?;
        let integrand = Residual {
            re: Polynomial::new(g.entries().iter().map(|z| z.re.clone()).collect()),
            im: Polynomial::new(g.entries().iter().map(|z| z.im.clone()).collect()),
            limit: scheme.limit(),
        };
        let r = m.integrate_float(&integrand, bits, &tol)?.sqrt();
        let ns = g.norm_squared();
        let norm = Float::with_val(bits, &ns).sqrt();
        report.push_row(n, vec![format_float(&norm, digits), format_float(&r, digits)]);
        norms_squared.push(ns);
        norms.push(norm);
        residuals.push(r);
    }
    report.note(format!("||f||_L2(M) = {}", format_float(&limit_norm, digits)));
    let verdict = if !tends_to_zero(n_list, &norms) {
        report.note("precondition: ||g^(n)|| does not tend to 0");
        Verdict::Inconclusive
    } else if !tends_to_zero(n_list, &residuals) {
        report.note("||A g^(n) - f|| does not tend to 0");
        Verdict::Inconclusive
    } else if limit_norm.is_zero() {
        report.note("g^(n) -> 0 and A g^(n) -> 0: consistent with closability");
        Verdict::Inconclusive
    } else {
        report.note("g^(n) -> 0 while A g^(n) -> f with ||f|| > 0: A is not closable");
        Verdict::EvidenceAgainst
    };
    report.note(format!("order horizon: n = {}", n_list.iter().max().expect("nonempty")));
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(CounterexampleOutcome { report, norms_squared, residuals, limit_norm })
}

/// `|sum g_k l^k| <= ||g|| (1 - l^2)^{-1/2}`, compared exactly through squares.
#[derive(Clone, Debug, PartialEq)]
pub struct MassRemovalCheck {
    pub lhs: Float,
    pub rhs: Float,
    pub lhs_squared: Rational,
    pub rhs_squared: Rational,
    pub holds: bool,
}

pub fn mass_removal_bound_check(g: &FiniteSequence, lambda: &Rational, bits: u32) -> Result<MassRemovalCheck> {
    if Rational::from(lambda.abs_ref()) >= 1 {
        return Err(Error::InvalidArgument(format!("|lambda| must be below 1, got {}", format_rational(lambda))));
    }
    let mut power = Rational::from(1);
    let mut re = Rational::new();
    let mut im = Rational::new();
    for z in g.entries() {
        re += Rational::from(&z.re * &power);
        im += Rational::from(&z.im * &power);
        power *= lambda;
    }
    let lhs_squared = re.square() + im.square();
    let rhs_squared = g.norm_squared() / (Rational::from(1) - Rational::from(lambda.square_ref()));
    let holds = lhs_squared <= rhs_squared;
    Ok(MassRemovalCheck {
        lhs: Float::with_val(bits, &lhs_squared).sqrt(),
        rhs: Float::with_val(bits, &rhs_squared).sqrt(),
        lhs_squared,
        rhs_squared,
        holds,
    })
}

/// `integral e^{izt} u(t) dM(t)` with its power series and the series bound.
#[derive(Clone, Debug)]
pub struct FourierOutcome {
    pub value: Cplx<Real>,
    /// `sum_{n <= terms} (iz)^n / n! * integral t^n u dM`; absent when divergent.
    pub series_value: Option<Cplx<Real>>,
    /// `sum_{n <= terms} |Im z|^n / n! * sqrt(q_2n) * ||u||`; absent when divergent.
    pub bound: Option<Real>,
    /// Estimated tails of the two series.
    pub series_slack: Option<Real>,
    pub bound_slack: Option<Real>,
    pub divergent: bool,
    pub report: ProbeReport,
}

impl FourierOutcome {
    /// `|value| <= bound + slack`.
    pub fn within_bound(&self) -> Option<bool> {
        let bits = self.value.re.prec();
        let bound = self.bound.as_ref()?;
        let slack = self.bound_slack.as_ref()?;
        Some(self.value.abs_float(bits) <= Float::with_val(bits, &bound.0 + &slack.0))
    }

    /// `|value - series| <= tol * max(1, |value|) + slack`.
    pub fn series_agrees(&self, tol: &Float) -> Option<bool> {
        let bits = self.value.re.prec();
        let series = self.series_value.as_ref()?;
        let slack = self.series_slack.as_ref()?;
        let diff = (self.value.clone() - series).abs_float(bits);
        let scale = self.value.abs_float(bits).max(&Float::with_val(bits, 1));
        Some(diff <= scale * tol + &slack.0)
    }
}

/// Tail estimate from the last two pairs of term magnitudes; `None` if they grow.
fn tail_slack(mags: &[Float], bits: u32) -> Option<Float> {
    let n = mags.len();
    if n < 4 {
        return Some(Float::new(bits));
    }
    let last = Float::with_val(bits, mags[n - 1].max_ref(&mags[n - 2]));
    let prev = Float::with_val(bits, mags[n - 3].max_ref(&mags[n - 4]));
    if last.is_zero() {
        return Some(Float::new(bits));
    }
    if last >= prev {
        return None;
    }
    let rho = Float::with_val(bits, &last / &prev);
    let denom = Float::with_val(bits, 1 - &rho);
    Some(last * 2u32 * rho / denom)
}

pub fn fourier_transform(
    u: &dyn RealFunction,
    m: &Measure,
    z: &Cplx<Rational>,
    terms: usize,
    ctx: &PrecisionContext,
) -> Result<FourierOutcome> {
    let bits = ctx.bits();
    let fctx =
        if ctx.is_exact() { PrecisionContext::big_float(bits)?.with_moment_cap(ctx.moment_cap()) } else { ctx.clone() };
    let tol = fctx.float_tolerance();
    let (a, b) = (z.re.clone(), z.im.clone());

    let part = |sine: bool| {
        let (a, b) = (a.clone(), b.clone());
        FloatFn(move |x: &Float| {
            let p = x.prec();
            let damp = (Float::with_val(p, x * &b) * -1i32).exp();
            let phase = Float::with_val(p, x * &a);
            let osc = if sine { phase.sin() } else { phase.cos() };
            damp * osc * u.eval_float(x)
        })
    };
    let value = Cplx::new(
        Real(m.integrate_float(&part(false), bits, &tol)?),
        Real(m.integrate_float(&part(true), bits, &tol)?),
    );

    let q = m.moments(2 * terms, &fctx)?;
    let norm_u = match u.polynomial() {
        Some(p) => m.integrate::<Real>(&p.mul(p), &fctx)?.0,
        None => m.integrate_float(&FloatFn(|x: &Float| u.eval_float(x).square()), bits, &tol)?,
    }
    .sqrt();
    let exact_moments = m.has_exact_moments();

    let iz = Cplx::new(Real(-Float::with_val(bits, &b)), Real(Float::with_val(bits, &a)));
    let abs_y = Float::with_val(bits, &b).abs();
    let mut power = Cplx::<Real>::one(&fctx);
    let mut fact = Integer::from(1);
    let mut series = Cplx::<Real>::zero(&fctx);
    let mut bound = Float::new(bits);
    let mut series_mags = Vec::with_capacity(terms + 1);
    let mut bound_mags = Vec::with_capacity(terms + 1);
    let mut report = ProbeReport::new("fourier", "|F(z)| <= sum |Im z|^n / n! sqrt(q_2n) ||u||")
        .input("measure", m)
        .input("z", z.to_literal())
        .input("terms", terms)
        .columns(&["series_partial", "bound_partial"]);
    let digits = fctx.decimal_digits();
    for n in 0..=terms {
        if n > 0 {
            power = power * &iz;
            fact *= n as u32;
        }
        let w = match (u.polynomial(), exact_moments) {
            (Some(p), true) => Float::with_val(bits, m.integrate_exact(&p.mul(&Polynomial::monomial(n)))?),
            _ => m.integrate_float(&TimesPower { f: u, n: n as u32 }, bits, &tol)?,
        };
        let f = Float::with_val(bits, &fact);
        let coef = Real(Float::with_val(bits, &w / &f));
        let term = power.scale(&coef);
        series_mags.push(term.abs_float(bits));
        series = series + term;
        let bt = Float::with_val(bits, abs_y.clone().pow(n as u32)) / &f * q.float(2 * n, bits).sqrt() * &norm_u;
        bound_mags.push(bt.clone());
        bound += bt;
        report.push_row(n, vec![series.to_decimal(digits), format_float(&bound, digits)]);
    }
    let series_slack = tail_slack(&series_mags, bits);
    let bound_slack = tail_slack(&bound_mags, bits);
    let divergent = series_slack.is_none() || bound_slack.is_none();
    report.note(format!("value = {}", value.to_decimal(digits)));
    let verdict = if divergent {
        report.note("series terms grow: growth condition violated, no series value reported");
        Verdict::EvidenceAgainst
    } else {
        let slack = bound_slack.clone().expect("converged");
        let ok = value.abs_float(bits) <= Float::with_val(bits, &bound + &slack);
        report.note(format!("bound = {}", format_float(&bound, digits)));
        if ok {
            Verdict::EvidenceFor
        } else {
            Verdict::EvidenceAgainst
        }
    };
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(FourierOutcome {
        value,
        series_value: (!divergent).then_some(series),
        bound: (!divergent).then(|| Real(bound)),
        series_slack: (!divergent).then(|| Real(series_slack.expect("converged"))),
        bound_slack: (!divergent).then(|| Real(bound_slack.expect("converged"))),
        divergent,
        report,
    })
}

/// Hilbert-Schmidt partial sums `sum_{n <= N} sum_k b_{k,n}^2` of `B` for `N = 1..=order`.
pub fn hs_probe(q: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<ProbeReport> {
    let orders: Vec<usize> = (1..=order).collect();
    let bits = work_bits(ctx);
    let sums: Vec<Float> = if ctx.is_exact() {
        let sys = OrthoSystem::<Surd>::from_moments(q, order, ctx)?;
        hs_partial_sums(&sys.b, &orders, ctx)?.iter().map(|s| s.to_float(bits)).collect()
    } else {
        let sys = OrthoSystem::<Real>::from_moments(q, order, ctx)?;
        hs_partial_sums(&sys.b, &orders, ctx)?.iter().map(|s| s.to_float(bits)).collect()
    };
    let increments = trend::increments(&sums);
    let t = classify_increments(&orders, &increments);
    let digits = ctx.decimal_digits();
    let mut report = ProbeReport::new("hilbert_schmidt", "B is Hilbert-Schmidt")
        .input("order", order)
        .columns(&["partial_sum", "increment"]);
    for (i, (s, d)) in sums.iter().zip(&increments).enumerate() {
        report.push_row(i + 1, vec![format_float(s, digits), format_float(d, digits)]);
    }
    report.note(format!("trend: {}", t.trend));
    if let Some(r) = t.fit.ratio {
        report.note(format!("tail increment ratio {r:.6}"));
    }
    let verdict = match t.trend {
        Trend::Plateauing => Verdict::EvidenceFor,
        Trend::Growing => Verdict::EvidenceAgainst,
        Trend::Inconclusive => Verdict::Inconclusive,
    };
    report.set_verdict(verdict, Evidence::FiniteEvidence);
    Ok(report)
}

/// Short label of a classification.
pub const CLOSABLE: &str = "closable";
pub const NOT_CLOSABLE: &str = "not closable";
pub const UNDETERMINED: &str = "undetermined";

/// Bundle the support, tail, Carleman, growth and Hilbert-Schmidt probes and
/// state what they imply for closability, each claim with its evidence level.
pub fn classify(m: &Measure, q: &MomentSequence, depth: usize, ctx: &PrecisionContext) -> Result<ProbeReport> {
    q.require(2 * depth + 1)?;
    let support = support_probe(m);
    let info = m.support_info();
    let mut children = vec![support.clone()];
    let mut notes = Vec::new();
    if q.len() >= MIN_TAIL_MOMENTS {
        children.push(moment_tail_probe(q, ctx)?);
    }
    let carleman = carleman_partial_sums(q, depth, ctx)?;
    let growth = growth_ratio(q, depth, ctx)?;
    children.push(carleman.report.clone());
    children.push(growth.report.clone());
    let hs = match hs_probe(q, depth, ctx) {
        Ok(r) => {
            children.push(r.clone());
            Some(r)
        }
        Err(e) if e.is_numerical() => {
            notes.push(format!("Hilbert-Schmidt sums unavailable: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let hs_plateau = hs.as_ref().is_some_and(|r| r.verdict() == Verdict::EvidenceFor);

    let (label, narrative, verdict, evidence) = if support.verdict() == Verdict::Holds {
        (
            CLOSABLE,
            "mass confined to [-1,1] with no atoms at +1 or -1 (exact): closable".to_string(),
            Verdict::Holds,
            Evidence::Exact,
        )
    } else if info.bounded {
        (
            NOT_CLOSABLE,
            "bounded support makes the problem determinate with q_2n^(1/(2n)) = o(n) (exact), \
             and the support condition fails (exact): not closable"
                .to_string(),
            Verdict::Fails,
            Evidence::Exact,
        )
    } else if carleman.report.verdict() == Verdict::EvidenceAgainst && hs_plateau {
        (
            CLOSABLE,
            "indeterminacy evidence (Carleman sum converges, Hilbert-Schmidt sums plateau; finite evidence): \
             closable, since indeterminate problems give closable A"
                .to_string(),
            Verdict::EvidenceFor,
            Evidence::FiniteEvidence,
        )
    } else if growth.report.verdict() == Verdict::EvidenceFor {
        (
            NOT_CLOSABLE,
            "growth q_2n^(1/(2n)) = o(n) (finite evidence) and the support condition fails (exact): \
             not closable"
                .to_string(),
            Verdict::EvidenceAgainst,
            Evidence::FiniteEvidence,
        )
    } else {
        (
            UNDETERMINED,
            "no probe is decisive at this depth".to_string(),
            Verdict::Inconclusive,
            Evidence::FiniteEvidence,
        )
    };

    let mut report = ProbeReport::new("classify", "A is closable")
        .input("measure", m)
        .input("depth", depth)
        .input("classification", label);
    report.note(narrative);
    for n in notes {
        report.note(n);
    }
    report.set_verdict(verdict, evidence);
    report.children = children;
    Ok(report)
}
