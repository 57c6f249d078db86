//! Adaptive panel Gauss–Legendre quadrature at arbitrary precision.
//!
//! Each panel carries a coarse estimate (one rule application) and a fine
//! estimate (the rule on both halves); their difference is the panel error.
//! The panel with the largest error is bisected until the summed error falls
//! below `tol * integral of |f|` plus an optional absolute floor.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Maximum number of panels a single integration may create.
pub const PANEL_BUDGET: usize = 1 << 20;

/// Guard bits added on top of the requested precision.
pub const GUARD_BITS: u32 = 32;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    /// Rule with `order` nodes, computed by Newton iteration at `bits` precision.
    pub fn new(order: usize, bits: u32) -> Self {
        assert!(order >= 2, "Gauss-Legendre order must be at least 2");
        let mut nodes = vec![Float::new(bits); order];
        let mut weights = vec![Float::new(bits); order];
        let half = order.div_ceil(2);
        let tol = Float::with_val(bits, 1) >> (bits as i32 - 4);
        for i in 0..half {
            let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
            let mut x = Float::with_val(bits, guess);
            let mut deriv = Float::new(bits);
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(order, &x);
                let step = Float::with_val(bits, &p / &dp);
                x -= &step;
                deriv = dp;
                if step.abs() <= tol {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(order, &x);
            if !dp.is_zero() {
                deriv = dp;
            }
            let one_minus_x2 = Float::with_val(bits, 1) - Float::with_val(bits, x.square_ref());
            let w = Float::with_val(bits, 2) / (one_minus_x2 * Float::with_val(bits, deriv.square_ref()));
            nodes[i] = x.clone();
            weights[i] = w.clone();
            nodes[order - 1 - i] = -x;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = Float::new(bits);
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    /// Apply the rule on `[a, b]`, returning (integral of f, integral of |f|).
    fn apply(&self, f: &dyn Fn(&Float) -> Float, a: &Float, b: &Float, bits: u32) -> (Float, Float) {
        let half = Float::with_val(bits, b - a) / 2u32;
        let mid = Float::with_val(bits, a + b) / 2u32;
        let mut sum = Float::new(bits);
        let mut abs = Float::new(bits);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let x = Float::with_val(bits, &half * t) + &mid;
            let fx = f(&x);
            let term = Float::with_val(bits, w * &fx);
            abs += Float::with_val(bits, term.abs_ref());
            sum += term;
        }
        (sum * &half, abs * half)
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p_prev = Float::with_val(bits, 1);
    let mut p = x.clone();
    for k in 2..=n {
        let kf = k as u32;
        let next = (Float::with_val(bits, x * &p) * (2 * kf - 1) - Float::with_val(bits, &p_prev * (kf - 1))) / kf;
        p_prev = std::mem::replace(&mut p, next);
    }
    let x2m1 = Float::with_val(bits, x.square_ref()) - 1u32;
    let dp = (Float::with_val(bits, x * &p) - &p_prev) * (n as u32) / x2m1;
    (p, dp)
}

/// Result of an integration: the value and the integral of the absolute integrand.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Float,
    pub abs: Float,
    pub panels: usize,
}

struct Panel {
    a: Float,
    b: Float,
    left: (Float, Float),
    right: (Float, Float),
    err: Float,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integrator bound to a working precision and relative tolerance.
#[derive(Clone, Debug)]
pub struct Integrator {
    rule: GaussLegendre,
    bits: u32,
    tol: Float,
    budget: usize,
}

impl Integrator {
    /// `bits` is the requested precision; guard bits are added internally.
    pub fn new(bits: u32, tol: &Float) -> Self {
        let order = (bits as usize / 8 + 8).clamp(16, 96);
        let work = bits + GUARD_BITS;
        Integrator {
            rule: GaussLegendre::new(order, work),
            bits: work,
            tol: Float::with_val(64, tol),
            budget: PANEL_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn working_bits(&self) -> u32 {
        self.bits
    }

    fn make_panel(&self, f: &dyn Fn(&Float) -> Float, a: Float, b: Float, coarse: &Float) -> Panel {
        let m = Float::with_val(self.bits, &a + &b) / 2u32;
        let left = self.rule.apply(f, &a, &m, self.bits);
        let right = self.rule.apply(f, &m, &b, self.bits);
        let fine = Float::with_val(self.bits, &left.0 + &right.0);
        let err = Float::with_val(self.bits, coarse - &fine).abs();
        Panel { a, b, left, right, err }
    }

    /// Integrate `f` over the finite interval `[a, b]`.
    pub fn finite(&self, f: &dyn Fn(&Float) -> Float, a: &Float, b: &Float) -> Result<Estimate> {
        self.finite_with_floor(f, a, b, &Float::new(self.bits))
    }

    /// As [`Integrator::finite`], accepting once the error is below `tol * |f|_1 + floor`.
    pub fn finite_with_floor(
        &self,
        f: &dyn Fn(&Float) -> Float,
        a: &Float,
        b: &Float,
        floor: &Float,
    ) -> Result<Estimate> {
        const INITIAL: u32 = 4;
        let a = Float::with_val(self.bits, a);
        let b = Float::with_val(self.bits, b);
        let width = Float::with_val(self.bits, &b - &a);
        let mut heap = BinaryHeap::new();
        for i in 0..INITIAL {
            let lo = Float::with_val(self.bits, &width * i) / INITIAL + &a;
            let hi =
                if i + 1 == INITIAL { b.clone() } else { Float::with_val(self.bits, &width * (i + 1)) / INITIAL + &a };
            let coarse = self.rule.apply(f, &lo, &hi, self.bits).0;
            heap.push(self.make_panel(f, lo, hi, &coarse));
        }
        loop {
            let (value, abs, err) = totals(&heap, self.bits);
            let target = Float::with_val(self.bits, &self.tol * &abs) + floor;
            if err <= target || abs.is_zero() {
                return Ok(Estimate { value, abs, panels: heap.len() });
            }
            if !value.is_finite() || !err.is_finite() {
                return Err(Error::QuadratureNoConvergence { panels: heap.len() });
            }
            // Split the worst panels in a batch before re-summing.
            let batch = (heap.len() / 4).max(1);
            for _ in 0..batch {
                if heap.len() >= self.budget {
                    return Err(Error::QuadratureNoConvergence { panels: heap.len() });
                }
                let Some(worst) = heap.pop() else { break };
                let m = Float::with_val(self.bits, &worst.a + &worst.b) / 2u32;
                heap.push(self.make_panel(f, worst.a, m.clone(), &worst.left.0));
                heap.push(self.make_panel(f, m, worst.b, &worst.right.0));
            }
        }
    }

    /// Integrate over the whole real line with doubling shells `[2^k, 2^(k+1)]`.
    ///
    /// Shells are added until one contributes less than `tol` of the running
    /// absolute mass and less than its predecessor.
    pub fn real_line(&self, f: &dyn Fn(&Float) -> Float) -> Result<Estimate> {
        let one = Float::with_val(self.bits, 1);
        let center = self.finite(f, &-one.clone(), &one)?;
        let mut value = center.value;
        let mut abs = center.abs;
        let mut panels = center.panels;
        let mut prev_shell = Float::with_val(self.bits, f64::INFINITY);
        for k in 0..62u32 {
            let lo = Float::with_val(self.bits, 1) << k;
            let hi = Float::with_val(self.bits, 1) << (k + 1);
            let floor = Float::with_val(self.bits, &self.tol * &abs) >> 6;
            let pos = self.finite_with_floor(f, &lo, &hi, &floor)?;
            let neg = self.finite_with_floor(f, &-hi, &-lo, &floor)?;
            let shell = Float::with_val(self.bits, &pos.abs + &neg.abs);
            value += pos.value;
            value += neg.value;
            abs += &shell;
            panels += pos.panels + neg.panels;
            let small = shell <= Float::with_val(self.bits, &self.tol * &abs);
            if k >= 3 && small && shell <= prev_shell {
                return Ok(Estimate { value, abs, panels });
            }
            prev_shell = shell;
        }
        Err(Error::QuadratureNoConvergence { panels })
    }
}

fn totals(heap: &BinaryHeap<Panel>, bits: u32) -> (Float, Float, Float) {
    let mut value = Float::new(bits);
    let mut abs = Float::new(bits);
    let mut err = Float::new(bits);
    for p in heap.iter() {
        value += &p.left.0;
        value += &p.right.0;
        abs += &p.left.1;
        abs += &p.right.1;
        err += &p.err;
    }
    (value, abs, err)
}

/// `pi` at the given precision.
pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// Standard normal density `exp(-y^2/2) / sqrt(2 pi)`.
pub fn std_normal_pdf(y: &Float) -> Float {
    let bits = y.prec();
    let e = Float::with_val(bits, y.square_ref()) / -2i32;
    let norm = (pi(bits) * 2u32).sqrt();
    e.exp() / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(10, 200);
        // integral of x^18 over [-1,1] = 2/19
        let mut s = Float::new(200);
        for (x, w) in rule.nodes().iter().zip(rule.weights()) {
            s += Float::with_val(200, x.pow(18)) * w;
        }
        let expect = Float::with_val(200, 2) / 19u32;
        let diff = Float::with_val(200, &s - &expect).abs();
        assert!(diff < Float::with_val(64, 1e-55), "diff {diff}");
        let wsum: Float = rule.weights().iter().fold(Float::new(200), |a, w| a + w);
        assert!(Float::with_val(200, &wsum - 2u32).abs() < Float::with_val(64, 1e-55));
    }

    #[test]
    fn adaptive_handles_a_sharp_feature() {
        let tol = Float::with_val(64, 1e-30);
        let integ = Integrator::new(160, &tol);
        // integral of x^200 over [0,1] is 1/201
        let f = |x: &Float| Float::with_val(x.prec(), x.pow(200));
        let est = integ.finite(&f, &Float::with_val(160, 0), &Float::with_val(160, 1)).unwrap();
        let expect = Float::with_val(160, 1) / 201u32;
        let rel = Float::with_val(160, &est.value - &expect).abs() / expect;
        assert!(rel < Float::with_val(64, 1e-28), "rel {rel}");
    }

    #[test]
    fn real_line_gaussian_moments() {
        let tol = Float::with_val(64, 1e-35);
        let integ = Integrator::new(192, &tol);
        // E[y^6] = 15 for the standard normal
        let f = |y: &Float| Float::with_val(y.prec(), y.pow(6)) * std_normal_pdf(y);
        let est = integ.real_line(&f).unwrap();
        let rel = Float::with_val(192, &est.value - 15u32).abs() / 15u32;
        assert!(rel < Float::with_val(64, 1e-33), "rel {rel}");
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tol = Float::with_val(64, 1e-40);
        let integ = Integrator::new(160, &tol).with_budget(8);
        let f = |x: &Float| {
            // discontinuous integrand never converges with 8 panels
            if *x > 0.3 {
                Float::with_val(x.prec(), 1)
            } else {
                Float::new(x.prec())
            }
        };
        let err = integ.finite(&f, &Float::with_val(160, 0), &Float::with_val(160, 1)).unwrap_err();
        assert!(matches!(err, Error::QuadratureNoConvergence { .. }));
    }
}
