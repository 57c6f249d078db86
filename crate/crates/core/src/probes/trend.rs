//! Least-squares trend fits on log values.
//!
//! Finite data can never prove convergence of a series; these fits only turn
//! a table into a labeled piece of evidence.

use std::fmt;

use rug::Float;
use serde::Serialize;

/// Increment ratio at or below which a geometric fit counts as decay.
pub const PLATEAU_RATIO: f64 = 0.9;
/// Maximum RMS residual (natural-log units) for a fit to count.
pub const RESIDUAL_LIMIT: f64 = 0.1;
/// Power-law exponent at or below which increments are summable with margin.
pub const PLATEAU_POWER: f64 = -1.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Plateauing,
    Growing,
    Inconclusive,
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trend::Plateauing => "plateauing",
            Trend::Growing => "growing",
            Trend::Inconclusive => "inconclusive",
        })
    }
}

/// `y = slope * x + intercept` with the RMS of the residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms: f64,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n as f64).sqrt();
    Some(LineFit { slope, intercept, rms })
}

/// Natural log of a positive float as `f64`, safe for values far outside the `f64` range.
pub fn ln_f64(x: &Float) -> f64 {
    Float::with_val(x.prec().max(64), x.ln_ref()).to_f64()
}

/// Geometric fit `v_n ~ c rho^n` and power fit `v_n ~ c n^p` on positive values.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct DecayFit {
    pub ratio: Option<f64>,
    pub ratio_rms: Option<f64>,
    pub power: Option<f64>,
    pub power_rms: Option<f64>,
    pub points: usize,
}

impl DecayFit {
    /// Ratio at most 0.9 with a small residual, and a geometric model fitting
    /// at least as well as a power law (short windows of `1/n` look geometric).
    pub fn geometric_decay(&self) -> bool {
        let power_fits_better = matches!((self.ratio_rms, self.power_rms), (Some(g), Some(p)) if p < g);
        matches!((self.ratio, self.ratio_rms), (Some(r), Some(e)) if r <= PLATEAU_RATIO && e < RESIDUAL_LIMIT)
            && !power_fits_better
    }

    pub fn summable_power(&self) -> bool {
        matches!((self.power, self.power_rms), (Some(p), Some(e)) if p <= PLATEAU_POWER && e < RESIDUAL_LIMIT)
    }
}

/// Fit all `(order, value)` pairs with positive values.
pub fn fit(orders: &[usize], values: &[Float]) -> DecayFit {
    let pts: Vec<(usize, f64)> = orders
        .iter()
        .zip(values)
        .filter(|(_, v)| v.is_sign_positive() && !v.is_zero())
        .map(|(&n, v)| (n, ln_f64(v)))
        .collect();
    let xs: Vec<f64> = pts.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let geo = least_squares(&xs, &ys);
    let pos: Vec<(f64, f64)> = pts.iter().filter(|p| p.0 > 0).map(|p| ((p.0 as f64).ln(), p.1)).collect();
    let lxs: Vec<f64> = pos.iter().map(|p| p.0).collect();
    let lys: Vec<f64> = pos.iter().map(|p| p.1).collect();
    let pow = least_squares(&lxs, &lys);
    DecayFit {
        ratio: geo.map(|g| g.slope.exp()),
        ratio_rms: geo.map(|g| g.rms),
        power: pow.map(|p| p.slope),
        power_rms: pow.map(|p| p.rms),
        points: pts.len(),
    }
}

/// Fit over the last half of the positive entries (at least two when available).
pub fn fit_tail(orders: &[usize], values: &[Float]) -> DecayFit {
    let idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_sign_positive() && !values[i].is_zero()).collect();
    let mut start = idx.len() / 2;
    if idx.len() - start < 2 {
        start = idx.len().saturating_sub(2);
    }
    let keep = &idx[start..];
    let o: Vec<usize> = keep.iter().map(|&i| orders[i]).collect();
    let v: Vec<Float> = keep.iter().map(|&i| values[i].clone()).collect();
    fit(&o, &v)
}

/// Classification of the increments of a partial-sum sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrendFit {
    pub trend: Trend,
    pub fit: DecayFit,
}

/// Plateauing when the tail of the positive increments decays geometrically
/// (ratio <= 0.9) or like a summable power (exponent <= -1.5), each with RMS
/// log-residual below 0.1; growing when the last positive increment exceeds
/// the first; inconclusive otherwise. All-zero increments plateau.
pub fn classify_increments(orders: &[usize], increments: &[Float]) -> TrendFit {
    let positive: Vec<&Float> = increments.iter().filter(|v| v.is_sign_positive() && !v.is_zero()).collect();
    if positive.is_empty() {
        return TrendFit { trend: Trend::Plateauing, fit: DecayFit::default() };
    }
    let fit = fit_tail(orders, increments);
    let trend = if fit.geometric_decay() || fit.summable_power() {
        Trend::Plateauing
    } else if positive.len() >= 2 && positive[positive.len() - 1] > positive[0] {
        Trend::Growing
    } else {
        Trend::Inconclusive
    };
    TrendFit { trend, fit }
}

/// Increments `s_i - s_{i-1}` with `s_{-1} = 0`.
pub fn increments(partial_sums: &[Float]) -> Vec<Float> {
    let mut prev: Option<&Float> = None;
    partial_sums
        .iter()
        .map(|s| {
            let d = match prev {
                Some(p) => Float::with_val(s.prec(), s - p),
                None => s.clone(),
            };
            prev = Some(s);
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    fn floats(v: &[f64]) -> Vec<Float> {
        v.iter().map(|&x| Float::with_val(64, x)).collect()
    }

    #[test]
    fn exact_line() {
        let f = least_squares(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.rms < 1e-12);
        assert!(least_squares(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn geometric_increments_plateau() {
        let orders: Vec<usize> = (1..=20).collect();
        let inc: Vec<Float> = orders.iter().map(|&n| Float::with_val(64, 0.25f64.powi(n as i32))).collect();
        let t = classify_increments(&orders, &inc);
        assert_eq!(t.trend, Trend::Plateauing);
        assert!((t.fit.ratio.unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn inverse_square_increments_plateau_by_power() {
        let orders: Vec<usize> = (1..=30).collect();
        let inc: Vec<Float> = orders.iter().map(|&n| Float::with_val(64, 1.0 / (n * n) as f64)).collect();
        let t = classify_increments(&orders, &inc);
        assert_eq!(t.trend, Trend::Plateauing);
        assert!(!t.fit.geometric_decay());
        assert!((t.fit.power.unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn growth_and_harmonic() {
        let orders: Vec<usize> = (1..=10).collect();
        let grow = floats(&[1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0]);
        assert_eq!(classify_increments(&orders, &grow).trend, Trend::Growing);
        let harmonic: Vec<Float> = orders.iter().map(|&n| Float::with_val(64, 1.0 / n as f64)).collect();
        assert_eq!(classify_increments(&orders, &harmonic).trend, Trend::Inconclusive);
        let long: Vec<usize> = (1..=200).collect();
        let harmonic: Vec<Float> = long.iter().map(|&n| Float::with_val(64, 1.0 / n as f64)).collect();
        assert_eq!(classify_increments(&long, &harmonic).trend, Trend::Inconclusive);
        assert_eq!(classify_increments(&orders, &floats(&[0.0; 10])).trend, Trend::Plateauing);
    }

    #[test]
    fn increments_of_partial_sums() {
        let d = increments(&floats(&[1.0, 3.0, 6.0]));
        assert_eq!(d, floats(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn huge_values_are_fine() {
        let x = Float::with_val(64, 2).pow(100_000u32);
        assert!((ln_f64(&x) - 100_000.0 * std::f64::consts::LN_2).abs() < 1e-6);
    }
}
