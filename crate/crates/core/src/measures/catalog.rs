//! Built-in measures with closed-form moments.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::quadrature::{pi, std_normal_pdf, Integrator};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational};

/// Named catalog entries.
#[derive(Clone, Debug, PartialEq)]
pub enum Catalog {
    /// Normalized Lebesgue measure on `[a, b]`.
    Uniform {
        a: Rational,
        b: Rational,
    },
    Gaussian {
        mean: Rational,
        sd: Rational,
    },
    /// Log-normal with `log X ~ N(0, sigma^2)`; moments are transcendental.
    Lognormal {
        sigma: Rational,
    },
    /// Log-normal with `sigma^2 = 2 ln 2`, so that `q_n = 2^(n^2)`.
    LognormalBase2,
    /// Normalized uniform on `[-1, 1]` plus an atom of weight `c` at 1.
    UniformPlusAtom {
        c: Rational,
    },
    /// Arcsine law on `[-1, 1]`.
    Chebyshev,
}

/// The absolutely continuous part of a measure.
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    Uniform { a: Rational, b: Rational },
    Gaussian { mean: Rational, sd: Rational },
    Lognormal { sigma: Rational },
    LognormalBase2,
    Arcsine,
}

pub const CATALOG_NAMES: &[&str] =
    &["uniform", "gaussian", "lognormal", "lognormal_base2", "uniform_plus_atom", "chebyshev"];

impl Catalog {
    /// Build an entry from its name and parameters, validating them.
    pub fn from_name(name: &str, params: &[Rational]) -> Result<Self> {
        let arity = |want: &[usize]| -> Result<()> {
            if want.contains(&params.len()) {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!(
                    "{name} takes {} parameter(s), got {}",
                    want.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" or "),
                    params.len()
                )))
            }
        };
        let positive = |what: &str, v: &Rational| -> Result<()> {
            if v.cmp0().is_gt() {
                Ok(())
            } else {
                Err(Error::InvalidSpec(format!("{name}: {what} must be positive, got {}", format_rational(v))))
            }
        };
        let entry = match name {
            "uniform" => {
                arity(&[0, 2])?;
                let (a, b) = if params.is_empty() {
                    (Rational::from(-1), Rational::from(1))
                } else {
                    (params[0].clone(), params[1].clone())
                };
                if a >= b {
                    return Err(Error::InvalidSpec(format!(
                        "uniform: need a < b, got ({}, {})",
                        format_rational(&a),
                        format_rational(&b)
                    )));
                }
                Catalog::Uniform { a, b }
            }
            "gaussian" | "normal" => {
                arity(&[0, 2])?;
                let (mean, sd) = if params.is_empty() {
                    (Rational::new(), Rational::from(1))
                } else {
                    (params[0].clone(), params[1].clone())
                };
                positive("standard deviation", &sd)?;
                Catalog::Gaussian { mean, sd }
            }
            "lognormal" => {
                arity(&[1])?;
                positive("sigma", &params[0])?;
                Catalog::Lognormal { sigma: params[0].clone() }
            }
            "lognormal_base2" => {
                arity(&[0])?;
                Catalog::LognormalBase2
            }
            "uniform_plus_atom" => {
                arity(&[0, 1])?;
                let c = params.first().cloned().unwrap_or_else(|| Rational::from(1));
                positive("atom weight", &c)?;
                Catalog::UniformPlusAtom { c }
            }
            "chebyshev" | "arcsine" => {
                arity(&[0])?;
                Catalog::Chebyshev
            }
            other => {
                return Err(Error::InvalidSpec(format!(
                    "unknown catalog measure '{other}' (known: {})",
                    CATALOG_NAMES.join(", ")
                )))
            }
        };
        Ok(entry)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Catalog::Uniform { .. } => "uniform",
            Catalog::Gaussian { .. } => "gaussian",
            Catalog::Lognormal { .. } => "lognormal",
            Catalog::LognormalBase2 => "lognormal_base2",
            Catalog::UniformPlusAtom { .. } => "uniform_plus_atom",
            Catalog::Chebyshev => "chebyshev",
        }
    }

    pub fn params(&self) -> Vec<Rational> {
        match self {
            Catalog::Uniform { a, b } => vec![a.clone(), b.clone()],
            Catalog::Gaussian { mean, sd } => vec![mean.clone(), sd.clone()],
            Catalog::Lognormal { sigma } => vec![sigma.clone()],
            Catalog::UniformPlusAtom { c } => vec![c.clone()],
            Catalog::LognormalBase2 | Catalog::Chebyshev => vec![],
        }
    }

    /// Density part and atoms of the entry.
    pub fn split(&self) -> (Density, Vec<(Rational, Rational)>) {
        match self {
            Catalog::Uniform { a, b } => (Density::Uniform { a: a.clone(), b: b.clone() }, vec![]),
            Catalog::Gaussian { mean, sd } => (Density::Gaussian { mean: mean.clone(), sd: sd.clone() }, vec![]),
            Catalog::Lognormal { sigma } => (Density::Lognormal { sigma: sigma.clone() }, vec![]),
            Catalog::LognormalBase2 => (Density::LognormalBase2, vec![]),
            Catalog::UniformPlusAtom { c } => {
                (Density::Uniform { a: Rational::from(-1), b: Rational::from(1) }, vec![(Rational::from(1), c.clone())])
            }
            Catalog::Chebyshev => (Density::Arcsine, vec![]),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = self.params();
        if params.is_empty() {
            return f.write_str(self.name());
        }
        let args: Vec<String> = params.iter().map(format_rational).collect();
        write!(f, "{}({})", self.name(), args.join(","))
    }
}

impl Density {
    pub fn has_rational_moments(&self) -> bool {
        !matches!(self, Density::Lognormal { .. })
    }

    /// `q_0..=q_count` in closed form, or `None` for transcendental moments.
    pub fn exact_moments(&self, count: usize) -> Option<Vec<Rational>> {
        let out = match self {
            Density::Uniform { a, b } => {
                let width = Rational::from(b - a);
                let mut pa = a.clone();
                let mut pb = b.clone();
                (0..=count)
                    .map(|n| {
                        let num = Rational::from(&pb - &pa);
                        pa *= a;
                        pb *= b;
                        num / Rational::from(&width * (n as u32 + 1))
                    })
                    .collect()
            }
            Density::Gaussian { mean, sd } => gaussian_moments(mean, sd, count),
            Density::LognormalBase2 => (0..=count)
                .map(|n| {
                    let e = (n as u32).checked_mul(n as u32).expect("moment index too large");
                    Rational::from(Integer::from(1) << e)
                })
                .collect(),
            Density::Arcsine => (0..=count)
                .map(|n| {
                    if n % 2 == 1 {
                        Rational::new()
                    } else {
                        let k = (n / 2) as u32;
                        let binom = Integer::from(Integer::binomial_u(2 * k, k));
                        Rational::from((binom, Integer::from(1) << (2 * k)))
                    }
                })
                .collect(),
            Density::Lognormal { .. } => return None,
        };
        Some(out)
    }

    /// `q_0..=q_count` at `bits` precision.
    pub fn float_moments(&self, count: usize, bits: u32) -> Vec<Float> {
        match self {
            Density::Lognormal { sigma } => {
                let s2 = Float::with_val(bits + 32, sigma).square() / 2u32;
                (0..=count)
                    .map(|n| {
                        let e = Float::with_val(bits + 32, &s2 * ((n * n) as u64));
                        Float::with_val(bits, e.exp_ref())
                    })
                    .collect()
            }
            _ => {
                self.exact_moments(count).expect("rational moments").iter().map(|q| Float::with_val(bits, q)).collect()
            }
        }
    }

    /// Lower and upper end of the support, `None` meaning infinite.
    pub fn support(&self) -> (Option<Rational>, Option<Rational>) {
        match self {
            Density::Uniform { a, b } => (Some(a.clone()), Some(b.clone())),
            Density::Arcsine => (Some(Rational::from(-1)), Some(Rational::from(1))),
            Density::Gaussian { .. } => (None, None),
            Density::Lognormal { .. } | Density::LognormalBase2 => (Some(Rational::new()), None),
        }
    }

    /// `sigma` for the log-normal entries at `bits`.
    fn log_sigma(&self, bits: u32) -> Option<Float> {
        match self {
            Density::Lognormal { sigma } => Some(Float::with_val(bits, sigma)),
            Density::LognormalBase2 => {
                let ln2 = Float::with_val(bits, Constant::Log2);
                Some((ln2 * 2u32).sqrt())
            }
            _ => None,
        }
    }

    /// Integral of `f` against the density by adaptive quadrature.
    pub fn integrate(&self, f: &dyn Fn(&Float) -> Float, bits: u32, tol: &Float) -> Result<Float> {
        let integ = Integrator::new(bits, tol);
        let work = integ.working_bits();
        let value = match self {
            Density::Uniform { a, b } => {
                let fa = Float::with_val(work, a);
                let fb = Float::with_val(work, b);
                let est = integ.finite(f, &fa, &fb)?;
                est.value / Float::with_val(work, Rational::from(b - a))
            }
            Density::Arcsine => {
                let g = |theta: &Float| f(&Float::with_val(theta.prec(), theta.cos_ref()));
                let est = integ.finite(&g, &Float::new(work), &pi(work))?;
                est.value / pi(work)
            }
            Density::Gaussian { mean, sd } => {
                let mu = Float::with_val(work, mean);
                let s = Float::with_val(work, sd);
                let g = |y: &Float| {
                    let x = Float::with_val(y.prec(), y * &s) + &mu;
                    f(&x) * std_normal_pdf(y)
                };
                integ.real_line(&g)?.value
            }
            Density::Lognormal { .. } | Density::LognormalBase2 => {
                let s = self.log_sigma(work).expect("log-normal");
                let g = |y: &Float| {
                    let t = Float::with_val(y.prec(), y * &s).exp();
                    f(&t) * std_normal_pdf(y)
                };
                integ.real_line(&g)?.value
            }
        };
        Ok(Float::with_val(bits, value))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Uniform { a, b } => write!(f, "uniform({},{})", format_rational(a), format_rational(b)),
            Density::Gaussian { mean, sd } => write!(f, "gaussian({},{})", format_rational(mean), format_rational(sd)),
            Density::Lognormal { sigma } => write!(f, "lognormal({})", format_rational(sigma)),
            Density::LognormalBase2 => f.write_str("lognormal_base2"),
            Density::Arcsine => f.write_str("chebyshev"),
        }
    }
}

/// Moments of `N(mean, sd^2)` by the binomial expansion over the centered ones.
fn gaussian_moments(mean: &Rational, sd: &Rational, count: usize) -> Vec<Rational> {
    // centered: E[Z^k] = (k-1)!! for even k
    let mut centered = vec![Rational::new(); count + 1];
    let mut dfact = Integer::from(1);
    let sd2 = Rational::from(sd.square_ref());
    let mut sd_pow = Rational::from(1);
    for k in (0..=count).step_by(2) {
        if k > 0 {
            dfact *= (k - 1) as u32;
            sd_pow *= &sd2;
        }
        centered[k] = Rational::from(&sd_pow * &dfact);
    }
    if mean.cmp0().is_eq() {
        return centered;
    }
    (0..=count)
        .map(|n| {
            let mut acc = Rational::new();
            for k in (0..=n).step_by(2) {
                let binom = Integer::from(Integer::binomial_u(n as u32, k as u32));
                let mu_pow = Rational::from(mean.pow((n - k) as u32));
                acc += mu_pow * &centered[k] * binom;
            }
            acc
        })
        .collect()
}

/// Parse the command-line grammar `name` or `name(arg, ...)`.
pub fn parse_catalog(spec: &str) -> Result<Catalog> {
    let s = spec.trim();
    let (name, args) = match s.find('(') {
        Some(i) => {
            let rest = s[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::InvalidSpec(format!("unbalanced parentheses in '{spec}'")))?;
            (&s[..i], rest)
        }
        None => (s, ""),
    };
    let params = args
        .split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(|a| parse_rational(a).map_err(|_| Error::InvalidSpec(format!("bad parameter '{a}' in '{spec}'"))))
        .collect::<Result<Vec<_>>>()?;
    Catalog::from_name(name.trim(), &params)
}
