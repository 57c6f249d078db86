use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use momentkit::acceptance::DEFAULT_SEED;
use momentkit::measures::Measure;
use momentkit::numeric::PrecisionContext;

use crate::Failure;

/// Orthonormal polynomials, transition matrices and closability probes for
/// Hamburger moment problems.
#[derive(Debug, Parser)]
#[command(name = "momentkit", version)]
pub struct Cli {
    /// Measure: catalog entry like `gaussian(0,1)`, inline JSON, or a JSON file.
    #[arg(long, global = true)]
    pub measure: Option<String>,

    /// Truncation order N.
    #[arg(short = 'N', long, global = true, default_value_t = 10)]
    pub order: usize,

    /// `exact`, `auto`, or mantissa bits (at least 64).
    #[arg(long, global = true, default_value = "auto")]
    pub precision: Precision,

    /// Output format; JSON by default, a plain table for `selftest`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments q_0..q_count.
    Moments {
        /// Highest moment index; defaults to the order.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Hankel matrix, transition matrices or recurrence coefficients.
    Orthopoly {
        #[arg(long, value_enum, default_value_t = Emit::Recurrence)]
        emit: Emit,
    },
    /// Closability and determinacy probes.
    Probe {
        /// Comma-separated subset of support,tail,carleman,growth,hs or `all`.
        #[arg(long, default_value = "all")]
        probes: String,
    },
    /// The averaging counterexample g^(n)_k = 1/n, k < n.
    Counterexample {
        /// Comma-separated list of n.
        #[arg(long, default_value = "4,8,16,32,64,128,256,512,1024")]
        n: String,
        #[arg(long, value_enum, default_value_t = Limit::Atom)]
        limit: Limit,
    },
    /// Both sides of sum xi_k z^k = sum y_n P_n(z) with xi = B y.
    Closure {
        /// Sequence literal, e.g. `0,0,1` or `1/2,1-2i`.
        #[arg(long)]
        y: String,
        /// Comma-separated complex points.
        #[arg(long, default_value = "0,1")]
        points: String,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Selftest {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Recurrence,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
    Hankel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Limit {
    /// Indicator of the atom at 1.
    Atom,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Auto,
    Exact,
    Bits(u32),
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Precision::Auto),
            "exact" => Ok(Precision::Exact),
            _ => match s.parse::<u32>() {
                Ok(b) if b >= 64 => Ok(Precision::Bits(b)),
                _ => Err(format!("precision must be `exact`, `auto` or bits >= 64, got {s:?}")),
            },
        }
    }
}

/// Moment requests beyond this are refused even when a command needs them.
pub const HARD_MOMENT_CAP: usize = 4096;

impl Cli {
    pub fn measure_or(&self, default: &str) -> Result<Measure, Failure> {
        Ok(Measure::parse(self.measure.as_deref().unwrap_or(default))?)
    }

    /// Context for `m` needing moments up to index `top`. `auto` is exact
    /// when the measure has rational moments and `float_bits` otherwise.
    pub fn context(&self, m: &Measure, top: usize, float_bits: u32) -> Result<PrecisionContext, Failure> {
        let ctx = match self.precision {
            Precision::Exact => PrecisionContext::exact(),
            Precision::Bits(b) => PrecisionContext::big_float(b)?,
            Precision::Auto if m.has_exact_moments() => PrecisionContext::exact(),
            Precision::Auto => PrecisionContext::big_float(float_bits)?,
        };
        let needed = top + 1;
        if needed > HARD_MOMENT_CAP {
            return Err(momentkit::Error::MomentCap { requested: needed, cap: HARD_MOMENT_CAP }.into());
        }
        Ok(if needed > ctx.moment_cap() { ctx.with_moment_cap(needed) } else { ctx })
    }

    /// Float context for computations that need one regardless of `auto`.
    pub fn float_context(&self, top: usize, default_bits: u32) -> Result<PrecisionContext, Failure> {
        let bits = match self.precision {
            Precision::Bits(b) => b,
            _ => default_bits,
        };
        let ctx = PrecisionContext::big_float(bits)?;
        let needed = top + 1;
        if needed > HARD_MOMENT_CAP {
            return Err(momentkit::Error::MomentCap { requested: needed, cap: HARD_MOMENT_CAP }.into());
        }
        Ok(if needed > ctx.moment_cap() { ctx.with_moment_cap(needed) } else { ctx })
    }
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Failure::config(format!("bad {what} entry {p:?} in {s:?}"))))
        .collect()
}
