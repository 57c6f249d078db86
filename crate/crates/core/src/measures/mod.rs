//! Positive measures on the real line, their moments and integrals.

mod catalog;
mod function;
mod moments;
pub mod quadrature;
mod spec_file;

use std::fmt;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, PrecisionContext, Scalar};

pub use catalog::{parse_catalog, Catalog, Density, CATALOG_NAMES};
#[allow(unused_imports)]
pub(crate) use function::TimesPower;
pub use function::{FloatFn, PointValues, Polynomial, RealFunction};
pub use moments::{MomentSequence, MomentValues};
pub use spec_file::{parse_measure, MeasureSpec};

/// A point mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub position: Rational,
    pub weight: Rational,
}

impl Atom {
    pub fn new(position: Rational, weight: Rational) -> Self {
        Atom { position, weight }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rational(&self.position), format_rational(&self.weight))
    }
}

/// A positive measure with all moments finite.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    Discrete(Vec<Atom>),
    Catalog(Catalog),
    /// A catalog entry with extra atoms and removed atoms. Removals only
    /// ever refer to atoms of the base.
    Augmented {
        base: Catalog,
        added: Vec<Atom>,
        removed: Vec<Atom>,
    },
}

/// Support metadata known by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportInfo {
    pub bounded: bool,
    /// `supp(M)` is contained in `[-1, 1]`.
    pub within_unit_interval: bool,
    /// `M(R \ (-1, 1)) = 0`.
    pub inside_open_unit_ball: bool,
    pub atom_at_plus_1: bool,
    pub atom_at_minus_1: bool,
    pub discrete: bool,
}

impl SupportInfo {
    /// Support in `[-1, 1]` and no mass at `+1` or `-1`.
    pub fn condition_iii(&self) -> bool {
        self.within_unit_interval && !self.atom_at_plus_1 && !self.atom_at_minus_1
    }
}

fn merge_atom(list: &mut Vec<Atom>, position: &Rational, weight: Rational) {
    match list.iter_mut().find(|a| a.position == *position) {
        Some(a) => a.weight += weight,
        None => {
            list.push(Atom::new(position.clone(), weight));
            list.sort_by(|a, b| a.position.cmp(&b.position));
        }
    }
}

/// Take up to `weight` from the atom at `position`; returns what was taken.
fn take_atom(list: &mut Vec<Atom>, position: &Rational, weight: &Rational) -> Rational {
    let Some(i) = list.iter().position(|a| a.position == *position) else {
        return Rational::new();
    };
    let taken = if list[i].weight <= *weight { list[i].weight.clone() } else { weight.clone() };
    list[i].weight -= &taken;
    if list[i].weight.cmp0().is_eq() {
        list.remove(i);
    }
    taken
}

impl Measure {
    /// Discrete measure; repeated positions are merged.
    pub fn discrete(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut list = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if w.cmp0().is_le() {
                return Err(Error::NonPositiveWeight(format_rational(&w)));
            }
            merge_atom(&mut list, &p, w);
        }
        Ok(Measure::Discrete(list))
    }

    pub fn catalog(entry: Catalog) -> Self {
        Measure::Catalog(entry)
    }

    /// Parse either a catalog expression, inline JSON, or a path to a JSON spec.
    pub fn parse(spec: &str) -> Result<Self> {
        parse_measure(spec)
    }

    /// Absolutely continuous part, if any.
    pub fn density(&self) -> Option<Density> {
        match self {
            Measure::Discrete(_) => None,
            Measure::Catalog(c) | Measure::Augmented { base: c, .. } => Some(c.split().0),
        }
    }

    /// Net point masses, sorted by position.
    pub fn atoms(&self) -> Vec<Atom> {
        match self {
            Measure::Discrete(a) => a.clone(),
            Measure::Catalog(c) => c.split().1.into_iter().map(|(p, w)| Atom::new(p, w)).collect(),
            Measure::Augmented { base, added, removed } => {
                let mut net: Vec<Atom> = base.split().1.into_iter().map(|(p, w)| Atom::new(p, w)).collect();
                for a in added {
                    merge_atom(&mut net, &a.position, a.weight.clone());
                }
                for a in removed {
                    take_atom(&mut net, &a.position, &a.weight);
                }
                net
            }
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Measure::Discrete(_))
    }

    /// Whether the support is infinite (a density is present).
    pub fn has_infinite_support(&self) -> bool {
        self.density().is_some()
    }

    /// Whether rational closed-form moments exist.
    pub fn has_exact_moments(&self) -> bool {
        self.density().is_none_or(|d| d.has_rational_moments())
    }

    fn weight_at(&self, position: &Rational) -> Rational {
        self.atoms().into_iter().find(|a| a.position == *position).map(|a| a.weight).unwrap_or_default()
    }

    /// Add `weight` at `position`, merging with an existing atom there.
    pub fn add_atom(&self, position: &Rational, weight: &Rational) -> Result<Self> {
        if weight.cmp0().is_le() {
            return Err(Error::NonPositiveWeight(format_rational(weight)));
        }
        let out = match self {
            Measure::Discrete(atoms) => {
                let mut atoms = atoms.clone();
                merge_atom(&mut atoms, position, weight.clone());
                Measure::Discrete(atoms)
            }
            Measure::Catalog(c) => Measure::Augmented {
                base: c.clone(),
                added: vec![Atom::new(position.clone(), weight.clone())],
                removed: vec![],
            },
            Measure::Augmented { base, added, removed } => {
                let mut added = added.clone();
                let mut removed = removed.clone();
                let restored = take_atom(&mut removed, position, weight);
                let rest = Rational::from(weight - &restored);
                if rest.cmp0().is_gt() {
                    merge_atom(&mut added, position, rest);
                }
                Measure::Augmented { base: base.clone(), added, removed }
            }
        };
        Ok(out.normalized())
    }

    /// Remove `weight` from the atom at `position`.
    pub fn remove_atom(&self, position: &Rational, weight: &Rational) -> Result<Self> {
        if weight.cmp0().is_le() {
            return Err(Error::NonPositiveWeight(format_rational(weight)));
        }
        let present = self.weight_at(position);
        if present.cmp0().is_eq() {
            return Err(Error::NoAtom(format_rational(position)));
        }
        if *weight > present {
            return Err(Error::WeightExceeded {
                position: format_rational(position),
                present: format_rational(&present),
                removed: format_rational(weight),
            });
        }
        let out = match self {
            Measure::Discrete(atoms) => {
                let mut atoms = atoms.clone();
                take_atom(&mut atoms, position, weight);
                Measure::Discrete(atoms)
            }
            Measure::Catalog(c) => Measure::Augmented {
                base: c.clone(),
                added: vec![],
                removed: vec![Atom::new(position.clone(), weight.clone())],
            },
            Measure::Augmented { base, added, removed } => {
                let mut added = added.clone();
                let mut removed = removed.clone();
                let taken = take_atom(&mut added, position, weight);
                let rest = Rational::from(weight - &taken);
                if rest.cmp0().is_gt() {
                    merge_atom(&mut removed, position, rest);
                }
                Measure::Augmented { base: base.clone(), added, removed }
            }
        };
        Ok(out.normalized())
    }

    /// Fold a fully removed catalog atom into a plain base, and collapse
    /// augmentations that no longer change anything.
    fn normalized(self) -> Self {
        match self {
            Measure::Augmented { base: Catalog::UniformPlusAtom { c }, mut added, mut removed }
                if removed.iter().any(|a| a.position == 1) =>
            {
                let one = Rational::from(1);
                let gone = take_atom(&mut removed, &one, &c);
                let rest = Rational::from(&c - &gone);
                if rest.cmp0().is_gt() {
                    merge_atom(&mut added, &one, rest);
                }
                let base = Catalog::Uniform { a: Rational::from(-1), b: one };
                Measure::Augmented { base, added, removed }.normalized()
            }
            Measure::Augmented { base, added, removed } if added.is_empty() && removed.is_empty() => {
                Measure::Catalog(base)
            }
            other => other,
        }
    }

    /// `q_0..=q_count`. Exact whenever the moments are rational, floats otherwise.
    pub fn moments(&self, count: usize, ctx: &PrecisionContext) -> Result<MomentSequence> {
        if count + 1 > ctx.moment_cap() {
            return Err(Error::MomentCap { requested: count + 1, cap: ctx.moment_cap() });
        }
        let atoms = self.atoms();
        let density = self.density();
        let exact_density = match &density {
            None => Some(vec![Rational::new(); count + 1]),
            Some(d) => d.exact_moments(count),
        };
        let values = match exact_density {
            Some(mut q) => {
                for a in &atoms {
                    let mut pw = a.weight.clone();
                    for qn in q.iter_mut() {
                        *qn += &pw;
                        pw *= &a.position;
                    }
                }
                MomentValues::Exact(q)
            }
            None => {
                if ctx.is_exact() {
                    return Err(Error::ExactUnavailable(format!("{self} has no rational closed-form moments")));
                }
                let bits = ctx.bits();
                let mut q = density.expect("density").float_moments(count, bits);
                for a in &atoms {
                    let mut pw = Rational::from(&a.weight);
                    for qn in q.iter_mut() {
                        *qn += &pw;
                        pw *= &a.position;
                    }
                }
                MomentValues::Float(q)
            }
        };
        Ok(MomentSequence::generated(values, self.clone()))
    }

    /// Integral of `f`: exact in exact mode, adaptive quadrature otherwise.
    pub fn integrate<T: Scalar>(&self, f: &dyn RealFunction, ctx: &PrecisionContext) -> Result<T> {
        if ctx.is_exact() || T::EXACT {
            let r = self.integrate_exact(f)?;
            return Ok(T::from_rational(&r, ctx));
        }
        let v = self.integrate_float(f, ctx.bits(), &ctx.float_tolerance())?;
        T::from_float(&v)
    }

    /// Exact integral. Densities are handled for polynomial integrands
    /// through their rational moments.
    pub fn integrate_exact(&self, f: &dyn RealFunction) -> Result<Rational> {
        let mut total = Rational::new();
        if let Some(d) = self.density() {
            let poly = f.polynomial().ok_or_else(|| {
                Error::ExactUnavailable(format!(
                    "integrating a non-polynomial function against {d} needs big-float mode"
                ))
            })?;
            if let Some(deg) = poly.degree() {
                let q = d
                    .exact_moments(deg)
                    .ok_or_else(|| Error::ExactUnavailable(format!("{d} has no rational moments")))?;
                for (c, qn) in poly.coeffs().iter().zip(&q) {
                    total += Rational::from(c * qn);
                }
            }
        }
        for a in self.atoms() {
            let v = f
                .eval_exact(&a.position)
                .ok_or_else(|| Error::ExactUnavailable("function has no exact values at atoms".into()))?;
            total += v * &a.weight;
        }
        Ok(total)
    }

    /// Float integral at `bits` with relative tolerance `tol` on the density part.
    pub fn integrate_float(&self, f: &dyn RealFunction, bits: u32, tol: &Float) -> Result<Float> {
        let mut total = Float::new(bits + quadrature::GUARD_BITS);
        if let Some(d) = self.density() {
            total += d.integrate(&|x: &Float| f.eval_float(x), bits + quadrature::GUARD_BITS, tol)?;
        }
        for a in self.atoms() {
            let x = Float::with_val(bits + quadrature::GUARD_BITS, &a.position);
            let v = f.eval_float(&x);
            if v.is_nan() {
                return Err(Error::UndefinedAtAtom(format_rational(&a.position)));
            }
            total += v * &a.weight;
        }
        Ok(Float::with_val(bits, total))
    }

    pub fn support_info(&self) -> SupportInfo {
        let atoms = self.atoms();
        let (mut lo, mut hi) = match self.density() {
            Some(d) => d.support(),
            None => (None, None),
        };
        let mut bounded = !self.has_infinite_support() || (lo.is_some() && hi.is_some());
        if self.density().is_none() {
            lo = atoms.first().map(|a| a.position.clone());
            hi = atoms.last().map(|a| a.position.clone());
        } else {
            for a in &atoms {
                if let Some(l) = lo.as_mut() {
                    if a.position < *l {
                        *l = a.position.clone();
                    }
                }
                if let Some(h) = hi.as_mut() {
                    if a.position > *h {
                        *h = a.position.clone();
                    }
                }
            }
            bounded = lo.is_some() && hi.is_some();
        }
        let within = bounded && lo.as_ref().is_none_or(|l| *l >= -1) && hi.as_ref().is_none_or(|h| *h <= 1);
        let atom_at_plus_1 = atoms.iter().any(|a| a.position == 1);
        let atom_at_minus_1 = atoms.iter().any(|a| a.position == -1);
        SupportInfo {
            bounded,
            within_unit_interval: within,
            inside_open_unit_ball: within && !atom_at_plus_1 && !atom_at_minus_1,
            atom_at_plus_1,
            atom_at_minus_1,
            discrete: self.density().is_none(),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Discrete(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
                write!(f, "discrete[{}]", parts.join(","))
            }
            Measure::Catalog(c) => write!(f, "{c}"),
            Measure::Augmented { base, added, removed } => {
                write!(f, "{base}")?;
                for a in added {
                    write!(f, " + atom{a}")?;
                }
                for a in removed {
                    write!(f, " - atom{a}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Real, Surd};

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn uniform() -> Measure {
        Measure::catalog(Catalog::Uniform { a: r(-1), b: r(1) })
    }

    #[test]
    fn discrete_moments_and_symmetry() {
        let m = Measure::discrete(vec![(r(1), r(1)), (r(-1), r(1))]).unwrap();
        let q = m.moments(5, &PrecisionContext::exact()).unwrap();
        assert_eq!(q.exact(5), Some(&r(0)));
        assert_eq!(q.exact(4), Some(&r(2)));
    }

    #[test]
    fn remove_atom_examples() {
        let m = Measure::discrete(vec![(r(0), r(1)), (r(2), r(1))]).unwrap();
        let m2 = m.remove_atom(&r(0), &r(1)).unwrap();
        assert_eq!(m2, Measure::discrete(vec![(r(2), r(1))]).unwrap());
        let ctx = PrecisionContext::exact();
        assert_eq!(m.moments(1, &ctx).unwrap().exact(1), Some(&r(2)));
        assert_eq!(m2.moments(1, &ctx).unwrap().exact(0), Some(&r(1)));

        let upa = Measure::catalog(Catalog::UniformPlusAtom { c: r(1) });
        assert_eq!(upa.remove_atom(&r(1), &r(1)).unwrap(), uniform());

        let one = Measure::discrete(vec![(r(1), r(1))]).unwrap();
        assert_eq!(one.remove_atom(&Rational::from((1, 2)), &r(1)).unwrap_err(), Error::NoAtom("1/2".into()));
        assert!(matches!(one.remove_atom(&r(1), &r(2)), Err(Error::WeightExceeded { .. })));
        assert!(uniform().remove_atom(&r(0), &r(1)).is_err());
    }

    #[test]
    fn add_atom_examples() {
        let m = uniform().add_atom(&r(1), &r(1)).unwrap();
        let ctx = PrecisionContext::exact();
        let upa = Measure::catalog(Catalog::UniformPlusAtom { c: r(1) });
        assert_eq!(m.moments(10, &ctx).unwrap().values(), upa.moments(10, &ctx).unwrap().values());
        assert!(m.support_info().atom_at_plus_1);

        let empty = Measure::discrete(vec![]).unwrap();
        let q = empty.add_atom(&r(0), &r(3)).unwrap().moments(3, &ctx).unwrap();
        assert_eq!(q.to_strings(5), vec!["3", "0", "0", "0"]);

        let two = Measure::discrete(vec![(r(2), r(1))]).unwrap();
        assert_eq!(two.add_atom(&r(2), &r(1)).unwrap(), Measure::discrete(vec![(r(2), r(2))]).unwrap());
        assert!(matches!(two.add_atom(&r(2), &r(0)), Err(Error::NonPositiveWeight(_))));
    }

    #[test]
    fn round_trip_restores_catalog() {
        let g = Measure::catalog(Catalog::Gaussian { mean: r(0), sd: r(1) });
        let p = Rational::from((3, 7));
        let back = g.add_atom(&p, &r(2)).unwrap().remove_atom(&p, &r(2)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn integrate_examples() {
        let ctx = PrecisionContext::exact();
        let x2 = Polynomial::monomial(2);
        let v: Surd = uniform().integrate(&x2, &ctx).unwrap();
        assert_eq!(v, Surd::from(Rational::from((1, 3))));

        let atom = Measure::discrete(vec![(r(1), r(2))]).unwrap();
        let f = Polynomial::new(vec![r(1), r(1)]);
        assert_eq!(atom.integrate_exact(&f).unwrap(), r(4));

        let fctx = PrecisionContext::big_float(160).unwrap();
        let upa = Measure::catalog(Catalog::UniformPlusAtom { c: r(1) });
        let sq = Polynomial::new(vec![Rational::from((1, 4)), Rational::from((1, 2)), Rational::from((1, 4))]);
        let got: Real = upa.integrate(&sq, &fctx).unwrap();
        let want = Float::with_val(160, 4) / 3u32;
        assert!(Float::with_val(160, got.as_float() - &want).abs() < 1e-40);
        assert_eq!(upa.integrate_exact(&sq).unwrap(), Rational::from((4, 3)));
    }

    #[test]
    fn undefined_at_atom() {
        let m = Measure::discrete(vec![(r(0), r(1))]).unwrap();
        let f = FloatFn(|x: &Float| (Float::with_val(x.prec(), 1) / x.clone()).sin());
        let err = m.integrate_float(&f, 128, &Float::with_val(64, 1e-20)).unwrap_err();
        assert!(matches!(err, Error::UndefinedAtAtom(_)));
    }

    #[test]
    fn exact_mode_rejects_transcendental_moments() {
        let ln = Measure::catalog(Catalog::Lognormal { sigma: Rational::from((1, 2)) });
        assert!(matches!(ln.moments(3, &PrecisionContext::exact()), Err(Error::ExactUnavailable(_))));
        let q = ln.moments(3, &PrecisionContext::big_float(128).unwrap()).unwrap();
        assert!(!q.is_exact());
        let capped = PrecisionContext::exact().with_moment_cap(4);
        assert!(matches!(uniform().moments(4, &capped), Err(Error::MomentCap { .. })));
    }

    #[test]
    fn support_examples() {
        assert!(uniform().support_info().condition_iii());
        let upa = Measure::catalog(Catalog::UniformPlusAtom { c: r(1) }).support_info();
        assert!(upa.atom_at_plus_1 && !upa.condition_iii() && upa.within_unit_interval);
        let g = Measure::catalog(Catalog::Gaussian { mean: r(0), sd: r(1) }).support_info();
        assert!(!g.bounded && !g.condition_iii());
        let d = Measure::discrete(vec![(Rational::from((1, 2)), r(1)), (r(-1), r(1))]).unwrap().support_info();
        assert!(d.bounded && d.discrete && d.atom_at_minus_1 && !d.condition_iii());
        let ln2 = Measure::catalog(Catalog::LognormalBase2).support_info();
        assert!(!ln2.bounded);
        let wide = uniform().add_atom(&r(3), &r(1)).unwrap().support_info();
        assert!(wide.bounded && !wide.within_unit_interval);
    }
}
