use momentkit::measures::Measure;
use momentkit::numeric::{Cplx, PrecisionContext, Surd};
use momentkit::operator::{a_norm_squared, dstar_witness, FiniteSequence};
use momentkit::orthopoly::OrthoSystem;
use momentkit::probes::mass_removal_bound_check;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::Rational;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| Rational::from((p, q)))
}

fn complex() -> impl Strategy<Value = Cplx<Rational>> {
    (rational(), rational()).prop_map(|(re, im)| Cplx::new(re, im))
}

fn sequence(max_len: usize) -> impl Strategy<Value = FiniteSequence> {
    prop::collection::vec(complex(), 1..=max_len).prop_map(FiniteSequence::new)
}

/// Distinct positions with positive weights.
fn discrete(min_atoms: usize) -> impl Strategy<Value = Measure> {
    prop::collection::btree_map(-20i64..=20, 1i64..=9, min_atoms..=min_atoms + 3).prop_map(|atoms| {
        let atoms = atoms.into_iter().map(|(x, w)| (Rational::from((x, 4)), Rational::from((w, 3)))).collect();
        Measure::discrete(atoms).unwrap()
    })
}

fn exact() -> PrecisionContext {
    PrecisionContext::exact()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_removal_bound(g in sequence(8), num in -99i64..=99) {
        let lambda = Rational::from((num, 100));
        let check = mass_removal_bound_check(&g, &lambda, 128).unwrap();
        prop_assert!(check.holds);
        prop_assert!(check.lhs_squared <= check.rhs_squared);
    }

    #[test]
    fn mass_removal_rejects_unit_lambda(g in sequence(4), sign in prop::bool::ANY) {
        let lambda = Rational::from(if sign { 1 } else { -1 });
        prop_assert!(mass_removal_bound_check(&g, &lambda, 128).is_err());
    }

    #[test]
    fn discrete_moments_are_power_sums(m in discrete(1), count in 0usize..12) {
        let q = m.moments(count, &exact()).unwrap();
        for n in 0..=count {
            let mut expect = Rational::new();
            for a in m.atoms() {
                expect += a.position.clone().pow(n as u32) * &a.weight;
            }
            prop_assert_eq!(q.exact(n).unwrap(), &expect);
        }
    }

    #[test]
    fn longer_moment_requests_extend_shorter_ones(count in 0usize..20, extra in 1usize..10) {
        for spec in ["uniform(-1,1)", "gaussian", "chebyshev", "uniform_plus_atom(1)"] {
            let m = Measure::parse(spec).unwrap();
            let short = m.moments(count, &exact()).unwrap();
            let long = m.moments(count + extra, &exact()).unwrap();
            for n in 0..=count {
                prop_assert_eq!(short.exact(n), long.exact(n));
            }
        }
    }

    #[test]
    fn atom_round_trip(pos in rational(), w in 1i64..=20) {
        let weight = Rational::from((w, 7));
        for spec in ["uniform(-1,1)", "gaussian"] {
            let m = Measure::parse(spec).unwrap();
            let back = m.add_atom(&pos, &weight).unwrap().remove_atom(&pos, &weight).unwrap();
            prop_assert_eq!(&back, &m);
            let (qb, qm) = (back.moments(6, &exact()).unwrap(), m.moments(6, &exact()).unwrap());
            prop_assert_eq!(qb.exact(6), qm.exact(6));
        }
    }

    #[test]
    fn over_removal_is_rejected(pos in rational(), w in 1i64..=20) {
        let weight = Rational::from((w, 7));
        let m = Measure::parse("uniform(-1,1)").unwrap().add_atom(&pos, &weight).unwrap();
        prop_assert!(m.remove_atom(&pos, &Rational::from(&weight * 2u32)).is_err());
    }

    #[test]
    fn transition_matrices_are_inverse(m in discrete(5)) {
        let sys = OrthoSystem::<Surd>::from_measure(&m, 4, &exact()).unwrap();
        prop_assert!(sys.b.mul(&sys.c).unwrap().is_identity());
        prop_assert!(sys.c.mul(&sys.b).unwrap().is_identity());
    }

    #[test]
    fn three_norm_routes_agree(g in sequence(4)) {
        let m = Measure::parse("uniform(-1,1)").unwrap();
        let r = a_norm_squared::<Surd>(&m, &g, &exact()).unwrap();
        prop_assert_eq!(&r.form, &r.integral);
        prop_assert_eq!(r.coefficient.as_ref(), Some(&r.form));
    }

    #[test]
    fn witness_round_trip_is_exact(eta in sequence(6)) {
        let m = Measure::parse("chebyshev").unwrap();
        let sys = OrthoSystem::<Surd>::from_measure(&m, 6, &exact()).unwrap();
        let w = dstar_witness(&eta, &sys.b, &sys.c, &exact()).unwrap();
        prop_assert!(w.is_exact(&eta, &exact()));
    }
}

#[test]
fn singular_hankel_skips_coefficient_route() {
    let m = Measure::discrete(vec![(Rational::from(0), Rational::from(1)), (Rational::from(1), Rational::from(1))])
        .unwrap();
    let g = FiniteSequence::from_reals(vec![Rational::from(1), Rational::from(-3), Rational::from(2)]);
    let r = a_norm_squared::<Surd>(&m, &g, &exact()).unwrap();
    assert!(r.coefficient.is_none());
    assert!(r.note.is_some());
    assert_eq!(r.form, r.integral);
}
