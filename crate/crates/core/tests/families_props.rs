mod common;

use chowquot::families::{self, FamilySpec};
use chowquot::moment;
use chowquot::rational::{ratio, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #[test]
    fn selector_round_trips(n in 2u32..=12, alpha in 1u32..=9, beta in 1u32..=9) {
        for f in [
            FamilySpec::hypersurface(n, alpha, beta).unwrap(),
            FamilySpec::quadric(n).unwrap(),
            FamilySpec::blown_up_quadric(n).unwrap(),
        ] {
            prop_assert_eq!(f.selector().parse::<FamilySpec>().unwrap(), f);
        }
    }

    #[test]
    fn boundary_coefficients_have_orbifold_form(n in 2u32..=4, alpha in 1u32..=6, beta in 1u32..=6) {
        let f = FamilySpec::hypersurface(n, alpha, beta).unwrap();
        let pair = families::chow_boundary(&f).unwrap();
        prop_assert_eq!(pair.coefficients.len(), n as usize + 1);
        for (c, m) in pair.coefficients.iter().zip(&pair.orders) {
            prop_assert_eq!(c, &Rational::new(m - BigInt::one(), m.clone()));
        }
    }
}

#[test]
fn closed_form_boundary_matches_stabilizers() {
    for n in 2..=4 {
        for alpha in 1..=6 {
            for beta in 1..=6 {
                let f = FamilySpec::hypersurface(n, alpha, beta).unwrap();
                assert_eq!(families::chow_boundary(&f).unwrap(), families::boundary_from_stabilizers(&f).unwrap(), "{f}");
            }
        }
        for f in [FamilySpec::quadric(n).unwrap(), FamilySpec::blown_up_quadric(n).unwrap()] {
            assert_eq!(families::chow_boundary(&f).unwrap(), families::boundary_from_stabilizers(&f).unwrap(), "{f}");
        }
    }
}

#[test]
fn gamma_values_for_base_p2_pairs() {
    let g = |f: FamilySpec| families::chow_boundary(&f).unwrap().gamma().cloned().unwrap();
    assert_eq!(g(FamilySpec::hypersurface(3, 1, 2).unwrap()), ratio(1, 2));
    assert_eq!(g(FamilySpec::hypersurface(3, 1, 3).unwrap()), ratio(2, 3));
    assert_eq!(g(FamilySpec::hypersurface(3, 2, 4).unwrap()), ratio(1, 2));
    assert_eq!(g(FamilySpec::blown_up_quadric(3).unwrap()), ratio(1, 2));
    assert_eq!(g(FamilySpec::quadric(3).unwrap()), ratio(0, 1));
}

#[test]
fn quotient_map_is_constant_on_torus_orbits() {
    for f in [
        FamilySpec::hypersurface(2, 1, 1).unwrap(),
        FamilySpec::hypersurface(3, 2, 3).unwrap(),
        FamilySpec::quadric(3).unwrap(),
    ] {
        let spec = families::ambient_spec(&f).unwrap();
        let map = families::chow_quotient_map(&f).unwrap();
        let w = common::int_weights(&spec);
        for e in &map.monomials {
            let weight: Vec<i64> =
                (0..spec.torus_rank()).map(|c| e.iter().zip(&w).map(|(&k, wi)| i64::from(k) * wi[c]).sum()).collect();
            let expected: Vec<i64> = map.weight.iter().map(|x| x.try_into().unwrap()).collect();
            assert_eq!(weight, expected, "{f}");
        }
        let eval = |z: &[Complex64]| -> Vec<Complex64> {
            let v: Vec<Complex64> =
                map.monomials.iter().map(|e| z.iter().zip(e).fold(Complex64::one(), |a, (x, &k)| a * x.powu(k))).collect();
            let top = v[0];
            v.iter().map(|x| x / top).collect()
        };
        for i in 0..10 {
            let mut rng = moment::sample_rng(21, i);
            let p = moment::sample_point(&spec, &mut rng).unwrap();
            let s: Vec<f64> = (0..spec.torus_rank()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let th: Vec<f64> = (0..spec.torus_rank()).map(|_| rng.random_range(0.0..6.0)).collect();
            let q = moment::torus_act(&spec, &p, &s, &th).unwrap();
            for (a, b) in eval(&p.flat()).iter().zip(eval(&q.flat())) {
                assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "{f}");
            }
        }
    }
}

#[test]
fn realizability_rule_matches_witnesses_in_higher_rank() {
    let mut rng = moment::sample_rng(22, 0);
    for (alpha, beta) in [(1, 2), (2, 3)] {
        let f = FamilySpec::hypersurface(3, alpha, beta).unwrap();
        let spec = families::ambient_spec(&f).unwrap();
        for s in common::support_patterns(&spec) {
            assert_eq!(families::realizable_support(&f, &s).unwrap(), common::witness_exists(&f, &s, &mut rng), "{f} {s:?}");
        }
    }
}

#[test]
fn fano_and_smooth_flags() {
    assert!(FamilySpec::hypersurface(3, 1, 2).unwrap().is_fano());
    assert!(!FamilySpec::hypersurface(3, 4, 4).unwrap().is_fano());
    assert!(!FamilySpec::hypersurface(3, 2, 3).unwrap().is_smooth());
    assert!(FamilySpec::blown_up_quadric(3).unwrap().is_fano());
    assert!("hypersurface:n=1,alpha=1,beta=1".parse::<FamilySpec>().is_err());
    assert!("torus:n=3".parse::<FamilySpec>().is_err());
}
