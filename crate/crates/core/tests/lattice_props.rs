mod common;

use chowquot::families::{self, FamilySpec};
use chowquot::lattice::{self, IntegerMatrix, LatticeError, TorusActionSpec};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5i64..=5, c), r))
}

fn free_spec() -> impl Strategy<Value = TorusActionSpec> {
    (1usize..=3, prop::collection::vec(1usize..=2, 1..=2)).prop_flat_map(|(m, factors)| {
        let coords: usize = factors.iter().map(|n| n + 1).sum();
        prop::collection::vec(prop::collection::vec(-4i64..=4, m), coords).prop_map(move |w| {
            let weights = w.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            TorusActionSpec::new(m, factors.clone(), weights, Vec::new()).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn smith_form_reconstructs_and_divides(rows in matrix()) {
        let a = IntegerMatrix::from_rows(&rows).unwrap();
        let s = lattice::smith_normal_form(&a).unwrap();
        prop_assert_eq!(s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        let diag = s.nonzero_diagonal();
        prop_assert!(diag.iter().all(|d| d.is_positive()));
        prop_assert!(diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        // Determinantal divisor check for square input: |det A| = Π d_i.
        if a.rows() == a.cols() {
            let det = a.determinant().unwrap().abs();
            let prod: BigInt = if diag.len() == a.rows() { diag.iter().product() } else { BigInt::zero() };
            prop_assert_eq!(det, prod);
        }
    }

    #[test]
    fn stabilizer_matches_enumeration(spec in free_spec()) {
        for s in common::support_patterns(&spec) {
            let g = lattice::stratum_stabilizer(&spec, &s).unwrap();
            prop_assert_eq!(g.count_k_torsion(12), BigInt::from(common::brute_force_fixing_count(&spec, &s, 12)));
        }
    }

    #[test]
    fn effective_reduction_has_trivial_stabilizer(spec in free_spec()) {
        let eff = lattice::make_effective(&spec).unwrap();
        let g = lattice::global_stabilizer(&eff).unwrap();
        prop_assert!(g.is_trivial());
    }

    #[test]
    fn stabilizer_invariant_under_unimodular_change(spec in free_spec(), ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..5)) {
        let m = spec.torus_rank();
        let mut basis = IntegerMatrix::identity(m).to_rows();
        for (i, j, k) in ops {
            let (i, j) = (i % m, j % m);
            if i != j {
                let src = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(src) {
                    *x += BigInt::from(k) * y;
                }
            }
        }
        let changed = spec.change_basis(&IntegerMatrix::from_big_rows(basis).unwrap()).unwrap();
        prop_assert_eq!(lattice::global_stabilizer(&spec).unwrap(), lattice::global_stabilizer(&changed).unwrap());
        for s in common::support_patterns(&spec) {
            prop_assert_eq!(
                lattice::stratum_stabilizer(&spec, &s).unwrap(),
                lattice::stratum_stabilizer(&changed, &s).unwrap()
            );
        }
    }
}

#[test]
fn hypersurface_strata_orders_match_enumeration() {
    for n in 2..=3 {
        for (alpha, beta) in [(1, 1), (1, 2), (2, 3), (3, 4), (4, 4)] {
            let f = FamilySpec::hypersurface(n, alpha, beta).unwrap();
            let spec = families::ambient_spec(&f).unwrap();
            for s in common::support_patterns(&spec) {
                let g = lattice::stratum_stabilizer(&spec, &s).unwrap();
                let count = common::brute_force_fixing_count(&spec, &s, 12);
                if g.is_finite() {
                    assert_eq!(g.order(), BigInt::from(count), "{f} {s:?}");
                }
            }
        }
    }
}

#[test]
fn entry_guard_reports_overflow() {
    let big: BigInt = BigInt::one() << 80u32;
    let rows = vec![vec![big.clone(), BigInt::one()], vec![BigInt::zero(), big]];
    assert!(matches!(IntegerMatrix::from_big_rows(rows), Err(LatticeError::Overflow { .. })));
    let a = IntegerMatrix::from_rows(&[vec![6, 4], vec![4, 2]]).unwrap();
    assert!(matches!(lattice::smith_normal_form_with_limit(&a, 2), Err(LatticeError::Overflow { .. })));
}
