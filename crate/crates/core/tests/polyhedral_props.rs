mod common;

use std::collections::{BTreeMap, BTreeSet};

use chowquot::families::{self, FamilySpec};
use chowquot::polyhedral::{self, Location, RationalVector};
use chowquot::rational::{int, ratio, Rational};
use num_traits::Signed;
use proptest::prelude::*;

fn cloud() -> impl Strategy<Value = Vec<RationalVector>> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, d).prop_map(|v| RationalVector::from_ints(&v)), 1..=7)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_is_idempotent_and_contains_inputs(pts in cloud()) {
        let p = polyhedral::convex_hull(&pts).unwrap();
        let q = polyhedral::convex_hull(&p.vertices).unwrap();
        prop_assert_eq!(&p.vertices, &q.vertices);
        prop_assert_eq!(&p.facets, &q.facets);
        for x in &pts {
            prop_assert!(p.contains(x).unwrap());
        }
        for v in &p.vertices {
            prop_assert!(pts.contains(v));
        }
    }
}

#[test]
fn membership_matches_caratheodory_on_1000_points() {
    let mut rng = chowquot::moment::sample_rng(7, 0);
    use rand::Rng;
    let mut checked = 0;
    while checked < 1000 {
        let d = rng.random_range(1..=3);
        let pts: Vec<RationalVector> =
            (0..rng.random_range(1..=6)).map(|_| RationalVector((0..d).map(|_| int(rng.random_range(-3..=3))).collect())).collect();
        let p = polyhedral::convex_hull(&pts).unwrap();
        for _ in 0..20 {
            let u = RationalVector((0..d).map(|_| ratio(rng.random_range(-12..=12), 3)).collect());
            assert_eq!(p.contains(&u).unwrap(), common::in_convex_hull(&pts, &u), "{u} vs {pts:?}");
            checked += 1;
        }
    }
}

#[test]
fn hexagon_has_six_vertices_and_facets() {
    let pts: Vec<RationalVector> = [[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1], [0, 0]]
        .iter()
        .map(|v| RationalVector::from_ints(v))
        .collect();
    let p = polyhedral::convex_hull(&pts).unwrap();
    assert_eq!(p.vertices.len(), 6);
    assert_eq!(p.facets.len(), 6);
    assert!(p.is_full_dimensional());
    assert_eq!(p.locate(&RationalVector::from_ints(&[0, 0])).unwrap(), Location::Interior);
    assert_eq!(p.locate(&RationalVector::from_ints(&[1, 0])).unwrap(), Location::Boundary);
    assert_eq!(p.locate(&RationalVector::from_ints(&[1, 1])).unwrap(), Location::Outside);
}

/// Sign of `det(w, u)` for a weight `w` in the plane.
fn side(w: &RationalVector, u: &RationalVector) -> i8 {
    let det = &w.0[0] * &u.0[1] - &w.0[1] * &u.0[0];
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Full-dimensional chambers against a grid classification of generic interior
/// points by support-hull membership and side of each line through a weight.
fn grid_classes_match_chambers(f: FamilySpec) -> usize {
    let (weights, supports) = families::chamber_input(&f).unwrap();
    let complex = polyhedral::git_chambers(&weights, &supports).unwrap();
    let chambers: Vec<_> = complex.full_dimensional().collect();
    let hulls: Vec<Vec<RationalVector>> =
        supports.iter().map(|s| s.iter().map(|&i| weights[i].clone()).collect()).collect();
    let mut classes: BTreeMap<(Vec<bool>, Vec<i8>), BTreeSet<usize>> = BTreeMap::new();
    for i in -30..=30 {
        for j in -30..=30 {
            let u = RationalVector(vec![ratio(i, 10) + ratio(1, 1009), ratio(j, 10) + ratio(1, 997)]);
            if complex.moment_polytope.locate(&u).unwrap() != Location::Interior {
                continue;
            }
            let signs: Vec<i8> = weights.iter().map(|w| side(w, &u)).collect();
            let profile: Vec<bool> = hulls.iter().map(|h| common::in_convex_hull(h, &u)).collect();
            let c = complex.chamber_of(&u).expect("generic interior point lies in a chamber");
            assert!(c.full_dimensional, "generic point {u} landed on a wall");
            let idx = chambers.iter().position(|d| std::ptr::eq(*d, c)).unwrap();
            classes.entry((profile, signs)).or_default().insert(idx);
        }
    }
    for (class, idx) in &classes {
        assert_eq!(idx.len(), 1, "{f}: class {class:?} spans chambers {idx:?}");
    }
    let hit: BTreeSet<usize> = classes.values().flatten().copied().collect();
    assert_eq!(hit.len(), classes.len(), "{f}: two classes share a chamber");
    assert_eq!(classes.len(), chambers.len(), "{f}");
    chambers.len()
}

#[test]
fn chambers_of_x3_match_grid_classification() {
    assert_eq!(grid_classes_match_chambers(FamilySpec::hypersurface(2, 1, 1).unwrap()), 6);
    grid_classes_match_chambers(FamilySpec::hypersurface(2, 1, 2).unwrap());
}

#[test]
fn rank_one_chambers_split_at_origin() {
    let w = vec![RationalVector::from_ints(&[-1]), RationalVector::from_ints(&[1])];
    let supports = vec![BTreeSet::from([0]), BTreeSet::from([1]), BTreeSet::from([0, 1])];
    let c = polyhedral::git_chambers(&w, &supports).unwrap();
    let full: Vec<String> = c.full_dimensional().map(|ch| format!("{:?}", ch.polytope.vertices)).collect();
    assert_eq!(full.len(), 2, "{full:?}");
}

#[test]
fn chamber_samples_have_constant_profile() {
    let f = FamilySpec::hypersurface(2, 1, 2).unwrap();
    let (weights, supports) = families::chamber_input(&f).unwrap();
    let hulls = polyhedral::support_hulls(&weights, &supports).unwrap();
    let complex = polyhedral::git_chambers(&weights, &supports).unwrap();
    for c in complex.full_dimensional() {
        let expected = polyhedral::support_profile(&hulls, &c.sample);
        for v in &c.polytope.vertices {
            // Blend the sample towards each vertex; the profile must not change inside.
            let q = RationalVector(c.sample.0.iter().zip(&v.0).map(|(a, b)| (a * Rational::from_integer(3.into()) + b) / Rational::from_integer(4.into())).collect());
            assert_eq!(polyhedral::support_profile(&hulls, &q), expected);
        }
    }
}
