mod common;

use chowquot::certify::{self, Verdict};
use chowquot::families::FamilySpec;
use chowquot::rational::{int, ratio, Threshold};
use num_traits::ToPrimitive;

fn families_to_check() -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for (a, b) in [(1, 1), (1, 2), (1, 3), (2, 3), (3, 4)] {
            out.push(FamilySpec::hypersurface(n, a, b).unwrap());
        }
        out.push(FamilySpec::quadric(n).unwrap());
        out.push(FamilySpec::blown_up_quadric(n).unwrap());
    }
    out
}

#[test]
fn symmetry_check_matches_reynolds_operator() {
    for f in families_to_check() {
        let gens: Vec<Vec<Vec<i64>>> = certify::symmetry_generators(&f)
            .unwrap()
            .iter()
            .map(|g| g.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect())
            .collect();
        let group = common::group_closure(&gens);
        assert_eq!(certify::symmetry_check(&f).unwrap(), common::reynolds_is_zero(&group), "{f}");
        assert!(certify::symmetry_check(&f).unwrap(), "{f}");
    }
}

#[test]
fn certificate_chain_is_consistent() {
    for f in families_to_check().into_iter().chain(common::base_p2_families()) {
        let c = certify::certify(&f).unwrap();
        assert_eq!(c.tian_threshold, certify::tian_threshold(f.dim()));
        if let (Some(bound), Some(up)) = (&c.pair_glct_bound, &c.glct_upstairs) {
            let expected = match bound {
                Threshold::Finite(b) if *b < int(1) => b.clone(),
                _ => int(1),
            };
            assert_eq!(up, &expected, "{f}");
        }
        if c.verdict == Verdict::Certified {
            assert!(c.fano && c.smooth && c.symmetry_ok, "{f}");
            assert!(c.glct_upstairs.as_ref().unwrap() > &c.tian_threshold, "{f}");
        }
        if !f.is_fano() {
            assert_eq!(c.verdict, Verdict::Inconclusive, "{f}");
        }
    }
}

#[test]
fn certificates_are_deterministic() {
    for f in common::base_p2_families() {
        let a = serde_json::to_string(&certify::certify(&f).unwrap()).unwrap();
        let b = serde_json::to_string(&certify::certify(&f).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn quadric_is_not_certified_by_the_bound() {
    let c = certify::certify(&FamilySpec::quadric(3).unwrap()).unwrap();
    assert_eq!(c.gamma, int(0));
    assert_eq!(c.glct_upstairs, Some(ratio(1, 3)));
    assert_eq!(c.verdict, Verdict::Inconclusive);
}

#[test]
fn higher_base_has_no_bound() {
    let c = certify::certify(&FamilySpec::hypersurface(4, 1, 2).unwrap()).unwrap();
    assert_eq!(c.pair_glct_bound, None);
    assert_eq!(c.verdict, Verdict::Inconclusive);
}
