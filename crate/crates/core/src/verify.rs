//! Property suites behind `chowquot verify`. Each suite checks a computation
//! against an independent brute-force or numeric oracle and counts outcomes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use crate::certify;
use crate::families::{self, FamilySpec};
use crate::lattice::{self, IntegerMatrix, Support, TorusActionSpec};
use crate::linalg::{self, Row};
use crate::log_canonical::{self, OnePs, TernaryForm};
use crate::moment::{self, KNStatus};
use crate::polyhedral::{self, RationalVector};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 10 {
                self.failures.push(describe());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub total_passed: usize,
    pub total_failed: usize,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.total_failed == 0
    }
}

pub fn run_all(seed: u64) -> VerifyReport {
    let suites = vec![
        smith_form_suite(seed),
        stabilizer_suite(),
        effective_suite(seed),
        membership_suite(seed),
        moment_suite(seed),
        kempf_ness_suite(seed),
        boundary_suite(),
        realizability_suite(seed),
        glct_suite(),
        degeneration_suite(seed),
        certificate_suite(),
    ];
    let total_passed = suites.iter().map(|s| s.passed).sum();
    let total_failed = suites.iter().map(|s| s.failed).sum();
    VerifyReport { seed, suites, total_passed, total_failed }
}

fn small_matrix(rng: &mut impl Rng) -> IntegerMatrix {
    let r = rng.random_range(1..=4);
    let c = rng.random_range(1..=4);
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.random_range(-5..=5)).collect()).collect();
    IntegerMatrix::from_rows(&rows).expect("nonempty")
}

/// `A = U D V`, unimodular `U`, `V`, diagonal `D` with a divisibility chain.
pub fn smith_form_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lattice: Smith normal form");
    let mut rng = moment::sample_rng(seed, 1);
    for _ in 0..300 {
        let a = small_matrix(&mut rng);
        let ok = lattice::smith_normal_form(&a).is_ok_and(|s| {
            let diag = s.nonzero_diagonal();
            s.u.mul(&s.d).and_then(|x| x.mul(&s.v)).is_ok_and(|p| p == a)
                && s.d.is_diagonal()
                && s.u.determinant().is_ok_and(|d| d.abs().is_one())
                && s.v.determinant().is_ok_and(|d| d.abs().is_one())
                && diag.iter().all(|d| d.is_positive())
                && diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
        });
        report.check(ok, || format!("{a}"));
    }
    report
}

/// Number of `t` in `(μ_k)^m` fixing a point with the given support, by enumeration.
fn count_fixing_roots(spec: &TorusActionSpec, support: &Support, k: i64) -> u64 {
    let rows: Vec<Vec<i64>> = spec
        .weight_difference_rows(support)
        .expect("valid support")
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small weight")).collect())
        .collect();
    let m = spec.torus_rank();
    let mut count = 0;
    let mut e = vec![0i64; m];
    loop {
        if rows.iter().all(|r| r.iter().zip(&e).map(|(a, b)| a * b).sum::<i64>().rem_euclid(k) == 0) {
            count += 1;
        }
        let mut i = 0;
        while i < m {
            e[i] += 1;
            if e[i] < k {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == m {
            return count;
        }
    }
}

fn all_patterns(spec: &TorusActionSpec) -> Vec<Support> {
    let k = spec.num_coords();
    (1u32..(1 << k))
        .map(|mask| (0..k).filter(|i| mask & (1 << i) != 0).collect::<Support>())
        .filter(|s| spec.check_support(s).is_ok())
        .collect()
}

/// Stratum stabilizers of `X_{α,β}` for `n <= 3`, `α, β <= 4` against root-of-unity enumeration.
pub fn stabilizer_suite() -> SuiteReport {
    let mut report = SuiteReport::new("lattice: stratum stabilizers vs roots of unity");
    for n in 2..=3 {
        for alpha in 1..=4 {
            for beta in 1..=4 {
                let f = FamilySpec::hypersurface(n, alpha, beta).expect("valid");
                let spec = families::ambient_spec(&f).expect("spec");
                for support in all_patterns(&spec) {
                    let g = lattice::stratum_stabilizer(&spec, &support).expect("stabilizer");
                    let expected = BigInt::from(count_fixing_roots(&spec, &support, 12));
                    report.check(g.count_k_torsion(12) == expected, || format!("{f} {support:?}"));
                }
            }
        }
    }
    report
}

fn random_spec(rng: &mut impl Rng) -> TorusActionSpec {
    let m = rng.random_range(1..=3);
    let factors: Vec<usize> = (0..rng.random_range(1..=2)).map(|_| rng.random_range(1..=2)).collect();
    let coords: usize = factors.iter().map(|n| n + 1).sum();
    let weights = (0..coords).map(|_| (0..m).map(|_| BigInt::from(rng.random_range(-4..=4))).collect()).collect();
    TorusActionSpec::new(m, factors, weights, Vec::new()).expect("valid")
}

/// `make_effective` kills the global stabilizer; orders survive unimodular basis changes.
pub fn effective_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lattice: effective reduction and basis changes");
    let mut rng = moment::sample_rng(seed, 2);
    for _ in 0..200 {
        let spec = random_spec(&mut rng);
        let eff = lattice::make_effective(&spec).expect("reduction");
        let g = lattice::global_stabilizer(&eff).expect("stabilizer");
        report.check(g.is_trivial() || (g.invariant_factors.is_empty() && eff.torus_rank() == 0), || format!("{spec:?}"));

        let m = spec.torus_rank();
        let mut basis = IntegerMatrix::identity(m).to_rows();
        for _ in 0..3 {
            let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
            if i != j {
                let k = BigInt::from(rng.random_range(-2..=2));
                let src = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(src) {
                    *x += &k * y;
                }
            }
        }
        let changed = spec.change_basis(&IntegerMatrix::from_big_rows(basis).expect("square")).expect("valid");
        let before = lattice::global_stabilizer(&spec).expect("stabilizer");
        let after = lattice::global_stabilizer(&changed).expect("stabilizer");
        report.check(before == after, || format!("{spec:?}"));
    }
    report
}

/// Membership through barycentric coordinates on affinely independent vertex subsets.
pub fn in_hull_by_vertices(vertices: &[RationalVector], u: &RationalVector) -> bool {
    let m = u.dim();
    let n = vertices.len();
    for size in 1..=(m + 1).min(n) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut rows: Vec<Row> = (0..m).map(|i| subset.iter().map(|&j| vertices[j].0[i].clone()).collect()).collect();
            rows.push(vec![Rational::one(); size]);
            let mut rhs = u.0.clone();
            rhs.push(Rational::one());
            if let Some(lambda) = linalg::solve_unique(&rows, &rhs) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
            if !polyhedral::next_subset(&mut subset, n) {
                break;
            }
        }
    }
    false
}

fn random_rational(rng: &mut impl Rng, range: i64, den: i64) -> Rational {
    rational::ratio(rng.random_range(-range * den..=range * den), den)
}

pub fn membership_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("polyhedral: H- vs V-membership and idempotence");
    let mut rng = moment::sample_rng(seed, 3);
    for _ in 0..40 {
        let m = rng.random_range(1..=3);
        let pts: Vec<RationalVector> = (0..rng.random_range(1..=7))
            .map(|_| RationalVector((0..m).map(|_| rational::int(rng.random_range(-3..=3))).collect()))
            .collect();
        let p = polyhedral::convex_hull(&pts).expect("hull");
        let again = polyhedral::convex_hull(&p.vertices).expect("hull");
        report.check(again.vertices == p.vertices, || format!("idempotence {pts:?}"));
        for _ in 0..25 {
            let u = RationalVector((0..m).map(|_| random_rational(&mut rng, 4, 3)).collect());
            let h = p.contains(&u).expect("dimension");
            report.check(h == in_hull_by_vertices(&p.vertices, &u), || format!("{u} in hull of {pts:?}"));
        }
    }
    report
}

pub fn sample_families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::hypersurface(2, 1, 1).unwrap(),
        FamilySpec::hypersurface(2, 1, 2).unwrap(),
        FamilySpec::hypersurface(3, 1, 2).unwrap(),
        FamilySpec::hypersurface(3, 1, 3).unwrap(),
        FamilySpec::quadric(2).unwrap(),
        FamilySpec::quadric(3).unwrap(),
    ]
}

/// `μ(p) ∈ P` and invariance under the compact torus.
pub fn moment_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("moment: image in polytope, compact-torus invariance");
    for (fi, f) in sample_families().iter().enumerate() {
        let spec = families::ambient_spec(f).expect("spec");
        let poly = moment::moment_polytope(&spec).expect("polytope");
        for i in 0..100 {
            let mut rng = moment::sample_rng(seed, 1000 * fi as u64 + i);
            let p = moment::sample_point(&spec, &mut rng).expect("sample");
            let mu = moment::moment_map(&spec, &p);
            report.check(poly.contains_f64(&mu, 1e-10).unwrap_or(false), || format!("{f}: μ = {mu:?}"));
            let theta: Vec<f64> = (0..spec.torus_rank()).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let q = moment::torus_act(&spec, &p, &vec![0.0; spec.torus_rank()], &theta).expect("point");
            let mu2 = moment::moment_map(&spec, &q);
            report.check(mu.iter().zip(&mu2).all(|(a, b)| (a - b).abs() <= 1e-10), || format!("{f}: {mu:?} vs {mu2:?}"));
        }
    }
    report
}

/// Distance from `u` to the relative boundary of the hull, or to its affine hull if off it.
pub fn boundary_distance(p: &polyhedral::Polytope, u: &[f64]) -> f64 {
    let dist = |h: &polyhedral::Hyperplane| {
        let n: Vec<f64> = h.normal.iter().map(|x| x.to_f64().unwrap()).collect();
        let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() - rational::rational_to_f64(&h.offset)).abs() / norm
    };
    p.equations.iter().chain(&p.facets).map(dist).fold(f64::INFINITY, f64::min)
}

/// Random realizable support of a family, full support with probability 1/3.
pub fn random_realizable_support(f: &FamilySpec, patterns: &[Support], rng: &mut impl Rng) -> Support {
    if rng.random_range(0..3) == 0 {
        return families::ambient_spec(f).expect("spec").full_support();
    }
    patterns.choose(rng).expect("nonempty").clone()
}

/// Kempf–Ness status against exact semistability, away from hull boundaries.
pub fn kempf_ness_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("moment: Kempf-Ness vs exact semistability");
    for (fi, f) in sample_families().iter().enumerate() {
        let spec = families::ambient_spec(f).expect("spec");
        let patterns = families::realizable_patterns(f).expect("patterns");
        for i in 0..60 {
            let mut rng = moment::sample_rng(seed ^ 0x5eed, 1000 * fi as u64 + i);
            let support = random_realizable_support(f, &patterns, &mut rng);
            let p = moment::sample_on_support(&spec, &support, &mut rng).expect("sample");
            let u = RationalVector((0..spec.torus_rank()).map(|_| random_rational(&mut rng, 2, 7)).collect());
            let hull = polyhedral::convex_hull(&moment::monomial_weights(&spec, &p.support())).expect("hull");
            if boundary_distance(&hull, &u.to_f64()) < 1e-6 {
                report.skipped += 1;
                continue;
            }
            let exact = moment::semistable_exact(&spec, &p.support(), &u).expect("realizable");
            let r = moment::kn_minimize(&spec, &p, &u, 1e-9, 200).expect("solve");
            let agree = match r.status {
                KNStatus::Converged => exact,
                KNStatus::Diverged => !exact,
                KNStatus::IterationLimit => false,
            };
            report.check(agree, || format!("{f} support {support:?} u {u}: {:?} vs {exact}", r.status));
        }
    }
    report
}

pub fn boundary_suite() -> SuiteReport {
    let mut report = SuiteReport::new("families: closed-form vs stabilizer boundary");
    let mut fams = Vec::new();
    for n in 2..=4 {
        for alpha in 1..=6 {
            for beta in 1..=6 {
                fams.push(FamilySpec::hypersurface(n, alpha, beta).unwrap());
            }
        }
        fams.push(FamilySpec::blown_up_quadric(n).unwrap());
        fams.push(FamilySpec::quadric(n).unwrap());
    }
    for f in fams {
        let a = families::chow_boundary(&f).expect("pair");
        let b = families::boundary_from_stabilizers(&f).expect("pair");
        let form_ok = a.coefficients.iter().zip(&a.orders).all(|(c, m)| {
            c >= &Rational::zero() && c < &Rational::one() && c == &Rational::new(m - BigInt::one(), m.clone())
        });
        report.check(a == b && form_ok, || format!("{f}: {a:?} vs {b:?}"));
    }
    report
}

/// Tries to build a point with exactly `support` nonzero on `Σ x_i^α y_i^β = 0`
/// by solving for each supported variable in turn from random values.
pub fn find_witness(f: &FamilySpec, support: &Support, rng: &mut impl Rng) -> bool {
    let spec = families::ambient_spec(f).expect("spec");
    for _ in 0..20 {
        let mut z: Vec<Complex64> = (0..spec.num_coords())
            .map(|k| if support.contains(&k) { Complex64::new(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0)) } else { Complex64::zero() })
            .collect();
        for &k in support {
            let Some(term) = spec.equation().iter().find(|t| t.exponents[k] > 0) else { continue };
            let rest: Complex64 = spec
                .equation()
                .iter()
                .filter(|t| t.exponents[k] == 0)
                .map(|t| moment::eval_monomial(&z, &t.exponents))
                .sum();
            let mut others = term.exponents.clone();
            others[k] = 0;
            let lead = moment::eval_monomial(&z, &others);
            if lead.norm() < 1e-12 {
                continue;
            }
            let candidate = (-rest / lead).powf(1.0 / f64::from(term.exponents[k]));
            let saved = z[k];
            z[k] = candidate;
            let residual: Complex64 = spec.equation().iter().map(|t| moment::eval_monomial(&z, &t.exponents)).sum();
            let nonzero = support.iter().all(|&j| z[j].norm() > 1e-6);
            if residual.norm() < 1e-10 && nonzero {
                return true;
            }
            z[k] = saved;
        }
        let residual: Complex64 = spec.equation().iter().map(|t| moment::eval_monomial(&z, &t.exponents)).sum();
        if residual.norm() < 1e-10 && support.iter().all(|&j| z[j].norm() > 1e-6) {
            return true;
        }
    }
    false
}

pub fn realizability_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("families: realizable supports vs witness search");
    let mut rng = moment::sample_rng(seed, 8);
    for alpha in 1..=3 {
        for beta in 1..=3 {
            let f = FamilySpec::hypersurface(2, alpha, beta).unwrap();
            let spec = families::ambient_spec(&f).expect("spec");
            for s in all_patterns(&spec) {
                let rule = families::realizable_support(&f, &s).expect("valid");
                report.check(rule == find_witness(&f, &s, &mut rng), || format!("{f} {s:?}"));
            }
        }
    }
    report
}

pub fn glct_suite() -> SuiteReport {
    let mut report = SuiteReport::new("log canonical: glct bound vs constraint search");
    for k in 0..=74 {
        let g = rational::ratio(k, 100);
        let a = log_canonical::glct_bound(&g).expect("in range");
        let b = log_canonical::glct_bound_via_search(&g).expect("in range");
        report.check(a == b, || format!("γ = {k}/100: {a} vs {b}"));
    }
    report
}

/// Normalized coefficient vector of `F(t^{-w} x)` extrapolated to `t = 0`
/// from `t = 1e-4, 1e-4/2, 1e-4/4, 1e-4/8`, keyed like `F`'s terms.
pub fn numeric_limit(f: &TernaryForm, w: &OnePs, reference: [u32; 3]) -> Vec<([u32; 3], f64)> {
    let t0 = 1e-4;
    let levels: Vec<f64> = (0..4).map(|k| t0 / f64::from(1 << k)).collect();
    let vectors: Vec<Vec<f64>> = levels
        .iter()
        .map(|&t| {
            let raw: Vec<f64> = f
                .terms()
                .iter()
                .map(|(e, c)| rational::rational_to_f64(c) * t.powi(-(w.pairing(e) as i32)))
                .collect();
            let r = raw[f.terms().keys().position(|e| *e == reference).expect("reference term")];
            raw.iter().map(|x| x / r).collect()
        })
        .collect();
    let keys: Vec<[u32; 3]> = f.terms().keys().copied().collect();
    (0..keys.len())
        .map(|j| {
            // Neville extrapolation to t = 0.
            let mut p: Vec<f64> = vectors.iter().map(|v| v[j]).collect();
            for level in 1..p.len() {
                for i in (level..p.len()).rev() {
                    let (ti, tj) = (levels[i], levels[i - level]);
                    p[i] = (ti * p[i - 1] - tj * p[i]) / (ti - tj);
                }
            }
            (keys[j], p[p.len() - 1])
        })
        .collect()
}

fn random_form(rng: &mut impl Rng, degree: u32) -> TernaryForm {
    loop {
        let mut terms = Vec::new();
        for a in 0..=degree {
            for b in 0..=degree - a {
                if rng.random_range(0..3) > 0 {
                    let c = rational::ratio(rng.random_range(-9..=9), rng.random_range(1..=5));
                    terms.push(([a, b, degree - a - b], c));
                }
            }
        }
        if let Ok(f) = TernaryForm::new(terms) {
            return f;
        }
    }
}

fn random_one_ps(rng: &mut impl Rng) -> OnePs {
    loop {
        let w = [rng.random_range(-3..=3), rng.random_range(-3..=3), rng.random_range(-3..=3)];
        if let Ok(p) = OnePs::new(w) {
            return p;
        }
    }
}

/// Checks one form: symbolic initial form against the extrapolated numeric limit.
pub fn initial_form_matches_limit(f: &TernaryForm, w: &OnePs, tol: f64) -> bool {
    let init = f.initial_form(w);
    let (reference, rc) = init
        .terms()
        .iter()
        .max_by(|a, b| a.1.abs().cmp(&b.1.abs()))
        .map(|(e, c)| (*e, c.clone()))
        .expect("nonzero");
    numeric_limit(f, w, reference).into_iter().all(|(e, v)| {
        let expected = init.terms().get(&e).map_or(0.0, |c| rational::rational_to_f64(&(c / &rc)));
        (v - expected).abs() <= tol
    })
}

pub fn degeneration_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("log canonical: initial forms vs numeric limits");
    let mut rng = moment::sample_rng(seed, 9);
    for _ in 0..60 {
        let degree = rng.random_range(1..=3);
        let f = random_form(&mut rng, degree);
        let w = random_one_ps(&mut rng);
        report.check(initial_form_matches_limit(&f, &w, 1e-6), || format!("{f} under {:?}", w.weights()));
    }
    report
}

pub fn certificate_suite() -> SuiteReport {
    let mut report = SuiteReport::new("certificates: certified families with base P^2");
    let mut fams: Vec<FamilySpec> = (1..=6)
        .flat_map(|a| (1..=6).map(move |b| FamilySpec::hypersurface(3, a, b).unwrap()))
        .filter(FamilySpec::is_fano)
        .collect();
    fams.push(FamilySpec::quadric(3).unwrap());
    fams.push(FamilySpec::blown_up_quadric(3).unwrap());
    let mut certified = BTreeSet::new();
    for f in &fams {
        let c = certify::certify(f).expect("certificate");
        report.check(c.glct_upstairs.as_ref().is_none_or(|g| g <= &Rational::one()), || format!("{f}: upstairs above 1"));
        if c.is_certified() {
            let key = match *f {
                FamilySpec::BidegreeHypersurface { alpha, beta, .. } => format!("X_{{{},{}}}", alpha.min(beta), alpha.max(beta)),
                other => other.symbol(),
            };
            certified.insert(key);
        }
    }
    let expected: BTreeSet<String> = ["X_{1,2}", "X_{1,3}", "W^6"].iter().map(|s| s.to_string()).collect();
    report.check(certified == expected, || format!("certified {certified:?}"));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::Location;

    #[test]
    fn root_enumeration_counts_finite_group() {
        let b = |v: i64| vec![BigInt::from(v)];
        let spec = TorusActionSpec::new(1, vec![1], vec![b(0), b(4)], Vec::new()).unwrap();
        assert_eq!(count_fixing_roots(&spec, &spec.full_support(), 12), 4);
    }

    #[test]
    fn barycentric_membership() {
        let tri = vec![RationalVector::from_ints(&[0, 0]), RationalVector::from_ints(&[2, 0]), RationalVector::from_ints(&[0, 2])];
        assert!(in_hull_by_vertices(&tri, &RationalVector::from_ints(&[1, 1])));
        assert!(!in_hull_by_vertices(&tri, &RationalVector::from_ints(&[2, 1])));
    }

    #[test]
    fn numeric_limit_of_general_line() {
        let f: TernaryForm = "x1 + 2*x2 + x3".parse().unwrap();
        let w = OnePs::new([1, 1, 0]).unwrap();
        assert!(initial_form_matches_limit(&f, &w, 1e-9));
        let lim = numeric_limit(&f, &w, [1, 0, 0]);
        assert!(lim.iter().any(|(e, v)| *e == [0, 0, 1] && v.abs() < 1e-9));
        assert!(lim.iter().any(|(e, v)| *e == [0, 1, 0] && (v - 2.0).abs() < 1e-9));
    }

    #[test]
    fn boundary_distance_of_square() {
        let sq = polyhedral::convex_hull(&[
            RationalVector::from_ints(&[0, 0]),
            RationalVector::from_ints(&[1, 0]),
            RationalVector::from_ints(&[0, 1]),
            RationalVector::from_ints(&[1, 1]),
        ])
        .unwrap();
        assert!((boundary_distance(&sq, &[0.5, 0.25]) - 0.25).abs() < 1e-15);
        assert_eq!(sq.locate(&RationalVector::from_ints(&[0, 0])).unwrap(), Location::Boundary);
    }
}
