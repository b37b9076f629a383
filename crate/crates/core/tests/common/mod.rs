//! Independent oracles shared by the integration tests. None of these call the
//! routine they check.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use chowquot::families::{self, FamilySpec};
use chowquot::lattice::{Support, TorusActionSpec};
use chowquot::log_canonical::{OnePs, TernaryForm};
use chowquot::polyhedral::RationalVector;
use chowquot::rational::Rational;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Weights of a spec as small integers.
pub fn int_weights(spec: &TorusActionSpec) -> Vec<Vec<i64>> {
    spec.weights().iter().map(|w| w.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

/// Counts `e ∈ (Z/k)^m` such that `t = exp(2πi e/k)` fixes a point with the
/// given support: every pair of supported coordinates in one factor must see
/// the same character value.
pub fn brute_force_fixing_count(spec: &TorusActionSpec, support: &Support, k: i64) -> u64 {
    let w = int_weights(spec);
    let m = spec.torus_rank();
    let mut pairs = Vec::new();
    for f in 0..spec.factors().len() {
        let coords: Vec<usize> = spec.factor_range(f).filter(|i| support.contains(i)).collect();
        for (a, &i) in coords.iter().enumerate() {
            for &j in &coords[a + 1..] {
                pairs.push((0..m).map(|c| w[i][c] - w[j][c]).collect::<Vec<i64>>());
            }
        }
    }
    let total = (k as u64).pow(m as u32);
    (0..total)
        .filter(|&code| {
            let mut e = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                e.push((c % k as u64) as i64);
                c /= k as u64;
            }
            pairs.iter().all(|d| d.iter().zip(&e).map(|(a, b)| a * b).sum::<i64>().rem_euclid(k) == 0)
        })
        .count() as u64
}

/// All support patterns meeting every factor.
pub fn support_patterns(spec: &TorusActionSpec) -> Vec<Support> {
    let k = spec.num_coords();
    (1u64..(1 << k))
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect::<Support>())
        .filter(|s| (0..spec.factors().len()).all(|f| spec.factor_range(f).any(|i| s.contains(&i))))
        .collect()
}

/// Exact Gaussian elimination: unique solution of `a x = b` or `None`.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else { return None };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                let src = m[pivot_row].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        pivot_row += 1;
    }
    if (pivot_row..rows).any(|r| !m[r][cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| m[c][cols].clone()).collect())
}

/// Carathéodory membership: `u` is a convex combination of some affinely
/// independent subset of `points` of size at most `dim + 1`.
pub fn in_convex_hull(points: &[RationalVector], u: &RationalVector) -> bool {
    let dim = u.dim();
    let n = points.len();
    let max = (dim + 1).min(n);
    let mut found = false;
    for mask in 1u64..(1 << n) {
        if mask.count_ones() as usize > max {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut a: Vec<Vec<Rational>> = (0..dim).map(|r| idx.iter().map(|&j| points[j].0[r].clone()).collect()).collect();
        a.push(vec![Rational::one(); idx.len()]);
        let mut b = u.0.clone();
        b.push(Rational::one());
        if let Some(l) = solve_exact(&a, &b) {
            if l.iter().all(|x| !x.is_negative()) {
                found = true;
                break;
            }
        }
    }
    found
}

/// Gauss–Newton search for a zero of the family equation whose support is
/// exactly `support`, from several random starts.
pub fn witness_exists(f: &FamilySpec, support: &Support, rng: &mut impl Rng) -> bool {
    let spec = families::ambient_spec(f).unwrap();
    let eq = spec.equation();
    let vars: Vec<usize> = support.iter().copied().collect();
    let eval = |z: &[Complex64], e: &[u32]| -> Complex64 {
        z.iter().zip(e).fold(Complex64::one(), |acc, (x, &k)| acc * x.powu(k))
    };
    for _ in 0..10 {
        let mut z = vec![Complex64::zero(); spec.num_coords()];
        for &v in &vars {
            z[v] = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        }
        for _ in 0..300 {
            let f_val: Complex64 = eq.iter().map(|t| t.coefficient.to_f64().unwrap() * eval(&z, &t.exponents)).sum();
            if f_val.norm() < 1e-14 {
                break;
            }
            let grad: Vec<Complex64> = vars
                .iter()
                .map(|&v| {
                    eq.iter()
                        .filter(|t| t.exponents[v] > 0)
                        .map(|t| {
                            let mut e = t.exponents.clone();
                            e[v] -= 1;
                            t.coefficient.to_f64().unwrap() * f64::from(t.exponents[v]) * eval(&z, &e)
                        })
                        .sum()
                })
                .collect();
            let g2: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
            if g2 < 1e-300 {
                break;
            }
            for (&v, g) in vars.iter().zip(&grad) {
                z[v] -= f_val * g.conj() / g2;
            }
        }
        // A genuine zero off the coordinate hyperplanes needs cancelling terms,
        // so the residual is measured against the term sizes.
        let terms: Vec<Complex64> = eq
            .iter()
            .filter(|t| t.exponents.iter().enumerate().all(|(i, &k)| k == 0 || support.contains(&i)))
            .map(|t| t.coefficient.to_f64().unwrap() * eval(&z, &t.exponents))
            .collect();
        let residual = terms.iter().sum::<Complex64>().norm();
        let size: f64 = terms.iter().map(|t| t.norm()).sum();
        let cancelled = terms.is_empty() || (size > 0.0 && residual <= 1e-10 * size);
        if cancelled && vars.iter().all(|&v| z[v].norm() > 1e-6) {
            return true;
        }
    }
    false
}

/// Coefficient vector of `F(t^{-w} x)` normalized at `reference`, evaluated at
/// `t` and `t/2` and combined by one Richardson step.
pub fn richardson_limit(f: &TernaryForm, w: &OnePs, reference: [u32; 3], t: f64) -> Vec<([u32; 3], f64)> {
    let at = |t: f64| -> Vec<([u32; 3], f64)> {
        let scaled: Vec<([u32; 3], f64)> = f
            .terms()
            .iter()
            .map(|(e, c)| {
                let pairing: i64 = e.iter().zip(w.weights()).map(|(&a, b)| i64::from(a) * b).sum();
                (*e, c.to_f64().unwrap() * t.powf(-pairing as f64))
            })
            .collect();
        let r = scaled.iter().find(|(e, _)| *e == reference).unwrap().1;
        scaled.into_iter().map(|(e, v)| (e, v / r)).collect()
    };
    at(t / 2.0).into_iter().zip(at(t)).map(|((e, half), (_, full))| (e, 2.0 * half - full)).collect()
}

/// Closure of a finite matrix group given by integer generators.
pub fn group_closure(gens: &[Vec<Vec<i64>>]) -> Vec<Vec<Vec<i64>>> {
    let n = gens[0].len();
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mul = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let p = mul(&g, h);
            if seen.insert(p.clone()) {
                assert!(seen.len() <= 100_000, "group too large");
                frontier.push(p);
            }
        }
    }
    seen.into_iter().collect()
}

/// Reynolds operator `Σ_g g`; the invariant subspace is its image.
pub fn reynolds_is_zero(group: &[Vec<Vec<i64>>]) -> bool {
    let n = group[0].len();
    (0..n).all(|i| (0..n).all(|j| group.iter().map(|g| g[i][j]).sum::<i64>() == 0))
}

/// Base-P^2 Fano families with `α, β <= 6`, plus the two quadric families.
pub fn base_p2_families() -> Vec<FamilySpec> {
    let mut out: Vec<FamilySpec> = (1..=6)
        .flat_map(|a| (1..=6).map(move |b| FamilySpec::hypersurface(3, a, b).unwrap()))
        .filter(FamilySpec::is_fano)
        .collect();
    out.push(FamilySpec::quadric(3).unwrap());
    out.push(FamilySpec::blown_up_quadric(3).unwrap());
    out
}

/// Family key with `(α, β)` normalized up to swap.
pub fn swap_normalized_key(f: &FamilySpec) -> String {
    match *f {
        FamilySpec::BidegreeHypersurface { n, alpha, beta } => {
            format!("X^{}_{{{},{}}}", 2 * n - 1, alpha.min(beta), alpha.max(beta))
        }
        other => other.symbol(),
    }
}

pub fn key_set(keys: &[&str]) -> BTreeSet<String> {
    keys.iter().map(|s| s.to_string()).collect()
}
