//! Moment maps of diagonal torus actions, Kempf–Ness minimization and exact
//! semistability.
//!
//! A point of `P^{n_1} x ... x P^{n_k}` is embedded by all products of one
//! coordinate per factor; such a monomial coordinate has as weight the sum of
//! the weights of its coordinates. With `a_j = |c_j|^2` the squared monomial
//! coordinates, the Kempf–Ness function used here is
//!
//! `F(s) = 1/2 log sum_j a_j exp(2 <w_j, s>) - <u, s>`,
//!
//! whose gradient at `s` is `mu(exp(s) . p) - u`.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{LatticeError, Support, TorusActionSpec};
use crate::polyhedral::{convex_hull, Location, PolyhedralError, Polytope, RationalVector};
use crate::rational::{self, Rational};

/// Residual allowed when checking that a floating-point point lies on the hypersurface.
pub const EQUATION_TOLERANCE: f64 = 1e-9;
/// Iterates farther than this from the origin trigger the exact separation test.
pub const NORM_BOUND: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Polyhedral(#[from] PolyhedralError),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("support is not realizable on the hypersurface: {0}; check realizability first")]
    Unrealizable(String),
    #[error("{0} is outside the moment polytope")]
    OutsidePolytope(RationalVector),
}

/// Point of a product of projective spaces, each factor scaled to unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint {
    factors: Vec<Vec<Complex64>>,
}

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl Serialize for AmbientPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct C<'a>(#[serde(serialize_with = "serialize_complex")] &'a Complex64);
        let f: Vec<Vec<C<'_>>> = self.factors.iter().map(|v| v.iter().map(C).collect()).collect();
        f.serialize(serializer)
    }
}

impl AmbientPoint {
    pub fn new(spec: &TorusActionSpec, factors: Vec<Vec<Complex64>>) -> Result<Self, MomentError> {
        if factors.len() != spec.factors().len() {
            return Err(MomentError::InvalidPoint(format!(
                "{} factor vectors for {} factors",
                factors.len(),
                spec.factors().len()
            )));
        }
        let mut normalized = Vec::with_capacity(factors.len());
        for (f, v) in factors.into_iter().enumerate() {
            if v.len() != spec.factors()[f] + 1 {
                return Err(MomentError::InvalidPoint(format!("factor {f} has {} coordinates", v.len())));
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(MomentError::InvalidPoint(format!("factor {f} vector is zero or not finite")));
            }
            normalized.push(v.into_iter().map(|z| z / norm).collect());
        }
        let p = AmbientPoint { factors: normalized };
        let (residual, scale) = p.equation_residual(spec);
        if residual > EQUATION_TOLERANCE * scale.max(1.0) {
            return Err(MomentError::InvalidPoint(format!("equation residual {residual:e}")));
        }
        Ok(p)
    }

    /// Splits a flat coordinate list (global numbering) into factors.
    pub fn from_flat(spec: &TorusActionSpec, coords: &[Complex64]) -> Result<Self, MomentError> {
        if coords.len() != spec.num_coords() {
            return Err(MomentError::InvalidPoint(format!(
                "{} coordinates given, {} expected",
                coords.len(),
                spec.num_coords()
            )));
        }
        let factors = (0..spec.factors().len()).map(|f| coords[spec.factor_range(f)].to_vec()).collect();
        Self::new(spec, factors)
    }

    /// Torus-fixed point with coordinate `choice[f]` of factor `f` equal to one.
    pub fn fixed_point(spec: &TorusActionSpec, choice: &[usize]) -> Result<Self, MomentError> {
        let factors = spec
            .factors()
            .iter()
            .zip(choice)
            .map(|(&n, &c)| (0..=n).map(|i| if i == c { Complex64::new(1.0, 0.0) } else { Complex64::zero() }).collect())
            .collect();
        Self::new(spec, factors)
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn flat(&self) -> Vec<Complex64> {
        self.factors.iter().flatten().copied().collect()
    }

    /// Coordinates that are exactly nonzero.
    pub fn support(&self) -> Support {
        self.flat().iter().enumerate().filter(|(_, z)| **z != Complex64::zero()).map(|(k, _)| k).collect()
    }

    /// `(|f(p)|, sum of |terms|)` for the defining equation.
    pub fn equation_residual(&self, spec: &TorusActionSpec) -> (f64, f64) {
        let z = self.flat();
        let mut total = Complex64::zero();
        let mut scale = 0.0;
        for term in spec.equation() {
            let v = eval_monomial(&z, &term.exponents) * rational::rational_to_f64(&term.coefficient);
            total += v;
            scale += v.norm();
        }
        (total.norm(), scale)
    }
}

pub fn eval_monomial(z: &[Complex64], exponents: &[u32]) -> Complex64 {
    z.iter()
        .zip(exponents)
        .filter(|(_, &e)| e > 0)
        .fold(Complex64::new(1.0, 0.0), |acc, (zk, &e)| acc * zk.powu(e))
}

/// A monomial coordinate: one coordinate index per factor and its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coords: Vec<usize>,
    pub weight: Vec<BigInt>,
}

/// All monomial coordinates of multidegree `(1, ..., 1)` restricted to `support`.
pub fn monomials(spec: &TorusActionSpec, support: &Support) -> Vec<Monomial> {
    let mut out = vec![Monomial { coords: Vec::new(), weight: vec![BigInt::zero(); spec.torus_rank()] }];
    for f in 0..spec.factors().len() {
        let mut next = Vec::new();
        for m in &out {
            for k in spec.factor_range(f).filter(|k| support.contains(k)) {
                let mut coords = m.coords.clone();
                coords.push(k);
                let weight = m.weight.iter().zip(spec.weight(k)).map(|(a, b)| a + b).collect();
                next.push(Monomial { coords, weight });
            }
        }
        out = next;
    }
    out
}

/// Distinct monomial weights over `support`, as rational vectors.
pub fn monomial_weights(spec: &TorusActionSpec, support: &Support) -> Vec<RationalVector> {
    let set: BTreeSet<Vec<BigInt>> = monomials(spec, support).into_iter().map(|m| m.weight).collect();
    set.iter().map(|w| RationalVector::from_bigints(w)).collect()
}

/// The moment polytope: hull of all monomial weights.
pub fn moment_polytope(spec: &TorusActionSpec) -> Result<Polytope, MomentError> {
    Ok(convex_hull(&monomial_weights(spec, &spec.full_support()))?)
}

fn weight_f64(w: &[BigInt]) -> Vec<f64> {
    w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Squared moduli and weights of the nonvanishing monomial coordinates.
fn weighted_terms(spec: &TorusActionSpec, p: &AmbientPoint) -> Vec<(f64, Vec<f64>, Vec<BigInt>)> {
    let z = p.flat();
    monomials(spec, &p.support())
        .into_iter()
        .map(|m| {
            let a: f64 = m.coords.iter().map(|&k| z[k].norm_sqr()).product();
            (a, weight_f64(&m.weight), m.weight)
        })
        .filter(|(a, _, _)| *a > 0.0)
        .collect()
}

/// `sum_j |c_j|^2 w_j / sum_j |c_j|^2` over monomial coordinates `c_j`.
pub fn moment_map(spec: &TorusActionSpec, p: &AmbientPoint) -> Vec<f64> {
    let terms = weighted_terms(spec, p);
    let total: f64 = terms.iter().map(|t| t.0).sum();
    let mut mu = vec![0.0; spec.torus_rank()];
    for (a, w, _) in &terms {
        for (m, wi) in mu.iter_mut().zip(w) {
            *m += a * wi;
        }
    }
    mu.iter().map(|m| m / total).collect()
}

/// `exp(s + i theta) . p`, acting on coordinate `k` by `exp(<w_k, s + i theta>)`.
pub fn torus_act(spec: &TorusActionSpec, p: &AmbientPoint, s: &[f64], theta: &[f64]) -> Result<AmbientPoint, MomentError> {
    let coords: Vec<Complex64> = p
        .flat()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let w = weight_f64(spec.weight(k));
            let re: f64 = w.iter().zip(s).map(|(a, b)| a * b).sum();
            let im: f64 = w.iter().zip(theta).map(|(a, b)| a * b).sum();
            z * Complex64::new(re, im).exp()
        })
        .collect();
    AmbientPoint::from_flat(spec, &coords)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KNStatus {
    Converged,
    Diverged,
    IterationLimit,
}

#[derive(Clone, Debug, Serialize)]
pub struct KNSolveResult {
    pub status: KNStatus,
    pub minimizer: Vec<f64>,
    pub moment_value: Vec<f64>,
    pub gradient_norm: f64,
    pub iterations: usize,
    /// For `Diverged`: a direction `v` with `<w - u, v> < 0` for every
    /// supported weight `w`, along which the Kempf–Ness function is unbounded below.
    #[serde(serialize_with = "serialize_certificate")]
    pub certificate: Option<Vec<BigInt>>,
}

fn serialize_certificate<S: Serializer>(c: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(v) => rational::serde_bigint::vec::serialize(v, s),
        None => s.serialize_none(),
    }
}

/// If `u` is not in the hull of `weights`, a primitive integer direction `v` with
/// `<w, v> < <u, v>` for every weight.
pub fn separation_direction(weights: &[RationalVector], u: &RationalVector) -> Result<Option<Vec<BigInt>>, MomentError> {
    let hull = convex_hull(weights)?;
    if hull.locate(u)? != Location::Outside {
        return Ok(None);
    }
    for e in &hull.equations {
        let v = e.value(&u.0);
        if !v.is_zero() {
            let sign = if v > Rational::zero() { 1 } else { -1 };
            return Ok(Some(e.normal.iter().map(|x| x * sign).collect()));
        }
    }
    let f = hull.facets.iter().find(|f| f.value(&u.0) > Rational::zero()).expect("outside point violates a facet");
    Ok(Some(f.normal.clone()))
}

struct KnFunction<'a> {
    log_a: Vec<f64>,
    weights: Vec<&'a [f64]>,
    u: Vec<f64>,
    m: usize,
}

impl KnFunction<'_> {
    fn value(&self, s: &[f64]) -> f64 {
        let z: Vec<f64> = self.exponents(s);
        let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = z.iter().map(|x| (x - zmax).exp()).sum();
        0.5 * (zmax + sum.ln()) - self.u.iter().zip(s).map(|(a, b)| a * b).sum::<f64>()
    }

    fn exponents(&self, s: &[f64]) -> Vec<f64> {
        self.log_a
            .iter()
            .zip(&self.weights)
            .map(|(la, w)| la + 2.0 * w.iter().zip(s).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    /// Moment value and Hessian at `s`.
    fn moment_and_hessian(&self, s: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
        let z = self.exponents(s);
        let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let p: Vec<f64> = z.iter().map(|x| (x - zmax).exp()).collect();
        let total: f64 = p.iter().sum();
        let mut mu = vec![0.0; self.m];
        let mut second = DMatrix::<f64>::zeros(self.m, self.m);
        for (pj, w) in p.iter().zip(&self.weights) {
            let q = pj / total;
            for i in 0..self.m {
                mu[i] += q * w[i];
                for k in 0..self.m {
                    second[(i, k)] += q * w[i] * w[k];
                }
            }
        }
        for i in 0..self.m {
            for k in 0..self.m {
                second[(i, k)] = 2.0 * (second[(i, k)] - mu[i] * mu[k]);
            }
        }
        (mu, second)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Newton minimization of the Kempf–Ness function from `s = 0`.
pub fn kn_minimize(
    spec: &TorusActionSpec,
    p: &AmbientPoint,
    u: &RationalVector,
    tol: f64,
    max_iter: usize,
) -> Result<KNSolveResult, MomentError> {
    let m = spec.torus_rank();
    if u.dim() != m {
        return Err(PolyhedralError::DimensionMismatch { expected: m, found: u.dim() }.into());
    }
    let terms = weighted_terms(spec, p);
    let support_weights: Vec<RationalVector> =
        terms.iter().map(|t| &t.2).collect::<BTreeSet<_>>().into_iter().map(|w| RationalVector::from_bigints(w)).collect();
    let diverged = |certificate: Vec<BigInt>, s: Vec<f64>, mu: Vec<f64>, g: f64, it: usize| KNSolveResult {
        status: KNStatus::Diverged,
        minimizer: s,
        moment_value: mu,
        gradient_norm: g,
        iterations: it,
        certificate: Some(certificate),
    };

    let all_weights = monomial_weights(spec, &spec.full_support());
    if let Some(c) = separation_direction(&all_weights, u)? {
        let mu = moment_map(spec, p);
        let g = norm(&mu.iter().zip(u.to_f64()).map(|(a, b)| a - b).collect::<Vec<_>>());
        return Ok(diverged(c, vec![0.0; m], mu, g, 0));
    }

    let f = KnFunction {
        log_a: terms.iter().map(|t| t.0.ln()).collect(),
        weights: terms.iter().map(|t| t.1.as_slice()).collect(),
        u: u.to_f64(),
        m,
    };
    let mut s = vec![0.0; m];
    let mut iterations = 0;
    loop {
        let (mu, h) = f.moment_and_hessian(&s);
        let g: Vec<f64> = mu.iter().zip(&f.u).map(|(a, b)| a - b).collect();
        let gnorm = norm(&g);
        if gnorm <= tol {
            return Ok(KNSolveResult {
                status: KNStatus::Converged,
                minimizer: s,
                moment_value: mu,
                gradient_norm: gnorm,
                iterations,
                certificate: None,
            });
        }
        let stalled = iterations >= max_iter || norm(&s) > NORM_BOUND;
        if stalled {
            if let Some(c) = separation_direction(&support_weights, u)? {
                return Ok(diverged(c, s, mu, gnorm, iterations));
            }
            if iterations >= max_iter {
                return Ok(KNSolveResult {
                    status: KNStatus::IterationLimit,
                    minimizer: s,
                    moment_value: mu,
                    gradient_norm: gnorm,
                    iterations,
                    certificate: None,
                });
            }
        }

        let eig = h.symmetric_eigen();
        let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let gv = DVector::from_vec(g.clone());
        let mut step = DVector::<f64>::zeros(m);
        for i in 0..m {
            let v = eig.eigenvectors.column(i);
            let coeff = v.dot(&gv);
            let lambda = eig.eigenvalues[i];
            let scale = if lambda > 1e-10 * lmax.max(1.0) { 1.0 / lambda } else { 1.0 };
            step -= v * (coeff * scale);
        }
        let slope = step.dot(&gv);
        let f0 = f.value(&s);
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-14 {
            let trial: Vec<f64> = s.iter().zip(step.iter()).map(|(a, b)| a + t * b).collect();
            let ft = f.value(&trial);
            if ft <= f0 + 1e-4 * t * slope {
                accepted = Some(trial);
                break;
            }
            if t == 1.0 {
                let (mu_t, _) = f.moment_and_hessian(&trial);
                let gt: Vec<f64> = mu_t.iter().zip(&f.u).map(|(a, b)| a - b).collect();
                if norm(&gt) < gnorm && (ft - f0).abs() <= 1e-12 * f0.abs().max(1.0) {
                    accepted = Some(trial);
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some(next) => s = next,
            None => {
                if let Some(c) = separation_direction(&support_weights, u)? {
                    return Ok(diverged(c, s, mu, gnorm, iterations));
                }
                return Ok(KNSolveResult {
                    status: KNStatus::IterationLimit,
                    minimizer: s,
                    moment_value: mu,
                    gradient_norm: gnorm,
                    iterations,
                    certificate: None,
                });
            }
        }
    }
}

/// Exact semistability of the stratum with the given support: `u` lies in the
/// hull of the weights of the nonvanishing monomial coordinates.
pub fn semistable_exact(spec: &TorusActionSpec, support: &Support, u: &RationalVector) -> Result<bool, MomentError> {
    spec.check_support(support)?;
    if !spec.equation().is_empty() && spec.surviving_terms(support) == 1 {
        return Err(MomentError::Unrealizable(format!("{support:?} leaves a single equation term")));
    }
    let hull = convex_hull(&monomial_weights(spec, support))?;
    Ok(hull.contains(u)?)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random point of the hypersurface stratum with exactly the given support
/// (generically). Coordinates are complex Gaussian; the first supported
/// coordinate occurring in exactly one surviving equation term is solved for.
pub fn sample_on_support(spec: &TorusActionSpec, support: &Support, rng: &mut impl Rng) -> Result<AmbientPoint, MomentError> {
    spec.check_support(support)?;
    let mut z: Vec<Complex64> =
        (0..spec.num_coords()).map(|k| if support.contains(&k) { gaussian(rng) } else { Complex64::zero() }).collect();
    let surviving: Vec<usize> = (0..spec.equation().len())
        .filter(|&i| spec.equation()[i].exponents.iter().enumerate().all(|(k, &e)| e == 0 || support.contains(&k)))
        .collect();
    if surviving.len() == 1 {
        return Err(MomentError::Unrealizable(format!("{support:?} leaves a single equation term")));
    }
    if !surviving.is_empty() {
        let eq = spec.equation();
        let (k, ti) = support
            .iter()
            .find_map(|&k| {
                let hits: Vec<usize> = surviving.iter().copied().filter(|&i| eq[i].exponents[k] > 0).collect();
                (hits.len() == 1).then(|| (k, hits[0]))
            })
            .ok_or_else(|| MomentError::InvalidPoint("no coordinate can be solved for".into()))?;
        let rest: Complex64 = surviving
            .iter()
            .filter(|&&i| i != ti)
            .map(|&i| eval_monomial(&z, &eq[i].exponents) * rational::rational_to_f64(&eq[i].coefficient))
            .sum();
        let e = eq[ti].exponents[k];
        let mut others = eq[ti].exponents.clone();
        others[k] = 0;
        let lead = eval_monomial(&z, &others) * rational::rational_to_f64(&eq[ti].coefficient);
        z[k] = (-rest / lead).powf(1.0 / f64::from(e));
    }
    AmbientPoint::from_flat(spec, &z)
}

pub fn sample_point(spec: &TorusActionSpec, rng: &mut impl Rng) -> Result<AmbientPoint, MomentError> {
    sample_on_support(spec, &spec.full_support(), rng)
}

/// Independent stream for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Largest support whose monomial hull contains `u` in its relative interior:
/// repeatedly keeps, in every factor, the coordinates maximizing a tight facet normal.
pub fn face_support(spec: &TorusActionSpec, u: &RationalVector) -> Result<Support, MomentError> {
    let mut support = spec.full_support();
    loop {
        let hull = convex_hull(&monomial_weights(spec, &support))?;
        match hull.locate(u)? {
            Location::Outside => return Err(MomentError::OutsidePolytope(u.clone())),
            Location::Interior => return Ok(support),
            Location::Boundary => {
                let facet = hull.facets.iter().find(|f| f.value(&u.0).is_zero()).expect("boundary point has a tight facet");
                let score = |k: usize| -> BigInt { spec.weight(k).iter().zip(&facet.normal).map(|(a, b)| a * b).sum() };
                let mut next = Support::new();
                for f in 0..spec.factors().len() {
                    let ks: Vec<usize> = spec.factor_range(f).filter(|k| support.contains(k)).collect();
                    let best = ks.iter().map(|&k| score(k)).max().expect("factor has a supported coordinate");
                    next.extend(ks.into_iter().filter(|&k| score(k) == best));
                }
                support = next;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    SingleValue,
    MultipleValues,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreSample {
    pub index: usize,
    pub status: KNStatus,
    /// Moduli of the coordinates after flowing to the fibre.
    pub moduli: Vec<f64>,
    /// Quotient map value scaled so its largest entry is 1, or `None` if it vanishes.
    pub quotient_value: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreProbeReport {
    pub u: RationalVector,
    pub location: Location,
    pub face_support: Vec<usize>,
    pub trials: usize,
    pub converged: usize,
    pub distinct_values: usize,
    pub tolerance: f64,
    pub verdict: ProbeVerdict,
    pub samples: Vec<FibreSample>,
}

/// Samples points of the stratum over the face of the moment polytope
/// containing `u`, flows each to the fibre over `u`, and compares the results
/// up to the compact torus (coordinate moduli) within `tol`.
pub fn fibre_orbit_probe(
    spec: &TorusActionSpec,
    quotient: &[Vec<u32>],
    u: &RationalVector,
    trials: usize,
    seed: u64,
    tol: f64,
    max_iter: usize,
) -> Result<FibreProbeReport, MomentError> {
    let polytope = moment_polytope(spec)?;
    let location = polytope.locate(u)?;
    if location == Location::Outside {
        return Err(MomentError::OutsidePolytope(u.clone()));
    }
    let support = face_support(spec, u)?;
    let kn_tol = (tol * 1e-2).max(1e-12);
    let samples: Vec<Result<FibreSample, MomentError>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let p = sample_on_support(spec, &support, &mut rng)?;
            let r = kn_minimize(spec, &p, u, kn_tol, max_iter)?;
            let q = torus_act(spec, &p, &r.minimizer, &vec![0.0; spec.torus_rank()])?;
            let z = q.flat();
            let values: Vec<Complex64> = quotient.iter().map(|e| eval_monomial(&z, e)).collect();
            let big = values.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm()));
            let quotient_value = big.filter(|b| b.norm() > 1e-12).map(|b| {
                values
                    .iter()
                    .map(|v| {
                        let c = v / b;
                        [c.re, c.im]
                    })
                    .collect()
            });
            Ok(FibreSample { index: i, status: r.status, moduli: z.iter().map(|c| c.norm()).collect(), quotient_value })
        })
        .collect();
    let samples: Vec<FibreSample> = samples.into_iter().collect::<Result<_, _>>()?;
    let mut representatives: Vec<&Vec<f64>> = Vec::new();
    let mut converged = 0;
    for s in samples.iter().filter(|s| s.status == KNStatus::Converged) {
        converged += 1;
        let close = |r: &&Vec<f64>| r.iter().zip(&s.moduli).all(|(a, b)| (a - b).abs() <= tol);
        if !representatives.iter().any(close) {
            representatives.push(&s.moduli);
        }
    }
    let verdict = match representatives.len() {
        0 => ProbeVerdict::Inconclusive,
        1 => ProbeVerdict::SingleValue,
        _ => ProbeVerdict::MultipleValues,
    };
    Ok(FibreProbeReport {
        u: u.clone(),
        location,
        face_support: support.into_iter().collect(),
        trials,
        converged,
        distinct_values: representatives.len(),
        tolerance: tol,
        verdict,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::EquationTerm;
    use num_traits::One;

    /// P^2 x P^2 with weights (0, e1, e2 | 0, -e1, -e2) and x0 y0 + x1 y1 + x2 y2 = 0.
    fn x311() -> TorusActionSpec {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let weights = vec![b(&[0, 0]), b(&[1, 0]), b(&[0, 1]), b(&[0, 0]), b(&[-1, 0]), b(&[0, -1])];
        let equation = (0..3)
            .map(|i| {
                let mut e = vec![0; 6];
                e[i] = 1;
                e[3 + i] = 1;
                EquationTerm { exponents: e, coefficient: Rational::one() }
            })
            .collect();
        TorusActionSpec::new(2, vec![2, 2], weights, equation).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fixed_point_maps_to_its_weight() {
        let spec = x311();
        let p = AmbientPoint::fixed_point(&spec, &[1, 2]).unwrap();
        assert_eq!(moment_map(&spec, &p), vec![1.0, -1.0]);
    }

    #[test]
    fn symmetric_point_maps_to_origin() {
        let spec = x311();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = AmbientPoint::new(&spec, vec![vec![c(s), c(s), c(0.0)], vec![c(s), c(-s), c(0.0)]]).unwrap();
        let mu = moment_map(&spec, &p);
        assert!(mu.iter().all(|x| x.abs() < 1e-15), "{mu:?}");
    }

    #[test]
    fn off_hypersurface_point_is_rejected() {
        let spec = x311();
        let err = AmbientPoint::new(&spec, vec![vec![c(1.0), c(0.0), c(0.0)], vec![c(1.0), c(0.0), c(0.0)]]);
        assert!(matches!(err, Err(MomentError::InvalidPoint(_))));
        let err = AmbientPoint::new(&spec, vec![vec![c(0.0); 3], vec![c(1.0), c(0.0), c(0.0)]]);
        assert!(matches!(err, Err(MomentError::InvalidPoint(_))));
    }

    #[test]
    fn fixed_point_converges_at_its_vertex_without_iterating() {
        let spec = x311();
        let p = AmbientPoint::fixed_point(&spec, &[1, 0]).unwrap();
        let r = kn_minimize(&spec, &p, &RationalVector::from_ints(&[1, 0]), 1e-9, 100).unwrap();
        assert_eq!(r.status, KNStatus::Converged);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.minimizer, vec![0.0, 0.0]);
    }

    #[test]
    fn single_weight_point_diverges_with_certificate() {
        let spec = x311();
        let p = AmbientPoint::fixed_point(&spec, &[0, 1]).unwrap();
        let r = kn_minimize(&spec, &p, &RationalVector::zero(2), 1e-9, 100).unwrap();
        assert_eq!(r.status, KNStatus::Diverged);
        assert_eq!(r.certificate, Some(vec![BigInt::one(), BigInt::zero()]));
        assert!(!semistable_exact(&spec, &[0, 4].into(), &RationalVector::zero(2)).unwrap());
    }

    #[test]
    fn outside_polytope_diverges_immediately() {
        let spec = x311();
        let mut rng = sample_rng(1, 0);
        let p = sample_point(&spec, &mut rng).unwrap();
        let r = kn_minimize(&spec, &p, &RationalVector::from_ints(&[2, 0]), 1e-9, 100).unwrap();
        assert_eq!(r.status, KNStatus::Diverged);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn generic_point_converges_to_interior_value() {
        let spec = x311();
        let mut rng = sample_rng(7, 3);
        let p = sample_point(&spec, &mut rng).unwrap();
        let u = RationalVector(vec![rational::ratio(1, 3), rational::ratio(-1, 5)]);
        let r = kn_minimize(&spec, &p, &u, 1e-9, 200).unwrap();
        assert_eq!(r.status, KNStatus::Converged);
        let q = torus_act(&spec, &p, &r.minimizer, &[0.0, 0.0]).unwrap();
        let mu = moment_map(&spec, &q);
        assert!((mu[0] - 1.0 / 3.0).abs() < 1e-8 && (mu[1] + 0.2).abs() < 1e-8);
    }

    #[test]
    fn unrealizable_support_is_reported() {
        let spec = x311();
        let support: Support = [0, 1, 3].into();
        assert!(matches!(semistable_exact(&spec, &support, &RationalVector::zero(2)), Err(MomentError::Unrealizable(_))));
        assert!(semistable_exact(&spec, &spec.full_support(), &RationalVector::zero(2)).unwrap());
    }

    #[test]
    fn face_support_of_a_vertex() {
        let spec = x311();
        let s = face_support(&spec, &RationalVector::from_ints(&[1, 0])).unwrap();
        assert_eq!(s, [1, 3].into());
        assert_eq!(face_support(&spec, &RationalVector::zero(2)).unwrap(), spec.full_support());
    }

    #[test]
    fn zero_trials_are_inconclusive() {
        let spec = x311();
        let r = fibre_orbit_probe(&spec, &[], &RationalVector::from_ints(&[1, 0]), 0, 0, 1e-7, 100).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::Inconclusive);
    }

    #[test]
    fn sampled_points_satisfy_the_equation() {
        let spec = x311();
        for i in 0..20 {
            let p = sample_point(&spec, &mut sample_rng(0, i)).unwrap();
            assert_eq!(p.support(), spec.full_support());
            let (r, _) = p.equation_residual(&spec);
            assert!(r < 1e-12);
        }
        assert_eq!(monomial_weights(&spec, &spec.full_support()).len(), 7);
        assert_eq!(moment_polytope(&spec).unwrap().vertices.len(), 6);
    }
}
