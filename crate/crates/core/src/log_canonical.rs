//! Plane log pairs: degeneration of divisors under one-parameter subgroups,
//! log canonicity of concurrent lines, and the lower bound for the global log
//! canonical threshold of `(P^2, γ (H_0 + ... + H_3))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, Rational, Threshold};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcError {
    #[error("cannot parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("coefficient {0} of a divisor component is negative")]
    NegativeCoefficient(String),
    #[error("one-parameter subgroup with equal weights acts trivially")]
    TrivialSubgroup,
    #[error("component `{0}` is not a line through the given point")]
    NotConcurrentLine(String),
    #[error("γ = {0} is outside [0, 1)")]
    GammaOutOfRange(String),
}

/// Homogeneous polynomial in `x1, x2, x3` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TernaryForm {
    terms: BTreeMap<[u32; 3], Rational>,
}

impl TernaryForm {
    pub fn new(terms: impl IntoIterator<Item = ([u32; 3], Rational)>) -> Result<Self, LcError> {
        let mut map: BTreeMap<[u32; 3], Rational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let form = TernaryForm { terms: map };
        let mut degrees = form.terms.keys().map(|e| e.iter().sum::<u32>());
        let Some(d) = degrees.next() else {
            return Err(LcError::ZeroPolynomial);
        };
        if degrees.any(|x| x != d) {
            return Err(LcError::NotHomogeneous(form.to_string()));
        }
        Ok(form)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().next().map_or(0, |e| e.iter().sum())
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], Rational> {
        &self.terms
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| c * (0..3).map(|i| num_traits::pow(p[i].clone(), e[i] as usize)).product::<Rational>())
            .sum()
    }

    /// Scaled so the coefficient of the largest exponent (in lexicographic order) is 1.
    pub fn normalized(&self) -> TernaryForm {
        let lead = self.terms.values().next_back().expect("nonzero form").clone();
        TernaryForm { terms: self.terms.iter().map(|(e, c)| (*e, c / &lead)).collect() }
    }

    /// Sum of the monomials maximizing `<e, w>`.
    pub fn initial_form(&self, w: &OnePs) -> TernaryForm {
        let top = self.terms.keys().map(|e| w.pairing(e)).max().expect("nonzero form");
        TernaryForm { terms: self.terms.iter().filter(|(e, _)| w.pairing(e) == top).map(|(e, c)| (*e, c.clone())).collect() }
    }

    /// Applies a permutation of the variables: `x_i` is replaced by `x_{perm[i]}`.
    pub fn permute(&self, perm: [usize; 3]) -> TernaryForm {
        TernaryForm {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = [0; 3];
                    for i in 0..3 {
                        f[perm[i]] = e[i];
                    }
                    (f, c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let vars: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e[i]) })
                .collect();
            let coeff = if mag.is_integer() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) };
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => f.write_str(&coeff)?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{coeff}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl FromStr for TernaryForm {
    type Err = LcError;

    /// Accepts sums of terms like `3/2*x1^2*x3`, `-x2`, `0.5*x1*x2`.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| LcError::Parse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && current.is_empty() {
                if ch == '-' {
                    negative = !negative;
                }
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(err("dangling sign"));
        }
        pieces.push((negative, current));

        let mut terms = Vec::new();
        for (negative, body) in pieces {
            let mut coeff = Rational::one();
            let mut e = [0u32; 3];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (var, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| err("bad variable"))?;
                    if !(1..=3).contains(&i) {
                        return Err(err("variables are x1, x2, x3"));
                    }
                    e[i - 1] += pow;
                } else {
                    coeff *= rational::parse_rational(factor).map_err(|_| err("bad coefficient"))?;
                }
            }
            terms.push((e, if negative { -coeff } else { coeff }));
        }
        TernaryForm::new(terms)
    }
}

/// `Σ a_i V(F_i)` with distinct components (up to scaling) and `a_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneDivisor {
    components: Vec<(TernaryForm, Rational)>,
}

impl PlaneDivisor {
    pub fn new(components: impl IntoIterator<Item = (TernaryForm, Rational)>) -> Result<Self, LcError> {
        let mut merged: BTreeMap<TernaryForm, Rational> = BTreeMap::new();
        for (f, a) in components {
            if a.is_negative() {
                return Err(LcError::NegativeCoefficient(rational::format_rational(&a)));
            }
            *merged.entry(f.normalized()).or_insert_with(Rational::zero) += a;
        }
        merged.retain(|_, a| !a.is_zero());
        Ok(PlaneDivisor { components: merged.into_iter().collect() })
    }

    pub fn empty() -> Self {
        PlaneDivisor { components: Vec::new() }
    }

    pub fn components(&self) -> &[(TernaryForm, Rational)] {
        &self.components
    }

    /// `Σ a_i deg F_i`.
    pub fn degree(&self) -> Rational {
        self.components.iter().map(|(f, a)| a * Rational::from_integer(BigInt::from(f.degree()))).sum()
    }

    pub fn total_coefficient(&self) -> Rational {
        self.components.iter().map(|(_, a)| a.clone()).sum()
    }

    pub fn permute(&self, perm: [usize; 3]) -> PlaneDivisor {
        PlaneDivisor::new(self.components.iter().map(|(f, a)| (f.permute(perm), a.clone()))).expect("coefficients stay valid")
    }
}

/// `t . [x1 : x2 : x3] = [t^{w1} x1 : t^{w2} x2 : t^{w3} x3]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OnePs {
    weights: [i64; 3],
}

impl OnePs {
    pub fn new(weights: [i64; 3]) -> Result<Self, LcError> {
        if weights[0] == weights[1] && weights[1] == weights[2] {
            return Err(LcError::TrivialSubgroup);
        }
        Ok(OnePs { weights })
    }

    pub fn weights(&self) -> [i64; 3] {
        self.weights
    }

    pub fn pairing(&self, e: &[u32; 3]) -> i64 {
        (0..3).map(|i| self.weights[i] * i64::from(e[i])).sum()
    }
}

/// Limit of `V(F)` as `t -> 0`: each component is replaced by its top-weight
/// initial form (the image `V(Σ c_e t^{-<e,w>} x^e)` is dominated by those terms);
/// coinciding limits are merged.
pub fn degenerate(d: &PlaneDivisor, w: &OnePs) -> PlaneDivisor {
    PlaneDivisor::new(d.components.iter().map(|(f, a)| (f.initial_form(w), a.clone()))).expect("coefficients stay valid")
}

fn check_concurrent(d: &PlaneDivisor, p: &[Rational; 3]) -> Result<(), LcError> {
    for (f, _) in &d.components {
        if f.degree() != 1 || !f.eval(p).is_zero() {
            return Err(LcError::NotConcurrentLine(f.to_string()));
        }
    }
    Ok(())
}

/// Lines through a common point: log canonical iff `Σ a_i <= 2` and every `a_i <= 1`.
pub fn is_lc_concurrent(d: &PlaneDivisor, p: &[Rational; 3]) -> Result<bool, LcError> {
    check_concurrent(d, p)?;
    let two = rational::int(2);
    Ok(d.total_coefficient() <= two && d.components.iter().all(|(_, a)| a <= &Rational::one()))
}

/// Coefficient `Σ a_i - 1` of the exceptional curve of the blowup at the common point.
pub fn blowup_discrepancy_concurrent(d: &PlaneDivisor, p: &[Rational; 3]) -> Result<Rational, LcError> {
    check_concurrent(d, p)?;
    Ok(d.total_coefficient() - Rational::one())
}

/// The two conditions on `(γ, λ)` for `(P^2, B_γ + λ D)` to stay log canonical,
/// each of the form `c(γ, λ) <= 0`.
const CONSTRAINTS: [fn(&Rational, &Rational) -> Rational; 2] = [
    // Boundary lines through a point after degeneration: 2γ + 3λ - 4γλ <= 2.
    |g, l| rational::int(2) * g + rational::int(3) * l - rational::int(4) * g * l - rational::int(2),
    // Multiplicity of the degenerated divisor at the fixed point: λ(3 - 4γ) <= 1.
    |g, l| rational::int(3) * l - rational::int(4) * g * l - Rational::one(),
];

pub fn lc_feasible(gamma: &Rational, lambda: &Rational) -> bool {
    CONSTRAINTS.iter().all(|c| !c(gamma, lambda).is_positive())
}

fn check_gamma(gamma: &Rational) -> Result<(), LcError> {
    if gamma.is_negative() || gamma >= &Rational::one() {
        return Err(LcError::GammaOutOfRange(rational::format_rational(gamma)));
    }
    Ok(())
}

/// `1/(3-4γ)` for `γ <= 1/2`, `2(1-γ)/(3-4γ)` for `1/2 <= γ < 3/4`, infinite from `3/4` on.
pub fn glct_bound(gamma: &Rational) -> Result<Threshold, LcError> {
    check_gamma(gamma)?;
    let three_quarters = rational::ratio(3, 4);
    if gamma >= &three_quarters {
        return Ok(Threshold::Infinite);
    }
    let denom = rational::int(3) - rational::int(4) * gamma;
    Ok(Threshold::Finite(if gamma <= &rational::ratio(1, 2) {
        denom.recip()
    } else {
        rational::int(2) * (Rational::one() - gamma) / denom
    }))
}

/// `sup{λ >= 0 : lc_feasible(γ, λ)}`, obtained by reading each constraint as an
/// affine function of `λ` and intersecting the resulting half-lines.
pub fn glct_bound_via_search(gamma: &Rational) -> Result<Threshold, LcError> {
    check_gamma(gamma)?;
    let mut sup = Threshold::Infinite;
    for c in CONSTRAINTS {
        let at0 = c(gamma, &Rational::zero());
        let slope = c(gamma, &Rational::one()) - &at0;
        if slope.is_positive() {
            let root = -at0 / slope;
            sup = sup.min(Threshold::Finite(root));
        } else if at0.is_positive() {
            sup = Threshold::Finite(Rational::zero());
        }
    }
    Ok(sup)
}
