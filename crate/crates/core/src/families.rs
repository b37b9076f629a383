//! The three families of symmetric T-varieties: bidegree hypersurfaces
//! `X^{2n-1}_{α,β} ⊂ P^n x P^n`, even-dimensional quadrics `Q^{2n}` and their
//! blowups `W^{2n}`, with their quotient maps and boundary divisors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{self, EquationTerm, LatticeError, StabilizerGroup, Support, TorusActionSpec};
use crate::moment;
use crate::polyhedral::RationalVector;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("malformed family selector `{0}`; expected e.g. hypersurface:n=3,alpha=1,beta=2, quadric:n=3 or blownup-quadric:n=3")]
    InvalidSelector(String),
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("{0}")]
    WrongKind(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilySpec {
    BidegreeHypersurface { n: u32, alpha: u32, beta: u32 },
    EvenQuadric { n: u32 },
    BlownUpQuadric { n: u32 },
}

/// `(d, a, b)` with `d = gcd(α, β)`, `α = d a`, `β = d b`.
pub fn reduced_pair(alpha: u32, beta: u32) -> Result<(u32, u32, u32), FamilyError> {
    if alpha == 0 || beta == 0 {
        return Err(FamilyError::InvalidParameters("alpha and beta must be at least 1".into()));
    }
    let d = alpha.gcd(&beta);
    Ok((d, alpha / d, beta / d))
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl FamilySpec {
    pub fn hypersurface(n: u32, alpha: u32, beta: u32) -> Result<Self, FamilyError> {
        let f = FamilySpec::BidegreeHypersurface { n, alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn quadric(n: u32) -> Result<Self, FamilyError> {
        let f = FamilySpec::EvenQuadric { n };
        f.validate()?;
        Ok(f)
    }

    pub fn blown_up_quadric(n: u32) -> Result<Self, FamilyError> {
        let f = FamilySpec::BlownUpQuadric { n };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), FamilyError> {
        if self.n() < 2 {
            return Err(FamilyError::InvalidParameters(format!("n must be at least 2, got {}", self.n())));
        }
        if self.n() > 12 {
            return Err(FamilyError::InvalidParameters(format!("n = {} is beyond the supported range", self.n())));
        }
        if let FamilySpec::BidegreeHypersurface { alpha, beta, .. } = *self {
            reduced_pair(alpha, beta)?;
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        match *self {
            FamilySpec::BidegreeHypersurface { n, .. } | FamilySpec::EvenQuadric { n } | FamilySpec::BlownUpQuadric { n } => n,
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            FamilySpec::BidegreeHypersurface { n, .. } => 2 * n - 1,
            FamilySpec::EvenQuadric { n } | FamilySpec::BlownUpQuadric { n } => 2 * n,
        }
    }

    /// `(d, a, b)` for hypersurfaces.
    pub fn reduced(&self) -> Option<(u32, u32, u32)> {
        match *self {
            FamilySpec::BidegreeHypersurface { alpha, beta, .. } => reduced_pair(alpha, beta).ok(),
            _ => None,
        }
    }

    /// The blown-up quadric is Fano as a recorded fact, not a computation.
    pub fn is_fano(&self) -> bool {
        match *self {
            FamilySpec::BidegreeHypersurface { n, alpha, beta } => alpha < n + 1 && beta < n + 1,
            FamilySpec::EvenQuadric { .. } | FamilySpec::BlownUpQuadric { .. } => true,
        }
    }

    /// `Σ x_i^α y_i^β` is smooth iff one exponent is 1; the quadric kinds are smooth.
    pub fn is_smooth(&self) -> bool {
        match *self {
            FamilySpec::BidegreeHypersurface { alpha, beta, .. } => alpha.min(beta) == 1,
            _ => true,
        }
    }

    pub fn selector(&self) -> String {
        match *self {
            FamilySpec::BidegreeHypersurface { n, alpha, beta } => format!("hypersurface:n={n},alpha={alpha},beta={beta}"),
            FamilySpec::EvenQuadric { n } => format!("quadric:n={n}"),
            FamilySpec::BlownUpQuadric { n } => format!("blownup-quadric:n={n}"),
        }
    }

    /// Conventional symbol, e.g. `X^5_{1,2}`, `Q^6`, `W^6`.
    pub fn symbol(&self) -> String {
        match *self {
            FamilySpec::BidegreeHypersurface { alpha, beta, .. } => format!("X^{}_{{{alpha},{beta}}}", self.dim()),
            FamilySpec::EvenQuadric { .. } => format!("Q^{}", self.dim()),
            FamilySpec::BlownUpQuadric { .. } => format!("W^{}", self.dim()),
        }
    }

    /// Dimension `n - 1` of the projective space carrying the Chow quotient.
    pub fn base_dim(&self) -> u32 {
        self.n() - 1
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.selector())
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.selector())
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::InvalidSelector(s.to_string());
        let (kind, params) = s.trim().split_once(':').ok_or_else(bad)?;
        let mut n = None;
        let mut alpha = None;
        let mut beta = None;
        for part in params.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: u32 = value.trim().parse().map_err(|_| bad())?;
            let slot = match key.trim() {
                "n" => &mut n,
                "alpha" => &mut alpha,
                "beta" => &mut beta,
                _ => return Err(bad()),
            };
            if slot.replace(value).is_some() {
                return Err(bad());
            }
        }
        let n = n.ok_or_else(bad)?;
        match kind.trim() {
            "hypersurface" => FamilySpec::hypersurface(n, alpha.ok_or_else(bad)?, beta.ok_or_else(bad)?),
            "quadric" if alpha.is_none() && beta.is_none() => FamilySpec::quadric(n),
            "blownup-quadric" if alpha.is_none() && beta.is_none() => FamilySpec::blown_up_quadric(n),
            _ => Err(bad()),
        }
    }
}

fn unit(m: usize, i: usize, scale: i64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); m];
    v[i] = BigInt::from(scale);
    v
}

/// Torus action with the quadric's weights `±e_{i+1}` before removing the `±1` kernel.
pub fn raw_quadric_spec(n: u32) -> Result<TorusActionSpec, FamilyError> {
    let n = n as usize;
    let m = n + 1;
    let mut weights = Vec::new();
    let mut equation = Vec::new();
    for i in 0..=n {
        weights.push(unit(m, i, 1));
        weights.push(unit(m, i, -1));
        let mut e = vec![0; 2 * n + 2];
        e[2 * i] = 1;
        e[2 * i + 1] = 1;
        equation.push(EquationTerm { exponents: e, coefficient: Rational::one() });
    }
    let names = (0..2 * n + 2).map(|k| format!("x{k}")).collect();
    Ok(TorusActionSpec::new(m, vec![2 * n + 1], weights, equation)?.with_names(names)?)
}

/// Torus action used throughout: effective in every case.
pub fn ambient_spec(f: &FamilySpec) -> Result<TorusActionSpec, FamilyError> {
    match *f {
        FamilySpec::BidegreeHypersurface { n, alpha, beta } => {
            let (_, a, b) = reduced_pair(alpha, beta)?;
            let n = n as usize;
            let mut weights: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n + 2);
            weights.push(vec![BigInt::zero(); n]);
            weights.extend((0..n).map(|i| unit(n, i, i64::from(b))));
            weights.push(vec![BigInt::zero(); n]);
            weights.extend((0..n).map(|i| unit(n, i, -i64::from(a))));
            let equation = (0..=n)
                .map(|i| {
                    let mut e = vec![0; 2 * n + 2];
                    e[i] = alpha;
                    e[n + 1 + i] = beta;
                    EquationTerm { exponents: e, coefficient: Rational::one() }
                })
                .collect();
            let names = (0..=n).map(|i| format!("x{i}")).chain((0..=n).map(|i| format!("y{i}"))).collect();
            Ok(TorusActionSpec::new(n, vec![n, n], weights, equation)?.with_names(names)?)
        }
        FamilySpec::EvenQuadric { n } | FamilySpec::BlownUpQuadric { n } => {
            Ok(lattice::make_effective(&raw_quadric_spec(n)?)?)
        }
    }
}

/// Torus-invariant monomial map to the base of the Chow quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    pub monomials: Vec<Vec<u32>>,
    /// Human-readable monomials, e.g. `x1*y1^2`.
    pub display: Vec<String>,
    /// Common torus weight of all monomials.
    #[serde(with = "rational::serde_bigint::vec")]
    pub weight: Vec<BigInt>,
}

fn render_monomial(names: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `(x_k^a y_k^b)_{k=1..n}` for hypersurfaces, `(x_{2k} x_{2k+1})_{k=1..n}` for quadrics.
pub fn chow_quotient_map(f: &FamilySpec) -> Result<MonomialMap, FamilyError> {
    let spec = ambient_spec(f)?;
    let n = f.n() as usize;
    let monomials: Vec<Vec<u32>> = match *f {
        FamilySpec::BidegreeHypersurface { alpha, beta, .. } => {
            let (_, a, b) = reduced_pair(alpha, beta)?;
            (1..=n)
                .map(|k| {
                    let mut e = vec![0; 2 * n + 2];
                    e[k] = a;
                    e[n + 1 + k] = b;
                    e
                })
                .collect()
        }
        FamilySpec::EvenQuadric { .. } | FamilySpec::BlownUpQuadric { .. } => (1..=n)
            .map(|k| {
                let mut e = vec![0; 2 * n + 2];
                e[2 * k] = 1;
                e[2 * k + 1] = 1;
                e
            })
            .collect(),
    };
    let weights: BTreeSet<Vec<BigInt>> = monomials.iter().map(|e| spec.exponent_weight(e)).collect();
    if weights.len() != 1 {
        return Err(FamilyError::Lattice(LatticeError::InvalidSpec("quotient map is not torus-invariant".into())));
    }
    let display = monomials.iter().map(|e| render_monomial(spec.names(), e)).collect();
    Ok(MonomialMap { monomials, display, weight: weights.into_iter().next().unwrap() })
}

/// Number of index pairs both of whose coordinates lie in `pattern`.
fn paired_count(f: &FamilySpec, pattern: &Support) -> usize {
    let n = f.n() as usize;
    (0..=n)
        .filter(|&i| match f {
            FamilySpec::BidegreeHypersurface { .. } => pattern.contains(&i) && pattern.contains(&(n + 1 + i)),
            _ => pattern.contains(&(2 * i)) && pattern.contains(&(2 * i + 1)),
        })
        .count()
}

/// Whether some point of the variety has exactly the coordinates in `pattern` nonzero.
pub fn realizable_support(f: &FamilySpec, pattern: &Support) -> Result<bool, FamilyError> {
    let spec = ambient_spec(f)?;
    spec.check_support(pattern)?;
    Ok(paired_count(f, pattern) != 1)
}

/// All realizable coordinate patterns.
pub fn realizable_patterns(f: &FamilySpec) -> Result<Vec<Support>, FamilyError> {
    let spec = ambient_spec(f)?;
    let k = spec.num_coords();
    if k > 20 {
        return Err(FamilyError::InvalidParameters("too many coordinates to enumerate supports".into()));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let pattern: Support = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if spec.check_support(&pattern).is_ok() && realizable_support(f, &pattern)? {
            out.push(pattern);
        }
    }
    Ok(out)
}

/// Monomial weights and, for each realizable pattern, the indices of the
/// weights it carries; the input of [`crate::polyhedral::git_chambers`].
pub fn chamber_input(f: &FamilySpec) -> Result<(Vec<RationalVector>, Vec<BTreeSet<usize>>), FamilyError> {
    let spec = ambient_spec(f)?;
    let weights = moment::monomial_weights(&spec, &spec.full_support());
    let mut supports = BTreeSet::new();
    for pattern in realizable_patterns(f)? {
        let ws = moment::monomial_weights(&spec, &pattern);
        supports.insert(ws.iter().map(|w| weights.binary_search(w).expect("sub-weight")).collect::<BTreeSet<usize>>());
    }
    Ok((weights, supports.into_iter().collect()))
}

/// `(P^{n-1}, Σ γ_j H_j)` with `H_j = V(z_j)` for `j ≥ 1` and `H_0 = V(z_1 + ... + z_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChowQuotientPair {
    pub base_dim: u32,
    /// Coefficients of `H_0, ..., H_n`.
    #[serde(with = "rational::serde_rational::vec")]
    pub coefficients: Vec<Rational>,
    /// `m_Z` with coefficient `(m_Z - 1)/m_Z`.
    #[serde(with = "rational::serde_bigint::vec")]
    pub orders: Vec<BigInt>,
}

impl ChowQuotientPair {
    fn from_orders(base_dim: u32, orders: Vec<BigInt>) -> Self {
        let coefficients = orders.iter().map(|m| Rational::new(m - BigInt::one(), m.clone())).collect();
        ChowQuotientPair { base_dim, coefficients, orders }
    }

    /// The common coefficient, if all hyperplanes carry the same one.
    pub fn gamma(&self) -> Option<&Rational> {
        let first = self.coefficients.first()?;
        self.coefficients.iter().all(|c| c == first).then_some(first)
    }

    pub fn hyperplane_names(&self) -> Vec<String> {
        (0..self.coefficients.len()).map(|j| format!("H_{j}")).collect()
    }

    pub fn base(&self) -> String {
        format!("P^{}", self.base_dim)
    }
}

/// Closed form: `γ = max((a-1)/a, (b-1)/b)` for hypersurfaces, `1/2` for the
/// blown-up quadric and `0` for the quadric.
pub fn chow_boundary(f: &FamilySpec) -> Result<ChowQuotientPair, FamilyError> {
    let m: u32 = match *f {
        FamilySpec::BidegreeHypersurface { alpha, beta, .. } => {
            let (_, a, b) = reduced_pair(alpha, beta)?;
            a.max(b)
        }
        FamilySpec::EvenQuadric { .. } => 1,
        FamilySpec::BlownUpQuadric { .. } => 2,
    };
    let count = f.n() as usize + 1;
    Ok(ChowQuotientPair::from_orders(f.base_dim(), vec![BigInt::from(m); count]))
}

/// A component of the preimage of a base hyperplane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryStratum {
    pub hyperplane: usize,
    pub description: String,
    pub stabilizer: StabilizerGroup,
}

/// Generic stabilizer of the exceptional divisor over `{x_{2j} = x_{2j+1} = 0}`.
///
/// The blowup chart coordinates `(u : v)` satisfy `deg u = deg v + 2 e_{j+1}`;
/// the divisor is the stratum of `P^{2n+1} x P^1` with `x_{2j}, x_{2j+1}` zero
/// and `u, v` nonzero, for the effective torus.
pub fn exc_divisor_stabilizer_at(f: &FamilySpec, j: usize) -> Result<StabilizerGroup, FamilyError> {
    let FamilySpec::BlownUpQuadric { n } = *f else {
        return Err(FamilyError::WrongKind(format!("{} has no exceptional divisors", f.symbol())));
    };
    let n = n as usize;
    if j > n {
        return Err(FamilyError::InvalidParameters(format!("no exceptional divisor E_{j}")));
    }
    let reduction = lattice::effective_reduction(&raw_quadric_spec(n as u32)?)?;
    let q = &reduction.spec;
    let shift = reduction
        .express(&unit(n + 1, j, 2))
        .ok_or_else(|| LatticeError::InvalidSpec("exceptional weight outside the effective lattice".into()))?;
    let mut weights = q.weights().to_vec();
    weights.push(shift);
    weights.push(vec![BigInt::zero(); q.torus_rank()]);
    let chart = TorusActionSpec::new(q.torus_rank(), vec![2 * n + 1, 1], weights, Vec::new())?;
    let support: Support = (0..2 * n + 4).filter(|&k| k != 2 * j && k != 2 * j + 1).collect();
    Ok(lattice::stratum_stabilizer(&chart, &support)?)
}

pub fn exc_divisor_stabilizer(f: &FamilySpec) -> Result<StabilizerGroup, FamilyError> {
    exc_divisor_stabilizer_at(f, 0)
}

/// Components of the preimages of `H_0, ..., H_n` with their generic stabilizers.
pub fn boundary_strata(f: &FamilySpec) -> Result<Vec<BoundaryStratum>, FamilyError> {
    let spec = ambient_spec(f)?;
    let n = f.n() as usize;
    let names = spec.names();
    let mut out = Vec::new();
    for j in 0..=n {
        let omitted: [usize; 2] = match f {
            FamilySpec::BidegreeHypersurface { .. } => [j, n + 1 + j],
            _ => [2 * j, 2 * j + 1],
        };
        for k in omitted {
            let support: Support = spec.full_support().into_iter().filter(|&i| i != k).collect();
            out.push(BoundaryStratum {
                hyperplane: j,
                description: format!("{} = 0", names[k]),
                stabilizer: lattice::stratum_stabilizer(&spec, &support)?,
            });
        }
        if let FamilySpec::BlownUpQuadric { .. } = f {
            out.push(BoundaryStratum {
                hyperplane: j,
                description: format!("exceptional divisor E_{j} over {} = {} = 0", names[2 * j], names[2 * j + 1]),
                stabilizer: exc_divisor_stabilizer_at(f, j)?,
            });
        }
    }
    Ok(out)
}

/// Recomputes the pair from stabilizer orders: `m_Z` is the largest order over
/// the components above `Z`.
pub fn boundary_from_stabilizers(f: &FamilySpec) -> Result<ChowQuotientPair, FamilyError> {
    let strata = boundary_strata(f)?;
    let orders = (0..=f.n() as usize)
        .map(|j| strata.iter().filter(|s| s.hyperplane == j).map(|s| s.stabilizer.order()).max().unwrap_or_else(BigInt::one))
        .collect();
    Ok(ChowQuotientPair::from_orders(f.base_dim(), orders))
}

/// Topological type of the quotient by the compact torus, for hypersurfaces.
pub fn quotient_space_report(f: &FamilySpec) -> Result<String, FamilyError> {
    match *f {
        FamilySpec::BidegreeHypersurface { n, .. } => {
            let k = superscript(n - 1);
            Ok(format!("S{k} ∗ CP{k}"))
        }
        _ => Err(FamilyError::WrongKind(format!("no quotient-space description available for {}", f.symbol()))),
    }
}
