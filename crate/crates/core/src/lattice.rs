//! Integer lattices attached to diagonal torus actions on products of
//! projective spaces.
//!
//! A torus `T = (C*)^m` acts on the homogeneous coordinates of
//! `P^{n_1} x ... x P^{n_k}` by characters (weights in `Z^m`). Because each
//! factor is projective, only weight *differences* inside a factor matter: we
//! fix the first supported coordinate of every factor as reference. The
//! generic stabilizer of a coordinate stratum is then `Hom(Z^m / L, C*)` with
//! `L` the span of the differences, and its component group is read off the
//! Smith normal form.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, Row};
use crate::rational::{self, Rational};

/// Input entries larger than this many bits are rejected.
pub const DEFAULT_ENTRY_BITS: u64 = 64;
/// Intermediate values during normal-form reductions may grow up to this many bits.
pub const DEFAULT_WORKING_BITS: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("arithmetic overflow guard exceeded: {bits} bits > limit {limit}")]
    Overflow { bits: u64, limit: u64 },
    #[error("matrix must be nonempty")]
    EmptyMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid torus action: {0}")]
    InvalidSpec(String),
    #[error("invalid stratum: factor {factor} has no supported coordinate")]
    InvalidStratum { factor: usize },
    #[error("permutation is not compatible with the torus action: {0}")]
    NotEquivariant(String),
}

fn guard(x: &BigInt, limit: u64) -> Result<(), LatticeError> {
    let bits = x.bits();
    if bits > limit {
        Err(LatticeError::Overflow { bits, limit })
    } else {
        Ok(())
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        Self::with_entry_limit(rows, cols, data, DEFAULT_ENTRY_BITS)
    }

    pub fn with_entry_limit(rows: usize, cols: usize, data: Vec<BigInt>, max_bits: u64) -> Result<Self, LatticeError> {
        if rows == 0 || cols == 0 {
            return Err(LatticeError::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(LatticeError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for x in &data {
            guard(x, max_bits)?;
        }
        Ok(IntegerMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_big_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LatticeError::DimensionMismatch("ragged rows".into()));
        }
        let nrows = rows.len();
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntegerMatrix { rows: n, cols: n, data }
    }

    fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    *out.get_mut(i, j) += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    *m.get_mut(i, j) = v;
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `A = U · D · V` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries (all positive).
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithForm, LatticeError> {
    smith_normal_form_with_limit(a, DEFAULT_WORKING_BITS)
}

pub fn smith_normal_form_with_limit(a: &IntegerMatrix, max_bits: u64) -> Result<SmithForm, LatticeError> {
    for x in &a.data {
        guard(x, max_bits)?;
    }
    let mut calc = SnfCalc {
        d: a.clone(),
        u: IntegerMatrix::identity(a.rows),
        v: IntegerMatrix::identity(a.cols),
        limit: max_bits,
    };
    calc.run()?;
    Ok(SmithForm { u: calc.u, d: calc.d, v: calc.v })
}

/// Keeps `A = U · D · V` invariant while `D` is reduced.
struct SnfCalc {
    d: IntegerMatrix,
    u: IntegerMatrix,
    v: IntegerMatrix,
    limit: u64,
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let c = self.d.cols;
        for k in 0..c {
            self.d.data.swap(i * c + k, j * c + k);
        }
        let r = self.u.rows;
        let uc = self.u.cols;
        for k in 0..r {
            self.u.data.swap(k * uc + i, k * uc + j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let c = self.d.cols;
        for k in 0..self.d.rows {
            self.d.data.swap(k * c + i, k * c + j);
        }
        let vc = self.v.cols;
        for k in 0..vc {
            self.v.data.swap(i * vc + k, j * vc + k);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) -> Result<(), LatticeError> {
        for j in 0..self.d.cols {
            let delta = k * self.d.get(src, j);
            let x = self.d.get_mut(dst, j);
            *x += delta;
            guard(x, self.limit)?;
        }
        for i in 0..self.u.rows {
            let delta = k * self.u.get(i, dst);
            let x = self.u.get_mut(i, src);
            *x -= delta;
            guard(x, self.limit)?;
        }
        Ok(())
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) -> Result<(), LatticeError> {
        for i in 0..self.d.rows {
            let delta = k * self.d.get(i, src);
            let x = self.d.get_mut(i, dst);
            *x += delta;
            guard(x, self.limit)?;
        }
        for j in 0..self.v.cols {
            let delta = k * self.v.get(dst, j);
            let x = self.v.get_mut(src, j);
            *x -= delta;
            guard(x, self.limit)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.d.cols {
            let x = self.d.get_mut(i, j);
            *x = -std::mem::take(x);
        }
        for k in 0..self.u.rows {
            let x = self.u.get_mut(k, i);
            *x = -std::mem::take(x);
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows {
            for j in t..self.d.cols {
                let x = self.d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) -> Result<(), LatticeError> {
        let (rows, cols) = (self.d.rows, self.d.cols);
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.smallest_in(t) else {
                    return Ok(());
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.d.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..rows {
                    let q = self.d.get(i, t) / &pivot;
                    if !q.is_zero() {
                        self.add_row(i, t, &-q)?;
                    }
                    clean &= self.d.get(i, t).is_zero();
                }
                for j in t + 1..cols {
                    let q = self.d.get(t, j) / &pivot;
                    if !q.is_zero() {
                        self.add_col(j, t, &-q)?;
                    }
                    clean &= self.d.get(t, j).is_zero();
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.d.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one())?,
                    None => break,
                }
            }
            if self.d.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
        Ok(())
    }
}

/// Row-style Hermite normal form basis of the lattice spanned by `rows`.
pub fn hermite_basis(rows: &[Vec<BigInt>], ncols: usize) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, p);
            if nonzero.len() == 1 {
                break;
            }
            for i in r + 1..m.len() {
                let q = &m[i][c] / &m[r][c];
                if q.is_zero() {
                    continue;
                }
                for j in 0..ncols {
                    let delta = &q * &m[r][j];
                    m[i][j] -= delta;
                    guard(&m[i][j], DEFAULT_WORKING_BITS)?;
                }
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if q.is_zero() {
                continue;
            }
            for j in 0..ncols {
                let delta = &q * &m[r][j];
                m[i][j] -= delta;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    Ok(m)
}

/// Finite abelian group `Z/d_1 x Z/d_2 x ...` (times a torus of `continuous_rank`
/// when the stabilizer is not finite).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizerGroup {
    /// Invariant factors greater than one, `d_1 | d_2 | ...`.
    #[serde(with = "rational::serde_bigint::vec")]
    pub invariant_factors: Vec<BigInt>,
    /// Dimension of the identity component.
    pub continuous_rank: usize,
}

impl StabilizerGroup {
    pub fn trivial() -> Self {
        StabilizerGroup { invariant_factors: Vec::new(), continuous_rank: 0 }
    }

    /// Order of the component group.
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.continuous_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.is_finite() && self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Number of elements whose order divides `k` (k-torsion of the whole group).
    pub fn count_k_torsion(&self, k: u64) -> BigInt {
        let k = BigInt::from(k);
        let finite: BigInt = self.invariant_factors.iter().map(|d| d.gcd(&k)).product();
        finite * num_traits::pow(k, self.continuous_rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationTerm {
    pub exponents: Vec<u32>,
    #[serde(with = "rational::serde_rational")]
    pub coefficient: Rational,
}

/// Coordinate indices (global numbering across factors) that are nonzero.
pub type Support = BTreeSet<usize>;

/// Diagonal torus action on a product of projective spaces, optionally
/// restricted to a hypersurface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusActionSpec {
    torus_rank: usize,
    factors: Vec<usize>,
    #[serde(with = "rational::serde_bigint::matrix")]
    weights: Vec<Vec<BigInt>>,
    equation: Vec<EquationTerm>,
    names: Vec<String>,
}

impl TorusActionSpec {
    /// `factors[f]` is the dimension `n_f` of the f-th projective factor;
    /// coordinates are numbered factor by factor.
    pub fn new(
        torus_rank: usize,
        factors: Vec<usize>,
        weights: Vec<Vec<BigInt>>,
        equation: Vec<EquationTerm>,
    ) -> Result<Self, LatticeError> {
        let num_coords: usize = factors.iter().map(|n| n + 1).sum();
        if factors.is_empty() {
            return Err(LatticeError::InvalidSpec("no projective factors".into()));
        }
        if weights.len() != num_coords {
            return Err(LatticeError::InvalidSpec(format!(
                "{} weights for {num_coords} coordinates",
                weights.len()
            )));
        }
        for (k, w) in weights.iter().enumerate() {
            if w.len() != torus_rank {
                return Err(LatticeError::InvalidSpec(format!("weight of coordinate {k} has length {}", w.len())));
            }
            for x in w {
                guard(x, DEFAULT_ENTRY_BITS)?;
            }
        }
        let names = (0..num_coords).map(|k| format!("z{k}")).collect();
        let spec = TorusActionSpec { torus_rank, factors, weights, equation, names };
        spec.validate_equation()?;
        Ok(spec)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, LatticeError> {
        if names.len() != self.num_coords() {
            return Err(LatticeError::InvalidSpec("wrong number of coordinate names".into()));
        }
        self.names = names;
        Ok(self)
    }

    fn validate_equation(&self) -> Result<(), LatticeError> {
        let mut degree: Option<Vec<u32>> = None;
        let mut weight: Option<Vec<BigInt>> = None;
        for term in &self.equation {
            if term.exponents.len() != self.num_coords() {
                return Err(LatticeError::InvalidSpec("equation exponent vector has wrong length".into()));
            }
            if term.coefficient.is_zero() {
                return Err(LatticeError::InvalidSpec("equation term with zero coefficient".into()));
            }
            let multidegree: Vec<u32> = (0..self.factors.len())
                .map(|f| self.factor_range(f).map(|k| term.exponents[k]).sum())
                .collect();
            let w = self.exponent_weight(&term.exponents);
            if degree.get_or_insert_with(|| multidegree.clone()) != &multidegree {
                return Err(LatticeError::InvalidSpec("equation is not multihomogeneous".into()));
            }
            if weight.get_or_insert_with(|| w.clone()) != &w {
                return Err(LatticeError::InvalidSpec("equation is not homogeneous for the torus".into()));
            }
        }
        Ok(())
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_coords(&self) -> usize {
        self.factors.iter().map(|n| n + 1).sum()
    }

    pub fn factor_range(&self, f: usize) -> Range<usize> {
        let start: usize = self.factors[..f].iter().map(|n| n + 1).sum();
        start..start + self.factors[f] + 1
    }

    pub fn factor_of(&self, coord: usize) -> usize {
        (0..self.factors.len()).find(|&f| self.factor_range(f).contains(&coord)).expect("coordinate out of range")
    }

    pub fn weight(&self, coord: usize) -> &[BigInt] {
        &self.weights[coord]
    }

    pub fn weights(&self) -> &[Vec<BigInt>] {
        &self.weights
    }

    pub fn equation(&self) -> &[EquationTerm] {
        &self.equation
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn full_support(&self) -> Support {
        (0..self.num_coords()).collect()
    }

    /// Torus weight of a monomial given by its exponent vector.
    pub fn exponent_weight(&self, exponents: &[u32]) -> Vec<BigInt> {
        let mut w = vec![BigInt::zero(); self.torus_rank];
        for (k, &e) in exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for (wi, ki) in w.iter_mut().zip(&self.weights[k]) {
                *wi += ki * BigInt::from(e);
            }
        }
        w
    }

    /// Number of equation terms none of whose variables vanish on the support.
    pub fn surviving_terms(&self, support: &Support) -> usize {
        self.equation
            .iter()
            .filter(|t| t.exponents.iter().enumerate().all(|(k, &e)| e == 0 || support.contains(&k)))
            .count()
    }

    /// Rows `w_k - w_ref(f)` over supported coordinates, `ref(f)` the first
    /// supported coordinate of factor `f`.
    pub fn weight_difference_rows(&self, support: &Support) -> Result<Vec<Vec<BigInt>>, LatticeError> {
        let mut rows = Vec::new();
        for f in 0..self.factors.len() {
            let supported: Vec<usize> = self.factor_range(f).filter(|k| support.contains(k)).collect();
            let Some(&reference) = supported.first() else {
                return Err(LatticeError::InvalidStratum { factor: f });
            };
            for &k in &supported[1..] {
                rows.push(self.weights[k].iter().zip(&self.weights[reference]).map(|(a, b)| a - b).collect());
            }
        }
        Ok(rows)
    }

    pub fn check_support(&self, support: &Support) -> Result<(), LatticeError> {
        if let Some(&k) = support.iter().find(|&&k| k >= self.num_coords()) {
            return Err(LatticeError::DimensionMismatch(format!("coordinate {k} out of range")));
        }
        for f in 0..self.factors.len() {
            if !self.factor_range(f).any(|k| support.contains(&k)) {
                return Err(LatticeError::InvalidStratum { factor: f });
            }
        }
        Ok(())
    }

    /// Same action with weights transformed by `w -> g · w`.
    pub fn change_basis(&self, g: &IntegerMatrix) -> Result<TorusActionSpec, LatticeError> {
        if g.cols() != self.torus_rank {
            return Err(LatticeError::DimensionMismatch("basis change has wrong width".into()));
        }
        let weights = self.weights.iter().map(|w| g.apply(w)).collect();
        TorusActionSpec::new(g.rows(), self.factors.clone(), weights, self.equation.clone())?.with_names(self.names.clone())
    }
}

/// Generic stabilizer of the locus where exactly the coordinates in `support` are nonzero.
pub fn stratum_stabilizer(spec: &TorusActionSpec, support: &Support) -> Result<StabilizerGroup, LatticeError> {
    spec.check_support(support)?;
    let rows: Vec<Vec<BigInt>> =
        spec.weight_difference_rows(support)?.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let m = spec.torus_rank();
    if rows.is_empty() || m == 0 {
        return Ok(StabilizerGroup { invariant_factors: Vec::new(), continuous_rank: m });
    }
    let snf = smith_normal_form(&IntegerMatrix::from_big_rows(rows)?)?;
    let diag = snf.nonzero_diagonal();
    Ok(StabilizerGroup {
        continuous_rank: m - diag.len(),
        invariant_factors: diag.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

/// Generic stabilizer of the action on the ambient product (all coordinates nonzero).
pub fn global_stabilizer(spec: &TorusActionSpec) -> Result<StabilizerGroup, LatticeError> {
    stratum_stabilizer(spec, &spec.full_support())
}

/// The action of `T' = T / ker` together with the embedding of its character
/// lattice into the original one.
#[derive(Clone, Debug)]
pub struct EffectiveTorus {
    pub spec: TorusActionSpec,
    /// Rows form a basis of the character lattice of `T'` inside `Z^m`.
    pub basis: Vec<Vec<BigInt>>,
}

impl EffectiveTorus {
    /// Coordinates of a character of `T` trivial on the kernel, in the basis of `T'`.
    pub fn express(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.basis.is_empty() {
            return w.iter().all(Zero::is_zero).then(Vec::new);
        }
        let rows: Vec<Row> = self.basis.iter().map(|b| linalg::to_rational_row(b)).collect();
        let c = linalg::solve_left(&rows, &linalg::to_rational_row(w))?;
        if !c.iter().all(rational::is_integer_valued) {
            return None;
        }
        let c: Vec<BigInt> = c.into_iter().map(|q| q.to_integer()).collect();
        let back: Vec<BigInt> = (0..w.len()).map(|j| c.iter().zip(&self.basis).map(|(ci, b)| ci * &b[j]).sum()).collect();
        (back == w).then_some(c)
    }
}

/// Quotients out the kernel of the action. Weights are shifted so the
/// reference coordinate of each factor has weight zero and then written in a
/// Hermite basis of the lattice spanned by weight differences.
pub fn effective_reduction(spec: &TorusActionSpec) -> Result<EffectiveTorus, LatticeError> {
    let m = spec.torus_rank();
    let diffs = spec.weight_difference_rows(&spec.full_support())?;
    let basis = hermite_basis(&diffs, m)?;
    let reduced = EffectiveTorus { spec: spec.clone(), basis };
    let mut weights = Vec::with_capacity(spec.num_coords());
    for f in 0..spec.factors().len() {
        let range = spec.factor_range(f);
        let reference = spec.weight(range.start).to_vec();
        for k in range {
            let shifted: Vec<BigInt> = spec.weight(k).iter().zip(&reference).map(|(a, b)| a - b).collect();
            let c = reduced
                .express(&shifted)
                .ok_or_else(|| LatticeError::InvalidSpec("weight difference outside its own span".into()))?;
            weights.push(c);
        }
    }
    let new_spec = TorusActionSpec::new(reduced.basis.len(), spec.factors().to_vec(), weights, spec.equation().to_vec())?
        .with_names(spec.names().to_vec())?;
    Ok(EffectiveTorus { spec: new_spec, basis: reduced.basis })
}

pub fn make_effective(spec: &TorusActionSpec) -> Result<TorusActionSpec, LatticeError> {
    effective_reduction(spec).map(|e| e.spec)
}

/// Matrix `phi` on characters with `phi(w_k - w_ref) = w_{pi(k)} - w_{pi(ref)}` in
/// every factor, i.e. the action on `M` induced by the coordinate permutation `pi`
/// (which must normalize the torus). Requires an effective action.
pub fn induced_character_action(spec: &TorusActionSpec, perm: &[usize]) -> Result<IntegerMatrix, LatticeError> {
    let n = spec.num_coords();
    if perm.len() != n || perm.iter().collect::<BTreeSet<_>>().len() != n || perm.iter().any(|&p| p >= n) {
        return Err(LatticeError::NotEquivariant("not a permutation of the coordinates".into()));
    }
    let m = spec.torus_rank();
    let mut sources: Vec<Row> = Vec::new();
    let mut targets: Vec<Row> = Vec::new();
    for f in 0..spec.factors().len() {
        let range = spec.factor_range(f);
        let image_factor = spec.factor_of(perm[range.start]);
        if range.clone().any(|k| spec.factor_of(perm[k]) != image_factor) {
            return Err(LatticeError::NotEquivariant("permutation mixes projective factors".into()));
        }
        let r = range.start;
        for k in range {
            let d: Vec<BigInt> = spec.weight(k).iter().zip(spec.weight(r)).map(|(a, b)| a - b).collect();
            let t: Vec<BigInt> = spec.weight(perm[k]).iter().zip(spec.weight(perm[r])).map(|(a, b)| a - b).collect();
            sources.push(linalg::to_rational_row(&d));
            targets.push(linalg::to_rational_row(&t));
        }
    }
    if linalg::rank(&sources, m) != m {
        return Err(LatticeError::NotEquivariant("weight differences do not span the character lattice".into()));
    }
    let mut phi_rows: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for j in 0..m {
        let column: Vec<Rational> = targets.iter().map(|t| t[j].clone()).collect();
        let row = linalg::solve_unique(&sources, &column)
            .ok_or_else(|| LatticeError::NotEquivariant("no linear map realizes the permutation".into()))?;
        if !row.iter().all(rational::is_integer_valued) {
            return Err(LatticeError::NotEquivariant("induced map is not integral".into()));
        }
        phi_rows.push(row.into_iter().map(|q| q.to_integer()).collect());
    }
    let phi = IntegerMatrix::from_big_rows(phi_rows)?;
    if !phi.determinant()?.abs().is_one() {
        return Err(LatticeError::NotEquivariant("induced map is not unimodular".into()));
    }
    Ok(phi)
}

/// True iff the group generated by `generators` fixes only `0` in `M ⊗ Q`.
pub fn fixes_only_origin(rank: usize, generators: &[IntegerMatrix]) -> bool {
    let mut rows: Vec<Row> = Vec::new();
    for g in generators {
        for i in 0..g.rows() {
            let mut r = linalg::to_rational_row(g.row(i));
            r[i] -= Rational::one();
            rows.push(r);
        }
    }
    linalg::rank(&rows, rank) == rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(a: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(&s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), a);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        let diag = s.nonzero_diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_of_diag_2_3_is_1_6() {
        let a = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let s = check_snf(&a);
        assert_eq!(s.d.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn snf_of_identity_is_identity() {
        let a = IntegerMatrix::identity(3);
        assert_eq!(check_snf(&a).d, a);
    }

    #[test]
    fn snf_of_single_row_is_gcd() {
        let a = IntegerMatrix::from_rows(&[vec![12, 18]]).unwrap();
        let s = check_snf(&a);
        assert_eq!(s.d.to_rows(), vec![big(&[6, 0])]);
    }

    #[test]
    fn snf_overflow_guard_reports_error() {
        let a = IntegerMatrix::from_rows(&[vec![1 << 40, 3], vec![7, 1 << 41]]).unwrap();
        assert!(matches!(smith_normal_form_with_limit(&a, 16), Err(LatticeError::Overflow { .. })));
        assert!(matches!(
            IntegerMatrix::with_entry_limit(1, 1, vec![BigInt::from(1u64 << 20)], 8),
            Err(LatticeError::Overflow { .. })
        ));
    }

    #[test]
    fn empty_matrix_is_rejected() {
        assert_eq!(IntegerMatrix::from_rows(&[]), Err(LatticeError::EmptyMatrix));
    }

    #[test]
    fn determinant_matches_hand_computation() {
        let a = IntegerMatrix::from_rows(&[vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, 1]]).unwrap();
        // 2*(3-20) + 1*(1-0) = -33
        assert_eq!(a.determinant().unwrap(), BigInt::from(-33));
    }

    #[test]
    fn hermite_basis_of_even_sum_lattice() {
        let rows = vec![big(&[-2, 0]), big(&[-1, 1]), big(&[-1, -1])];
        let b = hermite_basis(&rows, 2).unwrap();
        assert_eq!(b, vec![big(&[1, 1]), big(&[0, 2])]);
    }

    fn single_factor(weights: &[i64]) -> TorusActionSpec {
        TorusActionSpec::new(1, vec![weights.len() - 1], weights.iter().map(|&w| big(&[w])).collect(), vec![]).unwrap()
    }

    #[test]
    fn trivial_weights_have_trivial_component_group() {
        let spec = TorusActionSpec::new(2, vec![2], vec![big(&[0, 0]); 3], vec![]).unwrap();
        let g = global_stabilizer(&spec).unwrap();
        assert_eq!(g.order(), BigInt::one());
        assert_eq!(g.continuous_rank, 2);
        assert_eq!(make_effective(&spec).unwrap().torus_rank(), 0);
    }

    #[test]
    fn even_weights_are_halved() {
        let spec = single_factor(&[0, 2, 4]);
        assert_eq!(global_stabilizer(&spec).unwrap().invariant_factors, big(&[2]));
        let eff = make_effective(&spec).unwrap();
        assert_eq!(eff.weights(), &[big(&[0]), big(&[1]), big(&[2])]);
        assert!(global_stabilizer(&eff).unwrap().is_trivial());
    }

    #[test]
    fn effective_spec_is_left_alone() {
        let spec = single_factor(&[0, 1, 3]);
        assert_eq!(make_effective(&spec).unwrap(), spec);
    }

    #[test]
    fn stratum_without_reference_factor_is_rejected() {
        let spec = single_factor(&[0, 1]);
        assert!(matches!(stratum_stabilizer(&spec, &Support::new()), Err(LatticeError::InvalidStratum { factor: 0 })));
    }

    #[test]
    fn inhomogeneous_equation_is_rejected() {
        let eq = vec![
            EquationTerm { exponents: vec![2, 0, 0], coefficient: Rational::one() },
            EquationTerm { exponents: vec![0, 1, 1], coefficient: Rational::one() },
        ];
        let weights = vec![big(&[0]), big(&[1]), big(&[2])];
        let err = TorusActionSpec::new(1, vec![2], weights.clone(), eq).unwrap_err();
        assert!(matches!(err, LatticeError::InvalidSpec(_)));
        let eq = vec![
            EquationTerm { exponents: vec![1, 0, 1], coefficient: Rational::one() },
            EquationTerm { exponents: vec![0, 2, 0], coefficient: Rational::one() },
        ];
        assert!(TorusActionSpec::new(1, vec![2], weights, eq).is_ok());
    }

    #[test]
    fn induced_action_of_swap_on_symmetric_weights() {
        // P^1 with weights 0, 1: swapping the coordinates inverts the torus.
        let spec = single_factor(&[0, 1]);
        let phi = induced_character_action(&spec, &[1, 0]).unwrap();
        assert_eq!(phi.to_rows(), vec![big(&[-1])]);
        assert!(fixes_only_origin(1, &[phi]));
        assert!(!fixes_only_origin(1, &[IntegerMatrix::identity(1)]));
    }

    #[test]
    fn k_torsion_count() {
        let g = StabilizerGroup { invariant_factors: big(&[2, 4]), continuous_rank: 1 };
        assert_eq!(g.count_k_torsion(12), BigInt::from(2 * 4 * 12));
        assert_eq!(g.count_k_torsion(3), BigInt::from(3));
    }
}
