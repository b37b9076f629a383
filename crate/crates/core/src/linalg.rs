//! Small dense linear algebra over the rationals.
//!
//! Everything here is exact; the matrices involved are at most a few dozen
//! rows by four columns, so plain Gauss-Jordan elimination is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type Row = Vec<Rational>;

/// Reduced row echelon form. Returns the reduced nonzero rows and pivot columns.
pub fn rref(rows: &[Row], ncols: usize) -> (Vec<Row>, Vec<usize>) {
    let mut m: Vec<Row> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Row], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace(rows: &[Row], ncols: usize) -> Vec<Row> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a · x = b` when the solution exists and is unique.
pub fn solve_unique(a: &[Row], b: &[Rational]) -> Option<Row> {
    let ncols = a.first().map_or(0, Vec::len);
    let augmented: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&augmented, ncols + 1);
    if pivots.contains(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some(r.iter().map(|row| row[ncols].clone()).collect())
}

/// Solves `x · a = b` for a row vector `x` (the rows of `a` need not be independent;
/// any solution is returned).
pub fn solve_left(a: &[Row], b: &[Rational]) -> Option<Row> {
    let nrows = a.len();
    let ncols = b.len();
    // Transpose: a^T x^T = b^T.
    let augmented: Vec<Row> = (0..ncols)
        .map(|j| {
            let mut r: Row = a.iter().map(|row| row[j].clone()).collect();
            r.push(b[j].clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&augmented, nrows + 1);
    if pivots.contains(&nrows) {
        return None;
    }
    let mut x = vec![Rational::zero(); nrows];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[nrows].clone();
    }
    Some(x)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Row {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|n| n / &g).collect()
}

/// Sign so that the first nonzero entry is positive.
pub fn leading_sign(v: &[BigInt]) -> i32 {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -1,
        Some(_) => 1,
        None => 0,
    }
}

pub fn to_rational_row(v: &[BigInt]) -> Row {
    v.iter().map(|n| Rational::from_integer(n.clone())).collect()
}

/// Affine hull of a finite point set: `origin + span(directions)`, and equations
/// `<normal, x> = offset` cutting it out.
#[derive(Debug, Clone)]
pub struct AffineHull {
    pub origin: Row,
    pub directions: Vec<Row>,
    pub equations: Vec<(Vec<BigInt>, Rational)>,
}

impl AffineHull {
    pub fn of(points: &[Row], ambient: usize) -> AffineHull {
        let origin = points.first().cloned().unwrap_or_else(|| vec![Rational::zero(); ambient]);
        let diffs: Vec<Row> = points.iter().skip(1).map(|p| sub(p, &origin)).collect();
        let (directions, _) = rref(&diffs, ambient);
        let mut equations: Vec<(Vec<BigInt>, Rational)> = nullspace(&directions, ambient)
            .iter()
            .map(|n| {
                let mut normal = primitive_integer(n);
                if leading_sign(&normal) < 0 {
                    normal = normal.into_iter().map(|x| -x).collect();
                }
                let offset = dot(&to_rational_row(&normal), &origin);
                (normal, offset)
            })
            .collect();
        equations.sort();
        AffineHull { origin, directions, equations }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Intrinsic coordinates of a point lying on the hull.
    pub fn coordinates(&self, x: &[Rational]) -> Option<Row> {
        if self.directions.is_empty() {
            return if x == self.origin.as_slice() { Some(Vec::new()) } else { None };
        }
        solve_left(&self.directions, &sub(x, &self.origin)).filter(|t| &self.embed(t) == x)
    }

    pub fn embed(&self, t: &[Rational]) -> Row {
        let mut x = self.origin.clone();
        for (ti, d) in t.iter().zip(&self.directions) {
            for (xj, dj) in x.iter_mut().zip(d) {
                *xj += ti * dj;
            }
        }
        x
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equations.iter().all(|(n, c)| &dot(&to_rational_row(n), x) == c)
    }
}
