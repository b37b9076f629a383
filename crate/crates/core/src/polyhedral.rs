//! Exact rational convex geometry at desk scale: convex hulls with both
//! representations, point location, and the chamber decomposition of a
//! weight polytope.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{self, AffineHull, Row};
use crate::rational::{self, ParseRationalError, Rational};

/// Largest ambient dimension accepted by [`convex_hull`].
pub const MAX_HULL_DIM: usize = 4;
/// Largest torus rank accepted by [`git_chambers`].
pub const MAX_CHAMBER_RANK: usize = 3;
/// Largest number of weights accepted by [`git_chambers`].
pub const MAX_CHAMBER_WEIGHTS: usize = 24;
const MAX_CELLS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedralError {
    #[error("at least one point is required")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient dimension {dim} exceeds the limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("input too large: {0}")]
    ScaleGuard(String),
    #[error("invalid support: {0}")]
    InvalidSupport(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector(v.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        RationalVector(linalg::to_rational_row(v))
    }

    pub fn zero(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(rational::rational_to_f64).collect()
    }
}

impl FromStr for RationalVector {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        rational::parse_rational_list(s).map(RationalVector)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        rational::serde_rational::vec::serialize(&self.0, serializer)
    }
}

/// `<normal, x> = offset` (equation) or `<normal, x> <= offset` (facet).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    pub normal: Vec<BigInt>,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn value(&self, x: &[Rational]) -> Rational {
        linalg::dot(&linalg::to_rational_row(&self.normal), x) - &self.offset
    }

    fn value_f64(&self, x: &[f64]) -> f64 {
        let n: Vec<f64> = self.normal.iter().map(|v| rational::rational_to_f64(&Rational::from_integer(v.clone()))).collect();
        let norm = n.iter().map(|v| v * v).sum::<f64>().sqrt();
        let raw: f64 = n.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - rational::rational_to_f64(&self.offset);
        raw / norm
    }
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Hyperplane", 2)?;
        let normal: Vec<String> =
            self.normal.iter().map(|n| rational::format_rational(&Rational::from_integer(n.clone()))).collect();
        s.serialize_field("normal", &normal)?;
        s.serialize_field("offset", &rational::format_rational(&self.offset))?;
        s.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    /// In the relative interior.
    Interior,
    /// On the relative boundary.
    Boundary,
    Outside,
}

/// A polytope in `Q^m`, given by its vertices and by an H-representation
/// relative to its affine hull.
///
/// Facet normals are primitive integer vectors pointing outward and lying in
/// the linear span of the polytope's edge directions, so they are canonical.
/// Equation normals are primitive with positive leading entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polytope {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<RationalVector>,
    pub equations: Vec<Hyperplane>,
    pub facets: Vec<Hyperplane>,
}

impl Polytope {
    fn check_dim(&self, found: usize) -> Result<(), PolyhedralError> {
        if found != self.ambient_dim {
            return Err(PolyhedralError::DimensionMismatch { expected: self.ambient_dim, found });
        }
        Ok(())
    }

    /// Classification relative to the affine hull of the polytope.
    pub fn locate(&self, u: &RationalVector) -> Result<Location, PolyhedralError> {
        self.check_dim(u.dim())?;
        if self.equations.iter().any(|h| !h.value(&u.0).is_zero()) {
            return Ok(Location::Outside);
        }
        let mut on_boundary = false;
        for f in &self.facets {
            let v = f.value(&u.0);
            if v.is_positive() {
                return Ok(Location::Outside);
            }
            on_boundary |= v.is_zero();
        }
        Ok(if on_boundary { Location::Boundary } else { Location::Interior })
    }

    /// Closed membership.
    pub fn contains(&self, u: &RationalVector) -> Result<bool, PolyhedralError> {
        Ok(self.locate(u)? != Location::Outside)
    }

    /// Largest Euclidean violation of any equation or facet by a floating-point point.
    pub fn violation_f64(&self, x: &[f64]) -> Result<f64, PolyhedralError> {
        self.check_dim(x.len())?;
        let eq = self.equations.iter().map(|h| h.value_f64(x).abs());
        let fa = self.facets.iter().map(|h| h.value_f64(x).max(0.0));
        Ok(eq.chain(fa).fold(0.0, f64::max))
    }

    /// Closed membership with slack, for points computed in floating point.
    pub fn contains_f64(&self, x: &[f64], slack: f64) -> Result<bool, PolyhedralError> {
        Ok(self.violation_f64(x)? <= slack)
    }

    pub fn barycenter(&self) -> RationalVector {
        let k = rational::int(self.vertices.len() as i64);
        let mut c = vec![Rational::zero(); self.ambient_dim];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(&v.0) {
                *ci += vi;
            }
        }
        RationalVector(c.into_iter().map(|x| x / &k).collect())
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }
}

fn negated(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

/// Exact convex hull in ambient dimension at most [`MAX_HULL_DIM`].
pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope, PolyhedralError> {
    let first = points.first().ok_or(PolyhedralError::Empty)?;
    let ambient = first.dim();
    if ambient > MAX_HULL_DIM {
        return Err(PolyhedralError::DimensionGuard { dim: ambient, limit: MAX_HULL_DIM });
    }
    if let Some(p) = points.iter().find(|p| p.dim() != ambient) {
        return Err(PolyhedralError::DimensionMismatch { expected: ambient, found: p.dim() });
    }
    let pts: Vec<Row> = points.iter().map(|p| p.0.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let hull = AffineHull::of(&pts, ambient);
    let d = hull.dim();
    let equations: Vec<Hyperplane> =
        hull.equations.iter().map(|(n, c)| Hyperplane { normal: n.clone(), offset: c.clone() }).collect();
    let eq_rows: Vec<Row> = hull.equations.iter().map(|(n, _)| linalg::to_rational_row(n)).collect();

    let mut facets: BTreeSet<Hyperplane> = BTreeSet::new();
    if d > 0 {
        let mut subset: Vec<usize> = (0..d).collect();
        loop {
            let mut rows = eq_rows.clone();
            rows.extend(subset[1..].iter().map(|&i| linalg::sub(&pts[i], &pts[subset[0]])));
            let ns = linalg::nullspace(&rows, ambient);
            if ns.len() == 1 {
                let n = linalg::primitive_integer(&ns[0]);
                let nr = linalg::to_rational_row(&n);
                let base = linalg::dot(&nr, &pts[subset[0]]);
                let vals: Vec<Rational> = pts.iter().map(|p| linalg::dot(&nr, p) - &base).collect();
                if vals.iter().all(|v| !v.is_positive()) {
                    facets.insert(Hyperplane { normal: n, offset: base });
                } else if vals.iter().all(|v| !v.is_negative()) {
                    facets.insert(Hyperplane { normal: negated(&n), offset: -base });
                }
            }
            if !next_subset(&mut subset, pts.len()) {
                break;
            }
        }
    }
    let facets: Vec<Hyperplane> = facets.into_iter().collect();
    let vertices: Vec<RationalVector> = pts
        .iter()
        .filter(|p| {
            if d == 0 {
                return true;
            }
            let tight: Vec<Row> = facets
                .iter()
                .filter(|f| f.value(p).is_zero())
                .map(|f| linalg::to_rational_row(&f.normal))
                .collect();
            linalg::rank(&tight, ambient) == d
        })
        .map(|p| RationalVector(p.clone()))
        .collect();
    Ok(Polytope { ambient_dim: ambient, dim: d, vertices, equations, facets })
}

/// Advances `subset` (strictly increasing indices below `n`) to the next
/// combination in lexicographic order.
pub(crate) fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    if k > n {
        return false;
    }
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One cell of the chamber decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct Chamber {
    pub polytope: Polytope,
    pub full_dimensional: bool,
    /// A point of the relative interior.
    pub sample: RationalVector,
    /// Indices of the realizable supports whose weight hull contains this chamber.
    pub supports: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChamberComplex {
    pub moment_polytope: Polytope,
    pub chambers: Vec<Chamber>,
}

impl ChamberComplex {
    pub fn full_dimensional(&self) -> impl Iterator<Item = &Chamber> {
        self.chambers.iter().filter(|c| c.full_dimensional)
    }

    /// The chamber whose relative interior contains `u`.
    pub fn chamber_of(&self, u: &RationalVector) -> Option<&Chamber> {
        self.chambers.iter().find(|c| c.polytope.locate(u) == Ok(Location::Interior))
    }
}

/// Membership profile of `u`: the realizable supports whose weight hull contains it.
pub fn support_profile(support_hulls: &[Polytope], u: &RationalVector) -> Vec<usize> {
    support_hulls
        .iter()
        .enumerate()
        .filter(|(_, h)| h.contains(u).unwrap_or(false))
        .map(|(i, _)| i)
        .collect()
}

/// Hulls of the weights indexed by each support.
pub fn support_hulls(weights: &[RationalVector], supports: &[BTreeSet<usize>]) -> Result<Vec<Polytope>, PolyhedralError> {
    supports
        .iter()
        .map(|s| {
            if s.is_empty() {
                return Err(PolyhedralError::InvalidSupport("empty support".into()));
            }
            if let Some(&i) = s.iter().find(|&&i| i >= weights.len()) {
                return Err(PolyhedralError::InvalidSupport(format!("index {i} out of range")));
            }
            convex_hull(&s.iter().map(|&i| weights[i].clone()).collect::<Vec<_>>())
        })
        .collect()
}

/// Intrinsic polyhedral cell: `<n, t> <= c` for every constraint.
#[derive(Clone, Debug)]
struct Cell {
    vertices: Vec<Row>,
    constraints: Vec<(Row, Rational)>,
}

fn tight_set(cell: &Cell, v: &Row) -> Vec<usize> {
    cell.constraints
        .iter()
        .enumerate()
        .filter(|(_, (n, c))| &linalg::dot(n, v) == c)
        .map(|(i, _)| i)
        .collect()
}

fn affine_dim(points: &[Row], d: usize) -> usize {
    match points.first() {
        None => 0,
        Some(o) => linalg::rank(&points[1..].iter().map(|p| linalg::sub(p, o)).collect::<Vec<_>>(), d),
    }
}

impl Cell {
    fn prune(mut self, d: usize) -> Cell {
        let vertices = self.vertices.clone();
        self.constraints.retain(|(n, c)| {
            let on: Vec<Row> = vertices.iter().filter(|v| &linalg::dot(n, v) == c).cloned().collect();
            !on.is_empty() && affine_dim(&on, d) + 1 == d
        });
        self.constraints.sort();
        self.constraints.dedup();
        self
    }

    fn split(&self, n: &Row, c: &Rational, d: usize) -> Option<(Cell, Cell)> {
        let vals: Vec<Rational> = self.vertices.iter().map(|v| linalg::dot(n, v) - c).collect();
        if !vals.iter().any(Signed::is_positive) || !vals.iter().any(Signed::is_negative) {
            return None;
        }
        let tights: Vec<Vec<usize>> = self.vertices.iter().map(|v| tight_set(self, v)).collect();
        let mut crossings = Vec::new();
        for i in 0..self.vertices.len() {
            for j in 0..self.vertices.len() {
                if !(vals[i].is_negative() && vals[j].is_positive()) {
                    continue;
                }
                let common: Vec<Row> = tights[i]
                    .iter()
                    .filter(|k| tights[j].contains(k))
                    .map(|&k| self.constraints[k].0.clone())
                    .collect();
                if d > 1 && linalg::rank(&common, d) != d - 1 {
                    continue;
                }
                let lambda = -&vals[i] / (&vals[j] - &vals[i]);
                let p: Row = self.vertices[i]
                    .iter()
                    .zip(&self.vertices[j])
                    .map(|(a, b)| a + (b - a) * &lambda)
                    .collect();
                crossings.push(p);
            }
        }
        let side = |keep: fn(&Rational) -> bool, normal: Row, offset: Rational| {
            let mut vertices: Vec<Row> =
                self.vertices.iter().zip(&vals).filter(|(_, v)| keep(v)).map(|(p, _)| p.clone()).collect();
            vertices.extend(crossings.iter().cloned());
            vertices.sort();
            vertices.dedup();
            let mut constraints = self.constraints.clone();
            constraints.push((normal, offset));
            Cell { vertices, constraints }.prune(d)
        };
        let neg_n: Row = n.iter().map(|x| -x).collect();
        let lower = side(|v| !v.is_positive(), n.clone(), c.clone());
        let upper = side(|v| !v.is_negative(), neg_n, -c.clone());
        Some((lower, upper))
    }

    /// Vertex sets of all proper faces, found by intersecting facets downward.
    fn proper_faces(&self, d: usize) -> Vec<Vec<Row>> {
        let mut level: BTreeSet<Vec<Row>> = self
            .constraints
            .iter()
            .map(|(n, c)| self.vertices.iter().filter(|v| &linalg::dot(n, v) == c).cloned().collect())
            .collect();
        let mut out: Vec<Vec<Row>> = level.iter().cloned().collect();
        for k in (0..d.saturating_sub(1)).rev() {
            let items: Vec<&Vec<Row>> = level.iter().collect();
            let mut next = BTreeSet::new();
            for (i, a) in items.iter().enumerate() {
                for b in &items[i + 1..] {
                    let inter: Vec<Row> = a.iter().filter(|v| b.contains(v)).cloned().collect();
                    if !inter.is_empty() && affine_dim(&inter, d) == k {
                        next.insert(inter);
                    }
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }
}

/// Restricts `<normal, x> = offset` to intrinsic coordinates of `hull`.
fn restrict(hull: &AffineHull, normal: &[BigInt], offset: &Rational) -> Option<(Row, Rational)> {
    let nr = linalg::to_rational_row(normal);
    let n: Row = hull.directions.iter().map(|dir| linalg::dot(&nr, dir)).collect();
    if n.iter().all(Zero::is_zero) {
        return None;
    }
    let c = offset - linalg::dot(&nr, &hull.origin);
    let prim = linalg::primitive_integer(&n);
    let k = n.iter().position(|x| !x.is_zero()).expect("nonzero normal");
    let scale = &linalg::to_rational_row(&prim)[k] / &n[k];
    let mut prim_row = linalg::to_rational_row(&prim);
    let mut c = c * scale;
    if linalg::leading_sign(&prim) < 0 {
        prim_row = prim_row.into_iter().map(|x| -x).collect();
        c = -c;
    }
    Some((prim_row, c))
}

fn centroid(points: &[Row]) -> Row {
    let k = Rational::from_integer(BigInt::from(points.len()));
    (0..points[0].len()).map(|i| points.iter().map(|p| &p[i]).sum::<Rational>() / &k).collect()
}

/// Merges cells that share the membership profile and the side of every
/// linear wall, whenever their union is convex.
fn merge_cells(
    cells: Vec<Cell>,
    aff: &AffineHull,
    hulls: &[Polytope],
    linear_walls: &BTreeSet<(Row, Rational)>,
    d: usize,
) -> Result<Vec<Cell>, PolyhedralError> {
    let centres: Vec<Row> = cells.iter().map(|c| centroid(&c.vertices)).collect();
    let mut groups: BTreeMap<(Vec<usize>, Vec<Ordering>), Vec<usize>> = BTreeMap::new();
    for (i, t) in centres.iter().enumerate() {
        let profile = support_profile(hulls, &RationalVector(aff.embed(t)));
        let signs: Vec<Ordering> = linear_walls.iter().map(|(n, c)| linalg::dot(n, t).cmp(c)).collect();
        groups.entry((profile, signs)).or_default().push(i);
    }
    let mut merged = Vec::with_capacity(groups.len());
    let mut slots: Vec<Option<Cell>> = cells.into_iter().map(Some).collect();
    for members in groups.values() {
        if members.len() > 1 {
            let pts: Vec<RationalVector> = members
                .iter()
                .flat_map(|&i| slots[i].as_ref().expect("unmerged").vertices.iter().cloned().map(RationalVector))
                .collect();
            let hull = convex_hull(&pts)?;
            let intrudes = centres
                .iter()
                .enumerate()
                .any(|(j, c)| !members.contains(&j) && hull.locate(&RationalVector(c.clone())) == Ok(Location::Interior));
            if !intrudes {
                let constraints =
                    hull.facets.iter().map(|f| (linalg::to_rational_row(&f.normal), f.offset.clone())).collect();
                let vertices = hull.vertices.into_iter().map(|v| v.0).collect();
                merged.push(Cell { vertices, constraints }.prune(d));
                continue;
            }
        }
        merged.extend(members.iter().map(|&i| slots[i].take().expect("unmerged")));
    }
    Ok(merged)
}

/// Chamber decomposition of the hull of `weights`.
///
/// The polytope is cut by the hyperplanes spanned by `(m-1)`-element subsets
/// of the weights and by the facet and equation hyperplanes of every support
/// hull. Cells with the same membership profile and the same side of every
/// linear wall are then merged when their union is convex, so each
/// full-dimensional chamber refines the linear arrangement and carries a
/// single profile. Faces of chambers are kept as lower-dimensional chambers.
pub fn git_chambers(weights: &[RationalVector], realizable_supports: &[BTreeSet<usize>]) -> Result<ChamberComplex, PolyhedralError> {
    let first = weights.first().ok_or(PolyhedralError::Empty)?;
    let m = first.dim();
    if m > MAX_CHAMBER_RANK {
        return Err(PolyhedralError::ScaleGuard(format!("rank {m} exceeds {MAX_CHAMBER_RANK}")));
    }
    if weights.len() > MAX_CHAMBER_WEIGHTS {
        return Err(PolyhedralError::ScaleGuard(format!(
            "{} weights exceed {MAX_CHAMBER_WEIGHTS}",
            weights.len()
        )));
    }
    let polytope = convex_hull(weights)?;
    let hulls = support_hulls(weights, realizable_supports)?;
    let pts: Vec<Row> = polytope.vertices.iter().map(|v| v.0.clone()).collect();
    let aff = AffineHull::of(&pts, m);
    let d = aff.dim();

    let mut linear_walls: BTreeSet<(Row, Rational)> = BTreeSet::new();
    if m > 0 {
        let mut subset: Vec<usize> = (0..m - 1).collect();
        loop {
            let rows: Vec<Row> = subset.iter().map(|&i| weights[i].0.clone()).collect();
            let ns = linalg::nullspace(&rows, m);
            if ns.len() == 1 {
                let n = linalg::primitive_integer(&ns[0]);
                linear_walls.extend(restrict(&aff, &n, &Rational::zero()));
            }
            if !next_subset(&mut subset, weights.len()) {
                break;
            }
        }
    }
    let mut walls = linear_walls.clone();
    for h in &hulls {
        for p in h.facets.iter().chain(&h.equations) {
            walls.extend(restrict(&aff, &p.normal, &p.offset));
        }
    }

    let to_intrinsic = |p: &Row| aff.coordinates(p).expect("vertex lies on its own hull");
    let initial = Cell {
        vertices: pts.iter().map(to_intrinsic).collect(),
        constraints: polytope.facets.iter().filter_map(|f| restrict(&aff, &f.normal, &f.offset)).collect(),
    };
    let mut cells = vec![initial];
    if d > 0 {
        for (n, c) in &walls {
            let mut next = Vec::with_capacity(cells.len());
            for cell in cells {
                match cell.split(n, c, d) {
                    Some((a, b)) => {
                        next.push(a);
                        next.push(b);
                    }
                    None => next.push(cell),
                }
            }
            cells = next;
            if cells.len() > MAX_CELLS {
                return Err(PolyhedralError::ScaleGuard(format!("more than {MAX_CELLS} chambers")));
            }
        }
    }

    if d > 0 {
        cells = merge_cells(cells, &aff, &hulls, &linear_walls, d)?;
    }

    let embed_all = |vs: &[Row]| -> Result<Polytope, PolyhedralError> {
        convex_hull(&vs.iter().map(|t| RationalVector(aff.embed(t))).collect::<Vec<_>>())
    };
    let make = |poly: Polytope, full: bool| {
        let sample = poly.barycenter();
        let supports = support_profile(&hulls, &sample);
        Chamber { polytope: poly, full_dimensional: full, sample, supports }
    };
    let mut chambers = Vec::new();
    let mut faces: BTreeMap<Vec<Row>, ()> = BTreeMap::new();
    for cell in &cells {
        chambers.push(make(embed_all(&cell.vertices)?, true));
        if d > 0 {
            for face in cell.proper_faces(d) {
                faces.insert(face, ());
            }
        }
    }
    for face in faces.keys() {
        chambers.push(make(embed_all(face)?, false));
    }
    Ok(ChamberComplex { moment_polytope: polytope, chambers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn rv(v: &[i64]) -> RationalVector {
        RationalVector::from_ints(v)
    }

    fn hexagon() -> Polytope {
        convex_hull(&[rv(&[1, 0]), rv(&[-1, 0]), rv(&[0, 1]), rv(&[0, -1]), rv(&[1, -1]), rv(&[-1, 1]), rv(&[0, 0])])
            .unwrap()
    }

    #[test]
    fn hexagon_has_six_vertices_and_facets() {
        let h = hexagon();
        assert_eq!(h.dim, 2);
        assert_eq!(h.vertices.len(), 6);
        assert_eq!(h.facets.len(), 6);
        assert!(!h.vertices.contains(&rv(&[0, 0])));
    }

    #[test]
    fn locate_on_hexagon() {
        let h = hexagon();
        assert_eq!(h.locate(&rv(&[0, 0])).unwrap(), Location::Interior);
        assert_eq!(h.locate(&rv(&[1, 0])).unwrap(), Location::Boundary);
        assert_eq!(h.locate(&rv(&[2, 0])).unwrap(), Location::Outside);
        assert_eq!(h.locate(&RationalVector(vec![ratio(1, 2), ratio(1, 2)])).unwrap(), Location::Boundary);
        assert!(h.locate(&rv(&[0, 0, 0])).is_err());
    }

    #[test]
    fn single_point_is_zero_dimensional() {
        let p = convex_hull(&[rv(&[3, -1])]).unwrap();
        assert_eq!(p.dim, 0);
        assert_eq!(p.vertices, vec![rv(&[3, -1])]);
        assert_eq!(p.equations.len(), 2);
        assert_eq!(p.locate(&rv(&[3, -1])).unwrap(), Location::Interior);
    }

    #[test]
    fn collinear_midpoint_is_dropped() {
        let p = convex_hull(&[rv(&[0, 0]), rv(&[1, 0]), rv(&[2, 0])]).unwrap();
        assert_eq!(p.dim, 1);
        assert_eq!(p.vertices, vec![rv(&[0, 0]), rv(&[2, 0])]);
        assert_eq!(p.facets.len(), 2);
        assert_eq!(p.locate(&rv(&[1, 0])).unwrap(), Location::Interior);
        assert_eq!(p.locate(&rv(&[1, 1])).unwrap(), Location::Outside);
    }

    #[test]
    fn dimension_guard() {
        let err = convex_hull(&[rv(&[0, 0, 0, 0, 0])]).unwrap_err();
        assert_eq!(err, PolyhedralError::DimensionGuard { dim: 5, limit: 4 });
        assert_eq!(convex_hull(&[]).unwrap_err(), PolyhedralError::Empty);
    }

    #[test]
    fn simplex_in_four_dimensions() {
        let mut pts = vec![rv(&[0, 0, 0, 0])];
        for i in 0..4 {
            let mut v = vec![0; 4];
            v[i] = 1;
            pts.push(rv(&v));
        }
        pts.push(RationalVector(vec![ratio(1, 5); 4]));
        let p = convex_hull(&pts).unwrap();
        assert_eq!(p.vertices.len(), 5);
        assert_eq!(p.facets.len(), 5);
    }

    #[test]
    fn two_chambers_on_a_segment() {
        let w = vec![rv(&[-1]), rv(&[1])];
        let supports: Vec<BTreeSet<usize>> = vec![[0].into(), [1].into(), [0, 1].into()];
        let cc = git_chambers(&w, &supports).unwrap();
        let full: Vec<Vec<RationalVector>> = cc.full_dimensional().map(|c| c.polytope.vertices.clone()).collect();
        assert_eq!(full, vec![vec![rv(&[-1]), rv(&[0])], vec![rv(&[0]), rv(&[1])]]);
        let points: Vec<&RationalVector> = cc.chambers.iter().filter(|c| !c.full_dimensional).map(|c| &c.sample).collect();
        assert_eq!(points, vec![&rv(&[-1]), &rv(&[0]), &rv(&[1])]);
        assert_eq!(cc.chamber_of(&RationalVector(vec![ratio(1, 3)])).unwrap().supports, vec![2]);
        assert_eq!(cc.chamber_of(&rv(&[1])).unwrap().supports, vec![1, 2]);
    }

    #[test]
    fn equal_weights_give_one_point_chamber() {
        let w = vec![rv(&[2, 1]); 3];
        let cc = git_chambers(&w, &[[0, 1, 2].into()]).unwrap();
        assert_eq!(cc.chambers.len(), 1);
        assert_eq!(cc.chambers[0].polytope.vertices, vec![rv(&[2, 1])]);
        assert_eq!(cc.chambers[0].sample, RationalVector(vec![int(2), int(1)]));
    }

    #[test]
    fn chamber_scale_guard() {
        let w: Vec<RationalVector> = (0..25).map(|i| rv(&[i])).collect();
        assert!(matches!(git_chambers(&w, &[]), Err(PolyhedralError::ScaleGuard(_))));
        assert!(matches!(git_chambers(&[rv(&[0, 0, 0, 0])], &[]), Err(PolyhedralError::ScaleGuard(_))));
    }

    #[test]
    fn subsets_enumerate_all_combinations() {
        let mut s = vec![0, 1];
        let mut count = 1;
        while next_subset(&mut s, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
        let mut empty: Vec<usize> = vec![];
        assert!(!next_subset(&mut empty, 3));
    }
}
