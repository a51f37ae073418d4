//! Affine and linear primitives: points, hyperplanes, simplices, affine
//! subspaces and Radon partitions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use nalgebra::{DMatrix, DVector};

/// A point (or vector) of R^d.
pub type Point = DVector<f64>;

/// A simplex is degenerate when the smallest singular value of its edge
/// matrix falls below this fraction of its diameter.
pub const DEGENERACY_RATIO: f64 = 1e-8;

/// Residual allowed when reconstructing points from affine coordinates.
pub const AFFINE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("no points")]
    NoPoints,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("zero-length normal")]
    ZeroNormal,
    #[error("radon partition in R^{dim} needs {} points, got {found}", dim + 2)]
    RadonPointCount { dim: usize, found: usize },
    #[error("degenerate configuration")]
    DegenerateConfiguration,
    #[error("degenerate simplex: smallest singular value {sigma:e} below {threshold:e}")]
    DegenerateSimplex { sigma: f64, threshold: f64 },
    #[error("simplex with {vertices} vertices does not fit in R^{dim}")]
    TooManyVertices { vertices: usize, dim: usize },
    #[error("point lies {distance:e} away from the affine hull")]
    OutsideAffineHull { distance: f64 },
    #[error("directions are linearly dependent")]
    DependentDirections,
}

pub(crate) fn check_points(points: &[Point]) -> Result<usize, GeomError> {
    let first = points.first().ok_or(GeomError::NoPoints)?;
    let dim = first.len();
    for p in points {
        if p.len() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
    }
    Ok(dim)
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

pub fn centroid(points: &[Point]) -> Point {
    let mut c = Point::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Matrix whose columns are `points[i] - points[0]`, i >= 1.
fn edge_matrix(points: &[Point]) -> DMatrix<f64> {
    let dim = points[0].len();
    let k = points.len() - 1;
    DMatrix::from_fn(dim, k, |r, c| points[c + 1][r] - points[0][r])
}

fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    if m.ncols() > m.nrows() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Flip `v` so its largest-magnitude entry is positive.
fn canonical_sign(mut v: Point) -> Point {
    let mut idx = 0;
    for i in 0..v.len() {
        if v[i].abs() > v[idx].abs() + 1e-12 {
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.neg_mut();
    }
    v
}

/// An oriented hyperplane `{x : normal . x = offset}` with unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    normal: Point,
    offset: f64,
}

impl Hyperplane {
    /// Builds the hyperplane `normal . x = offset`, rescaling both so the
    /// normal has unit length.
    pub fn new(normal: Point, offset: f64) -> Result<Self, GeomError> {
        let len = normal.norm();
        if !len.is_finite() || !offset.is_finite() {
            return Err(GeomError::NonFinite);
        }
        if len == 0.0 {
            return Err(GeomError::ZeroNormal);
        }
        Ok(Hyperplane {
            normal: normal / len,
            offset: offset / len,
        })
    }

    /// Hyperplane with the given normal through `point`.
    pub fn through(normal: Point, point: &Point) -> Result<Self, GeomError> {
        let len = normal.norm();
        if len == 0.0 {
            return Err(GeomError::ZeroNormal);
        }
        let n = normal / len;
        let offset = n.dot(point);
        Hyperplane::new(n, offset)
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn signed_distance(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// The affine hull of `k + 1` affinely independent points, `k <= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let dim = check_points(&vertices)?;
        if vertices.len() > dim + 1 {
            return Err(GeomError::TooManyVertices {
                vertices: vertices.len(),
                dim,
            });
        }
        if vertices.len() > 1 {
            let sigma = smallest_singular_value(&edge_matrix(&vertices));
            let threshold = DEGENERACY_RATIO * diameter(&vertices);
            if !(sigma >= threshold) || sigma == 0.0 {
                return Err(GeomError::DegenerateSimplex { sigma, threshold });
            }
        }
        Ok(Simplex { vertices })
    }

    /// Simplex dimension `k` (number of vertices minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.vertices)
    }

    pub fn centroid(&self) -> Point {
        centroid(&self.vertices)
    }

    /// `k`-dimensional volume.
    pub fn volume(&self) -> f64 {
        simplex_volume(&self.vertices)
    }

    pub fn barycentric(&self, p: &Point) -> Result<Point, GeomError> {
        barycentric(self, p)
    }

    pub fn point_at(&self, weights: &Point) -> Point {
        let mut x = Point::zeros(self.ambient_dim());
        for (w, v) in weights.iter().zip(&self.vertices) {
            x += v * *w;
        }
        x
    }
}

/// `k`-volume of the simplex spanned by `points` via the Gram determinant.
pub fn simplex_volume(points: &[Point]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let e = edge_matrix(points);
    let gram = e.transpose() * &e;
    let det = gram.determinant().max(0.0);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    det.sqrt() / fact
}

/// Barycentric coordinates of `p` with respect to `simplex`.
pub fn barycentric(simplex: &Simplex, p: &Point) -> Result<Point, GeomError> {
    let v = &simplex.vertices;
    if p.len() != simplex.ambient_dim() {
        return Err(GeomError::DimensionMismatch {
            expected: simplex.ambient_dim(),
            found: p.len(),
        });
    }
    let k = simplex.dim();
    let mut coords = Point::zeros(k + 1);
    if k == 0 {
        let distance = (p - &v[0]).norm();
        if distance > AFFINE_TOL {
            return Err(GeomError::OutsideAffineHull { distance });
        }
        coords[0] = 1.0;
        return Ok(coords);
    }
    let e = edge_matrix(v);
    let rhs = p - &v[0];
    let svd = e.clone().svd(true, true);
    let mu = svd
        .solve(&rhs, 1e-14)
        .map_err(|_| GeomError::DegenerateConfiguration)?;
    let distance = (&e * &mu - &rhs).norm();
    let scale = 1.0f64.max(simplex.diameter());
    if distance > AFFINE_TOL * scale {
        return Err(GeomError::OutsideAffineHull { distance });
    }
    coords[0] = 1.0 - mu.sum();
    for i in 0..k {
        coords[i + 1] = mu[i];
    }
    Ok(coords)
}

/// An affine subspace `base + span(basis)` with orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace {
    base: Point,
    basis: Vec<Point>,
}

impl AffineSubspace {
    /// Orthonormalizes `directions`; they must be linearly independent.
    pub fn new(base: Point, directions: Vec<Point>) -> Result<Self, GeomError> {
        let dim = base.len();
        if base.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        let mut basis: Vec<Point> = Vec::with_capacity(directions.len());
        for d in directions {
            if d.len() != dim {
                return Err(GeomError::DimensionMismatch {
                    expected: dim,
                    found: d.len(),
                });
            }
            let scale = d.norm();
            let mut v = d;
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
            let len = v.norm();
            if !(len > 1e-10 * scale.max(1e-300)) {
                return Err(GeomError::DependentDirections);
            }
            basis.push(v / len);
        }
        Ok(AffineSubspace { base, basis })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn basis(&self) -> &[Point] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// Coordinates of the orthogonal projection of `p` in the basis.
    pub fn coords(&self, p: &Point) -> Point {
        let rel = p - &self.base;
        Point::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(&rel)))
    }

    pub fn point_at(&self, coords: &Point) -> Point {
        let mut x = self.base.clone();
        for (c, b) in coords.iter().zip(&self.basis) {
            x += b * *c;
        }
        x
    }

    pub fn project(&self, p: &Point) -> Point {
        self.point_at(&self.coords(p))
    }

    pub fn distance(&self, p: &Point) -> f64 {
        (p - self.project(p)).norm()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.distance(p) <= tol
    }
}

/// Smallest affine subspace containing `points`.
///
/// The first point is used as base; basis vectors are the left singular
/// vectors of the edge matrix whose singular values are not negligible.
pub fn affine_hull(points: &[Point]) -> Result<AffineSubspace, GeomError> {
    check_points(points)?;
    let base = points[0].clone();
    if points.len() == 1 {
        return Ok(AffineSubspace {
            base,
            basis: Vec::new(),
        });
    }
    let e = edge_matrix(points);
    let threshold = 1e-10 * 1.0f64.max(diameter(points));
    let svd = e.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut keep: Vec<(f64, Point)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > threshold)
        .map(|(i, s)| (*s, canonical_sign(u.column(i).into_owned())))
        .collect();
    keep.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(AffineSubspace {
        base,
        basis: keep.into_iter().map(|(_, v)| v).collect(),
    })
}

/// A split of `d + 2` points into two parts whose convex hulls meet at
/// `crossing_point`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonPartition {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub crossing_point: Point,
    /// The affine dependence used, normalized to unit length with the first
    /// significant coefficient positive. Positive entries form `part1`.
    pub coefficients: Point,
}

/// Radon partition of exactly `d + 2` points in R^d.
pub fn radon_partition(points: &[Point]) -> Result<RadonPartition, GeomError> {
    let dim = check_points(points)?;
    let n = points.len();
    if n != dim + 2 {
        return Err(GeomError::RadonPointCount { dim, found: n });
    }
    // Lifted matrix [x_i; 1], padded with a zero row so the SVD is square
    // and exposes the full right singular basis.
    let lifted = DMatrix::from_fn(n, n, |r, c| {
        if r < dim {
            points[c][r]
        } else if r == dim {
            1.0
        } else {
            0.0
        }
    });
    let scale = lifted.amax().max(1.0);
    let svd = lifted.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let threshold = 1e-10 * scale;
    let mut null: Vec<Point> = (0..n)
        .filter(|&i| sv[i] <= threshold)
        .map(|i| v_t.row(i).transpose().into_owned())
        .collect();
    if null.is_empty() {
        let i = sv.imin();
        null.push(v_t.row(i).transpose().into_owned());
    }

    let lambda = pick_null_vector(&null).ok_or(GeomError::DegenerateConfiguration)?;
    let residual = (&lifted * &lambda).norm();
    if !(residual <= 1e-9 * scale) {
        return Err(GeomError::DegenerateConfiguration);
    }

    let mut part1 = Vec::new();
    let mut part2 = Vec::new();
    let mut q1 = Point::zeros(dim);
    let mut q2 = Point::zeros(dim);
    let mut w1 = 0.0;
    let mut w2 = 0.0;
    for (i, &l) in lambda.iter().enumerate() {
        if l > 0.0 {
            part1.push(i);
            q1 += &points[i] * l;
            w1 += l;
        } else {
            part2.push(i);
            q2 -= &points[i] * l;
            w2 -= l;
        }
    }
    if !(w1 > 1e-12) || !(w2 > 1e-12) {
        return Err(GeomError::DegenerateConfiguration);
    }
    let q = q1 / w1;
    let q_other = q2 / w2;
    if (&q - &q_other).norm() > 1e-9 * scale {
        return Err(GeomError::DegenerateConfiguration);
    }
    Ok(RadonPartition {
        part1,
        part2,
        crossing_point: q,
        coefficients: lambda,
    })
}

/// Picks the null-space vector maximizing the smallest |coefficient| among
/// the basis vectors and their {-1, 0, 1} combinations.
fn pick_null_vector(null: &[Point]) -> Option<Point> {
    let k = null.len().min(4);
    let mut best: Option<(f64, Point)> = None;
    let combos = 3usize.pow(k as u32);
    for code in 1..combos {
        let mut v = Point::zeros(null[0].len());
        let mut c = code;
        for b in null.iter().take(k) {
            let digit = c % 3;
            c /= 3;
            match digit {
                1 => v += b,
                2 => v -= b,
                _ => {}
            }
        }
        let len = v.norm();
        if !(len > 1e-12) {
            continue;
        }
        v /= len;
        let score = v.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|(s, _)| score > *s + 1e-14) {
            best = Some((score, v));
        }
    }
    let (_, mut v) = best?;
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    Some(v)
}

/// Whether `points` fail to span a simplex of dimension `points.len() - 1`.
pub fn is_degenerate(points: &[Point]) -> bool {
    Simplex::new(points.to_vec()).is_err()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pt(c: &[f64]) -> Point {
        Point::from_column_slice(c)
    }

    fn same_partition(r: &RadonPartition, a: &[usize], b: &[usize]) -> bool {
        (r.part1 == a && r.part2 == b) || (r.part1 == b && r.part2 == a)
    }

    #[test]
    fn affine_hull_examples() {
        let h = affine_hull(&[pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.base(), &pt(&[0.0, 0.0]));
        assert_abs_diff_eq!(h.basis()[0], pt(&[1.0, 0.0]), epsilon = 1e-12);

        let h = affine_hull(&[pt(&[1.0, 2.0])]).unwrap();
        assert_eq!(h.dim(), 0);
        assert_eq!(h.base(), &pt(&[1.0, 2.0]));

        let square = [
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
            pt(&[1.0, 1.0]),
        ];
        assert_eq!(affine_hull(&square).unwrap().dim(), 2);
        assert_eq!(affine_hull(&[]), Err(GeomError::NoPoints));
    }

    #[test]
    fn radon_examples() {
        let r = radon_partition(&[
            pt(&[0.0, 0.0]),
            pt(&[2.0, 0.0]),
            pt(&[1.0, 2.0]),
            pt(&[1.0, 0.5]),
        ])
        .unwrap();
        assert!(same_partition(&r, &[0, 1, 2], &[3]));
        assert_abs_diff_eq!(r.crossing_point, pt(&[1.0, 0.5]), epsilon = 1e-9);

        let r = radon_partition(&[
            pt(&[0.0, 0.0]),
            pt(&[2.0, 2.0]),
            pt(&[2.0, 0.0]),
            pt(&[0.0, 2.0]),
        ])
        .unwrap();
        assert!(same_partition(&r, &[0, 1], &[2, 3]));
        assert_abs_diff_eq!(r.crossing_point, pt(&[1.0, 1.0]), epsilon = 1e-9);

        let r = radon_partition(&[pt(&[0.0]), pt(&[1.0]), pt(&[3.0])]).unwrap();
        assert!(same_partition(&r, &[1], &[0, 2]));
        assert_abs_diff_eq!(r.crossing_point[0], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn radon_rejects_wrong_count() {
        let err = radon_partition(&[pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]).unwrap_err();
        assert_eq!(err, GeomError::RadonPointCount { dim: 2, found: 2 });
    }

    #[test]
    fn radon_with_repeated_points() {
        let p = pt(&[0.3, -0.2]);
        let r = radon_partition(&[p.clone(), p.clone(), p.clone(), p.clone()]).unwrap();
        assert_abs_diff_eq!(r.crossing_point, p, epsilon = 1e-9);
    }

    #[test]
    fn barycentric_examples() {
        let tri = Simplex::new(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 0.0]),
            pt(&[0.0, 1.0]),
        ])
        .unwrap();
        assert_abs_diff_eq!(
            tri.barycentric(&pt(&[0.0, 0.0])).unwrap(),
            pt(&[1.0, 0.0, 0.0]),
            epsilon = 1e-12
        );
        let third = 1.0 / 3.0;
        assert_abs_diff_eq!(
            tri.barycentric(&tri.centroid()).unwrap(),
            pt(&[third, third, third]),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            tri.barycentric(&pt(&[0.25, 0.25])).unwrap(),
            pt(&[0.5, 0.25, 0.25]),
            epsilon = 1e-12
        );
    }

    #[test]
    fn barycentric_outside_hull() {
        let seg = Simplex::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0])]).unwrap();
        assert!(matches!(
            seg.barycentric(&pt(&[0.5, 0.1])),
            Err(GeomError::OutsideAffineHull { .. })
        ));
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let err = Simplex::new(vec![
            pt(&[0.0, 0.0]),
            pt(&[1.0, 1.0]),
            pt(&[2.0, 2.0]),
        ])
        .unwrap_err();
        assert!(matches!(err, GeomError::DegenerateSimplex { .. }));
        assert!(Simplex::new(vec![pt(&[0.0]), pt(&[0.0])]).is_err());
    }

    #[test]
    fn simplex_volume_matches_area() {
        let tri = Simplex::new(vec![
            pt(&[0.0, 0.0]),
            pt(&[4.0, 0.0]),
            pt(&[2.0, 3.0]),
        ])
        .unwrap();
        assert_abs_diff_eq!(tri.volume(), 6.0, epsilon = 1e-12);
        // a segment embedded in R^3 has its length as 1-volume
        let seg = Simplex::new(vec![pt(&[0.0, 0.0, 0.0]), pt(&[1.0, 2.0, 2.0])]).unwrap();
        assert_abs_diff_eq!(seg.volume(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn hyperplane_normalizes() {
        let h = Hyperplane::new(pt(&[2.0, 0.0]), 3.0).unwrap();
        assert_abs_diff_eq!(h.normal()[0], 1.0);
        assert_abs_diff_eq!(h.offset(), 1.5);
        assert_abs_diff_eq!(h.signed_distance(&pt(&[2.0, 7.0])), 0.5);
        assert_eq!(Hyperplane::new(pt(&[0.0, 0.0]), 1.0), Err(GeomError::ZeroNormal));
    }

    #[test]
    fn subspace_rejects_dependent_directions() {
        let err = AffineSubspace::new(
            pt(&[0.0, 0.0, 0.0]),
            vec![pt(&[1.0, 0.0, 0.0]), pt(&[2.0, 0.0, 0.0])],
        )
        .unwrap_err();
        assert_eq!(err, GeomError::DependentDirections);
    }
}
