//! Criticality certification, the hollow simplex and cages.

use rand::Rng;
use rayon::prelude::*;

use crate::bodies::{common_dim, Body, BodyError, ConvexBody, IntersectionBody, VPolytope};
use crate::geom::{GeomError, Point, Simplex};
use crate::opt::{intersect_witness, min_distance_from, DistanceResult, EmptyCertificate, FeasibilityReport, OptError};

/// Families whose closest-point gaps fall below this multiple of `tol` are
/// treated as numerically non-critical.
pub const BORDERLINE_FACTOR: f64 = 10.0;

/// Largest spread of the closest points across restarts before the probe
/// flags a vertex.
pub const UNIQUENESS_TOL: f64 = 1e-5;

#[derive(Debug, Clone, thiserror::Error)]
pub enum CriticalError {
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("no bodies given")]
    NoBodies,
    #[error("no hollow enclosed: the family is {n}-critical in R^{d} with n < d; use the stabbing verifier instead")]
    NoHollow { n: usize, d: usize },
    #[error("hollow simplex is degenerate: {0}")]
    DegenerateHollow(GeomError),
    #[error("expected {expected} base points, found {found}")]
    BasePointCount { expected: usize, found: usize },
    #[error("base point {index} is not in the intersection of the other bodies")]
    BadBasePoint { index: usize },
}

/// Structured refusal for `n + 1` bodies in R^d with `n > d`: such a family
/// is never critical, so no solver is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HellyRejection {
    pub n: usize,
    pub d: usize,
}

impl std::fmt::Display for HellyRejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} bodies in R^{}: no {}-critical family exists when n > d",
            self.n + 1,
            self.d,
            self.n
        )
    }
}

/// Returns a rejection when the family has more than `d + 1` members.
pub fn helly_guard(bodies: &[Body]) -> Result<Option<HellyRejection>, CriticalError> {
    if bodies.is_empty() {
        return Err(CriticalError::NoBodies);
    }
    let d = common_dim(bodies)?;
    let n = bodies.len() - 1;
    Ok((n > d).then_some(HellyRejection { n, d }))
}

/// A certified n-critical family.
#[derive(Debug, Clone)]
pub struct CriticalFamily {
    bodies: Vec<Body>,
    witnesses: Vec<Point>,
    certificate: EmptyCertificate,
    closest: Vec<DistanceResult>,
    tol: f64,
}

impl CriticalFamily {
    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    /// `n` for a family of `n + 1` bodies.
    pub fn n(&self) -> usize {
        self.bodies.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.witnesses[0].len()
    }

    /// `a_j`, a common point of every body except `C_j`.
    pub fn witnesses(&self) -> &[Point] {
        &self.witnesses
    }

    pub fn certificate(&self) -> &EmptyCertificate {
        &self.certificate
    }

    /// Distance from `C_j` to the intersection of the others, per `j`.
    pub fn gaps(&self) -> Vec<f64> {
        self.closest.iter().map(|r| r.distance).collect()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The intersection of every body except `C_j`.
    pub fn leave_one_out(&self, j: usize) -> Result<Body, CriticalError> {
        leave_one_out(&self.bodies, j, &self.witnesses[j], self.tol)
    }

    /// Hull of the witnesses, when it is a nondegenerate simplex.
    pub fn witness_simplex(&self) -> Result<Simplex, GeomError> {
        Simplex::new(self.witnesses.clone())
    }
}

fn without(bodies: &[Body], j: usize) -> Vec<Body> {
    bodies
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, b)| b.clone())
        .collect()
}

fn leave_one_out(bodies: &[Body], j: usize, witness: &Point, tol: f64) -> Result<Body, CriticalError> {
    let mut rest = without(bodies, j);
    if rest.len() == 1 {
        return Ok(rest.remove(0));
    }
    Ok(IntersectionBody::with_witness(rest, witness.clone(), tol)?.into())
}

/// Outcome of [`check_critical`].
#[derive(Debug, Clone)]
pub enum Criticality {
    Critical(CriticalFamily),
    /// More than `d + 1` bodies.
    TooManyBodies(HellyRejection),
    /// The bodies other than `C_index` have no common point.
    EmptySubfamily {
        index: usize,
        certificate: EmptyCertificate,
    },
    /// All bodies share this point.
    CommonPoint(Point),
    /// Critical in floating point, but `C_index` comes within `gap` of the
    /// intersection of the others.
    Borderline { index: usize, gap: f64, threshold: f64 },
}

impl Criticality {
    pub fn is_critical(&self) -> bool {
        matches!(self, Criticality::Critical(_))
    }

    pub fn family(&self) -> Option<&CriticalFamily> {
        match self {
            Criticality::Critical(f) => Some(f),
            _ => None,
        }
    }
}

/// Decides whether `bodies` form an n-critical family.
pub fn check_critical(bodies: &[Body], tol: f64) -> Result<Criticality, CriticalError> {
    if let Some(rejection) = helly_guard(bodies)? {
        return Ok(Criticality::TooManyBodies(rejection));
    }
    if bodies.len() == 1 {
        let w = bodies[0].support_center();
        return Ok(Criticality::CommonPoint(w));
    }

    let subfamilies: Vec<Result<FeasibilityReport, OptError>> = (0..bodies.len())
        .into_par_iter()
        .map(|j| intersect_witness(&without(bodies, j), tol))
        .collect();
    let mut witnesses = Vec::with_capacity(bodies.len());
    for (j, report) in subfamilies.into_iter().enumerate() {
        match report? {
            FeasibilityReport::Witness(w) => witnesses.push(w),
            FeasibilityReport::Empty(mut certificate) => {
                if certificate.body >= j {
                    certificate.body += 1;
                }
                return Ok(Criticality::EmptySubfamily { index: j, certificate });
            }
        }
    }

    let certificate = match intersect_witness(bodies, tol)? {
        FeasibilityReport::Witness(w) => return Ok(Criticality::CommonPoint(w)),
        FeasibilityReport::Empty(c) => c,
    };

    let witnesses: Vec<Point> = witnesses
        .into_par_iter()
        .enumerate()
        .map(|(j, w)| recenter(bodies, j, w, tol))
        .collect();

    let closest: Vec<DistanceResult> = (0..bodies.len())
        .into_par_iter()
        .map(|j| {
            let rest = leave_one_out(bodies, j, &witnesses[j], tol)?;
            Ok(min_distance_from(&rest, &bodies[j], &witnesses[j])?)
        })
        .collect::<Result<_, CriticalError>>()?;

    let threshold = BORDERLINE_FACTOR * tol;
    if let Some((index, r)) = closest
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.distance.total_cmp(&b.1.distance))
    {
        if r.distance <= threshold {
            return Ok(Criticality::Borderline {
                index,
                gap: r.distance,
                threshold,
            });
        }
    }

    Ok(Criticality::Critical(CriticalFamily {
        bodies: bodies.to_vec(),
        witnesses,
        certificate,
        closest,
        tol,
    }))
}

/// Moves a leave-one-out witness to the support center of the subfamily's
/// intersection, keeping the original witness if that point fails
/// membership.
fn recenter(bodies: &[Body], j: usize, w: Point, tol: f64) -> Point {
    let Ok(rest) = leave_one_out(bodies, j, &w, tol) else {
        return w;
    };
    let center = rest.support_center();
    let inside = bodies
        .iter()
        .enumerate()
        .all(|(i, b)| i == j || b.contains(&center, tol / 10.0));
    if inside {
        center
    } else {
        w
    }
}

/// The d-simplex spanned by the closest points `p_j`.
#[derive(Debug, Clone)]
pub struct HollowSimplex {
    vertices: Vec<Point>,
    partners: Vec<Point>,
    gaps: Vec<f64>,
}

impl HollowSimplex {
    /// `p_j`, the point of the intersection of the bodies other than `C_j`
    /// nearest to `C_j`.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// The point of `C_j` nearest to `p_j`.
    pub fn partners(&self) -> &[Point] {
        &self.partners
    }

    /// `m_j = |p_j - partner_j|`.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn simplex(&self) -> Simplex {
        Simplex::new(self.vertices.clone()).expect("checked at construction")
    }
}

/// Computes the hollow simplex of a d-critical family.
pub fn hollow_simplex(family: &CriticalFamily) -> Result<HollowSimplex, CriticalError> {
    let (n, d) = (family.n(), family.dim());
    if n < d {
        return Err(CriticalError::NoHollow { n, d });
    }
    let vertices: Vec<Point> = family.closest.iter().map(|r| r.nearest_a.clone()).collect();
    let partners = family.closest.iter().map(|r| r.nearest_b.clone()).collect();
    let gaps = family.gaps();
    Simplex::new(vertices.clone()).map_err(CriticalError::DegenerateHollow)?;
    Ok(HollowSimplex {
        vertices,
        partners,
        gaps,
    })
}

/// Spread of the recomputed `p_j` over random restarts.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    /// Largest pairwise distance between the restarts' `p_j`, per `j`.
    pub deviations: Vec<f64>,
    pub restarts: usize,
    pub threshold: f64,
}

impl UniquenessReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }

    /// Vertices whose spread exceeds the threshold.
    pub fn flagged(&self) -> Vec<usize> {
        self.deviations
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > self.threshold)
            .map(|(j, _)| j)
            .collect()
    }
}

/// Recomputes every `p_j` from `restarts` random starting points and
/// reports how far the answers spread.
pub fn uniqueness_probe<R: Rng>(
    family: &CriticalFamily,
    restarts: usize,
    rng: &mut R,
) -> Result<UniquenessReport, CriticalError> {
    let bodies = family.bodies();
    let mut lo = family.witnesses[0].clone();
    let mut hi = lo.clone();
    for b in bodies {
        let (l, h) = b.bounding_box();
        lo = lo.inf(&l);
        hi = hi.sup(&h);
    }
    let pad = &hi - &lo;
    let mut deviations = Vec::with_capacity(bodies.len());
    for (j, body) in bodies.iter().enumerate() {
        let rest = family.leave_one_out(j)?;
        let starts: Vec<Point> = (0..restarts)
            .map(|_| Point::from_fn(lo.len(), |k, _| rng.random_range(lo[k] - pad[k]..=hi[k] + pad[k])))
            .collect();
        let points = starts
            .par_iter()
            .map(|s| Ok(min_distance_from(&rest, body, s)?.nearest_a))
            .collect::<Result<Vec<Point>, CriticalError>>()?;
        let mut spread = 0.0f64;
        for (a, p) in points.iter().enumerate() {
            for q in &points[a + 1..] {
                spread = spread.max((p - q).norm());
            }
        }
        deviations.push(spread);
    }
    Ok(UniquenessReport {
        deviations,
        restarts,
        threshold: UNIQUENESS_TOL,
    })
}

/// Convex cage: the hull of base points `b_i`, each a common point of the
/// bodies other than `C_i`.
#[derive(Debug, Clone)]
pub struct Cage {
    hull: VPolytope,
}

impl Cage {
    pub fn new(family: &CriticalFamily, base_points: Vec<Point>, tol: f64) -> Result<Self, CriticalError> {
        let bodies = family.bodies();
        if base_points.len() != bodies.len() {
            return Err(CriticalError::BasePointCount {
                expected: bodies.len(),
                found: base_points.len(),
            });
        }
        for (i, b) in base_points.iter().enumerate() {
            let ok = bodies
                .iter()
                .enumerate()
                .all(|(h, body)| h == i || body.contains(b, tol));
            if !ok {
                return Err(CriticalError::BadBasePoint { index: i });
            }
        }
        Ok(Cage {
            hull: VPolytope::new(base_points)?,
        })
    }

    /// The cage spanned by the family's own witnesses.
    pub fn of_witnesses(family: &CriticalFamily) -> Result<Self, CriticalError> {
        Cage::new(family, family.witnesses.clone(), family.tol)
    }

    pub fn base_points(&self) -> &[Point] {
        self.hull.generators()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.hull.contains(p, tol)
    }
}

/// A random cage: each base point is a random convex combination of the
/// witness, the projection of a far point in a random direction and the
/// projection of a random point near the leave-one-out intersection.
pub fn random_cage<R: Rng>(family: &CriticalFamily, rng: &mut R) -> Result<Cage, CriticalError> {
    let d = family.dim();
    let mut base = Vec::with_capacity(family.bodies.len());
    for j in 0..family.bodies.len() {
        let rest = family.leave_one_out(j)?;
        let a = &family.witnesses[j];
        let mut lo = Point::from_element(d, f64::NEG_INFINITY);
        let mut hi = Point::from_element(d, f64::INFINITY);
        for (i, b) in family.bodies.iter().enumerate() {
            if i != j {
                let (l, h) = b.bounding_box();
                lo = lo.sup(&l);
                hi = hi.inf(&h);
            }
        }
        let reach = 10.0 * (1.0 + (&hi - &lo).norm());
        let dir = Point::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
        let s = rest.project(&(a + &dir * (reach / dir.norm().max(1e-12))))?;
        let probe = Point::from_fn(d, |k, _| {
            let w = (hi[k] - lo[k]).max(1e-3);
            rng.random_range(lo[k] - w..=hi[k] + w)
        });
        let q = rest.project(&probe)?;
        let mut weights = [rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()];
        let total: f64 = weights.iter().sum::<f64>().max(1e-12);
        for w in &mut weights {
            *w /= total;
        }
        base.push(a * weights[0] + s * weights[1] + q * weights[2]);
    }
    Cage::new(family, base, family.tol.max(1e-6))
}

/// True iff every vertex of the hollow simplex lies in the cage.
pub fn cage_contains_hull_vertices(hollow: &HollowSimplex, cage: &Cage, tol: f64) -> bool {
    hollow.vertices.iter().all(|p| cage.contains(p, tol))
}

/// Whether `F ∩ M` is again a cage, where `M` is a convex cage and `F` is
/// a closed set (given by membership) containing the hollow. Checked
/// through the hollow simplex vertices, which serve as base points of any
/// such intersection.
pub fn cage_intersection_is_cage(
    hollow: &HollowSimplex,
    cage: &Cage,
    closed_set: &dyn Fn(&Point) -> bool,
    tol: f64,
) -> bool {
    hollow.vertices.iter().all(|p| closed_set(p) && cage.contains(p, tol))
}

#[cfg(test)]
mod tests;
