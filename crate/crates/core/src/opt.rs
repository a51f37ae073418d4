//! Distance, feasibility and separation solvers built only on the
//! projection oracles of the bodies.

use crate::bodies::{common_dim, Body, BodyError, ConvexBody, IntersectionBody};
use crate::geom::{AffineSubspace, GeomError, Hyperplane, Point};

/// Tolerance used wherever a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Alternating projections stop once the pair distance changes by less.
pub const DISTANCE_STEP_TOL: f64 = 1e-12;
pub const MAX_ALTERNATIONS: usize = 100_000;

/// Feasibility gives up after this many rounds without a new best residual.
pub const STALL_ROUNDS: usize = 1000;
pub const FEASIBILITY_MAX_ROUNDS: usize = 100_000;

#[derive(Debug, Clone, thiserror::Error)]
pub enum OptError {
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("no bodies given")]
    NoBodies,
    #[error("alternating projections did not converge after {iterations} rounds")]
    NoConvergence {
        best: Box<DistanceResult>,
        iterations: usize,
    },
    #[error("tolerance ambiguity: gap {gap:e} is neither below {lower:e} nor above {upper:e}; change tol")]
    ToleranceAmbiguity { gap: f64, lower: f64, upper: f64 },
    #[error("not separable: distance {distance:e} does not exceed tol {tol:e}")]
    NotSeparable { distance: f64, tol: f64 },
}

/// Nearest pair between two convex sets.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub distance: f64,
    pub nearest_a: Point,
    pub nearest_b: Point,
    pub iterations: usize,
    /// Change of the pair distance over the final round.
    pub residual: f64,
}

/// Alternating projections `a <- P_A(b)`, `b <- P_B(a)` from `start`.
fn alternate<FA, FB>(project_a: FA, project_b: FB, start: &Point) -> Result<DistanceResult, OptError>
where
    FA: Fn(&Point) -> Result<Point, BodyError>,
    FB: Fn(&Point) -> Result<Point, BodyError>,
{
    let mut a = project_a(start)?;
    let mut b = project_b(&a)?;
    let mut previous = (&a - &b).norm();
    for iterations in 1..=MAX_ALTERNATIONS {
        a = project_a(&b)?;
        b = project_b(&a)?;
        let distance = (&a - &b).norm();
        let residual = (previous - distance).abs();
        if residual < DISTANCE_STEP_TOL {
            return Ok(DistanceResult {
                distance,
                nearest_a: a,
                nearest_b: b,
                iterations,
                residual,
            });
        }
        previous = distance;
    }
    let distance = (&a - &b).norm();
    Err(OptError::NoConvergence {
        best: Box::new(DistanceResult {
            distance,
            nearest_a: a,
            nearest_b: b,
            iterations: MAX_ALTERNATIONS,
            residual: f64::NAN,
        }),
        iterations: MAX_ALTERNATIONS,
    })
}

/// Minimum distance between two compact convex bodies.
pub fn min_distance(a: &dyn ConvexBody, b: &dyn ConvexBody) -> Result<DistanceResult, OptError> {
    let (lo, hi) = b.bounding_box();
    let start = (lo + hi) * 0.5;
    min_distance_from(a, b, &start)
}

/// [`min_distance`] with an explicit starting point for the iteration.
pub fn min_distance_from(
    a: &dyn ConvexBody,
    b: &dyn ConvexBody,
    start: &Point,
) -> Result<DistanceResult, OptError> {
    if a.dim() != b.dim() {
        return Err(BodyError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    alternate(|p| a.project(p), |p| b.project(p), start)
}

/// Distance from an affine subspace (closed, unbounded) to a compact body.
/// `nearest_a` lies on the subspace.
pub fn distance_to_flat(flat: &AffineSubspace, body: &dyn ConvexBody) -> Result<DistanceResult, OptError> {
    let start = body.support_center();
    alternate(|p| Ok(flat.project(p)), |p| body.project(p), &start)
}

/// Hyperplane through the midpoint of a nearest pair with normal `b - a`.
pub fn bisecting_hyperplane(a: &Point, b: &Point) -> Result<Hyperplane, OptError> {
    let mid = (a + b) * 0.5;
    Ok(Hyperplane::through(b - a, &mid)?)
}

/// Strictly separating hyperplane: `A` on the negative side, `B` positive.
pub fn separating_hyperplane(
    a: &dyn ConvexBody,
    b: &dyn ConvexBody,
    tol: f64,
) -> Result<Hyperplane, OptError> {
    let r = min_distance(a, b)?;
    if r.distance <= tol {
        return Err(OptError::NotSeparable {
            distance: r.distance,
            tol,
        });
    }
    bisecting_hyperplane(&r.nearest_a, &r.nearest_b)
}

/// Evidence that a family has empty intersection: `hyperplane` strictly
/// separates body `body` (negative side) from the intersection of all the
/// other bodies (positive side).
#[derive(Debug, Clone, PartialEq)]
pub struct EmptyCertificate {
    pub body: usize,
    pub hyperplane: Hyperplane,
    /// Distance between body and the intersection of the rest.
    pub gap: f64,
    /// Distance from the hyperplane to either side, `gap / 2`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityReport {
    Witness(Point),
    Empty(EmptyCertificate),
}

impl FeasibilityReport {
    pub fn witness(&self) -> Option<&Point> {
        match self {
            FeasibilityReport::Witness(p) => Some(p),
            FeasibilityReport::Empty(_) => None,
        }
    }
}

enum Decision {
    Witness(Point),
    Empty,
}

/// Decides whether `bodies` share a point (up to `tol`) and returns either
/// a witness or a separation certificate.
///
/// A witness is reported once Dykstra's cyclic projections reach an
/// iterate within `tol / 10` of every body. The family is declared empty
/// when the residual stalls above `tol`; stalling in between is reported
/// as a tolerance ambiguity.
pub fn intersect_witness(bodies: &[Body], tol: f64) -> Result<FeasibilityReport, OptError> {
    if bodies.is_empty() {
        return Err(OptError::NoBodies);
    }
    common_dim(bodies)?;
    match decide(bodies, tol)? {
        Decision::Witness(x) => Ok(FeasibilityReport::Witness(x)),
        Decision::Empty => Ok(FeasibilityReport::Empty(certificate(bodies, tol)?)),
    }
}

fn decide(bodies: &[Body], tol: f64) -> Result<Decision, OptError> {
    if bodies.len() == 1 {
        return Ok(Decision::Witness(bodies[0].support_center()));
    }
    let dim = bodies[0].dim();
    let mut x = Point::zeros(dim);
    for b in bodies {
        x += b.support_center();
    }
    x /= bodies.len() as f64;

    let mut increments = vec![Point::zeros(dim); bodies.len()];
    let mut best = f64::INFINITY;
    let mut stall = 0;
    for _ in 0..FEASIBILITY_MAX_ROUNDS {
        for (body, inc) in bodies.iter().zip(increments.iter_mut()) {
            let y = &x + &*inc;
            let next = body.project(&y)?;
            *inc = y - &next;
            x = next;
        }
        let mut residual = 0.0f64;
        for b in bodies {
            residual = residual.max(b.distance(&x)?);
        }
        if residual <= tol / 10.0 {
            return Ok(Decision::Witness(x));
        }
        if residual < best * (1.0 - 1e-9) {
            best = residual;
            stall = 0;
        } else {
            stall += 1;
            if stall >= STALL_ROUNDS {
                break;
            }
        }
    }
    if best > tol {
        Ok(Decision::Empty)
    } else {
        Err(OptError::ToleranceAmbiguity {
            gap: best,
            lower: tol / 10.0,
            upper: tol,
        })
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

/// Separates some body from the intersection of the rest. When every
/// leave-one-out subfamily is itself empty, recurses into one of them: a
/// certificate for a subfamily also separates the chosen body from the
/// (smaller) intersection of all the others.
fn certificate(bodies: &[Body], tol: f64) -> Result<EmptyCertificate, OptError> {
    let mut best: Option<EmptyCertificate> = None;
    let mut empty_rest: Option<usize> = None;
    let mut closest_gap = 0.0f64;
    for j in 0..bodies.len() {
        let rest = without(bodies, j);
        if rest.is_empty() {
            continue;
        }
        match decide(&rest, tol)? {
            Decision::Witness(w) => {
                let rest_body = if rest.len() == 1 {
                    rest.into_iter().next().expect("one body")
                } else {
                    Body::Intersection(IntersectionBody::with_witness(rest, w.clone(), tol)?)
                };
                let r = min_distance_from(&bodies[j], &rest_body, &w)?;
                closest_gap = closest_gap.max(r.distance);
                if r.distance > tol {
                    let margin = r.distance / 2.0;
                    if best.as_ref().is_none_or(|c| margin > c.margin + 1e-12) {
                        best = Some(EmptyCertificate {
                            body: j,
                            hyperplane: bisecting_hyperplane(&r.nearest_a, &r.nearest_b)?,
                            gap: r.distance,
                            margin,
                        });
                    }
                }
            }
            Decision::Empty => {
                empty_rest.get_or_insert(j);
            }
        }
    }
    if let Some(c) = best {
        return Ok(c);
    }
    if let Some(j) = empty_rest {
        let mut sub = certificate(&without(bodies, j), tol)?;
        if sub.body >= j {
            sub.body += 1;
        }
        return Ok(sub);
    }
    Err(OptError::ToleranceAmbiguity {
        gap: closest_gap,
        lower: tol / 10.0,
        upper: tol,
    })
}
