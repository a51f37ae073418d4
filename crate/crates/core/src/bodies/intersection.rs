use super::{check_point, common_dim, Body, BodyError, ConvexBody};
use crate::geom::Point;
use crate::opt::{intersect_witness, FeasibilityReport, DEFAULT_TOL};

/// Dykstra rounds stop once a full cycle moves the iterate and every
/// correction term less than this.
pub const DYKSTRA_STEP_TOL: f64 = 1e-10;
pub const DYKSTRA_MAX_ROUNDS: usize = 100_000;

const SUPPORT_MAX_STEPS: usize = 200;

/// Intersection of a nonempty family of bodies, certified nonempty at
/// construction. Projection runs Dykstra's cyclic projections.
#[derive(Debug, Clone)]
pub struct IntersectionBody {
    components: Vec<Body>,
    witness: Point,
}

impl IntersectionBody {
    pub fn new(components: Vec<Body>) -> Result<Self, BodyError> {
        common_dim(&components)?;
        match intersect_witness(&components, DEFAULT_TOL) {
            Ok(FeasibilityReport::Witness(witness)) => Ok(IntersectionBody { components, witness }),
            Ok(FeasibilityReport::Empty(_)) => Err(BodyError::EmptyIntersection {
                count: components.len(),
            }),
            Err(e) => Err(BodyError::UndecidedIntersection(e.to_string())),
        }
    }

    /// Skips the feasibility solve when a common point is already known.
    pub fn with_witness(components: Vec<Body>, witness: Point, tol: f64) -> Result<Self, BodyError> {
        let dim = common_dim(&components)?;
        check_point(&witness, dim)?;
        if let Some(index) = components.iter().position(|c| !c.contains(&witness, tol)) {
            return Err(BodyError::BadWitness { index });
        }
        Ok(IntersectionBody { components, witness })
    }

    pub fn components(&self) -> &[Body] {
        &self.components
    }

    /// A common point of all components.
    pub fn witness(&self) -> &Point {
        &self.witness
    }

    fn diameter_estimate(&self) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let (lo, hi) = c.bounding_box();
                (hi - lo).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct DykstraOutcome {
    pub point: Point,
    pub rounds: usize,
    /// Largest movement of the iterate or a correction term over the last
    /// full cycle.
    pub last_step: f64,
}

/// Dykstra's alternating projection with correction terms: converges to
/// the nearest point of the intersection of `bodies` to `start`.
pub fn dykstra_project(
    bodies: &[Body],
    start: &Point,
    step_tol: f64,
    max_rounds: usize,
) -> Result<DykstraOutcome, BodyError> {
    let dim = start.len();
    let mut x = start.clone();
    let mut increments = vec![Point::zeros(dim); bodies.len()];
    let mut last_step = f64::INFINITY;
    for round in 1..=max_rounds {
        let before = x.clone();
        let mut drift = 0.0f64;
        for (body, inc) in bodies.iter().zip(increments.iter_mut()) {
            let y = &x + &*inc;
            let next = body.project(&y)?;
            let new_inc = y - &next;
            drift = drift.max((&new_inc - &*inc).norm());
            *inc = new_inc;
            x = next;
        }
        last_step = (&x - &before).norm().max(drift);
        if last_step < step_tol {
            return Ok(DykstraOutcome {
                point: x,
                rounds: round,
                last_step,
            });
        }
    }
    Err(BodyError::NoConvergence {
        last: x,
        residual: last_step,
        iterations: max_rounds,
    })
}

impl ConvexBody for IntersectionBody {
    fn dim(&self) -> usize {
        self.witness.len()
    }

    /// Projected ascent `x <- P(x + s dir)` from the witness; fixed points
    /// of the map are exactly the maximizers of `dir . x`.
    fn support(&self, dir: &Point) -> Point {
        let len = dir.norm();
        if len == 0.0 {
            return self.witness.clone();
        }
        let diam = self.diameter_estimate();
        let step = dir * (10.0 * (1.0 + diam) / len);
        let mut x = self.witness.clone();
        for _ in 0..SUPPORT_MAX_STEPS {
            let next = match self.project(&(&x + &step)) {
                Ok(p) => p,
                Err(BodyError::NoConvergence { last, .. }) => last,
                Err(_) => return x,
            };
            let moved = (&next - &x).norm();
            x = next;
            if moved <= 1e-12 * (1.0 + diam) {
                break;
            }
        }
        x
    }

    fn project(&self, p: &Point) -> Result<Point, BodyError> {
        check_point(p, self.dim())?;
        if self.components.len() == 1 {
            return self.components[0].project(p);
        }
        if self.components.iter().all(|c| c.contains(p, 0.0)) {
            return Ok(p.clone());
        }
        dykstra_project(&self.components, p, DYKSTRA_STEP_TOL, DYKSTRA_MAX_ROUNDS).map(|o| o.point)
    }

    fn contains(&self, p: &Point, tol: f64) -> bool {
        if self.components.iter().any(|c| !c.contains(p, tol)) {
            return false;
        }
        if self.components.iter().all(|c| c.contains(p, 0.0)) {
            return true;
        }
        self.distance(p).map(|d| d <= tol).unwrap_or(false)
    }

    fn bounding_box(&self) -> (Point, Point) {
        let d = self.dim();
        let mut lo = Point::zeros(d);
        let mut hi = Point::zeros(d);
        for k in 0..d {
            let mut e = Point::zeros(d);
            e[k] = 1.0;
            hi[k] = self.support(&e)[k];
            e[k] = -1.0;
            lo[k] = self.support(&e)[k];
        }
        (lo, hi)
    }
}
