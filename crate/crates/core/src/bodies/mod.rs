//! Compact convex bodies behind a uniform oracle interface.
//!
//! Every body answers three queries: membership with a tolerance, a
//! support point for a direction, and the Euclidean projection of a point.
//! Membership is always consistent with projection: `p` is a member at
//! `tol` iff `|p - project(p)| <= tol`.

mod ball;
mod hpoly;
mod intersection;
mod vpoly;

pub use ball::Ball;
pub use hpoly::HPolytope;
pub use intersection::{dykstra_project, DykstraOutcome, IntersectionBody, DYKSTRA_MAX_ROUNDS, DYKSTRA_STEP_TOL};
pub use vpoly::VPolytope;

use std::fmt;

use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BodyError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite input")]
    NonFinite,
    #[error("body is empty")]
    Empty,
    #[error("body is unbounded along axis {axis}")]
    Unbounded { axis: usize },
    #[error("negative radius {0}")]
    NegativeRadius(f64),
    #[error("intersection of {count} bodies is empty")]
    EmptyIntersection { count: usize },
    #[error("cannot decide whether the intersection is empty: {0}")]
    UndecidedIntersection(String),
    #[error("witness is not a member of body {index}")]
    BadWitness { index: usize },
    #[error("projection did not converge after {iterations} rounds (residual {residual:e})")]
    NoConvergence {
        last: Point,
        residual: f64,
        iterations: usize,
    },
    #[error("linear program failed: {0}")]
    Lp(String),
}

/// Oracle interface of a nonempty compact convex set in R^d.
pub trait ConvexBody: fmt::Debug + Send + Sync {
    fn dim(&self) -> usize;

    /// A member maximizing `dir . x`. `dir` need not be normalized.
    fn support(&self, dir: &Point) -> Point;

    /// The nearest member to `p`.
    fn project(&self, p: &Point) -> Result<Point, BodyError>;

    fn contains(&self, p: &Point, tol: f64) -> bool {
        match self.project(p) {
            Ok(q) => (p - q).norm() <= tol,
            Err(_) => false,
        }
    }

    fn distance(&self, p: &Point) -> Result<f64, BodyError> {
        Ok((p - self.project(p)?).norm())
    }

    /// Axis-aligned bounding box from the support points along `±e_k`.
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

    /// Projection of the bounding-box center onto the body, falling back to
    /// the average of the `2d` axis support points.
    fn support_center(&self) -> Point {
        let (lo, hi) = self.bounding_box();
        if let Ok(p) = self.project(&((lo + hi) * 0.5)) {
            return p;
        }
        let d = self.dim();
        let mut c = Point::zeros(d);
        for k in 0..d {
            for s in [1.0, -1.0] {
                let mut e = Point::zeros(d);
                e[k] = s;
                c += self.support(&e);
            }
        }
        c / (2 * d) as f64
    }
}

/// The concrete body kinds understood by scene files and solvers.
#[derive(Debug, Clone)]
pub enum Body {
    HPoly(HPolytope),
    VPoly(VPolytope),
    Ball(Ball),
    Intersection(IntersectionBody),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::HPoly(_) => "hpoly",
            Body::VPoly(_) => "vpoly",
            Body::Ball(_) => "ball",
            Body::Intersection(_) => "intersection",
        }
    }

    fn inner(&self) -> &dyn ConvexBody {
        match self {
            Body::HPoly(b) => b,
            Body::VPoly(b) => b,
            Body::Ball(b) => b,
            Body::Intersection(b) => b,
        }
    }
}

impl ConvexBody for Body {
    fn dim(&self) -> usize {
        self.inner().dim()
    }

    fn support(&self, dir: &Point) -> Point {
        self.inner().support(dir)
    }

    fn project(&self, p: &Point) -> Result<Point, BodyError> {
        self.inner().project(p)
    }

    fn contains(&self, p: &Point, tol: f64) -> bool {
        self.inner().contains(p, tol)
    }

    fn bounding_box(&self) -> (Point, Point) {
        self.inner().bounding_box()
    }
}

impl From<HPolytope> for Body {
    fn from(b: HPolytope) -> Self {
        Body::HPoly(b)
    }
}

impl From<VPolytope> for Body {
    fn from(b: VPolytope) -> Self {
        Body::VPoly(b)
    }
}

impl From<Ball> for Body {
    fn from(b: Ball) -> Self {
        Body::Ball(b)
    }
}

impl From<IntersectionBody> for Body {
    fn from(b: IntersectionBody) -> Self {
        Body::Intersection(b)
    }
}

pub(crate) fn check_point(p: &Point, dim: usize) -> Result<(), BodyError> {
    if p.len() != dim {
        return Err(BodyError::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    if p.iter().any(|c| !c.is_finite()) {
        return Err(BodyError::NonFinite);
    }
    Ok(())
}

/// Common dimension of a nonempty slice of bodies.
pub fn common_dim(bodies: &[Body]) -> Result<usize, BodyError> {
    let first = bodies.first().ok_or(BodyError::Empty)?;
    let dim = first.dim();
    for b in bodies {
        if b.dim() != dim {
            return Err(BodyError::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
    }
    Ok(dim)
}
