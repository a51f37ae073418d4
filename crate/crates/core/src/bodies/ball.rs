use super::{check_point, BodyError, ConvexBody};
use crate::geom::Point;

/// Closed Euclidean ball. Radius zero gives a single point.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Point,
    radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self, BodyError> {
        check_point(&center, center.len())?;
        if !radius.is_finite() {
            return Err(BodyError::NonFinite);
        }
        if radius < 0.0 {
            return Err(BodyError::NegativeRadius(radius));
        }
        Ok(Ball { center, radius })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ConvexBody for Ball {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn support(&self, dir: &Point) -> Point {
        let len = dir.norm();
        if len == 0.0 {
            return self.center.clone();
        }
        &self.center + dir * (self.radius / len)
    }

    fn project(&self, p: &Point) -> Result<Point, BodyError> {
        check_point(p, self.dim())?;
        let offset = p - &self.center;
        let dist = offset.norm();
        if dist <= self.radius {
            Ok(p.clone())
        } else {
            Ok(&self.center + offset * (self.radius / dist))
        }
    }

    fn contains(&self, p: &Point, tol: f64) -> bool {
        (p - &self.center).norm() <= self.radius + tol
    }

    fn bounding_box(&self) -> (Point, Point) {
        (
            self.center.add_scalar(-self.radius),
            self.center.add_scalar(self.radius),
        )
    }
}
