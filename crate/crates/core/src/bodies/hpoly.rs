use nalgebra::DMatrix;

use super::{check_point, BodyError, ConvexBody};
use crate::geom::Point;
use crate::lp::{maximize, LpFailure};

const ACTIVE_SET_MAX_ITER_FACTOR: usize = 50;

/// The polytope `{x : A x <= b}`, stored with unit-length rows.
///
/// Construction solves a linear program along every `±e_k` to reject empty
/// and unbounded inputs, and keeps a Chebyshev-style center as a feasible
/// start for projection.
#[derive(Debug, Clone)]
pub struct HPolytope {
    normals: Vec<Point>,
    offsets: Vec<f64>,
    center: Point,
    lo: Point,
    hi: Point,
}

impl HPolytope {
    pub fn new(normals: Vec<Point>, offsets: Vec<f64>) -> Result<Self, BodyError> {
        let dim = normals.first().map(|n| n.len()).ok_or(BodyError::Unbounded { axis: 0 })?;
        if normals.len() != offsets.len() {
            return Err(BodyError::DimensionMismatch {
                expected: normals.len(),
                found: offsets.len(),
            });
        }
        let mut rows = Vec::with_capacity(normals.len());
        let mut rhs = Vec::with_capacity(offsets.len());
        for (a, b) in normals.into_iter().zip(offsets) {
            check_point(&a, dim)?;
            if !b.is_finite() {
                return Err(BodyError::NonFinite);
            }
            let len = a.norm();
            if len == 0.0 {
                if b < 0.0 {
                    return Err(BodyError::Empty);
                }
                continue;
            }
            rows.push(a / len);
            rhs.push(b / len);
        }

        let mut lo = Point::zeros(dim);
        let mut hi = Point::zeros(dim);
        for k in 0..dim {
            for sign in [1.0, -1.0] {
                let mut e = Point::zeros(dim);
                e[k] = sign;
                let (x, _) = maximize(&rows, &rhs, &e, None).map_err(|f| match f {
                    LpFailure::Infeasible => BodyError::Empty,
                    LpFailure::Unbounded => BodyError::Unbounded { axis: k },
                })?;
                if sign > 0.0 {
                    hi[k] = x[k];
                } else {
                    lo[k] = x[k];
                }
            }
        }
        let r_max = (&hi - &lo).norm() + 1.0;
        let ones = vec![1.0; rows.len()];
        let zero = Point::zeros(dim);
        let (center, _) = maximize(&rows, &rhs, &zero, Some((&ones, r_max)))
            .map_err(|_| BodyError::Empty)?;
        Ok(HPolytope {
            normals: rows,
            offsets: rhs,
            center,
            lo,
            hi,
        })
    }

    /// The box `[lo, hi]`.
    pub fn from_box(lo: &Point, hi: &Point) -> Result<Self, BodyError> {
        let dim = lo.len();
        let mut normals = Vec::with_capacity(2 * dim);
        let mut offsets = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            let mut e = Point::zeros(dim);
            e[k] = 1.0;
            normals.push(e.clone());
            offsets.push(hi[k]);
            normals.push(-e);
            offsets.push(-lo[k]);
        }
        HPolytope::new(normals, offsets)
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// A feasible point, deep inside when the polytope has interior.
    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Largest signed row violation `a_i . p - b_i` (rows are unit length).
    pub fn max_violation(&self, p: &Point) -> f64 {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| a.dot(p) - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Primal active-set method for `min |x - p|^2` s.t. `A x <= b`,
    /// started from the feasible point `start`.
    fn project_from(&self, p: &Point, start: &Point) -> Result<Point, BodyError> {
        let dim = p.len();
        let m = self.normals.len();
        let scale = 1.0 + p.norm() + start.norm();
        let mut x = start.clone();
        let mut working: Vec<usize> = Vec::new();
        let max_iter = ACTIVE_SET_MAX_ITER_FACTOR * (m + dim + 1);
        for _ in 0..max_iter {
            let g = p - &x;
            let (step, mu) = self.null_space_step(&working, &g);
            if step.norm() <= 1e-13 * scale {
                let Some(mu) = mu else {
                    return Ok(x);
                };
                let (imin, vmin) = mu
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
                if vmin >= -1e-14 * scale {
                    return Ok(x);
                }
                working.remove(imin);
                continue;
            }
            let mut alpha = 1.0;
            let mut blocking = None;
            for i in 0..m {
                if working.contains(&i) {
                    continue;
                }
                let a_s = self.normals[i].dot(&step);
                if a_s > 1e-15 * step.norm() {
                    let slack = (self.offsets[i] - self.normals[i].dot(&x)).max(0.0);
                    let t = slack / a_s;
                    if t < alpha {
                        alpha = t;
                        blocking = Some(i);
                    }
                }
            }
            x += step * alpha;
            if let Some(i) = blocking {
                working.push(i);
            }
        }
        let residual = (p - &x).norm();
        Err(BodyError::NoConvergence {
            last: x,
            residual,
            iterations: max_iter,
        })
    }

    /// Projection of `g` onto the null space of the working rows, plus the
    /// least-squares multipliers `(A_W A_W^T)^{-1} A_W g`.
    fn null_space_step(&self, working: &[usize], g: &Point) -> (Point, Option<Point>) {
        if working.is_empty() {
            return (g.clone(), None);
        }
        let dim = g.len();
        let a_w = DMatrix::from_fn(working.len(), dim, |r, c| self.normals[working[r]][c]);
        let gram = &a_w * a_w.transpose();
        let rhs = &a_w * g;
        let mu = match gram.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => gram
                .svd(true, true)
                .solve(&rhs, 1e-14)
                .unwrap_or_else(|_| Point::zeros(working.len())),
        };
        let step = g - a_w.transpose() * &mu;
        (step, Some(mu))
    }
}

impl ConvexBody for HPolytope {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn support(&self, dir: &Point) -> Point {
        match maximize(&self.normals, &self.offsets, dir, None) {
            Ok((x, _)) if self.max_violation(&x) <= 0.0 => x,
            Ok((x, _)) => self.project_from(&x, &self.center).unwrap_or(x),
            Err(_) => self.center.clone(),
        }
    }

    fn project(&self, p: &Point) -> Result<Point, BodyError> {
        check_point(p, self.dim())?;
        if self.max_violation(p) <= 0.0 {
            return Ok(p.clone());
        }
        self.project_from(p, &self.center)
    }

    fn contains(&self, p: &Point, tol: f64) -> bool {
        let v = self.max_violation(p);
        if v <= 0.0 {
            return true;
        }
        if v > tol {
            return false;
        }
        self.distance(p).map(|d| d <= tol).unwrap_or(false)
    }

    fn bounding_box(&self) -> (Point, Point) {
        (self.lo.clone(), self.hi.clone())
    }
}
