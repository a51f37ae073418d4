use nalgebra::DMatrix;

use super::{check_point, BodyError, ConvexBody};
use crate::geom::{check_points, Point};

/// Stop once the conditional-gradient duality gap drops below this,
/// relative to the squared scale of the translated generators.
pub const VPOLY_GAP_TOL: f64 = 1e-12;

const MAX_MAJOR: usize = 10_000;

/// Convex hull of a finite set of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct VPolytope {
    generators: Vec<Point>,
}

impl VPolytope {
    pub fn new(generators: Vec<Point>) -> Result<Self, BodyError> {
        check_points(&generators).map_err(|e| match e {
            crate::geom::GeomError::NoPoints => BodyError::Empty,
            crate::geom::GeomError::DimensionMismatch { expected, found } => {
                BodyError::DimensionMismatch { expected, found }
            }
            _ => BodyError::NonFinite,
        })?;
        Ok(VPolytope { generators })
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Nearest point of the hull to `p` together with its convex weights
    /// over the generators.
    ///
    /// Wolfe's minimum-norm-point method: a conditional-gradient scheme
    /// that, after each Frank-Wolfe vertex is added, re-minimizes exactly
    /// over the affine hull of the active generators and drops generators
    /// whose weight leaves the simplex (the away/drop step).
    pub fn project_with_weights(&self, p: &Point) -> Result<(Point, Vec<(usize, f64)>), BodyError> {
        check_point(p, self.dim())?;
        let y: Vec<Point> = self.generators.iter().map(|g| g - p).collect();
        let scale2 = y.iter().map(|v| v.norm_squared()).fold(1e-300, f64::max);

        let first = (0..y.len())
            .min_by(|&a, &b| y[a].norm_squared().total_cmp(&y[b].norm_squared()))
            .expect("at least one generator");
        let mut active: Vec<usize> = vec![first];
        let mut weights: Vec<f64> = vec![1.0];
        let mut x = y[first].clone();

        for _ in 0..MAX_MAJOR {
            let (j, best) = (0..y.len())
                .map(|i| (i, x.dot(&y[i])))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one generator");
            let gap = x.norm_squared() - best;
            if gap <= VPOLY_GAP_TOL * scale2 || active.contains(&j) {
                return Ok((p + x, active.into_iter().zip(weights).collect()));
            }
            active.push(j);
            weights.push(0.0);

            loop {
                let mu = affine_minimizer(&y, &active);
                if mu.iter().all(|m| *m > 1e-15) {
                    weights = mu;
                    x = combine(&y, &active, &weights);
                    break;
                }
                // Move from the current weights toward mu until a weight hits zero.
                let mut theta = 1.0f64;
                for (w, m) in weights.iter().zip(&mu) {
                    if *m <= 1e-15 && *w - *m > 0.0 {
                        theta = theta.min(*w / (*w - *m));
                    }
                }
                for (w, m) in weights.iter_mut().zip(&mu) {
                    *w = theta * m + (1.0 - theta) * *w;
                }
                let mut k = 0;
                while k < active.len() {
                    if weights[k] <= 1e-15 {
                        active.remove(k);
                        weights.remove(k);
                    } else {
                        k += 1;
                    }
                }
                let total: f64 = weights.iter().sum();
                for w in &mut weights {
                    *w /= total;
                }
                x = combine(&y, &active, &weights);
                if active.len() == 1 {
                    break;
                }
            }
        }
        Err(BodyError::NoConvergence {
            last: p + &x,
            residual: x.norm(),
            iterations: MAX_MAJOR,
        })
    }
}

fn combine(y: &[Point], active: &[usize], weights: &[f64]) -> Point {
    let mut x = Point::zeros(y[0].len());
    for (i, w) in active.iter().zip(weights) {
        x += &y[*i] * *w;
    }
    x
}

/// Weights summing to one that minimize `|sum w_i y_i|` over the affine hull
/// of the active points.
fn affine_minimizer(y: &[Point], active: &[usize]) -> Vec<f64> {
    let k = active.len();
    if k == 1 {
        return vec![1.0];
    }
    let base = &y[active[0]];
    let dim = base.len();
    let diffs = DMatrix::from_fn(dim, k - 1, |r, c| y[active[c + 1]][r] - base[r]);
    let rhs = -base;
    let svd = diffs.svd(true, true);
    let mu = svd
        .solve(&rhs, 1e-13)
        .unwrap_or_else(|_| Point::zeros(k - 1));
    let mut w = Vec::with_capacity(k);
    w.push(1.0 - mu.sum());
    w.extend(mu.iter().copied());
    w
}

impl ConvexBody for VPolytope {
    fn dim(&self) -> usize {
        self.generators[0].len()
    }

    fn support(&self, dir: &Point) -> Point {
        let mut best = 0;
        let mut best_val = f64::NEG_INFINITY;
        for (i, g) in self.generators.iter().enumerate() {
            let v = g.dot(dir);
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        self.generators[best].clone()
    }

    fn project(&self, p: &Point) -> Result<Point, BodyError> {
        if self.generators.len() == 1 {
            check_point(p, self.dim())?;
            return Ok(self.generators[0].clone());
        }
        self.project_with_weights(p).map(|(q, _)| q)
    }

    fn bounding_box(&self) -> (Point, Point) {
        let mut lo = self.generators[0].clone();
        let mut hi = self.generators[0].clone();
        for g in &self.generators[1..] {
            lo = lo.inf(g);
            hi = hi.sup(g);
        }
        (lo, hi)
    }
}
