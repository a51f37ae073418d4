use super::SpernerError;
use crate::bodies::{common_dim, Body, BodyError, ConvexBody};
use crate::geom::Point;
use crate::opt::{intersect_witness, FeasibilityReport};

/// Subset enumeration is exponential; larger instances are refused.
pub const KKM_MAX_POINTS: usize = 12;

const PRIMES: [u64; KKM_MAX_POINTS] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// A finite set `X` with a closed convex image `Γ(x)` per point.
#[derive(Debug, Clone)]
pub struct KkmInstance {
    points: Vec<Point>,
    images: Vec<Body>,
}

impl KkmInstance {
    pub fn new(points: Vec<Point>, images: Vec<Body>) -> Result<Self, SpernerError> {
        if points.is_empty() {
            return Err(SpernerError::NoPoints);
        }
        if points.len() > KKM_MAX_POINTS {
            return Err(SpernerError::TooManyPoints {
                count: points.len(),
                limit: KKM_MAX_POINTS,
            });
        }
        if points.len() != images.len() {
            return Err(SpernerError::ImageCount {
                points: points.len(),
                images: images.len(),
            });
        }
        let d = common_dim(&images)?;
        for p in &points {
            if p.len() != d {
                return Err(BodyError::DimensionMismatch {
                    expected: d,
                    found: p.len(),
                }
                .into());
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(BodyError::NonFinite.into());
            }
        }
        Ok(KkmInstance { points, images })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn images(&self) -> &[Body] {
        &self.images
    }
}

/// The map `Γ(a_i) = C_{i-1}` (with `C_{-1} = C_n`) on the witnesses.
pub fn third_proof_instance(bodies: &[Body], witnesses: &[Point]) -> Result<KkmInstance, SpernerError> {
    let n1 = bodies.len();
    let images = (0..n1).map(|i| bodies[(i + n1 - 1) % n1].clone()).collect();
    KkmInstance::new(witnesses.to_vec(), images)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KkmCounterexample {
    /// Indices of the subset `N`.
    pub subset: Vec<usize>,
    /// A point of `Conv(N)` outside every `Γ(x)`, `x ∈ N`.
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KkmReport {
    pub kkm_holds: bool,
    pub counterexample: Option<KkmCounterexample>,
    /// A common point of all images, present when the condition held.
    pub intersection_witness: Option<Point>,
    /// Sample points checked across all subsets.
    pub samples_checked: usize,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let b = base as f64;
    let mut f = 1.0 / b;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f /= b;
    }
    r
}

/// Convex weights for the `i`-th sample on a `k`-vertex hull: even samples
/// are Halton-driven uniform Dirichlet draws, odd samples sharpen the same
/// draw toward a vertex by cubing the exponential variates.
fn sample_weights(i: usize, k: usize) -> Vec<f64> {
    let idx = (i / 2 + 1) as u64;
    let mut w: Vec<f64> = (0..k)
        .map(|c| {
            let u = radical_inverse(idx, PRIMES[c]).clamp(1e-12, 1.0 - 1e-12);
            let e = -u.ln();
            if i % 2 == 1 {
                e.powi(3)
            } else {
                e
            }
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Checks `Conv(N) ⊆ ∪_{x∈N} Γ(x)` on `samples` points of every nonempty
/// subset `N` (plus the points of `N` themselves), then looks for a common
/// point of all images.
pub fn kkm_verify(inst: &KkmInstance, samples: usize, tol: f64) -> Result<KkmReport, SpernerError> {
    let m = inst.points.len();
    let mut checked = 0;
    for mask in 1u32..(1 << m) {
        let subset: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let covered = |p: &Point| subset.iter().any(|&x| inst.images[x].contains(p, tol));
        let vertices = subset.iter().map(|&x| inst.points[x].clone());
        let mixed = (0..samples).map(|i| {
            let w = sample_weights(i, subset.len());
            let mut p = Point::zeros(inst.points[0].len());
            for (x, wx) in subset.iter().zip(&w) {
                p += &inst.points[*x] * *wx;
            }
            p
        });
        for p in vertices.chain(mixed) {
            checked += 1;
            if !covered(&p) {
                return Ok(KkmReport {
                    kkm_holds: false,
                    counterexample: Some(KkmCounterexample { subset, point: p }),
                    intersection_witness: None,
                    samples_checked: checked,
                });
            }
        }
    }
    match intersect_witness(&inst.images, tol)? {
        FeasibilityReport::Witness(w) => Ok(KkmReport {
            kkm_holds: true,
            counterexample: None,
            intersection_witness: Some(w),
            samples_checked: checked,
        }),
        FeasibilityReport::Empty(c) => Err(SpernerError::KkmContradiction(Box::new(c))),
    }
}
