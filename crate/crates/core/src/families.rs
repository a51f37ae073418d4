//! Reference families of convex bodies.
//!
//! These are the configurations the toolkit is exercised on: two disjoint
//! intervals, the sides of a triangle (bare or thickened), three unit disks
//! at equilateral spacing, and randomized box families whose union is a box.

use rand::Rng;

use crate::bodies::{Ball, Body, HPolytope, VPolytope};
use crate::geom::Point;

fn pt(c: &[f64]) -> Point {
    Point::from_column_slice(c)
}

fn interval(lo: f64, hi: f64) -> Body {
    HPolytope::from_box(&pt(&[lo]), &pt(&[hi]))
        .expect("valid interval")
        .into()
}

/// `[0, 1]` and `[2, 3]` on the line: the smallest 1-critical family.
pub fn interval_pair() -> Vec<Body> {
    vec![interval(0.0, 1.0), interval(2.0, 3.0)]
}

/// Vertices of the triangle used by [`segment_triangle`].
pub fn triangle_vertices() -> [Point; 3] {
    [pt(&[0.0, 0.0]), pt(&[4.0, 0.0]), pt(&[2.0, 3.0])]
}

/// The sides of the triangle `(0,0), (4,0), (2,3)`; body `j` is the side
/// opposite vertex `j`, so the pairwise intersections are the vertices.
pub fn segment_triangle() -> Vec<Body> {
    let v = triangle_vertices();
    (0..3)
        .map(|j| {
            let a = v[(j + 1) % 3].clone();
            let b = v[(j + 2) % 3].clone();
            VPolytope::new(vec![a, b]).expect("segment").into()
        })
        .collect()
}

/// Rectangle of total width `width` around the segment `a b`, extended by
/// `width / 2` past both endpoints.
pub fn thickened_segment(a: &Point, b: &Point, width: f64) -> VPolytope {
    let half = width / 2.0;
    let dir = (b - a).normalize();
    let normal = pt(&[-dir[1], dir[0]]);
    let a_ext = a - &dir * half;
    let b_ext = b + &dir * half;
    VPolytope::new(vec![
        &a_ext + &normal * half,
        &b_ext + &normal * half,
        &b_ext - &normal * half,
        &a_ext - &normal * half,
    ])
    .expect("rectangle")
}

/// [`segment_triangle`] with every side thickened to a strip of `width`.
pub fn thickened_triangle(width: f64) -> Vec<Body> {
    let v = triangle_vertices();
    (0..3)
        .map(|j| thickened_segment(&v[(j + 1) % 3], &v[(j + 2) % 3], width).into())
        .collect()
}

/// Centers of the three disks of [`three_disks`].
pub fn disk_centers(side: f64) -> [Point; 3] {
    [
        pt(&[0.0, 0.0]),
        pt(&[side, 0.0]),
        pt(&[side / 2.0, side * 3f64.sqrt() / 2.0]),
    ]
}

/// Unit disks centered at the vertices of an equilateral triangle of the
/// given side. 2-critical exactly when `sqrt(3) < side < 2`.
pub fn three_disks(side: f64) -> Vec<Body> {
    disk_centers(side)
        .into_iter()
        .map(|c| Ball::new(c, 1.0).expect("disk").into())
        .collect()
}

/// Four unit balls at the vertices of a regular tetrahedron with the given
/// edge length, 3-critical for edges between `sqrt(8/3)` and `sqrt(3)`.
pub fn four_balls(edge: f64) -> Vec<Body> {
    tetrahedron(edge)
        .into_iter()
        .map(|c| Ball::new(c, 1.0).expect("ball").into())
        .collect()
}

pub fn tetrahedron(edge: f64) -> [Point; 4] {
    let s = edge / 8f64.sqrt();
    [
        pt(&[s, s, s]),
        pt(&[s, -s, -s]),
        pt(&[-s, s, -s]),
        pt(&[-s, -s, s]),
    ]
}

/// `[0,3]x[0,2]`, `[1,3]x[0,3]`, `[0,2]x[1,3]`: union `[0,3]^2`, common
/// part `[1,2]^2`.
pub fn squares() -> Vec<Body> {
    let b = |lo: [f64; 2], hi: [f64; 2]| -> Body {
        HPolytope::from_box(&pt(&lo), &pt(&hi)).expect("box").into()
    };
    vec![
        b([0.0, 0.0], [3.0, 2.0]),
        b([1.0, 0.0], [3.0, 3.0]),
        b([0.0, 1.0], [2.0, 3.0]),
    ]
}

/// A family of sub-boxes of an outer box whose union is the outer box.
#[derive(Debug, Clone)]
pub struct BoxUnionFamily {
    pub outer_lo: Point,
    pub outer_hi: Point,
    pub lows: Vec<Point>,
    pub highs: Vec<Point>,
    /// A point of every leave-one-out intersection, index-aligned.
    pub witnesses: Vec<Point>,
}

impl BoxUnionFamily {
    pub fn bodies(&self) -> Vec<Body> {
        self.lows
            .iter()
            .zip(&self.highs)
            .enumerate()
            .map(|(i, (lo, hi))| {
                if i % 2 == 0 {
                    HPolytope::from_box(lo, hi).expect("box").into()
                } else {
                    box_corners(lo, hi).into()
                }
            })
            .collect()
    }

    /// The common box `∩ C_i`.
    pub fn common(&self) -> (Point, Point) {
        let mut lo = self.outer_lo.clone();
        let mut hi = self.outer_hi.clone();
        for (l, h) in self.lows.iter().zip(&self.highs) {
            lo = lo.sup(l);
            hi = hi.inf(h);
        }
        (lo, hi)
    }
}

/// The `2^d` corners of `[lo, hi]` as a V-polytope.
pub fn box_corners(lo: &Point, hi: &Point) -> VPolytope {
    let d = lo.len();
    let corners = (0..1usize << d)
        .map(|mask| Point::from_fn(d, |k, _| if mask >> k & 1 == 1 { hi[k] } else { lo[k] }))
        .collect();
    VPolytope::new(corners).expect("box corners")
}

/// Random family of `n + 1` boxes in R^d whose union is an outer box.
///
/// Every body is the outer box trimmed on a random set of faces to a
/// common inner box `K`. The union equals the outer box iff for every
/// pattern of violated trims some body avoids all of them; that condition
/// is checked exhaustively over the `3^d` patterns. Every intersection of
/// the family contains `K`, so leave-one-out witnesses exist; they are
/// drawn outside the omitted body when possible.
pub fn random_box_union<R: Rng>(rng: &mut R, dim: usize, n: usize) -> BoxUnionFamily {
    loop {
        let outer_lo = Point::from_fn(dim, |_, _| rng.random_range(-1.0..0.0));
        let outer_hi = Point::from_fn(dim, |_, _| rng.random_range(2.0..3.0));
        let core_lo = Point::from_fn(dim, |_, _| rng.random_range(0.3..0.9));
        let core_hi = Point::from_fn(dim, |k, _| core_lo[k] + rng.random_range(0.2..0.8));

        // trims[i] bit 2k: lower face k pushed to core_lo; bit 2k+1: upper face.
        let trims: Vec<u32> = (0..=n).map(|_| rng.random_range(0..1u32 << (2 * dim))).collect();
        if trims.iter().all(|t| *t == 0) {
            continue;
        }
        let patterns = 3usize.pow(dim as u32);
        let covers = (0..patterns).all(|code| {
            let mut violated = 0u32;
            let mut c = code;
            for k in 0..dim {
                match c % 3 {
                    1 => violated |= 1 << (2 * k),
                    2 => violated |= 1 << (2 * k + 1),
                    _ => {}
                }
                c /= 3;
            }
            trims.iter().any(|t| t & violated == 0)
        });
        if !covers {
            continue;
        }
        let lows: Vec<Point> = trims
            .iter()
            .map(|t| Point::from_fn(dim, |k, _| if t >> (2 * k) & 1 == 1 { core_lo[k] } else { outer_lo[k] }))
            .collect();
        let highs: Vec<Point> = trims
            .iter()
            .map(|t| Point::from_fn(dim, |k, _| if t >> (2 * k + 1) & 1 == 1 { core_hi[k] } else { outer_hi[k] }))
            .collect();
        let witnesses = (0..=n)
            .map(|j| {
                let mut lo = outer_lo.clone();
                let mut hi = outer_hi.clone();
                for i in (0..=n).filter(|i| *i != j) {
                    lo = lo.sup(&lows[i]);
                    hi = hi.inf(&highs[i]);
                }
                // Prefer a corner of the leave-one-out box lying outside body j.
                let corner_mask = rng.random_range(0..1usize << dim);
                Point::from_fn(dim, |k, _| if corner_mask >> k & 1 == 1 { hi[k] } else { lo[k] })
            })
            .collect();
        return BoxUnionFamily {
            outer_lo,
            outer_hi,
            lows,
            highs,
            witnesses,
        };
    }
}
