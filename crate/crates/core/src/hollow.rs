//! Grid reconstruction of the hollow and stabbing-pair verification.
//!
//! The complement of the union is rasterized at cell centers and split
//! into face-connected components; components that never reach the outer
//! layer of the grid are bounded. Everything here uses only membership
//! queries, so it serves as an independent check on the closest-point
//! computations.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use crate::bodies::{Body, BodyError, ConvexBody, VPolytope};
use crate::critical::{CriticalError, CriticalFamily, HollowSimplex};
use crate::geom::{AffineSubspace, GeomError, Point};
use crate::opt::{distance_to_flat, OptError};

/// Cell centers within this distance of a body count as covered.
pub const COVER_TOL: f64 = 1e-12;

/// Grids larger than this are refused.
pub const MAX_GRID_CELLS: usize = 50_000_000;

/// The certified region must span at least this many cells per axis.
pub const MIN_CELLS_PER_AXIS: usize = 20;

/// Cells per axis used when rasterizing a stabbing subspace.
pub const STABBING_CELLS_PER_AXIS: usize = 400;

#[derive(Debug, Clone, thiserror::Error)]
pub enum HollowError {
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error("no hollow: a {n}-critical family in R^{d} with n < d encloses no bounded region")]
    NoHollow { n: usize, d: usize },
    #[error("grid certification supports d = 2 or 3, got d = {d}")]
    UnsupportedDimension { d: usize },
    #[error("resolution {h} gives only {cells} cells across the witness simplex; need at least {min}")]
    TooCoarse { h: f64, cells: usize, min: usize },
    #[error("grid of {cells} cells exceeds the limit of {limit}")]
    GridTooLarge { cells: usize, limit: usize },
    #[error("no bounded component of the complement at resolution {h} (also tried {h}/2)")]
    NoBoundedComponent { h: f64 },
    #[error("stabbing verification needs n in {{1, 2}}, n < d <= 3; got n = {n}, d = {d}")]
    StabbingShape { n: usize, d: usize },
    #[error("W has dimension {w} and V has dimension {v}; expected {n} and {d} - {n}")]
    SubspaceDimensions { w: usize, v: usize, n: usize, d: usize },
    #[error("W and V are not transversal")]
    NotTransversal,
    #[error("expected one witness per body ({expected}), got {found}")]
    WitnessCount { expected: usize, found: usize },
    #[error("resolution must be positive and finite, got {0}")]
    BadResolution(f64),
}

/// Axis-aligned grid of cubic cells with a per-cell cover mask.
#[derive(Debug, Clone)]
pub struct Grid {
    lo: Point,
    h: f64,
    shape: Vec<usize>,
    covers: Vec<u32>,
}

impl Grid {
    /// Rasterizes `[lo, lo + shape * h]`; bit `i` of a cell's mask is set
    /// when body `i` contains the cell center.
    pub fn rasterize(bodies: &[Body], lo: Point, h: f64, shape: Vec<usize>) -> Result<Grid, HollowError> {
        let total = shape.iter().try_fold(1usize, |acc, s| acc.checked_mul(*s));
        let total = match total {
            Some(t) if t <= MAX_GRID_CELLS => t,
            _ => {
                return Err(HollowError::GridTooLarge {
                    cells: total.unwrap_or(usize::MAX),
                    limit: MAX_GRID_CELLS,
                })
            }
        };
        let mut grid = Grid {
            lo,
            h,
            shape,
            covers: Vec::new(),
        };
        grid.covers = (0..total)
            .into_par_iter()
            .map(|i| {
                let c = grid.center(i);
                bodies
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.contains(&c, COVER_TOL))
                    .fold(0u32, |m, (k, _)| m | 1 << k)
            })
            .collect();
        Ok(grid)
    }

    /// Grid over `[lo, hi]` at resolution `h`.
    pub fn over_box(bodies: &[Body], lo: &Point, hi: &Point, h: f64) -> Result<Grid, HollowError> {
        let shape: Vec<usize> = (0..lo.len())
            .map(|k| (((hi[k] - lo[k]) / h).ceil() as usize).max(1))
            .collect();
        Grid::rasterize(bodies, lo.clone(), h, shape)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn cover(&self, index: usize) -> u32 {
        self.covers[index]
    }

    pub fn multi_index(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.shape.len());
        for s in &self.shape {
            out.push(index % s);
            index /= s;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        let mut index = 0;
        let mut stride = 1;
        for (m, s) in multi.iter().zip(&self.shape) {
            index += m * stride;
            stride *= s;
        }
        index
    }

    pub fn center(&self, index: usize) -> Point {
        let m = self.multi_index(index);
        Point::from_fn(self.shape.len(), |k, _| self.lo[k] + (m[k] as f64 + 0.5) * self.h)
    }

    /// The cell containing `p`, if inside the grid.
    pub fn locate(&self, p: &Point) -> Option<usize> {
        let mut multi = Vec::with_capacity(self.shape.len());
        for (k, s) in self.shape.iter().enumerate() {
            let x = ((p[k] - self.lo[k]) / self.h).floor();
            if !(x >= 0.0 && x < *s as f64) {
                return None;
            }
            multi.push(x as usize);
        }
        Some(self.flat_index(&multi))
    }

    /// Face neighbors of a cell.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = usize> + '_ {
        let multi = self.multi_index(index);
        let mut stride = 1;
        let mut out = Vec::with_capacity(2 * self.shape.len());
        for (k, s) in self.shape.iter().enumerate() {
            if multi[k] > 0 {
                out.push(index - stride);
            }
            if multi[k] + 1 < *s {
                out.push(index + stride);
            }
            stride *= s;
        }
        out.into_iter()
    }

    pub fn on_border(&self, index: usize) -> bool {
        self.multi_index(index)
            .iter()
            .zip(&self.shape)
            .any(|(m, s)| *m == 0 || *m + 1 == *s)
    }

    /// Number of cells covered by each of `count` bodies.
    pub fn cover_counts(&self, count: usize) -> Vec<usize> {
        (0..count)
            .map(|k| self.covers.iter().filter(|m| *m >> k & 1 == 1).count())
            .collect()
    }

    /// Face-connected components of the uncovered cells, each with a flag
    /// telling whether it stays off the outer layer.
    pub fn uncovered_components(&self) -> Vec<(Vec<usize>, bool)> {
        let mut seen = vec![false; self.covers.len()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.covers.len() {
            if seen[start] || self.covers[start] != 0 {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut cells = Vec::new();
            let mut bounded = true;
            while let Some(c) = queue.pop_front() {
                cells.push(c);
                if self.on_border(c) {
                    bounded = false;
                }
                for nb in self.neighbors(c) {
                    if !seen[nb] && self.covers[nb] == 0 {
                        seen[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
            cells.sort_unstable();
            out.push((cells, bounded));
        }
        out
    }
}

/// Grid evidence for the hollow `D` of a d-critical family.
#[derive(Debug, Clone)]
pub struct HollowCertificate {
    grid: Grid,
    cells: Vec<usize>,
    component_sizes: Vec<usize>,
    hull_vertices: Vec<Point>,
    body_count: usize,
}

impl HollowCertificate {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn h(&self) -> f64 {
        self.grid.h
    }

    /// Cells of the largest bounded component.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    /// Cell count times `h^d`.
    pub fn measure(&self) -> f64 {
        self.cells.len() as f64 * self.grid.h.powi(self.grid.shape.len() as i32)
    }

    pub fn bounded(&self) -> bool {
        !self.cells.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }

    /// Cell counts of all bounded components, largest first.
    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }

    /// Points whose convex hull is the hull of the component's cell
    /// centers: the exact hull vertices in the plane (counterclockwise),
    /// the extreme cells of every axis-parallel grid line in space.
    pub fn hull_vertices(&self) -> &[Point] {
        &self.hull_vertices
    }

    pub fn centers(&self) -> Vec<Point> {
        self.cells.iter().map(|c| self.grid.center(*c)).collect()
    }

    /// Component cells with at least one covered face neighbor.
    pub fn boundary_cells(&self) -> Vec<usize> {
        self.cells
            .iter()
            .copied()
            .filter(|&c| self.grid.neighbors(c).any(|nb| self.grid.covers[nb] != 0))
            .collect()
    }
}

/// Rasterizes 1.1 times the bounding box of the witness simplex, flood
/// fills the uncovered cells and keeps the bounded components, the
/// largest one standing for the hollow. Retries once at `h / 2` when
/// nothing bounded shows up.
pub fn certify_hollow(family: &CriticalFamily, h: f64) -> Result<HollowCertificate, HollowError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(HollowError::BadResolution(h));
    }
    let (n, d) = (family.n(), family.dim());
    if n < d {
        return Err(HollowError::NoHollow { n, d });
    }
    if !(2..=3).contains(&d) {
        return Err(HollowError::UnsupportedDimension { d });
    }
    let w = family.witnesses();
    let mut lo = w[0].clone();
    let mut hi = w[0].clone();
    for p in &w[1..] {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let span = &hi - &lo;
    let narrowest = span.min();
    let cells = (narrowest / h).floor() as usize;
    if cells < MIN_CELLS_PER_AXIS {
        return Err(HollowError::TooCoarse {
            h,
            cells,
            min: MIN_CELLS_PER_AXIS,
        });
    }
    let mid = (&lo + &hi) * 0.5;
    let half = &span * 0.55;
    let box_lo = &mid - &half;
    let box_hi = &mid + &half;

    for attempt_h in [h, h / 2.0] {
        let grid = Grid::over_box(family.bodies(), &box_lo, &box_hi, attempt_h)?;
        let mut bounded: Vec<Vec<usize>> = grid
            .uncovered_components()
            .into_iter()
            .filter(|(_, b)| *b)
            .map(|(c, _)| c)
            .collect();
        if bounded.is_empty() {
            continue;
        }
        bounded.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let component_sizes = bounded.iter().map(|c| c.len()).collect();
        let cells = bounded.swap_remove(0);
        let hull_vertices = hull_generators(&grid, &cells);
        return Ok(HollowCertificate {
            grid,
            cells,
            component_sizes,
            hull_vertices,
            body_count: family.bodies().len(),
        });
    }
    Err(HollowError::NoBoundedComponent { h })
}

fn hull_generators(grid: &Grid, cells: &[usize]) -> Vec<Point> {
    let d = grid.shape.len();
    let mut extremes: std::collections::BTreeMap<(usize, Vec<usize>), (usize, usize)> = Default::default();
    for &c in cells {
        let m = grid.multi_index(c);
        for axis in 0..d {
            let mut key = m.clone();
            let along = key.remove(axis);
            extremes
                .entry((axis, key))
                .and_modify(|e| {
                    e.0 = e.0.min(along);
                    e.1 = e.1.max(along);
                })
                .or_insert((along, along));
        }
    }
    let mut picked: Vec<usize> = Vec::new();
    for ((axis, key), (a, b)) in &extremes {
        for along in [*a, *b] {
            let mut m = key.clone();
            m.insert(*axis, along);
            picked.push(grid.flat_index(&m));
        }
    }
    picked.sort_unstable();
    picked.dedup();
    let points: Vec<Point> = picked.iter().map(|c| grid.center(*c)).collect();
    if d == 2 {
        convex_hull_2d(points)
    } else {
        points
    }
}

/// Monotone-chain hull in the plane, counterclockwise, collinear points
/// dropped.
pub fn convex_hull_2d(mut points: Vec<Point>) -> Vec<Point> {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    points.dedup_by(|a, b| a == b);
    if points.len() < 3 {
        return points;
    }
    let cross = |o: &Point, a: &Point, b: &Point| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<Point> = Vec::new();
    for p in &points {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in points.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hausdorff distance between the convex hulls of two point sets: the
/// largest distance from a generator of either hull to the other hull.
pub fn convex_hausdorff(a: &[Point], b: &[Point]) -> Result<f64, HollowError> {
    let pa = VPolytope::new(a.to_vec())?;
    let pb = VPolytope::new(b.to_vec())?;
    let one_way = |from: &[Point], to: &VPolytope| -> Result<f64, HollowError> {
        let dists = from
            .par_iter()
            .map(|p| to.distance(p))
            .collect::<Result<Vec<f64>, BodyError>>()?;
        Ok(dists.into_iter().fold(0.0, f64::max))
    };
    Ok(one_way(a, &pb)?.max(one_way(b, &pa)?))
}

/// Hausdorff distance between the hull of the certified component and the
/// hollow simplex.
pub fn hull_vs_simplex(cert: &HollowCertificate, hollow: &HollowSimplex) -> Result<f64, HollowError> {
    convex_hausdorff(&cert.hull_vertices, hollow.vertices())
}

/// The acceptance bound `2 sqrt(d) h + 1e-4` on [`hull_vs_simplex`].
pub fn hausdorff_threshold(d: usize, h: f64) -> f64 {
    2.0 * (d as f64).sqrt() * h + 1e-4
}

/// Which bodies cover the face neighbors of every boundary cell.
#[derive(Debug, Clone)]
pub struct BoundaryAttribution {
    /// `(cell, bodies covering some face neighbor)` for every boundary cell.
    pub cells: Vec<(usize, Vec<usize>)>,
    /// Number of boundary cells touching each body.
    pub per_body: Vec<usize>,
}

impl BoundaryAttribution {
    /// Bodies never seen on the boundary.
    pub fn missing(&self) -> Vec<usize> {
        self.per_body
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == 0)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn boundary_attribution(cert: &HollowCertificate) -> BoundaryAttribution {
    let mut per_body = vec![0; cert.body_count];
    let cells = cert
        .boundary_cells()
        .into_iter()
        .map(|c| {
            let mask = cert.grid.neighbors(c).fold(0u32, |m, nb| m | cert.grid.covers[nb]);
            let bodies: Vec<usize> = (0..cert.body_count).filter(|k| mask >> k & 1 == 1).collect();
            for b in &bodies {
                per_body[*b] += 1;
            }
            (c, bodies)
        })
        .collect();
    BoundaryAttribution { cells, per_body }
}

/// Distance from every hollow-simplex vertex to the nearest boundary cell
/// center of the certified component.
pub fn vertex_boundary_distances(cert: &HollowCertificate, hollow: &HollowSimplex) -> Vec<f64> {
    let boundary: Vec<Point> = cert.boundary_cells().iter().map(|c| cert.grid.center(*c)).collect();
    hollow
        .vertices()
        .iter()
        .map(|p| boundary.iter().map(|b| (b - p).norm()).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Rays cast from random component cells; a ray escapes when it leaves the
/// grid before reaching a covered cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnclosureReport {
    pub rays: usize,
    pub escaped: usize,
}

pub fn ray_enclosure<R: Rng>(cert: &HollowCertificate, origins: usize, directions: usize, rng: &mut R) -> EnclosureReport {
    let grid = &cert.grid;
    let d = grid.shape.len();
    let step = grid.h / 4.0;
    let mut rays = 0;
    let mut escaped = 0;
    for _ in 0..origins {
        if cert.cells.is_empty() {
            break;
        }
        let start = grid.center(cert.cells[rng.random_range(0..cert.cells.len())]);
        for _ in 0..directions {
            let mut dir = Point::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
            while dir.norm() < 1e-6 {
                dir = Point::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
            }
            dir /= dir.norm();
            rays += 1;
            let mut t = 0.0;
            loop {
                t += step;
                match grid.locate(&(&start + &dir * t)) {
                    None => {
                        escaped += 1;
                        break;
                    }
                    Some(c) if grid.covers[c] != 0 => break,
                    Some(_) => {}
                }
            }
        }
    }
    EnclosureReport { rays, escaped }
}

/// Complementary affine subspaces `W` (dimension n) and `V` (dimension
/// d - n) meeting in the single point `p`.
#[derive(Debug, Clone)]
pub struct StabbingPair {
    w: AffineSubspace,
    v: AffineSubspace,
    p: Point,
}

impl StabbingPair {
    pub fn new(w: AffineSubspace, v: AffineSubspace) -> Result<Self, HollowError> {
        let d = w.ambient_dim();
        if v.ambient_dim() != d {
            return Err(BodyError::DimensionMismatch {
                expected: d,
                found: v.ambient_dim(),
            }
            .into());
        }
        if w.dim() + v.dim() != d {
            return Err(HollowError::SubspaceDimensions {
                w: w.dim(),
                v: v.dim(),
                n: w.dim(),
                d,
            });
        }
        let m = DMatrix::from_fn(d, d, |r, c| {
            if c < w.dim() {
                w.basis()[c][r]
            } else {
                -v.basis()[c - w.dim()][r]
            }
        });
        let svd = m.clone().svd(true, true);
        if svd.singular_values.min() < 1e-9 {
            return Err(HollowError::NotTransversal);
        }
        let rhs = v.base() - w.base();
        let st = svd.solve(&rhs, 1e-12).map_err(|_| HollowError::NotTransversal)?;
        let s = Point::from_fn(w.dim(), |k, _| st[k]);
        let p = w.point_at(&s);
        Ok(StabbingPair { w, v, p })
    }

    pub fn w(&self) -> &AffineSubspace {
        &self.w
    }

    pub fn v(&self) -> &AffineSubspace {
        &self.v
    }

    pub fn p(&self) -> &Point {
        &self.p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StabbingFailure {
    /// Witness `index` lies `distance` away from `W`.
    WitnessOffW { index: usize, distance: f64 },
    /// `V` comes within `distance` of body `index`.
    VMeetsBody { index: usize, distance: f64 },
    /// `p` itself is covered by body `index`.
    PointCovered { index: usize },
    /// The uncovered component of `p` in `W` reaches the raster border.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabbingReport {
    pub a_ok: bool,
    pub b_ok: bool,
    pub a_failures: Vec<StabbingFailure>,
    pub b_failure: Option<StabbingFailure>,
}

/// Checks a candidate stabbing pair for an n-critical family (n < d):
/// (a) `V` misses every body and `W` holds every witness; (b) in `W`, the
/// uncovered component containing `p` is bounded.
pub fn verify_stabbing(
    pair: &StabbingPair,
    bodies: &[Body],
    witnesses: &[Point],
    tol: f64,
) -> Result<StabbingReport, HollowError> {
    let d = pair.w.ambient_dim();
    let n = bodies.len().saturating_sub(1);
    if !(1..=2).contains(&n) || n >= d || d > 3 {
        return Err(HollowError::StabbingShape { n, d });
    }
    if pair.w.dim() != n {
        return Err(HollowError::SubspaceDimensions {
            w: pair.w.dim(),
            v: pair.v.dim(),
            n,
            d,
        });
    }
    if witnesses.len() != bodies.len() {
        return Err(HollowError::WitnessCount {
            expected: bodies.len(),
            found: witnesses.len(),
        });
    }

    let mut a_failures = Vec::new();
    for (index, a) in witnesses.iter().enumerate() {
        let distance = pair.w.distance(a);
        if distance > 1e-6 {
            a_failures.push(StabbingFailure::WitnessOffW { index, distance });
        }
    }
    for (index, body) in bodies.iter().enumerate() {
        let r = distance_to_flat(&pair.v, body)?;
        if r.distance <= tol {
            a_failures.push(StabbingFailure::VMeetsBody {
                index,
                distance: r.distance,
            });
        }
    }

    let b_failure = surround_check(pair, bodies)?;
    Ok(StabbingReport {
        a_ok: a_failures.is_empty(),
        b_ok: b_failure.is_none(),
        a_failures,
        b_failure,
    })
}

fn surround_check(pair: &StabbingPair, bodies: &[Body]) -> Result<Option<StabbingFailure>, HollowError> {
    let w = &pair.w;
    let n = w.dim();
    if let Some(index) = bodies.iter().position(|b| b.contains(&pair.p, COVER_TOL)) {
        return Ok(Some(StabbingFailure::PointCovered { index }));
    }
    // Window in W coordinates around p and the traces of the bodies' boxes.
    let pc = w.coords(&pair.p);
    let mut lo = pc.clone();
    let mut hi = pc.clone();
    for b in bodies {
        let (blo, bhi) = b.bounding_box();
        let corners = 1usize << blo.len();
        for mask in 0..corners {
            let corner = Point::from_fn(blo.len(), |k, _| if mask >> k & 1 == 1 { bhi[k] } else { blo[k] });
            let c = w.coords(&corner);
            lo = lo.inf(&c);
            hi = hi.sup(&c);
        }
    }
    let span = (&hi - &lo).max().max(1e-9);
    let h = 2.0 * span / STABBING_CELLS_PER_AXIS as f64;
    let lo = lo.add_scalar(-span / 2.0);
    let shape = vec![STABBING_CELLS_PER_AXIS; n];

    let covers: Vec<u32> = (0..STABBING_CELLS_PER_AXIS.pow(n as u32))
        .into_par_iter()
        .map(|i| {
            let mut idx = i;
            let coords = Point::from_fn(n, |k, _| {
                let m = idx % STABBING_CELLS_PER_AXIS;
                idx /= STABBING_CELLS_PER_AXIS;
                lo[k] + (m as f64 + 0.5) * h
            });
            let x = w.point_at(&coords);
            bodies
                .iter()
                .enumerate()
                .filter(|(_, b)| b.contains(&x, COVER_TOL))
                .fold(0u32, |m, (k, _)| m | 1 << k)
        })
        .collect();
    let grid = Grid { lo, h, shape, covers };
    let Some(start) = grid.locate(&pc) else {
        return Ok(Some(StabbingFailure::Unbounded));
    };
    if grid.covers[start] != 0 {
        let index = grid.covers[start].trailing_zeros() as usize;
        return Ok(Some(StabbingFailure::PointCovered { index }));
    }
    let mut seen = vec![false; grid.covers.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(c) = queue.pop_front() {
        if grid.on_border(c) {
            return Ok(Some(StabbingFailure::Unbounded));
        }
        for nb in grid.neighbors(c) {
            if !seen[nb] && grid.covers[nb] == 0 {
                seen[nb] = true;
                queue.push_back(nb);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
