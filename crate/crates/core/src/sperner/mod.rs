//! Simplicial subdivisions, Sperner colorings and the intersection solvers
//! built on them.

mod kkm;
mod klee;

pub use kkm::{kkm_verify, third_proof_instance, KkmCounterexample, KkmInstance, KkmReport, KKM_MAX_POINTS};
pub use klee::{klee_solve, KleeMethod, KleeOptions, KleeSolution};

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bodies::{Body, BodyError, ConvexBody};
use crate::geom::{simplex_volume, GeomError, Point, Simplex};
use crate::opt::{EmptyCertificate, OptError};

/// Subdivisions larger than this are refused.
pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SpernerError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error("subdivision would have {requested} cells, more than the limit of {limit}")]
    TooManyCells { requested: u128, limit: usize },
    #[error("expected {expected} bodies, one per simplex vertex, found {found}")]
    BodyCount { expected: usize, found: usize },
    #[error("cell {cell} does not match the complex dimension")]
    BadCell { cell: usize },
    #[error("cells do not tile the simplex: volume {total} against {expected}")]
    BadTiling { total: f64, expected: f64 },
    #[error("vertex {vertex} got color {color} outside its carrier face {carrier:?}")]
    IllegalColor {
        vertex: usize,
        color: usize,
        carrier: Vec<usize>,
    },
    #[error("the union does not cover the witness simplex: {point:?} lies in no body")]
    Uncovered { point: Point },
    #[error("no rainbow cell although the coloring is legal")]
    NoRainbow,
    #[error("no convergence, the union may not be convex: smallest rainbow cell has diameter {diameter:e}")]
    NoConvergence { best_cell: Vec<Point>, diameter: f64 },
    #[error("degenerate witness simplex and the family has empty intersection")]
    HellyBranchEmpty(Box<EmptyCertificate>),
    #[error("KKM verification takes at most {limit} points, got {count}")]
    TooManyPoints { count: usize, limit: usize },
    #[error("KKM instance has no points")]
    NoPoints,
    #[error("KKM instance: {points} points but {images} images")]
    ImageCount { points: usize, images: usize },
    #[error("KKM condition holds on every sample but the images have empty intersection")]
    KkmContradiction(Box<EmptyCertificate>),
}

/// A triangulation of a simplex, with every vertex tagged by its carrier
/// face: the bitmask of ambient vertices with positive barycentric weight.
#[derive(Debug, Clone)]
pub struct SubdivisionComplex {
    ambient: Simplex,
    points: Vec<Point>,
    carriers: Vec<u32>,
    cells: Vec<usize>,
    mesh: f64,
}

impl SubdivisionComplex {
    /// Builds a complex from explicit cells, checking that they tile the
    /// ambient simplex by volume.
    pub fn from_cells(ambient: Simplex, points: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self, SpernerError> {
        let k = ambient.dim();
        let mut flat = Vec::with_capacity(cells.len() * (k + 1));
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() != k + 1 || cell.iter().any(|v| *v >= points.len()) {
                return Err(SpernerError::BadCell { cell: c });
            }
            flat.extend_from_slice(cell);
        }
        let mut carriers = Vec::with_capacity(points.len());
        for p in &points {
            let w = ambient.barycentric(p)?;
            let mut mask = 0u32;
            for (i, x) in w.iter().enumerate() {
                if *x > 1e-9 {
                    mask |= 1 << i;
                }
            }
            carriers.push(mask);
        }
        let total: f64 = cells
            .iter()
            .map(|c| simplex_volume(&c.iter().map(|v| points[*v].clone()).collect::<Vec<_>>()))
            .sum();
        let expected = ambient.volume();
        if (total - expected).abs() > 1e-6 * expected.max(f64::MIN_POSITIVE) {
            return Err(SpernerError::BadTiling { total, expected });
        }
        let mut complex = SubdivisionComplex {
            ambient,
            points,
            carriers,
            cells: flat,
            mesh: 0.0,
        };
        complex.mesh = complex.compute_mesh();
        Ok(complex)
    }

    pub fn ambient(&self) -> &Simplex {
        &self.ambient
    }

    /// Dimension `k` of the cells.
    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn carrier_mask(&self, vertex: usize) -> u32 {
        self.carriers[vertex]
    }

    /// Indices of the ambient vertices spanning the carrier face.
    pub fn carrier(&self, vertex: usize) -> Vec<usize> {
        mask_indices(self.carriers[vertex])
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len() / (self.dim() + 1)
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        let s = self.dim() + 1;
        &self.cells[i * s..(i + 1) * s]
    }

    pub fn cells(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.chunks(self.dim() + 1)
    }

    pub fn cell_points(&self, i: usize) -> Vec<Point> {
        self.cell(i).iter().map(|v| self.points[*v].clone()).collect()
    }

    /// Largest cell diameter.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn cell_diameter(&self, i: usize) -> f64 {
        cell_diameter(&self.points, self.cell(i))
    }

    fn compute_mesh(&self) -> f64 {
        (0..self.cell_count())
            .into_par_iter()
            .map(|i| self.cell_diameter(i))
            .reduce(|| 0.0, f64::max)
    }

    /// Sum of cell volumes.
    pub fn total_volume(&self) -> f64 {
        (0..self.cell_count())
            .into_par_iter()
            .map(|i| simplex_volume(&self.cell_points(i)))
            .sum()
    }
}

fn cell_diameter(points: &[Point], cell: &[usize]) -> f64 {
    let mut d = 0.0f64;
    for (a, &i) in cell.iter().enumerate() {
        for &j in &cell[a + 1..] {
            d = d.max((&points[i] - &points[j]).norm());
        }
    }
    d
}

pub(crate) fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of cells after `depth` barycentric subdivisions of a k-simplex.
pub fn barycentric_cell_count(k: usize, depth: usize) -> u128 {
    let fact: u128 = (1..=k as u128 + 1).product();
    fact.checked_pow(depth as u32).unwrap_or(u128::MAX)
}

/// Iterated barycentric subdivision: every cell is replaced by the
/// `(k+1)!` simplices spanned by the barycenters of a maximal flag of its
/// faces.
pub fn subdivide(s: &Simplex, depth: usize) -> Result<SubdivisionComplex, SpernerError> {
    let k = s.dim();
    let requested = barycentric_cell_count(k, depth);
    if requested > MAX_CELLS as u128 {
        return Err(SpernerError::TooManyCells {
            requested,
            limit: MAX_CELLS,
        });
    }
    let ambient = s.vertices().to_vec();
    let mut weights: Vec<Vec<f64>> = (0..=k)
        .map(|i| {
            let mut w = vec![0.0; k + 1];
            w[i] = 1.0;
            w
        })
        .collect();
    let mut carriers: Vec<u32> = (0..=k).map(|i| 1u32 << i).collect();
    let mut cells: Vec<usize> = (0..=k).collect();
    let perms = permutations(k + 1);

    for _ in 0..depth {
        let mut faces: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = Vec::with_capacity(cells.len() * perms.len());
        for cell in cells.chunks(k + 1) {
            for perm in &perms {
                let mut face: Vec<usize> = Vec::with_capacity(k + 1);
                for &slot in perm {
                    face.push(cell[slot]);
                    if face.len() == 1 {
                        next.push(face[0]);
                        continue;
                    }
                    let mut key = face.clone();
                    key.sort_unstable();
                    let id = *faces.entry(key).or_insert_with_key(|key| {
                        let mut w = vec![0.0; k + 1];
                        let mut mask = 0u32;
                        for &v in key {
                            for (acc, x) in w.iter_mut().zip(&weights[v]) {
                                *acc += x;
                            }
                            mask |= carriers[v];
                        }
                        let m = key.len() as f64;
                        w.iter_mut().for_each(|x| *x /= m);
                        weights.push(w);
                        carriers.push(mask);
                        weights.len() - 1
                    });
                    next.push(id);
                }
            }
        }
        cells = next;
    }

    let points: Vec<Point> = weights
        .par_iter()
        .map(|w| {
            let mut p = Point::zeros(s.ambient_dim());
            for (v, x) in ambient.iter().zip(w) {
                p += v * *x;
            }
            p
        })
        .collect();
    let mut complex = SubdivisionComplex {
        ambient: s.clone(),
        points,
        carriers,
        cells,
        mesh: 0.0,
    };
    complex.mesh = complex.compute_mesh();
    Ok(complex)
}

/// A vertex color: an index in `0..=n`, the sentinel for a vertex that
/// lies in every body, or the marker for a vertex outside the union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Index(usize),
    InAll,
    Uncovered,
}

/// Smallest `j` with `p ∈ C_{j-1} \ C_j`, indices taken cyclically.
pub fn color_point(p: &Point, bodies: &[Body], tol: f64) -> Color {
    let n1 = bodies.len();
    let inside: Vec<bool> = bodies.iter().map(|b| b.contains(p, tol)).collect();
    if inside.iter().all(|x| *x) {
        return Color::InAll;
    }
    (0..n1)
        .find(|&j| inside[(j + n1 - 1) % n1] && !inside[j])
        .map_or(Color::Uncovered, Color::Index)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColoringOutcome {
    /// One color per vertex of the complex.
    Colored(Vec<usize>),
    /// A vertex lying in every body.
    CommonPoint { vertex: usize, point: Point },
}

/// Colors every vertex of a complex built over the witness simplex
/// `Conv(a_0, ..., a_n)`, stopping at a vertex common to all bodies.
pub fn sperner_color(complex: &SubdivisionComplex, bodies: &[Body], tol: f64) -> Result<ColoringOutcome, SpernerError> {
    let expected = complex.dim() + 1;
    if bodies.len() != expected {
        return Err(SpernerError::BodyCount {
            expected,
            found: bodies.len(),
        });
    }
    let colors: Vec<Color> = complex
        .points
        .par_iter()
        .map(|p| color_point(p, bodies, tol))
        .collect();
    if let Some(vertex) = colors.iter().position(|c| *c == Color::InAll) {
        return Ok(ColoringOutcome::CommonPoint {
            vertex,
            point: complex.points[vertex].clone(),
        });
    }
    let colors: Vec<usize> = colors
        .into_iter()
        .zip(&complex.points)
        .map(|(c, p)| match c {
            Color::Index(i) => Ok(i),
            _ => Err(SpernerError::Uncovered { point: p.clone() }),
        })
        .collect::<Result<_, _>>()?;
    check_legal(complex, &colors)?;
    Ok(ColoringOutcome::Colored(colors))
}

/// Checks that every vertex color belongs to its carrier face.
pub fn check_legal(complex: &SubdivisionComplex, colors: &[usize]) -> Result<(), SpernerError> {
    for (vertex, (&color, &mask)) in colors.iter().zip(&complex.carriers).enumerate() {
        if color >= 32 || mask >> color & 1 == 0 {
            return Err(SpernerError::IllegalColor {
                vertex,
                color,
                carrier: mask_indices(mask),
            });
        }
    }
    Ok(())
}

fn is_rainbow(cell: &[usize], colors: &[usize]) -> bool {
    let full = (1u64 << cell.len()) - 1;
    let mut seen = 0u64;
    for v in cell {
        let c = colors[*v];
        if c >= cell.len() {
            return false;
        }
        seen |= 1 << c;
    }
    seen == full
}

/// Indices of all cells whose vertices carry every color.
pub fn rainbow_cells(complex: &SubdivisionComplex, colors: &[usize]) -> Vec<usize> {
    (0..complex.cell_count())
        .into_par_iter()
        .filter(|&i| is_rainbow(complex.cell(i), colors))
        .collect()
}

/// The first rainbow cell.
pub fn find_rainbow(complex: &SubdivisionComplex, colors: &[usize]) -> Result<usize, SpernerError> {
    (0..complex.cell_count())
        .into_par_iter()
        .find_first(|&i| is_rainbow(complex.cell(i), colors))
        .ok_or(SpernerError::NoRainbow)
}

#[cfg(test)]
mod tests;
