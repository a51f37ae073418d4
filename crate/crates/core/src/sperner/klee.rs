use std::collections::HashMap;

use super::{check_legal, color_point, mask_indices, subdivide, Color, ColoringOutcome, SpernerError};
use crate::bodies::{common_dim, dykstra_project, Body, BodyError, ConvexBody};
use crate::geom::{centroid, Point, Simplex};
use crate::opt::{intersect_witness, FeasibilityReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleeOptions {
    /// Barycentric depth of the starting subdivision.
    pub initial_depth: usize,
    /// Refinement gives up once the triangulation has this many cells.
    pub max_cells: usize,
    /// Rounds of Dykstra polishing applied to the final point.
    pub polish_rounds: usize,
}

impl Default for KleeOptions {
    fn default() -> Self {
        KleeOptions {
            initial_depth: 1,
            max_cells: 2_000_000,
            polish_rounds: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KleeMethod {
    /// A single body: the projection of its witness.
    Single,
    /// Degenerate witness simplex: solved as a plain feasibility problem.
    Helly,
    /// A subdivision vertex already lay in every body.
    Sentinel,
    /// Centroid of a rainbow cell of the given diameter.
    Rainbow { diameter: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KleeSolution {
    pub point: Point,
    pub method: KleeMethod,
    /// Refinement rounds after the initial subdivision.
    pub rounds: usize,
    /// Cells in the final triangulation.
    pub cells: usize,
}

/// Finds a common point of `C_0, ..., C_n` from witnesses
/// `a_j ∈ ∩_{i≠j} C_i`, assuming the union of the bodies covers the
/// witness simplex.
///
/// The witness simplex is subdivided and Sperner-colored (`v` gets the
/// smallest `j` with `v ∈ C_{j-1} \ C_j`). Rainbow cells are then refined
/// by conforming longest-edge bisection until one has diameter below
/// `tol / 2`; its centroid is within `tol / 2` of every body and is
/// polished by Dykstra's projections onto the intersection.
pub fn klee_solve(
    bodies: &[Body],
    witnesses: &[Point],
    tol: f64,
    options: &KleeOptions,
) -> Result<KleeSolution, SpernerError> {
    let d = common_dim(bodies)?;
    if witnesses.len() != bodies.len() {
        return Err(SpernerError::BodyCount {
            expected: witnesses.len(),
            found: bodies.len(),
        });
    }
    for w in witnesses {
        if w.len() != d {
            return Err(BodyError::DimensionMismatch {
                expected: d,
                found: w.len(),
            }
            .into());
        }
    }
    if bodies.len() == 1 {
        return Ok(KleeSolution {
            point: bodies[0].project(&witnesses[0])?,
            method: KleeMethod::Single,
            rounds: 0,
            cells: 0,
        });
    }
    let simplex = match Simplex::new(witnesses.to_vec()) {
        Ok(s) => s,
        Err(_) => return helly_branch(bodies, tol),
    };

    let complex = subdivide(&simplex, options.initial_depth)?;
    let colors = match super::sperner_color(&complex, bodies, tol)? {
        ColoringOutcome::CommonPoint { point, .. } => {
            return Ok(KleeSolution {
                point: polish(bodies, point, tol, options),
                method: KleeMethod::Sentinel,
                rounds: 0,
                cells: complex.cell_count(),
            })
        }
        ColoringOutcome::Colored(c) => c,
    };
    check_legal(&complex, &colors)?;

    let mut tri = Triangulation {
        points: complex.points().to_vec(),
        carriers: (0..complex.points().len()).map(|v| complex.carrier_mask(v)).collect(),
        colors,
        cells: complex.cells().map(|c| c.to_vec()).collect(),
        alive: vec![true; complex.cell_count()],
        incidence: vec![Vec::new(); complex.points().len()],
        midpoints: HashMap::new(),
        live_cells: complex.cell_count(),
    };
    for (c, cell) in tri.cells.iter().enumerate() {
        for v in cell {
            tri.incidence[*v].push(c);
        }
    }
    let mut rainbow: Vec<usize> = (0..tri.cells.len()).filter(|&c| tri.is_rainbow(c)).collect();

    let target = tol / 2.0;
    let mut rounds = 0;
    loop {
        rainbow.retain(|&c| tri.alive[c]);
        if rainbow.is_empty() {
            return Err(SpernerError::NoRainbow);
        }
        let (best, diameter) = rainbow
            .iter()
            .map(|&c| (c, tri.diameter(c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if diameter < target {
            let point = centroid(&tri.cell_points(best));
            return Ok(KleeSolution {
                point: polish(bodies, point, tol, options),
                method: KleeMethod::Rainbow { diameter },
                rounds,
                cells: tri.live_cells,
            });
        }
        if tri.live_cells > options.max_cells {
            return Err(SpernerError::NoConvergence {
                best_cell: tri.cell_points(best),
                diameter,
            });
        }
        rounds += 1;
        let mut fresh = Vec::new();
        for c in std::mem::take(&mut rainbow) {
            if !tri.alive[c] {
                continue;
            }
            let (a, b) = tri.longest_edge(c);
            match tri.bisect(a, b, bodies, tol)? {
                Bisected::Cells(new_cells) => fresh.extend(new_cells),
                Bisected::CommonPoint(point) => {
                    return Ok(KleeSolution {
                        point: polish(bodies, point, tol, options),
                        method: KleeMethod::Sentinel,
                        rounds,
                        cells: tri.live_cells,
                    })
                }
            }
        }
        rainbow = fresh.into_iter().filter(|&c| tri.alive[c] && tri.is_rainbow(c)).collect();
    }
}

fn helly_branch(bodies: &[Body], tol: f64) -> Result<KleeSolution, SpernerError> {
    match intersect_witness(bodies, tol)? {
        FeasibilityReport::Witness(point) => Ok(KleeSolution {
            point,
            method: KleeMethod::Helly,
            rounds: 0,
            cells: 0,
        }),
        FeasibilityReport::Empty(c) => Err(SpernerError::HellyBranchEmpty(Box::new(c))),
    }
}

/// Runs Dykstra toward the intersection and keeps the result only if it
/// still passes membership everywhere.
fn polish(bodies: &[Body], point: Point, tol: f64, options: &KleeOptions) -> Point {
    let candidate = match dykstra_project(bodies, &point, tol * 1e-3, options.polish_rounds) {
        Ok(o) => o.point,
        Err(BodyError::NoConvergence { last, .. }) => last,
        Err(_) => return point,
    };
    let slack = |p: &Point| {
        bodies
            .iter()
            .map(|b| b.distance(p).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    };
    if slack(&candidate) <= slack(&point) {
        candidate
    } else {
        point
    }
}

enum Bisected {
    Cells(Vec<usize>),
    CommonPoint(Point),
}

struct Triangulation {
    points: Vec<Point>,
    carriers: Vec<u32>,
    colors: Vec<usize>,
    cells: Vec<Vec<usize>>,
    alive: Vec<bool>,
    incidence: Vec<Vec<usize>>,
    midpoints: HashMap<(usize, usize), usize>,
    live_cells: usize,
}

impl Triangulation {
    fn is_rainbow(&self, c: usize) -> bool {
        super::is_rainbow(&self.cells[c], &self.colors)
    }

    fn cell_points(&self, c: usize) -> Vec<Point> {
        self.cells[c].iter().map(|v| self.points[*v].clone()).collect()
    }

    fn diameter(&self, c: usize) -> f64 {
        super::cell_diameter(&self.points, &self.cells[c])
    }

    fn longest_edge(&self, c: usize) -> (usize, usize) {
        let cell = &self.cells[c];
        let mut best = (cell[0], cell[1]);
        let mut len = -1.0;
        for (i, &a) in cell.iter().enumerate() {
            for &b in &cell[i + 1..] {
                let l = (&self.points[a] - &self.points[b]).norm();
                if l > len {
                    len = l;
                    best = (a.min(b), a.max(b));
                }
            }
        }
        best
    }

    /// Splits edge `(a, b)` at its midpoint in every live cell containing
    /// it, keeping the triangulation conforming.
    fn bisect(&mut self, a: usize, b: usize, bodies: &[Body], tol: f64) -> Result<Bisected, SpernerError> {
        let key = (a.min(b), a.max(b));
        let m = match self.midpoints.get(&key) {
            Some(&m) => m,
            None => {
                let p = (&self.points[a] + &self.points[b]) * 0.5;
                let color = match color_point(&p, bodies, tol) {
                    Color::InAll => return Ok(Bisected::CommonPoint(p)),
                    Color::Index(i) => i,
                    Color::Uncovered => return Err(SpernerError::Uncovered { point: p }),
                };
                let carrier = self.carriers[a] | self.carriers[b];
                if carrier >> color & 1 == 0 {
                    return Err(SpernerError::IllegalColor {
                        vertex: self.points.len(),
                        color,
                        carrier: mask_indices(carrier),
                    });
                }
                self.points.push(p);
                self.carriers.push(carrier);
                self.colors.push(color);
                self.incidence.push(Vec::new());
                let m = self.points.len() - 1;
                self.midpoints.insert(key, m);
                m
            }
        };
        let shared: Vec<usize> = self.incidence[a]
            .iter()
            .copied()
            .filter(|&c| self.alive[c] && self.cells[c].contains(&b))
            .collect();
        let mut created = Vec::with_capacity(2 * shared.len());
        for c in shared {
            self.alive[c] = false;
            self.live_cells -= 1;
            for replaced in [a, b] {
                let cell: Vec<usize> = self.cells[c]
                    .iter()
                    .map(|&v| if v == replaced { m } else { v })
                    .collect();
                let id = self.cells.len();
                for v in &cell {
                    self.incidence[*v].push(id);
                }
                self.cells.push(cell);
                self.alive.push(true);
                self.live_cells += 1;
                created.push(id);
            }
        }
        for v in [a, b] {
            let alive = &self.alive;
            self.incidence[v].retain(|&c| alive[c]);
        }
        Ok(Bisected::Cells(created))
    }
}
