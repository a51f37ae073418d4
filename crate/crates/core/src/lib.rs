//! Toolkit for critical families of compact convex sets.
//!
//! A family `C_0, ..., C_n` of compact convex sets in R^d is *n-critical*
//! when every `n` of them share a point but all `n + 1` do not. This crate
//! certifies criticality from membership, support and projection oracles,
//! computes the hollow simplex of a d-critical family, solves intersection
//! problems by Sperner subdivision and KKM verification, and reconstructs
//! the hollow on a grid as an independent check.

pub mod bodies;
pub mod critical;
pub mod families;
pub mod geom;
pub mod hollow;
mod lp;
pub mod opt;
pub mod sperner;

pub use bodies::{Ball, Body, BodyError, ConvexBody, HPolytope, IntersectionBody, VPolytope};
pub use critical::{
    cage_contains_hull_vertices, cage_intersection_is_cage, check_critical, helly_guard, hollow_simplex,
    uniqueness_probe, Cage, CriticalError, CriticalFamily, Criticality, HollowSimplex,
};
pub use geom::{affine_hull, barycentric, radon_partition, AffineSubspace, GeomError, Hyperplane, Point, RadonPartition, Simplex};
pub use hollow::{
    boundary_attribution, certify_hollow, hull_vs_simplex, verify_stabbing, HollowCertificate, HollowError,
    StabbingPair, StabbingReport,
};
pub use opt::{
    intersect_witness, min_distance, separating_hyperplane, DistanceResult, EmptyCertificate, FeasibilityReport,
    OptError, DEFAULT_TOL,
};
pub use sperner::{
    find_rainbow, kkm_verify, klee_solve, sperner_color, subdivide, Color, KkmInstance, KkmReport, SpernerError,
    SubdivisionComplex,
};
