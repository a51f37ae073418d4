use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bodies::HPolytope;
use crate::critical::{check_critical, hollow_simplex, Criticality};
use crate::families;
use crate::geom::barycentric;
use crate::opt::DEFAULT_TOL;

fn pt(c: &[f64]) -> Point {
    Point::from_column_slice(c)
}

fn certify(bodies: &[Body]) -> CriticalFamily {
    match check_critical(bodies, DEFAULT_TOL).unwrap() {
        Criticality::Critical(f) => f,
        other => panic!("expected critical, got {other:?}"),
    }
}

fn unit_box(lo: [f64; 2], hi: [f64; 2]) -> Body {
    HPolytope::from_box(&pt(&lo), &pt(&hi)).unwrap().into()
}

fn line(base: [f64; 2], dir: [f64; 2]) -> AffineSubspace {
    AffineSubspace::new(pt(&base), vec![pt(&dir)]).unwrap()
}

fn check_against_simplex(bodies: &[Body], h: f64) {
    let f = certify(bodies);
    let hs = hollow_simplex(&f).unwrap();
    let cert = certify_hollow(&f, h).unwrap();
    assert!(cert.bounded());
    assert_eq!(cert.component_count(), 1);
    let dist = hull_vs_simplex(&cert, &hs).unwrap();
    assert!(dist <= hausdorff_threshold(2, cert.h()), "hausdorff {dist}");

    let attribution = boundary_attribution(&cert);
    assert!(attribution.missing().is_empty(), "{:?}", attribution.per_body);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rays = ray_enclosure(&cert, 100, 64, &mut rng);
    assert_eq!(rays.rays, 6400);
    assert_eq!(rays.escaped, 0);

    let ws = f.witness_simplex().unwrap();
    for c in cert.centers() {
        let w = barycentric(&ws, &c).unwrap();
        assert!(w.min() >= -1e-12, "cell center {c} outside the witness simplex");
    }
}

#[test]
fn thickened_triangle_hollow_matches_simplex() {
    check_against_simplex(&families::thickened_triangle(0.2), 0.01);
}

#[test]
fn three_disks_hollow_matches_simplex() {
    check_against_simplex(&families::three_disks(1.9), 0.005);
}

#[test]
fn zero_area_bodies_leave_the_grid_open() {
    let f = certify(&families::segment_triangle());
    assert!(matches!(certify_hollow(&f, 0.02), Err(HollowError::NoBoundedComponent { .. })));
    let ws = f.witness_simplex().unwrap();
    let (lo, hi) = (pt(&[-0.1, -0.1]), pt(&[4.1, 3.1]));
    let g = Grid::over_box(f.bodies(), &lo, &hi, 0.02).unwrap();
    assert!(g.cover_counts(3).iter().all(|c| *c < 10), "{:?}", g.cover_counts(3));
    assert!(ws.volume() > 5.9);
}

#[test]
fn vertex_distances_stay_within_a_few_cells() {
    let f = certify(&families::three_disks(1.9));
    let hs = hollow_simplex(&f).unwrap();
    let cert = certify_hollow(&f, 0.005).unwrap();
    for d in vertex_boundary_distances(&cert, &hs) {
        assert!(d <= 2.0 * 2f64.sqrt() * cert.h(), "{d}");
    }
}

#[test]
fn lower_criticality_has_no_hollow() {
    let f = certify(&[unit_box([0.0, 0.0], [1.0, 1.0]), unit_box([2.0, 0.0], [3.0, 1.0])]);
    assert!(matches!(certify_hollow(&f, 0.01), Err(HollowError::NoHollow { n: 1, d: 2 })));
}

#[test]
fn coarse_resolution_is_refused() {
    let f = certify(&families::three_disks(1.9));
    assert!(matches!(certify_hollow(&f, 0.2), Err(HollowError::TooCoarse { .. })));
    assert!(matches!(certify_hollow(&f, -1.0), Err(HollowError::BadResolution(_))));
}

#[test]
fn interval_pair_dimension_is_unsupported() {
    let f = certify(&families::interval_pair());
    assert!(matches!(certify_hollow(&f, 0.01), Err(HollowError::UnsupportedDimension { d: 1 })));
}

#[test]
fn grid_indexing_round_trips() {
    let g = Grid::rasterize(&[], pt(&[0.0, 0.0, 0.0]), 0.5, vec![3, 4, 5]).unwrap();
    assert_eq!(g.len(), 60);
    for i in 0..g.len() {
        assert_eq!(g.flat_index(&g.multi_index(i)), i);
        assert_eq!(g.locate(&g.center(i)), Some(i));
        let nbs: Vec<usize> = g.neighbors(i).collect();
        let m = g.multi_index(i);
        let interior_axes = m.iter().zip(g.shape()).filter(|(a, s)| **a > 0 && **a + 1 < **s).count();
        assert_eq!(nbs.len(), 3 + interior_axes);
    }
    assert_eq!(g.locate(&pt(&[-0.1, 0.0, 0.0])), None);
    let comps = g.uncovered_components();
    assert_eq!(comps.len(), 1);
    assert!(!comps[0].1);
}

#[test]
fn ring_of_cells_bounds_its_inside() {
    // A square annulus made of four boxes.
    let bodies = vec![
        unit_box([0.0, 0.0], [3.0, 1.0]),
        unit_box([0.0, 2.0], [3.0, 3.0]),
        unit_box([0.0, 0.0], [1.0, 3.0]),
        unit_box([2.0, 0.0], [3.0, 3.0]),
    ];
    let g = Grid::over_box(&bodies, &pt(&[-0.5, -0.5]), &pt(&[3.5, 3.5]), 0.1).unwrap();
    let bounded: Vec<_> = g.uncovered_components().into_iter().filter(|c| c.1).collect();
    assert_eq!(bounded.len(), 1);
    assert_eq!(bounded[0].0.len(), 100);
    assert_eq!(g.cover_counts(4), vec![300, 300, 300, 300]);
}

#[test]
fn hull_of_square_points() {
    let mut pts = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            pts.push(pt(&[i as f64, j as f64]));
        }
    }
    let hull = convex_hull_2d(pts);
    assert_eq!(hull.len(), 4);
    assert_eq!(hull[0], pt(&[0.0, 0.0]));
    assert_eq!(hull[1], pt(&[4.0, 0.0]));
}

#[test]
fn hausdorff_of_shifted_square() {
    let sq: Vec<Point> = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].iter().map(|c| pt(c)).collect();
    let shifted: Vec<Point> = sq.iter().map(|p| p + pt(&[0.25, 0.0])).collect();
    assert!(convex_hausdorff(&sq, &sq).unwrap() < 1e-12);
    assert!((convex_hausdorff(&sq, &shifted).unwrap() - 0.25).abs() < 1e-9);
    let inner = vec![pt(&[0.5, 0.5])];
    assert!((convex_hausdorff(&sq, &inner).unwrap() - 0.5f64.sqrt()).abs() < 1e-9);
}

fn stabbing_family() -> (Vec<Body>, Vec<Point>) {
    let bodies = vec![unit_box([0.0, 0.0], [1.0, 1.0]), unit_box([2.0, 0.0], [3.0, 1.0])];
    let f = certify(&bodies);
    (bodies, f.witnesses().to_vec())
}

#[test]
fn stabbing_pair_through_witnesses_passes() {
    let (bodies, w) = stabbing_family();
    let pair = StabbingPair::new(line([0.5, 0.5], [2.0, 0.0]), line([1.5, 0.0], [0.0, 1.0])).unwrap();
    assert!((pair.p() - pt(&[1.5, 0.5])).norm() < 1e-12);
    let r = verify_stabbing(&pair, &bodies, &w, DEFAULT_TOL).unwrap();
    assert!(r.a_ok && r.b_ok, "{r:?}");
}

#[test]
fn stabbing_pair_with_v_through_a_body_fails_a() {
    let (bodies, w) = stabbing_family();
    let pair = StabbingPair::new(line([0.5, 0.5], [2.0, 0.0]), line([0.5, 0.0], [0.0, 1.0])).unwrap();
    let r = verify_stabbing(&pair, &bodies, &w, DEFAULT_TOL).unwrap();
    assert!(!r.a_ok);
    assert!(r.a_failures.iter().any(|f| matches!(f, StabbingFailure::VMeetsBody { index: 0, .. })));
}

#[test]
fn stabbing_pair_with_w_off_the_witnesses_fails_a() {
    let (bodies, w) = stabbing_family();
    let pair = StabbingPair::new(line([0.0, 2.0], [1.0, 0.0]), line([1.5, 0.0], [0.0, 1.0])).unwrap();
    let r = verify_stabbing(&pair, &bodies, &w, DEFAULT_TOL).unwrap();
    assert!(!r.a_ok);
    assert!(!r.b_ok);
    assert_eq!(r.b_failure, Some(StabbingFailure::Unbounded));
}

#[test]
fn stabbing_pair_rejects_parallel_subspaces() {
    let e = StabbingPair::new(line([0.0, 0.0], [1.0, 0.0]), line([0.0, 1.0], [2.0, 0.0])).unwrap_err();
    assert!(matches!(e, HollowError::NotTransversal));
}
