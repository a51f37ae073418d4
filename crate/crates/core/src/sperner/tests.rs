use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bodies::HPolytope;
use crate::families;
use crate::opt::intersect_witness;

fn pt(c: &[f64]) -> Point {
    Point::from_column_slice(c)
}

fn unit_triangle() -> Simplex {
    Simplex::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]).unwrap()
}

fn standard_simplex(d: usize) -> Simplex {
    let mut v = vec![Point::zeros(d)];
    for k in 0..d {
        let mut e = Point::zeros(d);
        e[k] = 1.0;
        v.push(e);
    }
    Simplex::new(v).unwrap()
}

fn square_witnesses() -> Vec<Point> {
    vec![pt(&[1.5, 2.5]), pt(&[0.5, 1.5]), pt(&[2.5, 0.5])]
}

fn in_common_square(p: &Point, tol: f64) -> bool {
    p.iter().all(|x| *x >= 1.0 - tol && *x <= 2.0 + tol)
}

#[test]
fn barycentric_cell_counts() {
    assert_eq!(subdivide(&unit_triangle(), 1).unwrap().cell_count(), 6);
    assert_eq!(subdivide(&unit_triangle(), 2).unwrap().cell_count(), 36);
    assert_eq!(subdivide(&standard_simplex(3), 2).unwrap().cell_count(), 576);
    assert_eq!(subdivide(&unit_triangle(), 0).unwrap().cell_count(), 1);
}

#[test]
fn oversized_subdivision_is_refused() {
    let r = subdivide(&standard_simplex(3), 6);
    assert!(matches!(r, Err(SpernerError::TooManyCells { .. })));
}

#[test]
fn equilateral_mesh_shrinks_by_two_thirds() {
    let s = Simplex::new(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[0.5, 3f64.sqrt() / 2.0])]).unwrap();
    let c = subdivide(&s, 1).unwrap();
    assert!(c.mesh() <= 2.0 / 3.0 + 1e-12);
}

#[test]
fn mesh_decay_and_tiling() {
    for d in 1..=3 {
        let s = standard_simplex(d);
        let factor = d as f64 / (d as f64 + 1.0);
        for depth in 1..=3 {
            let c = subdivide(&s, depth).unwrap();
            assert!(c.mesh() <= factor.powi(depth as i32) * s.diameter() + 1e-9);
            assert_abs_diff_eq!(c.total_volume(), s.volume(), epsilon = 1e-6 * s.volume());
        }
    }
}

#[test]
fn carriers_contain_their_vertices() {
    let s = standard_simplex(3);
    let c = subdivide(&s, 2).unwrap();
    for (v, p) in c.points().iter().enumerate() {
        let w = s.barycentric(p).unwrap();
        for (i, x) in w.iter().enumerate() {
            if c.carrier_mask(v) >> i & 1 == 0 {
                assert!(x.abs() <= 1e-9);
            } else {
                assert!(*x > 0.0);
            }
        }
    }
}

#[test]
fn ambient_vertices_get_their_own_color() {
    let bodies = families::segment_triangle();
    let s = Simplex::new(families::triangle_vertices().to_vec()).unwrap();
    let c = subdivide(&s, 0).unwrap();
    let ColoringOutcome::Colored(colors) = sperner_color(&c, &bodies, 1e-9).unwrap() else {
        panic!("no vertex lies on all three sides");
    };
    assert_eq!(colors[..3], [0, 1, 2]);
}

#[test]
fn vertex_in_every_body_short_circuits() {
    let bodies = families::squares();
    let s = Simplex::new(square_witnesses()).unwrap();
    let c = subdivide(&s, 1).unwrap();
    // The barycenter (1.5, 1.5) is in the common square.
    match sperner_color(&c, &bodies, 1e-9).unwrap() {
        ColoringOutcome::CommonPoint { point, .. } => assert!(in_common_square(&point, 1e-12)),
        ColoringOutcome::Colored(_) => panic!("expected the sentinel"),
    }
}

#[test]
fn squares_coloring_at_a_chosen_vertex() {
    assert_eq!(color_point(&pt(&[0.5, 0.5]), &families::squares(), 1e-9), Color::Index(1));
    assert_eq!(color_point(&pt(&[1.5, 1.5]), &families::squares(), 1e-9), Color::InAll);
    assert_eq!(color_point(&pt(&[5.0, 5.0]), &families::squares(), 1e-9), Color::Uncovered);
}

#[test]
fn fan_triangulation_has_one_rainbow_cell() {
    let s = unit_triangle();
    let mut points = s.vertices().to_vec();
    points.push(s.centroid());
    let cells = vec![vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3]];
    let c = SubdivisionComplex::from_cells(s, points, cells).unwrap();
    let colors = vec![0, 1, 2, 0];
    check_legal(&c, &colors).unwrap();
    assert_eq!(rainbow_cells(&c, &colors), vec![1]);
    assert_eq!(find_rainbow(&c, &colors).unwrap(), 1);
}

#[test]
fn incomplete_tiling_is_rejected() {
    let s = unit_triangle();
    let mut points = s.vertices().to_vec();
    points.push(s.centroid());
    let r = SubdivisionComplex::from_cells(s, points, vec![vec![0, 1, 3], vec![1, 2, 3]]);
    assert!(matches!(r, Err(SpernerError::BadTiling { .. })));
}

#[test]
fn zero_dimensional_rainbow() {
    let s = Simplex::new(vec![pt(&[0.3, 0.7])]).unwrap();
    let c = subdivide(&s, 2).unwrap();
    assert_eq!(c.cell_count(), 1);
    assert_eq!(find_rainbow(&c, &[0]).unwrap(), 0);
}

#[test]
fn illegal_coloring_is_caught() {
    let c = subdivide(&unit_triangle(), 1).unwrap();
    let mut colors: Vec<usize> = (0..c.points().len()).map(|v| c.carrier(v)[0]).collect();
    colors[1] = 0;
    assert!(matches!(check_legal(&c, &colors), Err(SpernerError::IllegalColor { vertex: 1, .. })));
}

fn random_legal_coloring<R: Rng>(c: &SubdivisionComplex, rng: &mut R) -> Vec<usize> {
    (0..c.points().len())
        .map(|v| {
            let carrier = c.carrier(v);
            carrier[rng.random_range(0..carrier.len())]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rainbow_count_is_odd(seed in any::<u64>(), d in 1usize..=3, depth in 1usize..=3) {
        let c = subdivide(&standard_simplex(d), depth).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors = random_legal_coloring(&c, &mut rng);
        prop_assert_eq!(rainbow_cells(&c, &colors).len() % 2, 1);
    }
}

#[test]
fn klee_solve_on_squares() {
    let bodies = families::squares();
    let sol = klee_solve(&bodies, &square_witnesses(), 1e-7, &KleeOptions::default()).unwrap();
    assert!(in_common_square(&sol.point, 1e-7));
    assert!(bodies.iter().all(|b| b.contains(&sol.point, 1e-6)));
}

#[test]
fn klee_solve_refines_to_a_single_common_point() {
    // Quadrants of [0,2]^2 around (1,1) minus one: the three boxes meet
    // only at (1, 1), so only rainbow refinement can find it.
    let b = |lo: [f64; 2], hi: [f64; 2]| -> Body { HPolytope::from_box(&pt(&lo), &pt(&hi)).unwrap().into() };
    let bodies = vec![b([0.0, 0.0], [1.0, 2.0]), b([1.0, 0.0], [2.0, 1.0]), b([0.0, 1.0], [2.0, 2.0])];
    // a_0 in C_1∩C_2, a_1 in C_0∩C_2, a_2 in C_0∩C_1.
    let witnesses = vec![pt(&[1.7, 1.0]), pt(&[0.3, 1.6]), pt(&[1.0, 0.2])];
    let sol = klee_solve(&bodies, &witnesses, 1e-7, &KleeOptions::default()).unwrap();
    assert!((&sol.point - pt(&[1.0, 1.0])).norm() < 1e-6, "{sol:?}");
    assert!(bodies.iter().all(|b| b.contains(&sol.point, 1e-6)));
}

#[test]
fn klee_solve_single_body() {
    let bodies = vec![families::squares().remove(0)];
    let sol = klee_solve(&bodies, &[pt(&[5.0, 5.0])], 1e-7, &KleeOptions::default()).unwrap();
    assert_eq!(sol.method, KleeMethod::Single);
    assert!(bodies[0].contains(&sol.point, 1e-9));
}

#[test]
fn klee_solve_collinear_witnesses_use_helly() {
    let bodies = families::squares();
    let witnesses = vec![pt(&[1.5, 1.5]), pt(&[1.5, 1.5]), pt(&[1.5, 1.6])];
    let sol = klee_solve(&bodies, &witnesses, 1e-7, &KleeOptions::default()).unwrap();
    assert_eq!(sol.method, KleeMethod::Helly);
    let oracle = intersect_witness(&bodies, 1e-7).unwrap();
    let w = oracle.witness().unwrap();
    assert!(bodies.iter().all(|b| b.contains(&sol.point, 1e-7) && b.contains(w, 1e-7)));
}

#[test]
fn klee_solve_reports_non_convex_union() {
    // The triangle of segments is critical: its union is not convex and
    // refinement cannot converge to a common point.
    let opts = KleeOptions {
        max_cells: 20_000,
        ..KleeOptions::default()
    };
    let r = klee_solve(&families::segment_triangle(), &families::triangle_vertices(), 1e-7, &opts);
    assert!(
        matches!(r, Err(SpernerError::Uncovered { .. })),
        "{r:?}"
    );
}

#[test]
fn kkm_on_squares_third_proof() {
    let inst = third_proof_instance(&families::squares(), &square_witnesses()).unwrap();
    let r = kkm_verify(&inst, 500, 1e-7).unwrap();
    assert!(r.kkm_holds);
    assert!(in_common_square(r.intersection_witness.as_ref().unwrap(), 1e-7));
}

#[test]
fn kkm_gap_instance_fails() {
    let images: Vec<Body> = vec![
        HPolytope::from_box(&pt(&[0.0]), &pt(&[0.4])).unwrap().into(),
        HPolytope::from_box(&pt(&[0.5]), &pt(&[1.0])).unwrap().into(),
    ];
    let inst = KkmInstance::new(vec![pt(&[0.0]), pt(&[1.0])], images).unwrap();
    let r = kkm_verify(&inst, 200, 1e-9).unwrap();
    assert!(!r.kkm_holds);
    let c = r.counterexample.unwrap();
    assert!(c.point[0] > 0.4 && c.point[0] < 0.5, "{c:?}");
    assert_eq!(c.subset, vec![0, 1]);
}

#[test]
fn kkm_singleton() {
    let x = pt(&[0.2, 0.3]);
    let inst = KkmInstance::new(vec![x.clone()], vec![crate::bodies::Ball::new(x.clone(), 0.5).unwrap().into()]).unwrap();
    let r = kkm_verify(&inst, 10, 1e-9).unwrap();
    assert!(r.kkm_holds);
    assert!((r.intersection_witness.unwrap() - x).norm() < 1e-9);
}

#[test]
fn kkm_refuses_large_sets() {
    let points = vec![pt(&[0.0]); 13];
    let images = vec![HPolytope::from_box(&pt(&[0.0]), &pt(&[1.0])).unwrap().into(); 13];
    assert!(matches!(KkmInstance::new(points, images), Err(SpernerError::TooManyPoints { .. })));
}

#[test]
fn kkm_fails_for_a_critical_family() {
    // Γ(a_i) = C_{i-1} on a critical family: the sides miss the inside of
    // the triangle, so the full subset is not covered.
    let inst = third_proof_instance(&families::segment_triangle(), &families::triangle_vertices()).unwrap();
    let r = kkm_verify(&inst, 100, 1e-7).unwrap();
    assert!(!r.kkm_holds);
}
