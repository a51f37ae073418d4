use approx::assert_abs_diff_eq;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::bodies::HPolytope;
use crate::families;
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

/// Inner crossing point of the two circles other than circle `j`.
fn disk_vertex(side: f64, j: usize) -> Point {
    let c = families::disk_centers(side);
    let (a, b) = (&c[(j + 1) % 3], &c[(j + 2) % 3]);
    let mid = (a + b) * 0.5;
    let toward = (&c[j] - &mid).normalize();
    mid + toward * (1.0 - side * side / 4.0).sqrt()
}

#[test]
fn interval_pair_is_one_critical() {
    let f = certify(&families::interval_pair());
    assert_eq!(f.n(), 1);
    let a = f.witnesses();
    assert!((2.0..=3.0).contains(&a[0][0]));
    assert!((0.0..=1.0).contains(&a[1][0]));

    let hs = hollow_simplex(&f).unwrap();
    let mut v: Vec<f64> = hs.vertices().iter().map(|p| p[0]).collect();
    v.sort_by(f64::total_cmp);
    assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-9);
    assert_abs_diff_eq!(v[1], 2.0, epsilon = 1e-9);
    for m in hs.gaps() {
        assert_abs_diff_eq!(*m, 1.0, epsilon = 1e-9);
    }
}

#[test]
fn triangle_of_segments() {
    let f = certify(&families::segment_triangle());
    let v = families::triangle_vertices();
    for (a, expected) in f.witnesses().iter().zip(&v) {
        assert!((a - expected).norm() < 1e-7, "{a:?}");
    }
    let hs = hollow_simplex(&f).unwrap();
    for (p, expected) in hs.vertices().iter().zip(&v) {
        assert!((p - expected).norm() < 1e-7);
    }
    // Gap = vertex-to-opposite-side distance: 3 for the apex, 12/sqrt(13) at the base.
    assert_abs_diff_eq!(hs.gaps()[0], 12.0 / 13f64.sqrt(), epsilon = 1e-6);
    assert_abs_diff_eq!(hs.gaps()[1], 12.0 / 13f64.sqrt(), epsilon = 1e-6);
    assert_abs_diff_eq!(hs.gaps()[2], 3.0, epsilon = 1e-6);
}

#[test]
fn disks_at_side_one_and_a_half_share_a_point() {
    let r = check_critical(&families::three_disks(1.5), DEFAULT_TOL).unwrap();
    let Criticality::CommonPoint(w) = r else {
        panic!("expected common point, got {r:?}");
    };
    for b in families::three_disks(1.5) {
        assert!(b.contains(&w, DEFAULT_TOL));
    }
}

#[test]
fn disks_at_side_one_point_nine_match_circle_crossings() {
    let side = 1.9;
    let f = certify(&families::three_disks(side));
    let hs = hollow_simplex(&f).unwrap();
    for j in 0..3 {
        let expected = disk_vertex(side, j);
        assert!((&hs.vertices()[j] - &expected).norm() < 1e-6, "{j}: {:?}", hs.vertices()[j]);
        let center = &families::disk_centers(side)[j];
        assert_abs_diff_eq!(hs.gaps()[j], (&expected - center).norm() - 1.0, epsilon = 1e-6);
    }
}

#[test]
fn helly_guard_examples() {
    let three: Vec<Body> = [(0.0, 2.0), (1.0, 3.0), (1.5, 4.0)]
        .iter()
        .map(|(lo, hi)| HPolytope::from_box(&pt(&[*lo]), &pt(&[*hi])).unwrap().into())
        .collect();
    assert_eq!(helly_guard(&three).unwrap(), Some(HellyRejection { n: 2, d: 1 }));
    assert!(matches!(
        check_critical(&three, DEFAULT_TOL).unwrap(),
        Criticality::TooManyBodies(_)
    ));
    assert!(intersect_witness(&three, DEFAULT_TOL).unwrap().witness().is_some());

    let polygons: Vec<Body> = [
        vec![[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]],
        vec![[1.0, 0.0], [3.0, 1.0], [1.0, 2.0]],
        vec![[0.5, 0.5], [2.5, 0.2], [2.0, 2.0], [0.2, 1.5]],
        vec![[1.2, -1.0], [1.4, 3.0], [0.8, 2.0]],
    ]
    .into_iter()
    .map(|vs| VPolytope::new(vs.iter().map(|v| pt(v)).collect()).unwrap().into())
    .collect();
    assert!(helly_guard(&polygons).unwrap().is_some());
    let w = intersect_witness(&polygons, DEFAULT_TOL).unwrap();
    let w = w.witness().expect("full witness");
    assert!(polygons.iter().all(|b| b.contains(w, DEFAULT_TOL)));

    assert_eq!(helly_guard(&families::three_disks(1.9)).unwrap(), None);
}

#[test]
fn empty_subfamily_is_identified() {
    // C_1 and C_2 are disjoint, so dropping C_0 leaves an empty family.
    let bodies: Vec<Body> = vec![
        HPolytope::from_box(&pt(&[0.0, 0.0]), &pt(&[5.0, 5.0])).unwrap().into(),
        HPolytope::from_box(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0])).unwrap().into(),
        HPolytope::from_box(&pt(&[3.0, 3.0]), &pt(&[4.0, 4.0])).unwrap().into(),
    ];
    let r = check_critical(&bodies, DEFAULT_TOL).unwrap();
    let Criticality::EmptySubfamily { index, certificate } = r else {
        panic!("{r:?}");
    };
    assert_eq!(index, 0);
    assert!(certificate.body == 1 || certificate.body == 2);
}

#[test]
fn nearly_touching_disks_are_borderline() {
    // Circumradius exceeds 1 by about 2.9e-7; the closest-point gaps are
    // about 8.7e-7, under ten times the tolerance.
    let side = 3f64.sqrt() + 5e-7;
    let r = check_critical(&families::three_disks(side), DEFAULT_TOL);
    assert!(
        matches!(r, Ok(Criticality::Borderline { .. }) | Err(CriticalError::Opt(OptError::ToleranceAmbiguity { .. }))),
        "{r:?}"
    );
}

#[test]
fn no_hollow_below_full_dimension() {
    let squares: Vec<Body> = vec![
        HPolytope::from_box(&pt(&[0.0, 0.0]), &pt(&[1.0, 1.0])).unwrap().into(),
        HPolytope::from_box(&pt(&[2.0, 0.0]), &pt(&[3.0, 1.0])).unwrap().into(),
    ];
    let f = certify(&squares);
    assert!(matches!(hollow_simplex(&f), Err(CriticalError::NoHollow { n: 1, d: 2 })));
}

#[test]
fn uniqueness_probe_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = certify(&families::interval_pair());
    let r = uniqueness_probe(&f, 10, &mut rng).unwrap();
    assert!(r.max_deviation() <= 1e-12);

    let f = certify(&families::segment_triangle());
    let r = uniqueness_probe(&f, 10, &mut rng).unwrap();
    assert!(r.max_deviation() <= 1e-9, "{r:?}");

    let f = certify(&families::three_disks(1.9));
    let r = uniqueness_probe(&f, 10, &mut rng).unwrap();
    assert!(r.max_deviation() <= UNIQUENESS_TOL, "{r:?}");
    assert!(r.flagged().is_empty());
}

#[test]
fn witness_and_random_cages_contain_the_hollow_simplex() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for bodies in [families::segment_triangle(), families::three_disks(1.9), families::interval_pair()] {
        let f = certify(&bodies);
        let hs = hollow_simplex(&f).unwrap();
        assert!(cage_contains_hull_vertices(&hs, &Cage::of_witnesses(&f).unwrap(), 1e-6));
        for _ in 0..20 {
            let cage = random_cage(&f, &mut rng).unwrap();
            assert!(cage_contains_hull_vertices(&hs, &cage, 1e-6));
        }
    }
}

#[test]
fn interval_cage_covers_the_middle_gap() {
    let f = certify(&families::interval_pair());
    let hs = hollow_simplex(&f).unwrap();
    let cage = Cage::new(&f, vec![pt(&[3.0]), pt(&[0.0])], 1e-9).unwrap();
    assert!(cage.contains(&pt(&[1.0]), 1e-9) && cage.contains(&pt(&[2.0]), 1e-9));
    assert!(cage_contains_hull_vertices(&hs, &cage, 1e-9));
    assert!(matches!(
        Cage::new(&f, vec![pt(&[0.0]), pt(&[3.0])], 1e-9),
        Err(CriticalError::BadBasePoint { index: 0 })
    ));
}

#[test]
fn cage_intersections() {
    let f = certify(&families::three_disks(1.9));
    let hs = hollow_simplex(&f).unwrap();
    let witness_cage = Cage::of_witnesses(&f).unwrap();
    let whole_box = |p: &Point| p.iter().all(|x| (-2.0..=4.0).contains(x));
    assert!(cage_intersection_is_cage(&hs, &witness_cage, &whole_box, 1e-6));

    let own = Cage::new(&f, hs.vertices().to_vec(), 1e-6).unwrap();
    let simplex = VPolytope::new(hs.vertices().to_vec()).unwrap();
    let in_simplex = |p: &Point| simplex.contains(p, 1e-6);
    assert!(cage_intersection_is_cage(&hs, &own, &in_simplex, 1e-6));
    assert!(!cage_intersection_is_cage(&hs, &witness_cage, &|_: &Point| false, 1e-6));
}

#[test]
fn hollow_vertices_sit_inside_the_witness_simplex() {
    for bodies in [families::segment_triangle(), families::three_disks(1.9), families::four_balls(1.7)] {
        let f = certify(&bodies);
        let hs = hollow_simplex(&f).unwrap();
        let s = f.witness_simplex().unwrap();
        for p in hs.vertices() {
            let w = s.barycentric(p).unwrap();
            assert!(w.iter().all(|x| *x >= -1e-7), "{w:?}");
        }
    }
}

#[test]
fn permuting_bodies_permutes_the_simplex() {
    let bodies = families::three_disks(1.9);
    let hs = hollow_simplex(&certify(&bodies)).unwrap();
    let perm = [2, 0, 1];
    let shuffled: Vec<Body> = perm.iter().map(|&i| bodies[i].clone()).collect();
    let hs2 = hollow_simplex(&certify(&shuffled)).unwrap();
    for (k, &i) in perm.iter().enumerate() {
        assert!((&hs2.vertices()[k] - &hs.vertices()[i]).norm() < 1e-6);
    }
}

#[test]
fn gaps_clear_ten_tolerances() {
    for bodies in [families::segment_triangle(), families::three_disks(1.9), families::four_balls(1.7)] {
        let f = certify(&bodies);
        assert!(f.gaps().iter().all(|m| *m > 10.0 * DEFAULT_TOL));
    }
}
