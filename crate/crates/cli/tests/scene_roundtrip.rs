use std::path::Path;

use hollowkit_cli::scene::{FlatSpec, KkmSpec, StabbingSpec};
use hollowkit_cli::{BodySpec, Scene, SceneOptions};
use proptest::prelude::*;

#[test]
fn committed_scenes_round_trip() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let scene = Scene::load(&path).unwrap();
        let again = Scene::parse(&scene.to_json(), "memory").unwrap();
        assert_eq!(scene, again, "{}", path.display());
        assert!(scene.build_bodies().is_ok(), "{}", path.display());
        count += 1;
    }
    assert!(count >= 10);
}

fn coords(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![-1e6f64..1e6, -1.0f64..1.0, Just(0.1), Just(1.0 / 3.0)], d)
}

fn body(d: usize) -> impl Strategy<Value = BodySpec> {
    let leaf = prop_oneof![
        (coords(d), 1e-3f64..10.0).prop_map(|(center, radius)| BodySpec::Ball { center, radius }),
        prop::collection::vec(coords(d), 1..5).prop_map(|points| BodySpec::Vpoly { points }),
        (prop::collection::vec(coords(d), 1..4), prop::collection::vec(-5.0f64..5.0, 4)).prop_map(
            |(normals, offsets)| {
                let offsets = offsets[..normals.len()].to_vec();
                BodySpec::Hpoly { normals, offsets }
            }
        ),
    ];
    leaf.prop_recursive(2, 6, 3, |inner| {
        prop::collection::vec(inner, 1..3).prop_map(|bodies| BodySpec::Intersection { bodies })
    })
}

fn scene() -> impl Strategy<Value = Scene> {
    (1usize..4).prop_flat_map(|d| {
        (
            prop::collection::vec(body(d), 1..5),
            prop::option::of(1e-12f64..1.0),
            prop::option::of(1usize..5),
            prop::option::of((coords(d), coords(d))),
            any::<bool>(),
        )
            .prop_map(move |(bodies, tol, depth, flats, kkm)| {
                let mut s = Scene::new(d, bodies);
                s.options = SceneOptions {
                    tol,
                    depth,
                    ..SceneOptions::default()
                };
                s.stabbing = flats.map(|(a, b)| StabbingSpec {
                    w: FlatSpec {
                        base: a.clone(),
                        directions: vec![b.clone()],
                    },
                    v: FlatSpec {
                        base: b,
                        directions: vec![a],
                    },
                });
                if kkm {
                    s.kkm = Some(KkmSpec {
                        points: vec![vec![0.5; d]],
                        images: vec![0],
                    });
                }
                s
            })
    })
}

proptest! {
    #[test]
    fn parse_inverts_serialize(s in scene()) {
        let text = s.to_json();
        let back = Scene::parse(&text, "memory").unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), text);
    }
}
