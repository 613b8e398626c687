use proptest::prelude::*;

use pqbezier::render::{render_basis_svg, render_curve_svg, RenderOptions};
use pqbezier::scene::{parse_scene, serialize_scene, Geometry, SceneDocument};
use pqbezier::{ControlNet, PQCurve, PQParams, PQSurface, Point, Point3};

fn params() -> impl Strategy<Value = PQParams> {
    (1e-3f64..=1e3, 1e-3f64..=1e3).prop_map(|(p, q)| PQParams::new(p, q).unwrap())
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..=1e6,
        Just(0.0),
        Just(-0.0),
        Just(0.1),
        Just(1e-300),
        Just(f64::MAX)
    ]
}

fn name() -> impl Strategy<Value = Option<String>> {
    prop::option::of("[ -~]{0,12}|\\PC{0,4}")
}

fn counts() -> impl Strategy<Value = Option<usize>> {
    prop::option::of(2usize..=500)
}

fn curve_doc() -> impl Strategy<Value = SceneDocument> {
    (params(), name(), counts(), prop::bool::ANY, 1usize..=8).prop_flat_map(
        |(params, name, samples, planar, len)| {
            let dim = if planar { 2 } else { 3 };
            prop::collection::vec(prop::collection::vec(coord(), dim), len).prop_map(move |pts| {
                let geometry = if planar {
                    Geometry::Curve2(
                        PQCurve::from_points(
                            params,
                            pts.iter().map(|c| Point([c[0], c[1]])).collect(),
                        )
                        .unwrap(),
                    )
                } else {
                    Geometry::Curve3(
                        PQCurve::from_points(
                            params,
                            pts.iter().map(|c| Point([c[0], c[1], c[2]])).collect(),
                        )
                        .unwrap(),
                    )
                };
                SceneDocument {
                    name: name.clone(),
                    geometry,
                    samples_u: samples,
                    samples_v: None,
                }
            })
        },
    )
}

fn surface_doc() -> impl Strategy<Value = SceneDocument> {
    (
        params(),
        params(),
        name(),
        counts(),
        counts(),
        1usize..=4,
        1usize..=4,
    )
        .prop_flat_map(|(pu, pv, name, su, sv, m, n)| {
            prop::collection::vec(prop::collection::vec(prop::array::uniform3(coord()), n), m)
                .prop_map(move |rows| {
                    let net = ControlNet::new(
                        rows.into_iter()
                            .map(|r| r.into_iter().map(Point3::from).collect())
                            .collect(),
                    )
                    .unwrap();
                    SceneDocument {
                        name: name.clone(),
                        geometry: Geometry::Surface(PQSurface::new(pu, pv, net)),
                        samples_u: su,
                        samples_v: sv,
                    }
                })
        })
}

proptest! {
    #[test]
    fn curve_round_trip(doc in curve_doc()) {
        let text = serialize_scene(&doc);
        let parsed = parse_scene(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(serialize_scene(&parsed), text);
    }

    #[test]
    fn surface_round_trip(doc in surface_doc()) {
        let text = serialize_scene(&doc);
        let parsed = parse_scene(&text).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(serialize_scene(&parsed), text);
    }

    #[test]
    fn parse_never_panics(text in "\\PC{0,64}") {
        let _ = parse_scene(&text);
    }
}

#[test]
fn rendering_is_deterministic() {
    let doc = parse_scene(include_str!("../../../fixtures/cubic.json")).unwrap();
    let options = RenderOptions {
        tableau_t: Some(0.3),
        show_basis: true,
        ..RenderOptions::default()
    };
    assert_eq!(
        render_curve_svg(&doc, &options).unwrap(),
        render_curve_svg(&doc.clone(), &options).unwrap()
    );
    let params = PQParams::new(1.0, 0.5).unwrap();
    assert_eq!(
        render_basis_svg(5, params, &RenderOptions::default()).unwrap(),
        render_basis_svg(5, params, &RenderOptions::default()).unwrap()
    );
    assert!(render_basis_svg(65, params, &RenderOptions::default()).is_err());
}

#[test]
fn repository_fixtures_are_canonical() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = std::fs::read_to_string(&path).unwrap();
            let doc = parse_scene(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(serialize_scene(&doc), text, "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
