//! Reference geometry used by the examples, benches and tests.

use crate::curve::PQCurve;
use crate::point::{Point2, Point3};
use crate::pq_arith::PQParams;
use crate::surface::{ControlNet, PQSurface};

/// The cubic control polygon `(0,0), (1,3), (3,3), (4,0)`.
pub fn cubic_polygon() -> Vec<Point2> {
    vec![
        Point2::from([0.0, 0.0]),
        Point2::from([1.0, 3.0]),
        Point2::from([3.0, 3.0]),
        Point2::from([4.0, 0.0]),
    ]
}

pub fn cubic_curve(params: PQParams) -> PQCurve<2> {
    PQCurve::from_points(params, cubic_polygon()).expect("fixture polygon is valid")
}

/// A bicubic patch over `[0,3]^2` with a raised centre.
pub fn bicubic_surface(params_u: PQParams, params_v: PQParams) -> PQSurface {
    let rows = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let z = if (1..3).contains(&i) && (1..3).contains(&j) {
                        2.0
                    } else {
                        0.0
                    };
                    Point3::from([i as f64, j as f64, z])
                })
                .collect()
        })
        .collect();
    PQSurface::new(
        params_u,
        params_v,
        ControlNet::new(rows).expect("fixture net is valid"),
    )
}
