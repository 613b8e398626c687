//! Deterministic inputs for the benchmarks.

use pqbezier::{ControlNet, PQCurve, PQParams, PQSurface, Point2, Point3};

pub fn params() -> PQParams {
    PQParams::new(0.8, 0.5).unwrap()
}

/// A planar curve of the given degree with a zig-zag control polygon.
pub fn zigzag_curve(degree: usize) -> PQCurve<2> {
    let points = (0..=degree)
        .map(|i| {
            Point2::from([
                i as f64,
                if i % 2 == 0 {
                    0.0
                } else {
                    1.0 + 0.1 * i as f64
                },
            ])
        })
        .collect();
    PQCurve::from_points(params(), points).unwrap()
}

/// A `degree × degree` patch over a bumpy height field.
pub fn bumpy_surface(degree: usize) -> PQSurface {
    let rows = (0..=degree)
        .map(|i| {
            (0..=degree)
                .map(|j| Point3::from([i as f64, j as f64, ((i * 7 + j * 3) % 5) as f64 * 0.5]))
                .collect()
        })
        .collect();
    PQSurface::new(
        params(),
        PQParams::new(1.0, 0.5).unwrap(),
        ControlNet::new(rows).unwrap(),
    )
}
