//! (p,q)-Bézier curves.

use crate::basis::{elevation_weight, eval_row};
use crate::error::{Error, Result};
use crate::point::{combine, Point};
use crate::pq_arith::{check_degree, PQParams};

/// Number of uniform parameter samples used by [`PQCurve::polygon_distance`].
pub const DISTANCE_SAMPLES: usize = 101;

/// Ordered control points `P_0, ..., P_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolygon<const D: usize> {
    points: Vec<Point<D>>,
}

impl<const D: usize> ControlPolygon<D> {
    pub fn new(points: Vec<Point<D>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolygon);
        }
        check_degree(points.len() - 1)?;
        if !points.iter().all(Point::is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(ControlPolygon { points })
    }

    pub fn points(&self) -> &[Point<D>] {
        &self.points
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    /// Distance from `x` to the polyline through the control points.
    pub fn distance_to(&self, x: Point<D>) -> f64 {
        if self.points.len() == 1 {
            return x.distance(self.points[0]);
        }
        self.points
            .windows(2)
            .map(|w| x.distance_to_segment(w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A (p,q)-Bézier curve `P(t) = Σ P_i B^{i,n}_{p,q}(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PQCurve<const D: usize> {
    params: PQParams,
    polygon: ControlPolygon<D>,
}

/// Which reduction recurrence drives a de Casteljau step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    /// Corner cutting: `P^r_i = (1 - λ) P^{r-1}_i + λ P^{r-1}_{i+1}` with
    /// `λ = (q/p)^{m-1-i} t` and `m = n - r + 1`.
    #[default]
    A,
    /// `P^r_i = ((q/p)^i - (q/p)^{m-1} t) P^{r-1}_i + t P^{r-1}_{i+1}`.
    /// Weights are not affine per step.
    B,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::A => "a",
            Variant::B => "b",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "a" | "A" => Ok(Variant::A),
            "b" | "B" => Ok(Variant::B),
            other => Err(format!(
                "unknown variant {other:?}, expected \"a\" or \"b\""
            )),
        }
    }
}

/// Every intermediate point of a de Casteljau evaluation.
///
/// `levels[0]` is the control polygon and `levels[r]` holds `n - r + 1`
/// points. `weights[r - 1][i]` are the weights applied to the two parents
/// `(P^{r-1}_i, P^{r-1}_{i+1})` of `P^r_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeCasteljauTableau<const D: usize> {
    pub variant: Variant,
    pub t: f64,
    pub levels: Vec<Vec<Point<D>>>,
    pub weights: Vec<Vec<(f64, f64)>>,
}

impl<const D: usize> DeCasteljauTableau<D> {
    pub fn result(&self) -> Point<D> {
        self.levels.last().expect("tableau has at least one level")[0]
    }
}

/// The `(n+2) × (n+1)` matrix mapping degree-`n` control points to the
/// degree-`n+1` control points of the same curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationMatrix {
    degree: usize,
    entries: Vec<Vec<f64>>,
}

impl ElevationMatrix {
    /// Row `k` holds `alpha'_k = p^k [n+1-k] / [n+1]` in column `k` and
    /// `1 - alpha'_k` in column `k - 1`; out-of-range columns are dropped.
    pub fn new(n: usize, params: PQParams) -> Result<Self> {
        check_degree(n + 1)?;
        let entries = (0..=n + 1)
            .map(|k| {
                let mut row = vec![0.0; n + 1];
                let weight = elevation_weight(k, n, params);
                if k <= n {
                    row[k] = weight;
                }
                if k >= 1 {
                    row[k - 1] = 1.0 - weight;
                }
                row
            })
            .collect();
        Ok(ElevationMatrix { degree: n, entries })
    }

    /// Degree of the curves this matrix elevates.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row][col]
    }

    /// Applies the matrix using its lower-bidiagonal structure.
    pub fn apply<const D: usize>(&self, points: &[Point<D>]) -> Vec<Point<D>> {
        assert_eq!(
            points.len(),
            self.degree + 1,
            "point count must match matrix columns"
        );
        let n = self.degree;
        (0..=n + 1)
            .map(|k| match k {
                0 => points[0] * self.entries[0][0],
                k if k == n + 1 => points[n] * self.entries[k][n],
                k => points[k - 1] * self.entries[k][k - 1] + points[k] * self.entries[k][k],
            })
            .collect()
    }
}

pub fn elevation_matrix(n: usize, params: PQParams) -> Result<ElevationMatrix> {
    ElevationMatrix::new(n, params)
}

impl<const D: usize> PQCurve<D> {
    pub fn new(params: PQParams, polygon: ControlPolygon<D>) -> Self {
        PQCurve { params, polygon }
    }

    pub fn from_points(params: PQParams, points: Vec<Point<D>>) -> Result<Self> {
        Ok(PQCurve::new(params, ControlPolygon::new(points)?))
    }

    pub fn params(&self) -> PQParams {
        self.params
    }

    pub fn polygon(&self) -> &ControlPolygon<D> {
        &self.polygon
    }

    pub fn control_points(&self) -> &[Point<D>] {
        self.polygon.points()
    }

    pub fn degree(&self) -> usize {
        self.polygon.degree()
    }

    pub fn with_params(&self, params: PQParams) -> Self {
        PQCurve::new(params, self.polygon.clone())
    }

    /// Parameters outside `[0, 1]` are evaluated but carry no convex-hull guarantee.
    pub fn is_extrapolation(t: f64) -> bool {
        !(0.0..=1.0).contains(&t)
    }

    /// `Σ P_i B^{i,n}(t)`.
    pub fn evaluate(&self, t: f64) -> Point<D> {
        let weights = eval_row(self.degree(), t, self.params);
        combine(self.control_points(), &weights)
    }

    pub fn de_casteljau(&self, t: f64, variant: Variant) -> (Point<D>, DeCasteljauTableau<D>) {
        let n = self.degree();
        let ratio = self.params.q() / self.params.p();
        let mut levels = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n);
        levels.push(self.control_points().to_vec());
        for r in 1..=n {
            let m = n - r + 1;
            let prev = &levels[r - 1];
            let step_weights: Vec<(f64, f64)> = (0..=n - r)
                .map(|i| match variant {
                    Variant::A => {
                        let lambda = ratio.powi((m - 1 - i) as i32) * t;
                        (1.0 - lambda, lambda)
                    }
                    Variant::B => (ratio.powi(i as i32) - ratio.powi((m - 1) as i32) * t, t),
                })
                .collect();
            let next = step_weights
                .iter()
                .enumerate()
                .map(|(i, &(left, right))| prev[i] * left + prev[i + 1] * right)
                .collect();
            levels.push(next);
            weights.push(step_weights);
        }
        let tableau = DeCasteljauTableau {
            variant,
            t,
            levels,
            weights,
        };
        (tableau.result(), tableau)
    }

    pub fn elevation_matrix(&self) -> Result<ElevationMatrix> {
        ElevationMatrix::new(self.degree(), self.params)
    }

    /// The same curve written with one more control point.
    pub fn degree_elevate(&self) -> Result<Self> {
        let matrix = self.elevation_matrix()?;
        PQCurve::from_points(self.params, matrix.apply(self.control_points()))
    }

    /// `times` successive elevations; `times = 0` returns the curve unchanged.
    pub fn degree_elevate_iterated(&self, times: usize) -> Result<Self> {
        check_degree(self.degree() + times)?;
        let mut curve = self.clone();
        for _ in 0..times {
            curve = curve.degree_elevate()?;
        }
        Ok(curve)
    }

    /// Largest distance from the curve to its control polyline over
    /// [`DISTANCE_SAMPLES`] uniform parameter values.
    pub fn polygon_distance(&self) -> f64 {
        uniform_parameters(DISTANCE_SAMPLES)
            .map(|t| self.polygon.distance_to(self.evaluate(t)))
            .fold(0.0, f64::max)
    }

    /// `count` evaluations at `t_i = i / (count - 1)`.
    pub fn sample(&self, count: usize) -> Result<Vec<Point<D>>> {
        if count < 2 {
            return Err(Error::SampleCount(count));
        }
        Ok(uniform_parameters(count)
            .map(|t| self.evaluate(t))
            .collect())
    }
}

/// `count` uniform values `i / (count - 1)`, exactly 0 and 1 at the ends.
pub fn uniform_parameters(count: usize) -> impl Iterator<Item = f64> {
    let last = count.saturating_sub(1).max(1);
    (0..count).map(move |i| {
        if i == last {
            1.0
        } else {
            i as f64 / last as f64
        }
    })
}
