//! Tensor-product (p,q)-Bézier surfaces on `[0, 1] × [0, 1]`.
//!
//! `P(u, v) = Σ_i Σ_j P_{i,j} B^{i,m}_{p1,q1}(u) B^{j,n}_{p2,q2}(v)`, where `i`
//! runs along `u` over the `m + 1` rows of the control net and `j` runs along
//! `v` over its `n + 1` columns.

use crate::basis::eval_row;
use crate::curve::{uniform_parameters, ElevationMatrix, PQCurve, Variant};
use crate::error::{Error, Result};
use crate::point::{combine, Point3};
use crate::pq_arith::{check_degree, PQParams};

/// Rectangular `(m + 1) × (n + 1)` grid of control points.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlNet {
    rows: Vec<Vec<Point3>>,
}

impl ControlNet {
    pub fn new(rows: Vec<Vec<Point3>>) -> Result<Self> {
        let expected = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || expected == 0 {
            return Err(Error::NonRectangular {
                row: 0,
                found: 0,
                expected: expected.max(1),
            });
        }
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
            return Err(Error::NonRectangular {
                row,
                found: r.len(),
                expected,
            });
        }
        check_degree(rows.len() - 1)?;
        check_degree(expected - 1)?;
        if !rows.iter().flatten().all(|p| p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ControlNet { rows })
    }

    pub fn rows(&self) -> &[Vec<Point3>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Point3 {
        self.rows[i][j]
    }

    /// Degree along `u`.
    pub fn degree_u(&self) -> usize {
        self.rows.len() - 1
    }

    /// Degree along `v`.
    pub fn degree_v(&self) -> usize {
        self.rows[0].len() - 1
    }

    fn column(&self, j: usize) -> Vec<Point3> {
        self.rows.iter().map(|row| row[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PQSurface {
    params_u: PQParams,
    params_v: PQParams,
    net: ControlNet,
}

/// Sampled surface: vertices in row-major order with `v` varying fastest,
/// vertex `(iu, iv)` at index `iu * count_v + iv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub count_u: usize,
    pub count_v: usize,
    pub vertices: Vec<Point3>,
    /// Quads as counter-clockwise vertex indices in parameter space.
    pub faces: Vec<[usize; 4]>,
}

impl Mesh {
    pub fn vertex(&self, iu: usize, iv: usize) -> Point3 {
        self.vertices[iu * self.count_v + iv]
    }
}

impl PQSurface {
    pub fn new(params_u: PQParams, params_v: PQParams, net: ControlNet) -> Self {
        PQSurface {
            params_u,
            params_v,
            net,
        }
    }

    pub fn params_u(&self) -> PQParams {
        self.params_u
    }

    pub fn params_v(&self) -> PQParams {
        self.params_v
    }

    pub fn net(&self) -> &ControlNet {
        &self.net
    }

    pub fn degree_u(&self) -> usize {
        self.net.degree_u()
    }

    pub fn degree_v(&self) -> usize {
        self.net.degree_v()
    }

    /// Product weights `B^{i,m}(u) B^{j,n}(v)`, indexed `[i][j]`.
    pub fn weights(&self, u: f64, v: f64) -> Vec<Vec<f64>> {
        let bu = eval_row(self.degree_u(), u, self.params_u);
        let bv = eval_row(self.degree_v(), v, self.params_v);
        bu.iter()
            .map(|a| bv.iter().map(|b| a * b).collect())
            .collect()
    }

    pub fn evaluate(&self, u: f64, v: f64) -> Point3 {
        self.isoparametric_u(v).evaluate(u)
    }

    /// The curve `u ↦ P(u, v*)`: degree `m` in `u` with control points
    /// `Q_i = Σ_j P_{i,j} B^{j,n}(v*)`.
    pub fn isoparametric_u(&self, v_star: f64) -> PQCurve<3> {
        let bv = eval_row(self.degree_v(), v_star, self.params_v);
        let points = self.net.rows.iter().map(|row| combine(row, &bv)).collect();
        PQCurve::from_points(self.params_u, points).expect("net rows are valid control points")
    }

    /// The curve `v ↦ P(u*, v)`.
    pub fn isoparametric_v(&self, u_star: f64) -> PQCurve<3> {
        let bu = eval_row(self.degree_u(), u_star, self.params_u);
        let points = (0..=self.degree_v())
            .map(|j| combine(&self.net.column(j), &bu))
            .collect();
        PQCurve::from_points(self.params_v, points).expect("net columns are valid control points")
    }

    /// Raises the `u` degree by one; the surface is unchanged.
    pub fn elevate_u(&self) -> Result<Self> {
        let matrix = ElevationMatrix::new(self.degree_u(), self.params_u)?;
        let columns: Vec<Vec<Point3>> = (0..=self.degree_v())
            .map(|j| matrix.apply(&self.net.column(j)))
            .collect();
        let rows = (0..=self.degree_u() + 1)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Ok(PQSurface::new(
            self.params_u,
            self.params_v,
            ControlNet::new(rows)?,
        ))
    }

    /// Raises the `v` degree by one; the surface is unchanged.
    pub fn elevate_v(&self) -> Result<Self> {
        let matrix = ElevationMatrix::new(self.degree_v(), self.params_v)?;
        let rows = self.net.rows.iter().map(|row| matrix.apply(row)).collect();
        Ok(PQSurface::new(
            self.params_u,
            self.params_v,
            ControlNet::new(rows)?,
        ))
    }

    /// Degree `(m + 1) × (n + 1)` representation of the same surface.
    ///
    /// Equivalent to the bilinear update
    /// `P*_{i,j} = a_i b_j P_{i-1,j-1} + a_i (1-b_j) P_{i-1,j} + (1-a_i) b_j P_{i,j-1} + (1-a_i)(1-b_j) P_{i,j}`
    /// with `a_i = 1 - p1^i [m+1-i] / [m+1]` and `b_j = 1 - p2^j [n+1-j] / [n+1]`.
    pub fn degree_elevate(&self) -> Result<Self> {
        self.elevate_u()?.elevate_v()
    }

    /// Surface de Casteljau: `min(m, n)` rounds collapse every 2×2 block of
    /// the net with the corner-cutting weights in `u` and `v`; the remaining
    /// strip is finished with the curve algorithm.
    pub fn de_casteljau(&self, u: f64, v: f64) -> Point3 {
        let (m, n) = (self.degree_u(), self.degree_v());
        let ratio_u = self.params_u.q() / self.params_u.p();
        let ratio_v = self.params_v.q() / self.params_v.p();
        let mut net = self.net.rows.clone();
        for r in 1..=m.min(n) {
            let (deg_u, deg_v) = (m - r + 1, n - r + 1);
            net = (0..=m - r)
                .map(|i| {
                    let lu = ratio_u.powi((deg_u - 1 - i) as i32) * u;
                    (0..=n - r)
                        .map(|j| {
                            let lv = ratio_v.powi((deg_v - 1 - j) as i32) * v;
                            let top = net[i][j] * (1.0 - lv) + net[i][j + 1] * lv;
                            let bottom = net[i + 1][j] * (1.0 - lv) + net[i + 1][j + 1] * lv;
                            top * (1.0 - lu) + bottom * lu
                        })
                        .collect()
                })
                .collect();
        }
        if net.len() > 1 {
            let column = net.iter().map(|row| row[0]).collect();
            PQCurve::from_points(self.params_u, column)
                .expect("strip is a valid polygon")
                .de_casteljau(u, Variant::A)
                .0
        } else if net[0].len() > 1 {
            PQCurve::from_points(self.params_v, net.swap_remove(0))
                .expect("strip is a valid polygon")
                .de_casteljau(v, Variant::A)
                .0
        } else {
            net[0][0]
        }
    }

    /// Uniform `count_u × count_v` sampling with quad connectivity.
    pub fn sample_grid(&self, count_u: usize, count_v: usize) -> Result<Mesh> {
        for count in [count_u, count_v] {
            if count < 2 {
                return Err(Error::SampleCount(count));
            }
        }
        let us: Vec<f64> = uniform_parameters(count_u).collect();
        let vs: Vec<f64> = uniform_parameters(count_v).collect();
        let mut vertices = Vec::with_capacity(count_u * count_v);
        for &u in &us {
            for &v in &vs {
                vertices.push(self.evaluate(u, v));
            }
        }
        let mut faces = Vec::with_capacity((count_u - 1) * (count_v - 1));
        for iu in 0..count_u - 1 {
            for iv in 0..count_v - 1 {
                let a = iu * count_v + iv;
                faces.push([a, a + count_v, a + count_v + 1, a + 1]);
            }
        }
        Ok(Mesh {
            count_u,
            count_v,
            vertices,
            faces,
        })
    }
}
