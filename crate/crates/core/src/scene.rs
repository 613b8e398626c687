//! Scene documents: the JSON exchange format shared by the CLI and the service.
//!
//! A curve scene:
//!
//! ```json
//! {
//!   "kind": "curve",
//!   "name": "arch",
//!   "p": 1.0,
//!   "q": 0.5,
//!   "samples": 101,
//!   "points": [
//!     [0.0, 0.0],
//!     [1.0, 2.0],
//!     [2.0, 0.0]
//!   ]
//! }
//! ```
//!
//! Curve points are all 2D or all 3D. A surface scene uses `p_u`, `q_u`,
//! `p_v`, `q_v`, optional `samples_u` / `samples_v`, and `points` as a
//! rectangular grid of 3D points whose outer index runs along `u`.
//! `name` and the sample counts are optional. Unknown keys are rejected.
//!
//! [`serialize_scene`] writes the canonical form: the key order above,
//! two-space indentation, one control point (or net row) per line and
//! shortest round-trip number formatting, so canonical text survives
//! `serialize_scene(&parse_scene(text)?)` byte for byte.

use serde_json::{Map, Value};
use thiserror::Error;

use crate::curve::{uniform_parameters, DeCasteljauTableau, PQCurve, Variant};
use crate::error::Error;
use crate::point::Point;
use crate::pq_arith::{PQParams, MAX_DEGREE};
use crate::surface::{ControlNet, Mesh, PQSurface};

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Curve2(PQCurve<2>),
    Curve3(PQCurve<3>),
    Surface(PQSurface),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneDocument {
    pub name: Option<String>,
    pub geometry: Geometry,
    /// Default sample count along `u` (or along the curve).
    pub samples_u: Option<usize>,
    /// Default sample count along `v`; surfaces only.
    pub samples_v: Option<usize>,
}

/// Rejection of a scene document. `path` is a JSON-pointer-like location
/// such as `points[2][1]`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: expected {expected} coordinates, found {found}")]
    DimensionMismatch {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: {message}")]
    InvalidParams { path: String, message: String },
    #[error("{path}: row has {found} points, expected {expected}")]
    NonRectangular {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: degree {degree} exceeds the maximum of {MAX_DEGREE}")]
    DegreeLimit { path: String, degree: usize },
    #[error("{path}: sample count must be an integer >= 2, found {found}")]
    SampleCount { path: String, found: String },
}

impl SceneError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            SceneError::Syntax { .. } => "syntax",
            SceneError::Schema { .. } => "schema",
            SceneError::DimensionMismatch { .. } => "dimension_mismatch",
            SceneError::InvalidParams { .. } => "invalid_params",
            SceneError::NonRectangular { .. } => "non_rectangular",
            SceneError::DegreeLimit { .. } => "degree_limit",
            SceneError::SampleCount { .. } => "sample_count",
        }
    }
}

type SceneResult<T> = std::result::Result<T, SceneError>;

fn schema(path: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

pub fn parse_scene(text: &str) -> SceneResult<SceneDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| SceneError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    parse_scene_value(&value)
}

pub fn parse_scene_value(value: &Value) -> SceneResult<SceneDocument> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema("$", "scene must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .ok_or_else(|| schema("kind", "missing required field"))?
        .as_str()
        .ok_or_else(|| schema("kind", "must be a string"))?;
    let allowed: &[&str] = match kind {
        "curve" => &["kind", "name", "p", "q", "samples", "points"],
        "surface" => &[
            "kind",
            "name",
            "p_u",
            "q_u",
            "p_v",
            "q_v",
            "samples_u",
            "samples_v",
            "points",
        ],
        other => {
            return Err(schema(
                "kind",
                format!("expected \"curve\" or \"surface\", found {other:?}"),
            ))
        }
    };
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(
            key.as_str(),
            format!("unknown field for a {kind} scene"),
        ));
    }
    let name = match obj.get("name") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(schema("name", "must be a string")),
    };
    let points = obj
        .get("points")
        .ok_or_else(|| schema("points", "missing required field"))?;
    if kind == "curve" {
        let params = read_params(obj, "p", "q")?;
        let samples_u = read_count(obj, "samples")?;
        let geometry = read_curve(points, params)?;
        Ok(SceneDocument {
            name,
            geometry,
            samples_u,
            samples_v: None,
        })
    } else {
        let params_u = read_params(obj, "p_u", "q_u")?;
        let params_v = read_params(obj, "p_v", "q_v")?;
        let samples_u = read_count(obj, "samples_u")?;
        let samples_v = read_count(obj, "samples_v")?;
        let net = read_net(points)?;
        Ok(SceneDocument {
            name,
            geometry: Geometry::Surface(PQSurface::new(params_u, params_v, net)),
            samples_u,
            samples_v,
        })
    }
}

fn read_number(value: &Value, path: &str) -> SceneResult<f64> {
    value
        .as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, "must be a finite number"))
}

fn read_params(obj: &Map<String, Value>, p_key: &str, q_key: &str) -> SceneResult<PQParams> {
    let get = |key: &str| {
        obj.get(key)
            .ok_or_else(|| schema(key, "missing required field"))
            .and_then(|v| read_number(v, key))
    };
    let (p, q) = (get(p_key)?, get(q_key)?);
    PQParams::new(p, q).map_err(|_| SceneError::InvalidParams {
        path: format!("{p_key}/{q_key}"),
        message: format!("shape parameters must be positive, found p = {p}, q = {q}"),
    })
}

fn read_count(obj: &Map<String, Value>, key: &str) -> SceneResult<Option<usize>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => match v.as_u64() {
            Some(n) if n >= 2 => Ok(Some(n as usize)),
            _ => Err(SceneError::SampleCount {
                path: key.to_string(),
                found: v.to_string(),
            }),
        },
    }
}

fn read_array<'a>(value: &'a Value, path: &str) -> SceneResult<&'a Vec<Value>> {
    value
        .as_array()
        .ok_or_else(|| schema(path, "must be an array"))
}

fn read_point<const D: usize>(value: &Value, path: &str) -> SceneResult<Point<D>> {
    let coords = read_array(value, path)?;
    if coords.len() != D {
        return Err(SceneError::DimensionMismatch {
            path: path.to_string(),
            expected: D,
            found: coords.len(),
        });
    }
    let mut out = [0.0; D];
    for (i, c) in coords.iter().enumerate() {
        out[i] = read_number(c, &format!("{path}[{i}]"))?;
    }
    Ok(Point(out))
}

fn check_len(len: usize, path: &str) -> SceneResult<()> {
    if len == 0 {
        return Err(schema(path, "must contain at least one point"));
    }
    if len - 1 > MAX_DEGREE {
        return Err(SceneError::DegreeLimit {
            path: path.to_string(),
            degree: len - 1,
        });
    }
    Ok(())
}

fn read_curve(points: &Value, params: PQParams) -> SceneResult<Geometry> {
    let items = read_array(points, "points")?;
    check_len(items.len(), "points")?;
    let dim = read_array(&items[0], "points[0]")?.len();
    fn collect<const D: usize>(items: &[Value]) -> SceneResult<Vec<Point<D>>> {
        items
            .iter()
            .enumerate()
            .map(|(i, v)| read_point::<D>(v, &format!("points[{i}]")))
            .collect()
    }
    let curve_err = |e: Error| schema("points", e.to_string());
    match dim {
        2 => Ok(Geometry::Curve2(
            PQCurve::from_points(params, collect::<2>(items)?).map_err(curve_err)?,
        )),
        3 => Ok(Geometry::Curve3(
            PQCurve::from_points(params, collect::<3>(items)?).map_err(curve_err)?,
        )),
        found => Err(SceneError::DimensionMismatch {
            path: "points[0]".to_string(),
            expected: if found < 2 { 2 } else { 3 },
            found,
        }),
    }
}

fn read_net(points: &Value) -> SceneResult<ControlNet> {
    let rows = read_array(points, "points")?;
    check_len(rows.len(), "points")?;
    let width = read_array(&rows[0], "points[0]")?.len();
    check_len(width, "points[0]")?;
    let mut grid = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let path = format!("points[{i}]");
        let row = read_array(row, &path)?;
        if row.len() != width {
            return Err(SceneError::NonRectangular {
                path,
                expected: width,
                found: row.len(),
            });
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, v)| read_point::<3>(v, &format!("points[{i}][{j}]")))
            .collect::<SceneResult<Vec<_>>>()?;
        grid.push(parsed);
    }
    ControlNet::new(grid).map_err(|e| schema("points", e.to_string()))
}

/// Shortest round-trip decimal form of a finite number (`1.0`, `0.1`, `1e-7`).
pub fn format_number(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

fn format_point(coords: &[f64]) -> String {
    let parts: Vec<String> = coords.iter().map(|&c| format_number(c)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn serialize_scene(doc: &SceneDocument) -> String {
    let mut fields: Vec<(&str, String)> = Vec::new();
    let kind = if matches!(doc.geometry, Geometry::Surface(_)) {
        "surface"
    } else {
        "curve"
    };
    fields.push(("kind", format!("\"{kind}\"")));
    if let Some(name) = &doc.name {
        fields.push((
            "name",
            serde_json::to_string(name).expect("string serializes"),
        ));
    }
    let points = match &doc.geometry {
        Geometry::Curve2(c) => {
            push_params(&mut fields, "p", "q", c.params());
            curve_points_block(c.control_points().iter().map(|p| format_point(p.coords())))
        }
        Geometry::Curve3(c) => {
            push_params(&mut fields, "p", "q", c.params());
            curve_points_block(c.control_points().iter().map(|p| format_point(p.coords())))
        }
        Geometry::Surface(s) => {
            push_params(&mut fields, "p_u", "q_u", s.params_u());
            push_params(&mut fields, "p_v", "q_v", s.params_v());
            curve_points_block(s.net().rows().iter().map(|row| {
                let cells: Vec<String> = row.iter().map(|p| format_point(p.coords())).collect();
                format!("[{}]", cells.join(", "))
            }))
        }
    };
    let is_surface = kind == "surface";
    if let Some(n) = doc.samples_u {
        fields.push((
            if is_surface { "samples_u" } else { "samples" },
            n.to_string(),
        ));
    }
    if let (true, Some(n)) = (is_surface, doc.samples_v) {
        fields.push(("samples_v", n.to_string()));
    }
    fields.push(("points", points));
    let body: Vec<String> = fields
        .iter()
        .map(|(key, value)| format!("  \"{key}\": {value}"))
        .collect();
    format!("{{\n{}\n}}\n", body.join(",\n"))
}

fn push_params(
    fields: &mut Vec<(&str, String)>,
    p_key: &'static str,
    q_key: &'static str,
    params: PQParams,
) {
    fields.push((p_key, format_number(params.p())));
    fields.push((q_key, format_number(params.q())));
}

fn curve_points_block(lines: impl Iterator<Item = String>) -> String {
    let lines: Vec<String> = lines.map(|l| format!("    {l}")).collect();
    format!("[\n{}\n  ]", lines.join(",\n"))
}

/// The scene as a JSON value (same content as [`serialize_scene`]).
pub fn scene_to_value(doc: &SceneDocument) -> Value {
    serde_json::from_str(&serialize_scene(doc)).expect("canonical scene is valid JSON")
}

/// Point and optional tableau of a curve evaluation, dimension-erased.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveEvaluation {
    pub point: Vec<f64>,
    pub extrapolated: bool,
    pub tableau: Option<Vec<Vec<Vec<f64>>>>,
}

fn erase_tableau<const D: usize>(tableau: &DeCasteljauTableau<D>) -> Vec<Vec<Vec<f64>>> {
    tableau
        .levels
        .iter()
        .map(|level| level.iter().map(|p| p.0.to_vec()).collect())
        .collect()
}

fn evaluate_curve<const D: usize>(
    curve: &PQCurve<D>,
    t: f64,
    tableau: Option<Variant>,
) -> CurveEvaluation {
    let extrapolated = PQCurve::<D>::is_extrapolation(t);
    match tableau {
        None => CurveEvaluation {
            point: curve.evaluate(t).0.to_vec(),
            extrapolated,
            tableau: None,
        },
        Some(variant) => {
            let (point, tab) = curve.de_casteljau(t, variant);
            CurveEvaluation {
                point: point.0.to_vec(),
                extrapolated,
                tableau: Some(erase_tableau(&tab)),
            }
        }
    }
}

impl SceneDocument {
    pub fn curve2(params: PQParams, points: Vec<Point<2>>) -> Result<Self, Error> {
        Ok(SceneDocument {
            name: None,
            geometry: Geometry::Curve2(PQCurve::from_points(params, points)?),
            samples_u: None,
            samples_v: None,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self.geometry {
            Geometry::Surface(_) => "surface",
            _ => "curve",
        }
    }

    /// Advisory messages; currently one per axis whose parameters have `q > p`.
    pub fn warnings(&self) -> Vec<String> {
        let check = |label: &str, params: PQParams| {
            (!params.is_ordered()).then(|| {
                format!(
                    "{label}: q = {} exceeds p = {}; non-negativity and the convex-hull property are not guaranteed",
                    format_number(params.q()),
                    format_number(params.p())
                )
            })
        };
        match &self.geometry {
            Geometry::Curve2(c) => check("curve", c.params()).into_iter().collect(),
            Geometry::Curve3(c) => check("curve", c.params()).into_iter().collect(),
            Geometry::Surface(s) => [check("u", s.params_u()), check("v", s.params_v())]
                .into_iter()
                .flatten()
                .collect(),
        }
    }

    /// Evaluates a curve at `t`. With `tableau = Some(variant)` the point is
    /// computed by de Casteljau and every level is returned as well.
    pub fn evaluate_curve(
        &self,
        t: f64,
        tableau: Option<Variant>,
    ) -> Result<CurveEvaluation, Error> {
        match &self.geometry {
            Geometry::Curve2(c) => Ok(evaluate_curve(c, t, tableau)),
            Geometry::Curve3(c) => Ok(evaluate_curve(c, t, tableau)),
            Geometry::Surface(_) => Err(Error::WrongKind { expected: "curve" }),
        }
    }

    pub fn evaluate_surface(&self, u: f64, v: f64) -> Result<Vec<f64>, Error> {
        match &self.geometry {
            Geometry::Surface(s) => Ok(s.evaluate(u, v).0.to_vec()),
            _ => Err(Error::WrongKind {
                expected: "surface",
            }),
        }
    }

    /// `(t, point)` pairs at `count` uniform parameters.
    pub fn curve_samples(&self, count: usize) -> Result<Vec<(f64, Vec<f64>)>, Error> {
        fn run<const D: usize>(
            c: &PQCurve<D>,
            count: usize,
        ) -> Result<Vec<(f64, Vec<f64>)>, Error> {
            let points = c.sample(count)?;
            Ok(uniform_parameters(count)
                .zip(points)
                .map(|(t, p)| (t, p.0.to_vec()))
                .collect())
        }
        match &self.geometry {
            Geometry::Curve2(c) => run(c, count),
            Geometry::Curve3(c) => run(c, count),
            Geometry::Surface(_) => Err(Error::WrongKind { expected: "curve" }),
        }
    }

    pub fn surface_mesh(&self, count_u: usize, count_v: usize) -> Result<Mesh, Error> {
        match &self.geometry {
            Geometry::Surface(s) => s.sample_grid(count_u, count_v),
            _ => Err(Error::WrongKind {
                expected: "surface",
            }),
        }
    }

    pub fn polygon_distance(&self) -> Result<f64, Error> {
        match &self.geometry {
            Geometry::Curve2(c) => Ok(c.polygon_distance()),
            Geometry::Curve3(c) => Ok(c.polygon_distance()),
            Geometry::Surface(_) => Err(Error::WrongKind { expected: "curve" }),
        }
    }

    /// Degree elevation applied `times` times (both axes for surfaces).
    pub fn elevated(&self, times: usize) -> Result<SceneDocument, Error> {
        let geometry = match &self.geometry {
            Geometry::Curve2(c) => Geometry::Curve2(c.degree_elevate_iterated(times)?),
            Geometry::Curve3(c) => Geometry::Curve3(c.degree_elevate_iterated(times)?),
            Geometry::Surface(s) => {
                let mut s = s.clone();
                for _ in 0..times {
                    s = s.degree_elevate()?;
                }
                Geometry::Surface(s)
            }
        };
        Ok(SceneDocument {
            geometry,
            ..self.clone()
        })
    }
}
