//! Stateless HTTP/JSON service over the core library.
//!
//! Every POST body is a JSON object with an optional `id` (string or
//! number) that is echoed back in the response. Failures return a 4xx
//! status with `{"id", "code", "message"}`.
//!
//! | route          | request fields                                      |
//! |----------------|-----------------------------------------------------|
//! | `GET /health`  |                                                     |
//! | `POST /eval`   | `scene`, `t` or `u`+`v`, `tableau`, `variant`       |
//! | `POST /sample` | `scene`, `count`, `count_v`                         |
//! | `POST /elevate`| `scene`, `times`                                    |
//! | `POST /basis`  | `n`, `p`, `q`, `count`                              |
//! | `POST /audit`  | `n_max`, `params`, `grid`                           |

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Map, Value};

use pqbezier::audit::{self, default_params, identity_audit, uniform_grid};
use pqbezier::basis::basis_row;
use pqbezier::curve::uniform_parameters;
use pqbezier::scene::{parse_scene_value, scene_to_value, SceneDocument};
use pqbezier::{PQParams, Variant, MAX_DEGREE};

pub const DEFAULT_SAMPLES: usize = 101;
pub const DEFAULT_AUDIT_N_MAX: usize = 8;
pub const DEFAULT_AUDIT_GRID: usize = 11;
/// Upper bound on any requested sample count, per axis.
pub const MAX_SAMPLES: usize = 10_000;

pub fn router() -> Router {
    Router::new()
        .route("/health", get(health))
        .route(
            "/eval",
            post(|body: Bytes| handle(body, &["scene", "t", "u", "v", "tableau", "variant"], eval)),
        )
        .route(
            "/sample",
            post(|body: Bytes| handle(body, &["scene", "count", "count_v"], sample)),
        )
        .route(
            "/elevate",
            post(|body: Bytes| handle(body, &["scene", "times"], elevate)),
        )
        .route(
            "/basis",
            post(|body: Bytes| handle(body, &["n", "p", "q", "count"], basis)),
        )
        .route(
            "/audit",
            post(|body: Bytes| handle(body, &["n_max", "params", "grid"], run_audit)),
        )
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") }))
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code,
            message: message.into(),
        }
    }

    fn unprocessable(code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code,
            message: message.into(),
        }
    }
}

impl From<pqbezier::Error> for ApiError {
    fn from(e: pqbezier::Error) -> Self {
        use pqbezier::Error as E;
        let code = match e {
            E::InvalidParams { .. } => "invalid_params",
            E::DegreeTooHigh { .. } | E::FactorialOverflow { .. } => "degree_limit",
            E::SampleCount(_) => "sample_count",
            E::WrongKind { .. } => "wrong_kind",
            E::NonRectangular { .. } => "non_rectangular",
            _ => "invalid_input",
        };
        ApiError::unprocessable(code, e.to_string())
    }
}

/// Request body with typed accessors that report the offending field.
struct Request(Map<String, Value>);

impl Request {
    fn field(&self, key: &str) -> Option<&Value> {
        self.0.get(key).filter(|v| !v.is_null())
    }

    fn scene(&self) -> Result<SceneDocument, ApiError> {
        let value = self
            .field("scene")
            .ok_or_else(|| ApiError::bad_request("schema", "scene: missing required field"))?;
        parse_scene_value(value).map_err(|e| {
            let message = format!("scene.{e}");
            match e.code() {
                "syntax" | "schema" => ApiError::bad_request(e.code(), message),
                code => ApiError::unprocessable(code, message),
            }
        })
    }

    fn number(&self, key: &str) -> Result<Option<f64>, ApiError> {
        self.field(key)
            .map(|v| {
                v.as_f64().ok_or_else(|| {
                    ApiError::bad_request("schema", format!("{key}: must be a number"))
                })
            })
            .transpose()
    }

    fn count(&self, key: &str, max: usize) -> Result<Option<usize>, ApiError> {
        self.field(key)
            .map(|v| match v.as_u64() {
                Some(n) if n as usize <= max => Ok(n as usize),
                _ => Err(ApiError::bad_request(
                    "schema",
                    format!("{key}: must be an integer between 0 and {max}"),
                )),
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool, ApiError> {
        match self.field(key) {
            None => Ok(false),
            Some(Value::Bool(b)) => Ok(*b),
            Some(_) => Err(ApiError::bad_request(
                "schema",
                format!("{key}: must be a boolean"),
            )),
        }
    }
}

async fn handle(
    body: Bytes,
    allowed: &'static [&'static str],
    op: fn(&Request) -> Result<Value, ApiError>,
) -> Response {
    let (id, result) = match serde_json::from_slice::<Value>(&body) {
        Err(e) => (
            Value::Null,
            Err(ApiError::bad_request(
                "syntax",
                format!(
                    "syntax error at line {}, column {}: {e}",
                    e.line(),
                    e.column()
                ),
            )),
        ),
        Ok(Value::Object(map)) => {
            let id = map.get("id").cloned().unwrap_or(Value::Null);
            let result = if !matches!(id, Value::Null | Value::String(_) | Value::Number(_)) {
                Err(ApiError::bad_request(
                    "schema",
                    "id: must be a string or a number",
                ))
            } else if let Some(key) = map
                .keys()
                .find(|k| *k != "id" && !allowed.contains(&k.as_str()))
            {
                Err(ApiError::bad_request(
                    "schema",
                    format!("{key}: unknown field"),
                ))
            } else {
                op(&Request(map))
            };
            (id, result)
        }
        Ok(_) => (
            Value::Null,
            Err(ApiError::bad_request(
                "schema",
                "request body must be a JSON object",
            )),
        ),
    };
    match result {
        Ok(Value::Object(mut fields)) => {
            fields.insert("id".to_string(), id);
            Json(Value::Object(fields)).into_response()
        }
        Ok(other) => Json(json!({ "id": id, "result": other })).into_response(),
        Err(e) => (
            e.status,
            Json(json!({ "id": id, "code": e.code, "message": e.message })),
        )
            .into_response(),
    }
}

fn eval(req: &Request) -> Result<Value, ApiError> {
    let doc = req.scene()?;
    let variant = match req.field("variant") {
        None => Variant::A,
        Some(Value::String(s)) => s
            .parse()
            .map_err(|e: String| ApiError::bad_request("schema", format!("variant: {e}")))?,
        Some(_) => return Err(ApiError::bad_request("schema", "variant: must be a string")),
    };
    let tableau = req.flag("tableau")?;
    let (t, u, v) = (req.number("t")?, req.number("u")?, req.number("v")?);
    if doc.kind() == "curve" {
        let t = match (t, u, v) {
            (Some(t), None, None) => t,
            _ => {
                return Err(ApiError::bad_request(
                    "schema",
                    "a curve scene needs `t` (and not `u`/`v`)",
                ))
            }
        };
        let eval = doc.evaluate_curve(t, tableau.then_some(variant))?;
        let mut out = json!({
            "point": eval.point,
            "extrapolated": eval.extrapolated,
            "warnings": doc.warnings(),
        });
        if let Some(levels) = eval.tableau {
            out["tableau"] = json!({ "variant": variant.as_str(), "levels": levels });
        }
        Ok(out)
    } else {
        let (u, v) = match (t, u, v) {
            (None, Some(u), Some(v)) => (u, v),
            _ => {
                return Err(ApiError::bad_request(
                    "schema",
                    "a surface scene needs `u` and `v` (and not `t`)",
                ))
            }
        };
        if tableau {
            return Err(ApiError::unprocessable(
                "wrong_kind",
                "tableau is only available for curves",
            ));
        }
        Ok(json!({
            "point": doc.evaluate_surface(u, v)?,
            "extrapolated": !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v),
            "warnings": doc.warnings(),
        }))
    }
}

fn sample(req: &Request) -> Result<Value, ApiError> {
    let doc = req.scene()?;
    let count_u = req
        .count("count", MAX_SAMPLES)?
        .or(doc.samples_u)
        .unwrap_or(DEFAULT_SAMPLES);
    if doc.kind() == "curve" {
        if req.field("count_v").is_some() {
            return Err(ApiError::bad_request(
                "schema",
                "count_v: only valid for surface scenes",
            ));
        }
        let samples = doc.curve_samples(count_u)?;
        let (ts, points): (Vec<f64>, Vec<Vec<f64>>) = samples.into_iter().unzip();
        Ok(json!({
            "parameters": ts,
            "points": points,
            "polygon_distance": doc.polygon_distance()?,
            "warnings": doc.warnings(),
        }))
    } else {
        let count_v = req
            .count("count_v", MAX_SAMPLES)?
            .or(doc.samples_v)
            .unwrap_or(DEFAULT_SAMPLES);
        if count_u.saturating_mul(count_v) > MAX_SAMPLES * 100 {
            return Err(ApiError::unprocessable("sample_count", "mesh is too large"));
        }
        let mesh = doc.surface_mesh(count_u, count_v)?;
        let vertices: Vec<&[f64; 3]> = mesh.vertices.iter().map(|p| p.coords()).collect();
        Ok(json!({
            "count_u": mesh.count_u,
            "count_v": mesh.count_v,
            "vertices": vertices,
            "faces": mesh.faces,
            "warnings": doc.warnings(),
        }))
    }
}

fn elevate(req: &Request) -> Result<Value, ApiError> {
    let doc = req.scene()?;
    let times = req.count("times", MAX_DEGREE)?.unwrap_or(1);
    let elevated = doc.elevated(times)?;
    let mut out = json!({ "scene": scene_to_value(&elevated), "warnings": doc.warnings() });
    if doc.kind() == "curve" {
        out["polygon_distance"] = json!({
            "before": doc.polygon_distance()?,
            "after": elevated.polygon_distance()?,
        });
    }
    Ok(out)
}

fn params_from(p: Option<f64>, q: Option<f64>) -> Result<PQParams, ApiError> {
    match (p, q) {
        (Some(p), Some(q)) => Ok(PQParams::new(p, q)?),
        _ => Err(ApiError::bad_request("schema", "p and q are required")),
    }
}

fn basis(req: &Request) -> Result<Value, ApiError> {
    let n = req
        .count("n", usize::MAX)?
        .ok_or_else(|| ApiError::bad_request("schema", "n: missing required field"))?;
    let params = params_from(req.number("p")?, req.number("q")?)?;
    let count = req.count("count", MAX_SAMPLES)?.unwrap_or(DEFAULT_SAMPLES);
    if count < 2 {
        return Err(pqbezier::Error::SampleCount(count).into());
    }
    let ts: Vec<f64> = uniform_parameters(count).collect();
    let rows = ts
        .iter()
        .map(|&t| basis_row(n, t, params))
        .collect::<Result<Vec<_>, _>>()?;
    let values: Vec<Vec<f64>> = (0..=n)
        .map(|k| rows.iter().map(|r| r[k]).collect())
        .collect();
    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let warnings: Vec<String> = if params.is_ordered() {
        vec![]
    } else {
        vec!["q exceeds p; basis values may be negative".to_string()]
    };
    Ok(json!({ "parameters": ts, "values": values, "sums": sums, "warnings": warnings }))
}

fn run_audit(req: &Request) -> Result<Value, ApiError> {
    let n_max = req
        .count("n_max", MAX_DEGREE - 1)?
        .unwrap_or(DEFAULT_AUDIT_N_MAX);
    let grid = req
        .count("grid", MAX_SAMPLES)?
        .unwrap_or(DEFAULT_AUDIT_GRID);
    let params = match req.field("params") {
        None => default_params(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, item)| match item.as_array().map(|a| a.as_slice()) {
                Some([p, q]) => params_from(p.as_f64(), q.as_f64()),
                _ => Err(ApiError::bad_request(
                    "schema",
                    format!("params[{i}]: expected [p, q]"),
                )),
            })
            .collect::<Result<_, _>>()?,
        Some(_) => {
            return Err(ApiError::bad_request(
                "schema",
                "params: must be an array of [p, q] pairs",
            ))
        }
    };
    let reports = identity_audit(n_max, &params, &uniform_grid(grid))?;
    let failed = reports
        .iter()
        .filter(|r| r.status == audit::AuditStatus::Failed)
        .count();
    Ok(json!({ "records": reports, "failed": failed }))
}
