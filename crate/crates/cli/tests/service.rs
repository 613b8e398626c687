use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use pqbezier_cli::service::router;

async fn call(method: &str, uri: &str, body: &str) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let response = router().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    call("POST", uri, &body.to_string()).await
}

fn cubic() -> Value {
    json!({"kind": "curve", "p": 0.8, "q": 0.5, "points": [[0, 0], [1, 3], [3, 3], [4, 0]]})
}

fn patch() -> Value {
    json!({
        "kind": "surface", "p_u": 1, "q_u": 0.5, "p_v": 0.8, "q_v": 0.5,
        "points": [[[0, 0, 0], [0, 1, 1]], [[1, 0, 1], [1, 1, 0]]]
    })
}

#[tokio::test]
async fn health_is_ok() {
    let (status, body) = call("GET", "/health", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["status"], "ok");
}

#[tokio::test]
async fn eval_degree_one_midpoint() {
    let scene = json!({"kind": "curve", "p": 0.7, "q": 0.7, "points": [[0, 0], [2, 4]]});
    let (status, body) = post("/eval", json!({"id": "r1", "scene": scene, "t": 0.5})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["id"], "r1");
    assert_eq!(body["point"], json!([1.0, 2.0]));
    assert_eq!(body["extrapolated"], false);
    assert!(body.get("tableau").is_none());
}

#[tokio::test]
async fn eval_with_tableau_levels() {
    for variant in ["a", "b"] {
        let (status, body) = post(
            "/eval",
            json!({"id": 7, "scene": cubic(), "t": 0.4, "tableau": true, "variant": variant}),
        )
        .await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["id"], 7);
        assert_eq!(body["tableau"]["variant"], variant);
        let levels = body["tableau"]["levels"].as_array().unwrap();
        let lengths: Vec<usize> = levels.iter().map(|l| l.as_array().unwrap().len()).collect();
        assert_eq!(lengths, vec![4, 3, 2, 1]);
        assert_eq!(levels[3][0], body["point"]);
        let point: Vec<f64> = serde_json::from_value(body["point"].clone()).unwrap();
        assert!((point[0] - 1.1993125).abs() < 1e-12 && (point[1] - 1.6689375).abs() < 1e-12);
    }
}

#[tokio::test]
async fn eval_surface_and_wrong_arguments() {
    let (status, body) = post("/eval", json!({"scene": patch(), "u": 1, "v": 0})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["point"], json!([1.0, 0.0, 1.0]));
    assert_eq!(body["id"], Value::Null);

    let (status, body) = post("/eval", json!({"id": "x", "scene": patch(), "t": 0.5})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["id"], "x");
    assert_eq!(body["code"], "schema");

    let (status, body) = post(
        "/eval",
        json!({"scene": patch(), "u": 0, "v": 0, "tableau": true}),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "wrong_kind");
}

#[tokio::test]
async fn sample_curve_and_mesh() {
    let (status, body) = post("/sample", json!({"id": 1, "scene": cubic(), "count": 5})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["parameters"], json!([0.0, 0.25, 0.5, 0.75, 1.0]));
    assert_eq!(body["points"].as_array().unwrap().len(), 5);
    assert_eq!(body["points"][0], json!([0.0, 0.0]));
    assert_eq!(body["points"][4], json!([4.0, 0.0]));
    assert!(body["polygon_distance"].as_f64().unwrap() > 0.0);

    let (status, body) = post(
        "/sample",
        json!({"scene": patch(), "count": 3, "count_v": 4}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["vertices"].as_array().unwrap().len(), 12);
    let faces = body["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 6);
    assert_eq!(faces[0], json!([0, 4, 5, 1]));

    let (status, body) = post("/sample", json!({"scene": cubic(), "count": 1})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "sample_count");
}

#[tokio::test]
async fn elevate_returns_scene() {
    let line = json!({"kind": "curve", "name": "l", "p": 1.0, "q": 0.5, "points": [[0.0, 0.0], [3.0, 3.0]]});
    let (status, body) = post("/elevate", json!({"id": "e", "scene": line})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["scene"]["name"], "l");
    assert_eq!(
        body["scene"]["points"],
        json!([[0.0, 0.0], [2.0, 2.0], [3.0, 3.0]])
    );

    let (_, body) = post("/elevate", json!({"scene": cubic(), "times": 3})).await;
    assert_eq!(body["scene"]["points"].as_array().unwrap().len(), 7);
    let (before, after) = (
        body["polygon_distance"]["before"].as_f64().unwrap(),
        body["polygon_distance"]["after"].as_f64().unwrap(),
    );
    assert!(after <= before);

    let (_, original) = post("/eval", json!({"scene": cubic(), "t": 0.3})).await;
    let (_, elevated) = post("/eval", json!({"scene": body["scene"], "t": 0.3})).await;
    for i in 0..2 {
        let (a, b) = (
            original["point"][i].as_f64().unwrap(),
            elevated["point"][i].as_f64().unwrap(),
        );
        assert!((a - b).abs() < 1e-9);
    }

    let (_, body) = post("/elevate", json!({"scene": patch()})).await;
    assert_eq!(body["scene"]["points"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn basis_and_audit() {
    let (status, body) = post("/basis", json!({"n": 3, "p": 0.8, "q": 0.5, "count": 11})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["values"].as_array().unwrap().len(), 4);
    for s in body["sums"].as_array().unwrap() {
        assert!((s.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }

    let (status, body) = post(
        "/audit",
        json!({"id": "a", "n_max": 3, "params": [[2, 1]], "grid": 5}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["failed"], 0);
    let records = body["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["status"] == "PASSED"));

    let (status, body) = post("/audit", json!({"params": [[0, 1]]})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "invalid_params");
}

#[tokio::test]
async fn structured_errors() {
    let (status, body) = call("POST", "/eval", "{\"scene\": ").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "syntax");

    let (status, body) = call("POST", "/eval", "[1, 2]").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "schema");

    let cases = [
        (
            json!({"kind": "curve", "p": -1, "q": 1, "points": [[0, 0]]}),
            "invalid_params",
            422,
        ),
        (
            json!({"kind": "curve", "p": 1, "q": 1, "points": [[0, 0], [1]]}),
            "dimension_mismatch",
            422,
        ),
        (
            json!({"kind": "surface", "p_u": 1, "q_u": 1, "p_v": 1, "q_v": 1, "points": [[[0, 0, 0]], []]}),
            "non_rectangular",
            422,
        ),
        (
            json!({"kind": "curve", "p": 1, "q": 1, "points": [[0, 0]], "color": "red"}),
            "schema",
            400,
        ),
    ];
    for (scene, code, status) in cases {
        let (s, body) = post("/eval", json!({"id": code, "scene": scene, "t": 0})).await;
        assert_eq!(s.as_u16(), status, "{code}");
        assert_eq!(body["code"], code);
        assert_eq!(body["id"], code);
        assert!(body["message"].as_str().unwrap().starts_with("scene."));
    }

    let (status, body) = post("/eval", json!({"scene": cubic(), "t": 0.5, "extra": true})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["message"].as_str().unwrap().contains("extra"));

    let (status, _) = post("/eval", json!({"id": [1], "scene": cubic(), "t": 0.5})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn warnings_for_non_ordered_params() {
    let scene = json!({"kind": "curve", "p": 0.5, "q": 0.9, "points": [[0, 0], [1, 1]]});
    let (status, body) = post("/eval", json!({"scene": scene, "t": 0.5})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["warnings"].as_array().unwrap().len(), 1);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn responses_do_not_depend_on_interleaving() {
    let requests: Vec<(&str, Value)> = (0..24)
        .map(|i| {
            let t = i as f64 / 23.0;
            match i % 4 {
                0 => (
                    "/eval",
                    json!({"id": i, "scene": cubic(), "t": t, "tableau": true}),
                ),
                1 => (
                    "/sample",
                    json!({"id": i, "scene": patch(), "count": 4, "count_v": 3}),
                ),
                2 => (
                    "/elevate",
                    json!({"id": i, "scene": cubic(), "times": i % 5}),
                ),
                _ => (
                    "/eval",
                    json!({"id": i, "scene": patch(), "u": t, "v": 1.0 - t}),
                ),
            }
        })
        .collect();

    let mut sequential = Vec::new();
    for (uri, body) in &requests {
        sequential.push(post(uri, body.clone()).await);
    }
    let handles: Vec<_> = requests
        .iter()
        .rev()
        .map(|(uri, body)| {
            let (uri, body) = (uri.to_string(), body.clone());
            tokio::spawn(async move { post(&uri, body).await })
        })
        .collect();
    let mut concurrent = Vec::new();
    for h in handles {
        concurrent.push(h.await.unwrap());
    }
    concurrent.reverse();
    assert_eq!(sequential, concurrent);
}
