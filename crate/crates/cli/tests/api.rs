use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use cl18::corpus;
use cl18::prover::{decide_with_budget, Verdict};
use cl18_cli::api::router;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

#[tokio::test]
async fn prove_blass_and_check_its_proof() {
    let app = router();
    let (status, v) = call(&app, "POST", "/api/prove", Some(json!({ "cirquent": corpus::BLASS }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["verdict"], "provable");
    let proof = v["proof"].as_str().unwrap().to_string();
    let (status, v) = call(&app, "POST", "/api/check", Some(json!({ "proofText": proof }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["ok"], true);

    let (_, v) = call(&app, "POST", "/api/prove", Some(json!({ "cirquent": "P@1 and ~P@2" }))).await;
    assert_eq!(v["verdict"], "unprovable");
    assert!(v["stats"]["candidatesExplored"].is_u64());
}

#[tokio::test]
async fn prove_splitting_example() {
    let app = router();
    let ex = corpus::examples().into_iter().find(|e| e.name == "splitting").unwrap();
    let (status, v) = call(
        &app,
        "POST",
        "/api/prove",
        Some(json!({ "cirquent": ex.cirquent.to_string() })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["verdict"], "provable");
}

#[tokio::test]
async fn bad_requests() {
    let app = router();
    let (status, v) = call(&app, "POST", "/api/prove", Some(json!({ "cirquent": "P@1 or" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].is_string());
    let (status, _) = call(
        &app,
        "POST",
        "/api/prove",
        Some(json!({ "cirquent": corpus::BLASS, "budget": 1 })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "POST", "/api/check", Some(json!({ "proofText": "junk" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "GET", "/api/session/s999", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/api/session", Some(json!({ "cirquent": "bot" }))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn broken_proof_reports_step() {
    let app = router();
    let ex = &corpus::examples()[0];
    let text = cl18::proof::format_proof(&ex.proof);
    let last = text.lines().last().unwrap();
    let broken = text.replace(last, &last.replacen("~P@2", "~P@3", 1));
    let (status, v) = call(&app, "POST", "/api/check", Some(json!({ "proofText": broken }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["ok"], false);
    assert_eq!(v["errorStep"], ex.proof.steps.len());
}

#[tokio::test]
async fn purify_reports_trace() {
    let app = router();
    let (status, v) = call(
        &app,
        "POST",
        "/api/purify",
        Some(json!({ "cirquent": "(P@1 and P@1) or ~P@2" })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["pure"], "top");
    assert!(!v["traceSteps"].as_array().unwrap().is_empty());
}

#[tokio::test]
async fn session_plays_copycat() {
    let app = router();
    let (status, v) = call(&app, "POST", "/api/session", Some(json!({ "cirquent": "P@1 or ~P@2" }))).await;
    assert_eq!(status, StatusCode::OK);
    let id = v["id"].as_str().unwrap().to_string();
    assert!(v["state"]["interpretationNote"].is_string());
    assert_eq!(v["state"]["status"], "active");
    let (status, v) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/move"),
        Some(json!({ "labmove": "B:P@1.x" })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["replies"], json!(["T:~P@2.x"]));
    assert_eq!(v["state"]["currentWinner"], "T");
    assert_eq!(v["state"]["status"], "active");
    let (_, v) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/move"),
        Some(json!({ "labmove": "B:~P@2.x" })),
    )
    .await;
    assert_eq!(v["accepted"], true);
    assert_eq!(v["replies"], json!(["T:P@1.x"]));
    assert_eq!(v["state"]["status"], "ended");
    let (status, _) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/move"),
        Some(json!({ "labmove": "B:P@1.y" })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, v) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["run"], json!(["B:P@1.x", "T:~P@2.x", "B:~P@2.x", "T:P@1.x"]));
    assert_eq!(v["winner"], "T");
    assert_replayable(&v);
}

fn assert_replayable(state: &Value) {
    let c = cl18::parse_cirquent(state["cirquent"].as_str().unwrap(), false).unwrap();
    let interp = cl18::game::parse_interpretation(state["interpretation"].as_str().unwrap()).unwrap();
    let run: Vec<String> = serde_json::from_value(state["run"].clone()).unwrap();
    let run = if run.is_empty() {
        Vec::new()
    } else {
        cl18::game::parse_run(&run.join(", ")).unwrap()
    };
    let w = cl18::game::winner(&c, &interp, &run).unwrap();
    assert_eq!(state["winner"], w.to_string());
}

#[tokio::test]
async fn random_sessions_replay() {
    let app = router();
    for (k, text) in corpus::PROVABLE.iter().enumerate().take(10) {
        let (status, v) = call(
            &app,
            "POST",
            "/api/session",
            Some(json!({ "cirquent": text, "seed": k })),
        )
        .await;
        assert_eq!(status, StatusCode::OK, "{text}");
        let id = v["id"].as_str().unwrap().to_string();
        let mut state = v["state"].clone();
        for _ in 0..20 {
            if state["status"] == "ended" {
                break;
            }
            let first = state["legalMoves"][0].clone();
            let (_, v) = call(
                &app,
                "POST",
                &format!("/api/session/{id}/move"),
                Some(json!({ "labmove": first })),
            )
            .await;
            assert_eq!(v["accepted"], true);
            state = v["state"].clone();
        }
        if state["status"] == "ended" {
            assert_replayable(&state);
            assert_eq!(state["winner"], "T", "{text}");
        }
    }
}

#[tokio::test]
async fn illegal_environment_move_loses() {
    let app = router();
    let (_, v) = call(
        &app,
        "POST",
        "/api/session",
        Some(json!({ "cirquent": "P@1 or ~P@2", "seed": 7 })),
    )
    .await;
    let id = v["id"].as_str().unwrap().to_string();
    assert!(v["state"]["interpretationNote"].is_null());
    let (status, v) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/move"),
        Some(json!({ "labmove": "B:P@1.nonsense" })),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["accepted"], false);
    assert_eq!(v["state"]["winner"], "T");
    let (status, _) = call(
        &app,
        "POST",
        &format!("/api/session/{id}/move"),
        Some(json!({ "labmove": "T:P@1.x" })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn examples_come_with_checked_proofs() {
    let app = router();
    let (status, v) = call(&app, "GET", "/api/examples", None).await;
    assert_eq!(status, StatusCode::OK);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), corpus::examples().len());
    for e in list {
        let (_, c) = call(&app, "POST", "/api/check", Some(json!({ "proofText": e["proofText"] }))).await;
        assert_eq!(c["ok"], true, "{}", e["name"]);
        assert_eq!(c["conclusion"], e["cirquent"]);
    }
}

#[tokio::test]
async fn service_verdicts_agree_with_the_library() {
    let app = router();
    for text in corpus::PROVABLE
        .iter()
        .copied()
        .chain(["P@1 and ~P@2", "P@0 chor.1 ~P@0"])
    {
        let c = cl18::parse_cirquent(text, false).unwrap();
        let expected = match decide_with_budget(&c, 2_000_000).unwrap() {
            Verdict::Provable(_) => "provable",
            Verdict::Unprovable(_) => "unprovable",
        };
        let (_, v) = call(&app, "POST", "/api/prove", Some(json!({ "cirquent": text }))).await;
        assert_eq!(v["verdict"], expected, "{text}");
    }
}
