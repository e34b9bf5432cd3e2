//! JSON service over the library: proving, purification, proof checking and
//! play sessions.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};

use cl18::corpus;
use cl18::game::{format_interpretation, parse_interpretation, parse_labmove, Labmove};
use cl18::parse_cirquent;
use cl18::proof::{check_proof, format_proof, parse_proof};
use cl18::prover::{decide_with_budget, SearchStats, Verdict};
use cl18::purify::{classify, purify};

use crate::session::{InterpSource, Session, SessionError, DEFAULT_INTERPRETATION_NOTE};

/// Expansion budget for requests that do not name one.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl ToString) -> ApiError {
        ApiError {
            status,
            message: message.to_string(),
        }
    }

    fn bad_request(message: impl ToString) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> ApiError {
        let status = match e {
            SessionError::Unprovable(_) | SessionError::Budget(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Ended => StatusCode::CONFLICT,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e)
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

#[derive(Default)]
pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
}

pub fn router() -> Router {
    Router::new()
        .route("/api/prove", post(prove))
        .route("/api/purify", post(purify_handler))
        .route("/api/check", post(check))
        .route("/api/session", post(create_session))
        .route("/api/session/{id}", get(get_session))
        .route("/api/session/{id}/move", post(session_move))
        .route("/api/examples", get(examples))
        .with_state(Arc::new(AppState::default()))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router()).await
}

fn parse(text: &str) -> Result<cl18::Cirquent, ApiError> {
    parse_cirquent(text, false).map_err(ApiError::bad_request)
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "candidatesExplored": s.candidates_explored,
        "maxDepth": s.max_depth,
        "expansions": s.expansions,
    })
}

fn moves_json(moves: &[Labmove]) -> Vec<String> {
    moves.iter().map(ToString::to_string).collect()
}

#[derive(Deserialize)]
struct ProveRequest {
    cirquent: String,
    budget: Option<u64>,
}

async fn prove(Json(req): Json<ProveRequest>) -> ApiResult {
    let c = parse(&req.cirquent)?;
    let budget = req.budget.unwrap_or(DEFAULT_BUDGET);
    let verdict = tokio::task::spawn_blocking(move || decide_with_budget(&c, budget))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    Ok(Json(match verdict {
        Verdict::Provable(p) => json!({
            "verdict": "provable",
            "proof": format_proof(&p),
            "steps": p.steps.len(),
        }),
        Verdict::Unprovable(stats) => json!({
            "verdict": "unprovable",
            "stats": stats_json(&stats),
        }),
    }))
}

#[derive(Deserialize)]
struct PurifyRequest {
    cirquent: String,
}

async fn purify_handler(Json(req): Json<PurifyRequest>) -> ApiResult {
    let c = parse(&req.cirquent)?;
    let (pure, trace) = purify(&c);
    let steps: Vec<Value> = trace
        .entries
        .iter()
        .map(|e| {
            json!({
                "step": e.step,
                "application": e.application,
                "rule": e.rule.to_string(),
                "result": e.result.to_string(),
            })
        })
        .collect();
    Ok(Json(json!({
        "input": c.to_string(),
        "pure": pure.to_string(),
        "class": classify(&pure).to_string(),
        "traceSteps": steps,
    })))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CheckRequest {
    proof_text: String,
}

async fn check(Json(req): Json<CheckRequest>) -> ApiResult {
    let proof = parse_proof(&req.proof_text).map_err(ApiError::bad_request)?;
    Ok(Json(match check_proof(&proof) {
        Ok(()) => json!({
            "ok": true,
            "conclusion": proof.conclusion().map(ToString::to_string),
        }),
        Err(e) => json!({
            "ok": false,
            "errorStep": e.step,
            "reason": e.reason,
        }),
    }))
}

pub fn session_json(id: &str, s: &Session) -> Value {
    let note = match s.source {
        InterpSource::Default => Some(DEFAULT_INTERPRETATION_NOTE),
        _ => None,
    };
    json!({
        "id": id,
        "cirquent": s.cirquent.to_string(),
        "interpretation": format_interpretation(&s.interp),
        "interpretationNote": note,
        "proof": format_proof(&s.proof),
        "run": moves_json(&s.run),
        "status": if s.ended.is_some() { "ended" } else { "active" },
        "winner": s.ended.map(|p| p.to_string()),
        "currentWinner": s.current_winner().to_string(),
        "legalMoves": moves_json(&s.legal_moves()),
    })
}

#[derive(Deserialize)]
struct SessionRequest {
    cirquent: String,
    interp: Option<String>,
    seed: Option<u64>,
    budget: Option<u64>,
}

async fn create_session(State(app): State<Arc<AppState>>, Json(req): Json<SessionRequest>) -> ApiResult {
    let c = parse(&req.cirquent)?;
    let source = match (req.interp, req.seed) {
        (Some(text), _) => InterpSource::Given(parse_interpretation(&text).map_err(ApiError::bad_request)?),
        (None, Some(seed)) => InterpSource::Seeded(seed),
        (None, None) => InterpSource::Default,
    };
    let budget = req.budget.unwrap_or(DEFAULT_BUDGET);
    let (session, opening) = tokio::task::spawn_blocking(move || Session::start(c, source, budget))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))??;
    let id = format!("s{}", app.next_id.fetch_add(1, Ordering::Relaxed) + 1);
    let state = session_json(&id, &session);
    app.sessions
        .write()
        .expect("session store lock")
        .insert(id.clone(), Arc::new(Mutex::new(session)));
    Ok(Json(
        json!({ "id": id, "opening": moves_json(&opening), "state": state }),
    ))
}

fn lookup(app: &AppState, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
    app.sessions
        .read()
        .expect("session store lock")
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("no session {id}")))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let session = lookup(&app, &id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(session_json(&id, &s)))
}

#[derive(Deserialize)]
struct MoveRequest {
    labmove: String,
}

async fn session_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<MoveRequest>,
) -> ApiResult {
    let session = lookup(&app, &id)?;
    let lm = parse_labmove(&req.labmove).map_err(ApiError::bad_request)?;
    let mut s = session.lock().expect("session lock");
    let outcome = s.submit(lm)?;
    Ok(Json(json!({
        "accepted": outcome.accepted,
        "replies": moves_json(&outcome.replies),
        "state": session_json(&id, &s),
    })))
}

async fn examples() -> Json<Value> {
    let list: Vec<Value> = corpus::examples()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "description": e.description,
                "cirquent": e.cirquent.to_string(),
                "proofText": format_proof(&e.proof),
                "steps": e.proof.steps.len(),
            })
        })
        .collect();
    Json(Value::Array(list))
}
