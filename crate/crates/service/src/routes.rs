use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{FromRequest, Path, Query, Request, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use medtriage_core::inference::{NextQuestion, DIAGNOSIS_TABLE};
use medtriage_core::temporal::Value;
use medtriage_core::tsql::{self, Statement, TsqlError};
use medtriage_core::{Instant, SeverityVector};
use serde::de::DeserializeOwned;

use crate::error::ApiError;
use crate::registry::{new_token, SessionSlot};
use crate::wire::*;
use crate::AppState;

type ApiResult<T> = Result<T, ApiError>;
type AppRef = State<Arc<AppState>>;

/// `Json` with rejections rendered as [`ApiError`] bodies.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(Body(v)),
            Err(rej) => Err(rejection(rej)),
        }
    }
}

fn rejection(rej: JsonRejection) -> ApiError {
    let code = match rej {
        JsonRejection::JsonDataError(_) => "invalid_body",
        JsonRejection::MissingJsonContentType(_) => "unsupported_media_type",
        _ => "malformed_json",
    };
    ApiError::new(rej.status(), code, rej.body_text())
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(start_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/symptoms", post(submit_symptoms))
        .route("/sessions/{id}/question", get(next_question))
        .route("/sessions/{id}/answers", post(answer))
        .route("/sessions/{id}/diagnosis", get(diagnosis))
        .route("/sessions/{id}/finalize", post(finalize))
        .route("/body/parts", get(parts))
        .route("/body/{part}/subparts", get(subparts))
        .route("/subparts/{id}/symptoms", get(symptoms))
        .route("/tsql", post(run_tsql))
        .route("/patients/{id}/history", get(history))
        .with_state(state)
}

fn slot(app: &AppState, id: &str) -> ApiResult<Arc<SessionSlot>> {
    app.sessions.get(id).ok_or_else(|| ApiError::not_found("unknown_session", format!("no session `{id}`")))
}

async fn start_session(State(app): AppRef, body: Bytes) -> ApiResult<(StatusCode, Json<SessionView>)> {
    // the body is optional: an empty POST starts an anonymous session
    let req: StartRequest = if body.iter().all(u8::is_ascii_whitespace) {
        StartRequest::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::unprocessable("invalid_body", e.to_string()))?
    };
    let token = new_token();
    let patient = match req.patient_id {
        Some(p) if p.trim().is_empty() => return Err(ApiError::unprocessable("invalid_body", "empty patient_id")),
        Some(p) => p,
        None => format!("anon-{}", &token[..8]),
    };
    let session = app.engine.start(token, patient);
    let view = SessionView::new(&session, app.engine.pack());
    app.sessions.insert(session);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): AppRef, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let slot = slot(&app, &id)?;
    let s = slot.session.lock().await;
    Ok(Json(SessionView::new(&s, app.engine.pack())))
}

async fn submit_symptoms(
    State(app): AppRef,
    Path(id): Path<String>,
    Body(req): Body<SymptomsRequest>,
) -> ApiResult<Json<SessionView>> {
    let slot = slot(&app, &id)?;
    let mut s = slot.session.lock().await;
    let severities = SeverityVector::new(req.severities)?;
    // validate everything before touching the session
    let mut next = s.clone();
    if let Some(sub) = &req.subpart {
        app.engine.select_subpart(&mut next, sub)?;
    }
    app.engine.submit_symptoms(&mut next, &severities)?;
    *s = next;
    Ok(Json(SessionView::new(&s, app.engine.pack())))
}

async fn next_question(State(app): AppRef, Path(id): Path<String>) -> ApiResult<Json<NextQuestion>> {
    let slot = slot(&app, &id)?;
    let s = slot.session.lock().await;
    Ok(Json(app.engine.next_question(&s)?))
}

async fn answer(
    State(app): AppRef,
    Path(id): Path<String>,
    Body(req): Body<AnswerRequest>,
) -> ApiResult<Json<SessionView>> {
    let slot = slot(&app, &id)?;
    let mut s = slot.session.lock().await;
    app.engine.apply_answer(&mut s, &req.question_id, req.severity)?;
    Ok(Json(SessionView::new(&s, app.engine.pack())))
}

async fn diagnosis(State(app): AppRef, Path(id): Path<String>) -> ApiResult<Json<DiagnosisView>> {
    let slot = slot(&app, &id)?;
    let s = slot.session.lock().await;
    if s.phase == medtriage_core::inference::Phase::Collecting {
        return Err(ApiError::new(StatusCode::CONFLICT, "wrong_phase", "no diagnosis before symptoms are submitted"));
    }
    let pack = app.engine.pack();
    Ok(Json(DiagnosisView {
        session_id: s.id.clone(),
        phase: s.phase,
        results: s.top().iter().map(|r| ResultItem::new(r, pack)).collect(),
        decision: s.decision.as_ref().map(|r| ResultItem::new(r, pack)),
    }))
}

async fn finalize(State(app): AppRef, Path(id): Path<String>) -> ApiResult<Json<FinalizeView>> {
    let slot = slot(&app, &id)?;
    let s = slot.session.lock().await;
    let stored = {
        let mut store = app.store.write().await;
        app.engine.decision_history(&s, &mut store)?
    };
    let decision = s.decision.as_ref().expect("final sessions carry a decision");
    Ok(Json(FinalizeView {
        session_id: s.id.clone(),
        stored,
        decision: ResultItem::new(decision, app.engine.pack()),
        decided_at: s.decided_at.expect("set with the decision").to_string(),
    }))
}

async fn parts(State(app): AppRef) -> Json<PartsView> {
    let parts = app
        .engine
        .pack()
        .parts()
        .iter()
        .map(|p| PartItem { id: p.name.as_str().to_owned(), subpart_count: p.subparts.len() })
        .collect();
    Json(PartsView { parts })
}

async fn subparts(State(app): AppRef, Path(part): Path<String>) -> ApiResult<Json<SubpartsView>> {
    let list =
        app.engine.pack().list_subparts(&part).map_err(|e| ApiError::not_found("unknown_part", e.to_string()))?;
    Ok(Json(SubpartsView {
        part: part.to_ascii_lowercase(),
        subparts: list
            .into_iter()
            .map(|s| SubpartItem {
                id: s.id.clone(),
                name: s.name.clone(),
                symptom_count: s.symptom_ids.len(),
                disease_count: s.disease_ids.len(),
            })
            .collect(),
    }))
}

async fn symptoms(State(app): AppRef, Path(id): Path<String>) -> ApiResult<Json<SymptomsView>> {
    let list = app
        .engine
        .pack()
        .symptoms_for_subpart(&id)
        .map_err(|e| ApiError::not_found("unknown_subpart", e.to_string()))?;
    Ok(Json(SymptomsView {
        subpart: id,
        symptoms: list
            .into_iter()
            .map(|s| SymptomItem { id: s.id.clone(), name: s.name.clone(), icd: s.icd.to_string() })
            .collect(),
    }))
}

async fn run_tsql(State(app): AppRef, Body(req): Body<TsqlRequest>) -> ApiResult<Json<TsqlView>> {
    let stmt = tsql::parse(&req.query).map_err(TsqlError::from)?;
    let out = match &stmt {
        Statement::Select(sel) => {
            let store = app.store.read().await;
            tsql::QueryOutput::Rows(tsql::query(sel, &store)?)
        }
        _ => {
            let mut store = app.store.write().await;
            tsql::execute(&stmt, &mut store)?
        }
    };
    Ok(Json(out.into()))
}

async fn history(
    State(app): AppRef,
    Path(patient): Path<String>,
    Query(params): Query<HistoryParams>,
) -> ApiResult<Json<HistoryView>> {
    let as_of = match params.as_of.as_deref() {
        None => app.clock.now(),
        Some(text) => Instant::parse(text).map_err(|e| ApiError::unprocessable("invalid_instant", e.to_string()))?,
    };
    let store = app.store.read().await;
    let table = store.table(DIAGNOSIS_TABLE).ok();
    let belongs = |v: &medtriage_core::temporal::Version| matches!(v.payload.get("patient_id"), Some(Value::Text(p)) if *p == patient);
    let on_record = table.is_some_and(|t| t.versions().any(belongs));
    if !on_record && !app.sessions.has_patient(&patient) {
        return Err(ApiError::not_found("unknown_patient", format!("no patient `{patient}`")));
    }
    let records = table
        .map(|t| t.snapshot(as_of).into_iter().filter(|v| belongs(v)).map(HistoryRecord::new).collect())
        .unwrap_or_default();
    Ok(Json(HistoryView { patient_id: patient, as_of: as_of.to_string(), records }))
}
