use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use medtriage_core::diagnosis::DiagnosisError;
use medtriage_core::inference::TriageError;
use medtriage_core::temporal::StoreError;
use medtriage_core::tsql::{EvalError, ParseErrorKind, TsqlError};
use serde::Serialize;

/// Error body returned by every endpoint: `{"code", "message"}` plus the
/// source position for TSQL syntax and type errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, code, message: message.into(), line: None, column: None }
    }

    pub fn not_found(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, code, message)
    }

    pub fn unprocessable(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }

    pub fn bad_request(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    fn internal(code: &'static str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<DiagnosisError> for ApiError {
    fn from(e: DiagnosisError) -> Self {
        let msg = e.to_string();
        match e {
            DiagnosisError::SeverityOutOfRange { .. } => ApiError::unprocessable("invalid_severity", msg),
            DiagnosisError::EmptyVector => ApiError::unprocessable("empty_severities", msg),
            DiagnosisError::NoCandidates => ApiError::unprocessable("no_candidates", msg),
            DiagnosisError::DegenerateProfile(_) | DiagnosisError::InvalidConfig(_) => {
                ApiError::internal("diagnosis_failure", msg)
            }
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let msg = e.to_string();
        match e {
            StoreError::UnknownTable(_) => ApiError::not_found("unknown_table", msg),
            StoreError::TableExists(_)
            | StoreError::DuplicateKey(_)
            | StoreError::NoCurrentRecord(_)
            | StoreError::NotAfterStart { .. }
            | StoreError::OverlapsHistory { .. } => ApiError::new(StatusCode::CONFLICT, "temporal_conflict", msg),
            StoreError::InvalidSchema(_) | StoreError::SchemaMismatch(_) | StoreError::OpenStart => {
                ApiError::bad_request("invalid_record", msg)
            }
            StoreError::Journal(_) | StoreError::Replay(_) => ApiError::internal("store_failure", msg),
        }
    }
}

impl From<TriageError> for ApiError {
    fn from(e: TriageError) -> Self {
        let msg = e.to_string();
        match e {
            TriageError::WrongPhase { .. } => ApiError::new(StatusCode::CONFLICT, "wrong_phase", msg),
            TriageError::DuplicateAnswer(_) => ApiError::new(StatusCode::CONFLICT, "duplicate_answer", msg),
            TriageError::UnknownSubpart(_) => ApiError::not_found("unknown_subpart", msg),
            TriageError::UnknownSymptom(_) => ApiError::unprocessable("unknown_symptom", msg),
            TriageError::UnknownQuestion(_) => ApiError::unprocessable("unknown_question", msg),
            TriageError::NoCandidates => ApiError::unprocessable("no_candidates", msg),
            TriageError::Diagnosis(d) => d.into(),
            // persisting a decision is the engine's job; any store fault here is ours
            TriageError::Store(s) => ApiError::internal("store_failure", s.to_string()),
        }
    }
}

impl From<TsqlError> for ApiError {
    fn from(e: TsqlError) -> Self {
        match e {
            TsqlError::Parse(p) => {
                let code = match p.kind {
                    ParseErrorKind::Syntax { .. } => "syntax_error",
                    ParseErrorKind::Type(_) => "type_error",
                    ParseErrorKind::Literal(_) => "invalid_literal",
                };
                ApiError {
                    line: Some(p.line()),
                    column: Some(p.column()),
                    ..ApiError::bad_request(code, p.to_string())
                }
            }
            TsqlError::Eval(e) => e.into(),
        }
    }
}

impl From<EvalError> for ApiError {
    fn from(e: EvalError) -> Self {
        let msg = e.to_string();
        match e {
            EvalError::UnknownTable(_) => ApiError::not_found("unknown_table", msg),
            EvalError::UnknownColumn { .. } => ApiError::bad_request("unknown_column", msg),
            EvalError::TypeMismatch(_) => ApiError::bad_request("type_mismatch", msg),
            EvalError::Invalid(_) => ApiError::bad_request("invalid_statement", msg),
            EvalError::Store(s) => s.into(),
        }
    }
}
