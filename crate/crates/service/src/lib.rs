//! HTTP/JSON service for triage sessions, knowledge browsing, TSQL queries
//! and patient history.
//!
//! | Method | Path | |
//! |---|---|---|
//! | POST | `/sessions` | start a session (`{"patient_id"}` optional) |
//! | GET | `/sessions/{id}` | session state |
//! | POST | `/sessions/{id}/symptoms` | `{"subpart"?, "severities": {id: value}}` |
//! | GET | `/sessions/{id}/question` | next question or `{"status": "done"}` |
//! | POST | `/sessions/{id}/answers` | `{"question_id", "severity"}` |
//! | GET | `/sessions/{id}/diagnosis` | current top three |
//! | POST | `/sessions/{id}/finalize` | store the final decision |
//! | GET | `/body/parts` | body parts |
//! | GET | `/body/{part}/subparts` | subparts of a part |
//! | GET | `/subparts/{id}/symptoms` | symptoms of a subpart |
//! | POST | `/tsql` | `{"query"}` |
//! | GET | `/patients/{id}/history?as_of=` | stored decisions valid at an instant |
//!
//! JSON schemas for every response live in `schemas/`.

mod error;
mod registry;
mod routes;
pub mod wire;

use std::sync::Arc;

use medtriage_core::inference::{EngineConfig, TriageEngine, TriageError};
use medtriage_core::temporal::Clock;
use medtriage_core::{KnowledgePack, TemporalStore};
use tokio::net::TcpListener;
use tokio::sync::RwLock;

pub use error::ApiError;
pub use registry::{new_token, SessionRegistry, TOKEN_BYTES};
pub use routes::router;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServiceConfig {
    /// Sessions untouched for longer than this are dropped.
    pub idle_timeout_secs: i64,
    pub engine: EngineConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { idle_timeout_secs: 30 * 60, engine: EngineConfig::default() }
    }
}

pub struct AppState {
    engine: TriageEngine,
    store: RwLock<TemporalStore>,
    sessions: SessionRegistry,
    clock: Arc<dyn Clock>,
}

impl AppState {
    /// `clock` stamps decisions and drives session expiry; give the store the
    /// same clock so transaction times line up.
    pub fn new(
        pack: Arc<KnowledgePack>,
        store: TemporalStore,
        clock: Arc<dyn Clock>,
        config: ServiceConfig,
    ) -> Result<Arc<Self>, TriageError> {
        Ok(Arc::new(AppState {
            engine: TriageEngine::new(pack, config.engine, clock.clone())?,
            store: RwLock::new(store),
            sessions: SessionRegistry::new(config.idle_timeout_secs, clock.clone()),
            clock,
        }))
    }

    pub fn engine(&self) -> &TriageEngine {
        &self.engine
    }

    pub fn store(&self) -> &RwLock<TemporalStore> {
        &self.store
    }

    pub fn sessions(&self) -> &SessionRegistry {
        &self.sessions
    }
}

/// Serves the API until the listener fails.
pub async fn serve(listener: TcpListener, state: Arc<AppState>) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}
