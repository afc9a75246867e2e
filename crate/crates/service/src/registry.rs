use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use medtriage_core::inference::Session;
use medtriage_core::temporal::Clock;
use medtriage_core::Instant;
use rand::RngCore;

/// Random bytes behind each session token.
pub const TOKEN_BYTES: usize = 18;

/// Fresh URL-safe session token from the OS random source.
pub fn new_token() -> String {
    let mut bytes = [0u8; TOKEN_BYTES];
    rand::rngs::OsRng.fill_bytes(&mut bytes);
    URL_SAFE_NO_PAD.encode(bytes)
}

pub struct SessionSlot {
    pub patient_id: String,
    /// One mutating request at a time per session.
    pub session: tokio::sync::Mutex<Session>,
    last_seen: Mutex<Instant>,
}

/// In-memory sessions with idle expiry measured on the service clock.
pub struct SessionRegistry {
    slots: Mutex<HashMap<String, Arc<SessionSlot>>>,
    idle_secs: i64,
    clock: Arc<dyn Clock>,
}

impl SessionRegistry {
    pub fn new(idle_secs: i64, clock: Arc<dyn Clock>) -> Self {
        SessionRegistry { slots: Mutex::new(HashMap::new()), idle_secs, clock }
    }

    pub fn insert(&self, session: Session) -> Arc<SessionSlot> {
        let now = self.clock.now();
        let token = session.id.clone();
        let slot = Arc::new(SessionSlot {
            patient_id: session.patient_id.clone(),
            session: tokio::sync::Mutex::new(session),
            last_seen: Mutex::new(now),
        });
        let mut slots = self.slots.lock().unwrap();
        self.purge(&mut slots, now);
        slots.insert(token, slot.clone());
        slot
    }

    /// Looks a session up and refreshes its idle timer. Expired sessions are
    /// dropped and reported as missing.
    pub fn get(&self, token: &str) -> Option<Arc<SessionSlot>> {
        let now = self.clock.now();
        let mut slots = self.slots.lock().unwrap();
        let slot = slots.get(token)?.clone();
        let mut seen = slot.last_seen.lock().unwrap();
        if self.expired(*seen, now) {
            drop(seen);
            slots.remove(token);
            return None;
        }
        *seen = now;
        drop(seen);
        Some(slot)
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether any live session belongs to the patient.
    pub fn has_patient(&self, patient_id: &str) -> bool {
        let now = self.clock.now();
        let slots = self.slots.lock().unwrap();
        slots.values().any(|s| s.patient_id == patient_id && !self.expired(*s.last_seen.lock().unwrap(), now))
    }

    fn expired(&self, last_seen: Instant, now: Instant) -> bool {
        now.secs().saturating_sub(last_seen.secs()) > self.idle_secs
    }

    fn purge(&self, slots: &mut HashMap<String, Arc<SessionSlot>>, now: Instant) {
        slots.retain(|_, s| !self.expired(*s.last_seen.lock().unwrap(), now));
    }
}
