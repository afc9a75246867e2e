use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Arc;

use super::Instant;

/// Source of transaction-time stamps.
pub trait Clock: Send + Sync {
    fn now(&self) -> Instant;
}

impl<C: Clock + ?Sized> Clock for Arc<C> {
    fn now(&self) -> Instant {
        (**self).now()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Instant {
        Instant(chrono::Utc::now().timestamp())
    }
}

/// A clock that only moves when told to. Clones share the same time.
#[derive(Debug, Clone, Default)]
pub struct ManualClock(Arc<AtomicI64>);

impl ManualClock {
    pub fn new(start: Instant) -> Self {
        ManualClock(Arc::new(AtomicI64::new(start.secs())))
    }

    pub fn set(&self, t: Instant) {
        self.0.store(t.secs(), Ordering::SeqCst);
    }

    pub fn advance(&self, secs: i64) -> Instant {
        Instant(self.0.fetch_add(secs, Ordering::SeqCst) + secs)
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Instant {
        Instant(self.0.load(Ordering::SeqCst))
    }
}
