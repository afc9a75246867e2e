//! Bitemporal storage.
//!
//! Every entity table keeps a *current* table (at most one open version per
//! key) and a *history* table of closed versions. Versions carry a valid-time
//! interval `[start, end)` and the transaction-time instant at which the store
//! recorded them. Updates and deletes close the current version and archive
//! it; history is never rewritten.

mod clock;
mod journal;
mod store;

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

pub use clock::{Clock, ManualClock, SystemClock};
pub use journal::{JournalEntry, JournalError, JOURNAL_MAGIC};
pub use store::{
    AttrType, Attribute, EntityTable, Payload, RecordId, Schema, StoreError, TemporalStore, Value, Version,
    PSEUDO_COLUMNS,
};

/// Seconds since the Unix epoch, UTC. [`Instant::FOREVER`] is the +∞ sentinel
/// used for open-ended intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Instant(pub i64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid instant `{0}`: expected ISO-8601 UTC like 2020-01-01T00:00:00Z or FOREVER")]
pub struct InvalidInstant(pub String);

impl Instant {
    pub const FOREVER: Instant = Instant(i64::MAX);

    pub fn from_secs(secs: i64) -> Self {
        Instant(secs)
    }

    pub fn secs(self) -> i64 {
        self.0
    }

    pub fn is_forever(self) -> bool {
        self == Instant::FOREVER
    }

    pub fn parse(text: &str) -> Result<Self, InvalidInstant> {
        if text.eq_ignore_ascii_case("FOREVER") {
            return Ok(Instant::FOREVER);
        }
        NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%SZ")
            .map(|dt| Instant(dt.and_utc().timestamp()))
            .map_err(|_| InvalidInstant(text.to_owned()))
    }

    pub fn plus_secs(self, secs: i64) -> Instant {
        if self.is_forever() {
            self
        } else {
            Instant(self.0.saturating_add(secs))
        }
    }
}

impl fmt::Display for Instant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_forever() {
            return f.write_str("FOREVER");
        }
        match DateTime::<Utc>::from_timestamp(self.0, 0) {
            Some(dt) => write!(f, "{}", dt.format("%Y-%m-%dT%H:%M:%SZ")),
            None => write!(f, "@{}", self.0),
        }
    }
}

impl FromStr for Instant {
    type Err = InvalidInstant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Instant::parse(s)
    }
}

/// Half-open interval `[start, end)`; `end` may be [`Instant::FOREVER`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    start: Instant,
    end: Instant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("empty interval [{start}, {end}): start must precede end")]
pub struct EmptyInterval {
    pub start: Instant,
    pub end: Instant,
}

impl Interval {
    pub fn new(start: Instant, end: Instant) -> Result<Self, EmptyInterval> {
        if start < end {
            Ok(Interval { start, end })
        } else {
            Err(EmptyInterval { start, end })
        }
    }

    pub fn from_secs(start: i64, end: i64) -> Result<Self, EmptyInterval> {
        Interval::new(Instant(start), Instant(end))
    }

    pub fn open_ended(start: Instant) -> Self {
        Interval { start, end: Instant::FOREVER }
    }

    pub fn start(&self) -> Instant {
        self.start
    }

    pub fn end(&self) -> Instant {
        self.end
    }

    pub fn contains(&self, t: Instant) -> bool {
        self.start <= t && t < self.end
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}
