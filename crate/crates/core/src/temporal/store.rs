use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::journal::{read_journal, JournalEntry, JournalError, JournalWriter};
use super::{Clock, Instant, Interval};

/// Column names every table exposes in addition to its schema.
pub const PSEUDO_COLUMNS: [&str; 4] = ["key", "valid_from", "valid_to", "recorded_at"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttrType {
    Int,
    Real,
    Text,
}

impl fmt::Display for AttrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttrType::Int => "int",
            AttrType::Real => "real",
            AttrType::Text => "text",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: AttrType,
}

impl Attribute {
    pub fn new(name: impl Into<String>, kind: AttrType) -> Self {
        Attribute { name: name.into(), kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Attribute>", into = "Vec<Attribute>")]
pub struct Schema(Vec<Attribute>);

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self, StoreError> {
        for (i, a) in attributes.iter().enumerate() {
            if !is_identifier(&a.name) {
                return Err(StoreError::InvalidSchema(format!("`{}` is not an identifier", a.name)));
            }
            if PSEUDO_COLUMNS.contains(&a.name.as_str()) || crate::tsql::is_keyword(&a.name) {
                return Err(StoreError::InvalidSchema(format!("`{}` is a reserved name", a.name)));
            }
            if attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(StoreError::InvalidSchema(format!("duplicate attribute `{}`", a.name)));
            }
        }
        Ok(Schema(attributes))
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<&Attribute> {
        self.0.iter().find(|a| a.name == name)
    }

    fn conform(&self, payload: Payload) -> Result<Payload, StoreError> {
        let mut out = Payload::new();
        for attr in &self.0 {
            let value = payload
                .get(&attr.name)
                .ok_or_else(|| StoreError::SchemaMismatch(format!("missing attribute `{}`", attr.name)))?;
            let value = match (attr.kind, value) {
                (AttrType::Int, Value::Int(i)) => Value::Int(*i),
                (AttrType::Real, Value::Int(i)) => Value::Real(*i as f64),
                (AttrType::Real, Value::Real(r)) if r.is_finite() => Value::Real(*r),
                (AttrType::Text, Value::Text(s)) => Value::Text(s.clone()),
                (kind, v) => {
                    return Err(StoreError::SchemaMismatch(format!(
                        "attribute `{}` expects {kind}, got {v}",
                        attr.name
                    )))
                }
            };
            out.insert(attr.name.clone(), value);
        }
        if let Some(extra) = payload.keys().find(|k| self.get(k).is_none()) {
            return Err(StoreError::SchemaMismatch(format!("unknown attribute `{extra}`")));
        }
        Ok(out)
    }
}

impl TryFrom<Vec<Attribute>> for Schema {
    type Error = StoreError;

    fn try_from(value: Vec<Attribute>) -> Result<Self, Self::Error> {
        Schema::new(value)
    }
}

impl From<Schema> for Vec<Attribute> {
    fn from(s: Schema) -> Self {
        s.0
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

pub type Payload = BTreeMap<String, Value>;

/// One version of an entity: payload, valid-time interval, and the
/// transaction time at which the store recorded it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Version {
    pub id: RecordId,
    pub key: String,
    pub payload: Payload,
    pub valid: Interval,
    pub tt: Instant,
    /// Set on the archived version closed by a delete; the key has no
    /// current record after it.
    pub tombstone: bool,
}

#[derive(Debug, Clone)]
pub struct EntityTable {
    name: String,
    schema: Schema,
    current: BTreeMap<String, Version>,
    history: Vec<Version>,
    // latest closed valid end per key
    closed_until: HashMap<String, Instant>,
}

impl EntityTable {
    fn new(name: String, schema: Schema) -> Self {
        EntityTable { name, schema, current: BTreeMap::new(), history: Vec::new(), closed_until: HashMap::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn current(&self) -> impl Iterator<Item = &Version> {
        self.current.values()
    }

    pub fn current_for(&self, key: &str) -> Option<&Version> {
        self.current.get(key)
    }

    /// Closed versions in the order they were archived.
    pub fn history(&self) -> &[Version] {
        &self.history
    }

    /// History followed by current versions.
    pub fn versions(&self) -> impl Iterator<Item = &Version> {
        self.history.iter().chain(self.current.values())
    }

    pub fn version_count(&self) -> usize {
        self.history.len() + self.current.len()
    }

    /// Versions whose valid interval contains `as_of`, ordered by key.
    pub fn snapshot(&self, as_of: Instant) -> Vec<&Version> {
        let mut rows: Vec<&Version> = self.versions().filter(|v| v.valid.contains(as_of)).collect();
        rows.sort_by(|a, b| a.key.cmp(&b.key));
        rows
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("table `{0}` already exists")]
    TableExists(String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("key `{0}` already has a current record")]
    DuplicateKey(String),
    #[error("key `{0}` has no current record")]
    NoCurrentRecord(String),
    #[error("instant {at} is not after the current version start {start} for key `{key}`")]
    NotAfterStart { key: String, start: Instant, at: Instant },
    #[error("valid start {start} for key `{key}` overlaps history ending {closed_until}")]
    OverlapsHistory { key: String, start: Instant, closed_until: Instant },
    #[error("valid start cannot be FOREVER")]
    OpenStart,
    #[error(transparent)]
    Journal(#[from] JournalError),
    #[error("journal replay: {0}")]
    Replay(String),
}

/// Bitemporal tables with an optional on-disk journal.
///
/// Writers need `&mut self`, so callers wrap the store in a lock to get the
/// single-writer / many-reader discipline.
pub struct TemporalStore {
    tables: BTreeMap<String, EntityTable>,
    clock: Arc<dyn Clock>,
    last_tt: Instant,
    next_id: u64,
    dir: Option<PathBuf>,
    journals: HashMap<String, JournalWriter>,
    sync: bool,
}

impl fmt::Debug for TemporalStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TemporalStore")
            .field("tables", &self.tables.keys().collect::<Vec<_>>())
            .field("dir", &self.dir)
            .field("last_tt", &self.last_tt)
            .finish()
    }
}

impl TemporalStore {
    pub fn in_memory(clock: impl Clock + 'static) -> Self {
        TemporalStore {
            tables: BTreeMap::new(),
            clock: Arc::new(clock),
            last_tt: Instant(i64::MIN),
            next_id: 1,
            dir: None,
            journals: HashMap::new(),
            sync: false,
        }
    }

    /// Opens (or initialises) a journal directory and replays every
    /// `*.journal` file in it.
    pub fn open(dir: impl AsRef<Path>, clock: impl Clock + 'static) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_owned();
        std::fs::create_dir_all(&dir).map_err(|source| JournalError::Io { path: dir.clone(), source })?;
        let mut store = TemporalStore::in_memory(clock);
        store.sync = true;

        let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|source| JournalError::Io { path: dir.clone(), source })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "journal"))
            .collect();
        paths.sort();
        for path in paths {
            store.replay(&path)?;
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            store.journals.insert(name, JournalWriter::open_append(&path, true)?);
        }
        store.dir = Some(dir);
        Ok(store)
    }

    fn replay(&mut self, path: &Path) -> Result<(), StoreError> {
        let bad = |msg: String| StoreError::Replay(format!("{}: {msg}", path.display()));
        let mut entries = read_journal(path)?.into_iter();
        let table = match entries.next() {
            Some(JournalEntry::CreateTable { name, schema }) => {
                self.tables.insert(name.clone(), EntityTable::new(name.clone(), schema));
                name
            }
            _ => return Err(bad("journal does not start with create_table".into())),
        };
        for entry in entries {
            match entry {
                JournalEntry::CreateTable { .. } => return Err(bad("repeated create_table".into())),
                JournalEntry::Insert { id, key, payload, valid_start, tt } => {
                    self.check_insert(&table, &key, valid_start).map_err(|e| bad(e.to_string()))?;
                    self.apply_insert(&table, id, key, payload, valid_start, tt);
                }
                JournalEntry::Update { id, key, payload, valid_from, tt } => {
                    self.check_close(&table, &key, valid_from).map_err(|e| bad(e.to_string()))?;
                    self.apply_update(&table, id, key, payload, valid_from, tt);
                }
                JournalEntry::Delete { key, at, tt } => {
                    self.check_close(&table, &key, at).map_err(|e| bad(e.to_string()))?;
                    self.apply_delete(&table, &key, at);
                    self.observe_tt(tt);
                }
            }
        }
        Ok(())
    }

    pub fn directory(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// The store clock, never earlier than the last stamped transaction time.
    pub fn now(&self) -> Instant {
        self.clock.now().max(self.last_tt)
    }

    fn stamp(&mut self) -> Instant {
        let t = self.now();
        self.last_tt = t;
        t
    }

    fn observe_tt(&mut self, tt: Instant) {
        self.last_tt = self.last_tt.max(tt);
    }

    fn journal(&mut self, table: &str, entry: &JournalEntry) -> Result<(), StoreError> {
        if let Some(w) = self.journals.get_mut(table) {
            w.append(entry)?;
        }
        Ok(())
    }

    pub fn table_names(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    pub fn has_table(&self, name: &str) -> bool {
        self.tables.contains_key(name)
    }

    pub fn table(&self, name: &str) -> Result<&EntityTable, StoreError> {
        self.tables.get(name).ok_or_else(|| StoreError::UnknownTable(name.to_owned()))
    }

    fn table_mut(&mut self, name: &str) -> &mut EntityTable {
        self.tables.get_mut(name).expect("checked before apply")
    }

    pub fn create_table(&mut self, name: &str, schema: Schema) -> Result<(), StoreError> {
        if !is_identifier(name) || crate::tsql::is_keyword(name) {
            return Err(StoreError::InvalidSchema(format!("`{name}` is not a valid table name")));
        }
        if self.tables.contains_key(name) {
            return Err(StoreError::TableExists(name.to_owned()));
        }
        if let Some(dir) = &self.dir {
            let path = dir.join(format!("{name}.journal"));
            let mut w = JournalWriter::create(&path, self.sync)?;
            w.append(&JournalEntry::CreateTable { name: name.to_owned(), schema: schema.clone() })?;
            self.journals.insert(name.to_owned(), w);
        }
        self.tables.insert(name.to_owned(), EntityTable::new(name.to_owned(), schema));
        Ok(())
    }

    fn check_insert(&self, table: &str, key: &str, valid_start: Instant) -> Result<(), StoreError> {
        let t = self.table(table)?;
        if valid_start.is_forever() {
            return Err(StoreError::OpenStart);
        }
        if t.current.contains_key(key) {
            return Err(StoreError::DuplicateKey(key.to_owned()));
        }
        if let Some(&closed_until) = t.closed_until.get(key) {
            if valid_start < closed_until {
                return Err(StoreError::OverlapsHistory { key: key.to_owned(), start: valid_start, closed_until });
            }
        }
        Ok(())
    }

    fn check_close(&self, table: &str, key: &str, at: Instant) -> Result<(), StoreError> {
        let t = self.table(table)?;
        let cur = t.current.get(key).ok_or_else(|| StoreError::NoCurrentRecord(key.to_owned()))?;
        if at <= cur.valid.start() || at.is_forever() {
            return Err(StoreError::NotAfterStart { key: key.to_owned(), start: cur.valid.start(), at });
        }
        Ok(())
    }

    pub fn insert(
        &mut self,
        table: &str,
        key: &str,
        payload: Payload,
        valid_start: Instant,
    ) -> Result<RecordId, StoreError> {
        self.check_insert(table, key, valid_start)?;
        let payload = self.table(table)?.schema.conform(payload)?;
        let id = RecordId(self.next_id);
        let tt = self.stamp();
        let entry = JournalEntry::Insert { id, key: key.to_owned(), payload, valid_start, tt };
        self.journal(table, &entry)?;
        let JournalEntry::Insert { key, payload, .. } = entry else { unreachable!() };
        self.apply_insert(table, id, key, payload, valid_start, tt);
        Ok(id)
    }

    fn apply_insert(&mut self, table: &str, id: RecordId, key: String, payload: Payload, start: Instant, tt: Instant) {
        self.next_id = self.next_id.max(id.0 + 1);
        self.observe_tt(tt);
        let version =
            Version { id, key: key.clone(), payload, valid: Interval::open_ended(start), tt, tombstone: false };
        self.table_mut(table).current.insert(key, version);
    }

    /// Closes the current version at `valid_from` and opens a new one.
    pub fn update(
        &mut self,
        table: &str,
        key: &str,
        payload: Payload,
        valid_from: Instant,
    ) -> Result<RecordId, StoreError> {
        self.check_close(table, key, valid_from)?;
        let payload = self.table(table)?.schema.conform(payload)?;
        let id = RecordId(self.next_id);
        let tt = self.stamp();
        let entry = JournalEntry::Update { id, key: key.to_owned(), payload, valid_from, tt };
        self.journal(table, &entry)?;
        let JournalEntry::Update { key, payload, .. } = entry else { unreachable!() };
        self.apply_update(table, id, key, payload, valid_from, tt);
        Ok(id)
    }

    fn apply_update(&mut self, table: &str, id: RecordId, key: String, payload: Payload, from: Instant, tt: Instant) {
        self.close_current(table, &key, from, false);
        self.apply_insert(table, id, key, payload, from, tt);
    }

    /// Closes the current version at `at` and archives it as a tombstone.
    pub fn delete(&mut self, table: &str, key: &str, at: Instant) -> Result<(), StoreError> {
        self.check_close(table, key, at)?;
        let tt = self.stamp();
        self.journal(table, &JournalEntry::Delete { key: key.to_owned(), at, tt })?;
        self.apply_delete(table, key, at);
        Ok(())
    }

    fn apply_delete(&mut self, table: &str, key: &str, at: Instant) {
        self.close_current(table, key, at, true);
    }

    fn close_current(&mut self, table: &str, key: &str, end: Instant, tombstone: bool) {
        let t = self.table_mut(table);
        let mut v = t.current.remove(key).expect("checked before apply");
        v.valid = Interval::new(v.valid.start(), end).expect("checked before apply");
        v.tombstone = tombstone;
        t.closed_until.insert(key.to_owned(), end);
        t.history.push(v);
    }

    pub fn snapshot(&self, table: &str, as_of: Instant) -> Result<Vec<&Version>, StoreError> {
        Ok(self.table(table)?.snapshot(as_of))
    }

    /// Hash of every table's schema and versions; equal stores hash equal.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for (name, t) in &self.tables {
            name.hash(&mut h);
            serde_json::to_string(&t.schema).unwrap().hash(&mut h);
            for v in t.versions() {
                serde_json::to_string(v).unwrap().hash(&mut h);
            }
        }
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::ManualClock;

    fn schema() -> Schema {
        Schema::new(vec![Attribute::new("name", AttrType::Text), Attribute::new("age", AttrType::Int)]).unwrap()
    }

    fn payload(name: &str, age: i64) -> Payload {
        [("name".to_owned(), Value::Text(name.into())), ("age".to_owned(), Value::Int(age))].into()
    }

    fn store() -> (TemporalStore, ManualClock) {
        let clock = ManualClock::new(Instant(1_000));
        let mut s = TemporalStore::in_memory(clock.clone());
        s.create_table("patient", schema()).unwrap();
        (s, clock)
    }

    #[test]
    fn insert_creates_open_current_row() {
        let (mut s, _) = store();
        s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
        let t = s.table("patient").unwrap();
        let v = t.current_for("p1").unwrap();
        assert_eq!(v.valid, Interval::open_ended(Instant(10)));
        assert_eq!(v.tt, Instant(1_000));
        assert!(t.history().is_empty());
    }

    #[test]
    fn duplicate_and_schema_errors() {
        let (mut s, _) = store();
        s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
        assert!(matches!(s.insert("patient", "p1", payload("Ann", 41), Instant(20)), Err(StoreError::DuplicateKey(_))));
        let mut short = payload("Bob", 3);
        short.remove("age");
        assert!(matches!(s.insert("patient", "p2", short, Instant(10)), Err(StoreError::SchemaMismatch(_))));
        let mut wrong = payload("Bob", 3);
        wrong.insert("age".into(), Value::Text("three".into()));
        assert!(matches!(s.insert("patient", "p2", wrong, Instant(10)), Err(StoreError::SchemaMismatch(_))));
        assert!(matches!(s.insert("nope", "p2", payload("x", 1), Instant(10)), Err(StoreError::UnknownTable(_))));
    }

    #[test]
    fn update_archives_previous_version() {
        let (mut s, _) = store();
        s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
        s.update("patient", "p1", payload("Ann", 41), Instant(20)).unwrap();
        let t = s.table("patient").unwrap();
        assert_eq!(t.history().len(), 1);
        assert_eq!(t.history()[0].valid, Interval::from_secs(10, 20).unwrap());
        assert_eq!(t.current_for("p1").unwrap().valid, Interval::open_ended(Instant(20)));
        assert!(matches!(
            s.update("patient", "p1", payload("Ann", 42), Instant(20)),
            Err(StoreError::NotAfterStart { .. })
        ));
    }

    #[test]
    fn sequential_updates_grow_history() {
        let (mut s, _) = store();
        s.insert("patient", "p1", payload("Ann", 0), Instant(0)).unwrap();
        for n in 1..=7 {
            s.update("patient", "p1", payload("Ann", n), Instant(n * 10)).unwrap();
        }
        let t = s.table("patient").unwrap();
        assert_eq!((t.history().len(), t.current().count()), (7, 1));
    }

    #[test]
    fn delete_then_reinsert_leaves_gap() {
        let (mut s, _) = store();
        s.insert("patient", "p1", payload("Ann", 40), Instant(0)).unwrap();
        s.delete("patient", "p1", Instant(20)).unwrap();
        assert!(matches!(s.delete("patient", "p1", Instant(30)), Err(StoreError::NoCurrentRecord(_))));
        assert!(matches!(
            s.insert("patient", "p1", payload("Ann", 41), Instant(15)),
            Err(StoreError::OverlapsHistory { .. })
        ));
        s.insert("patient", "p1", payload("Ann", 41), Instant(30)).unwrap();
        let t = s.table("patient").unwrap();
        assert!(t.history()[0].tombstone);
        assert_eq!(t.snapshot(Instant(10)).len(), 1);
        assert!(t.snapshot(Instant(25)).is_empty());
        assert_eq!(t.snapshot(Instant(30))[0].payload["age"], Value::Int(41));
    }

    #[test]
    fn snapshot_half_open_boundary() {
        let (mut s, _) = store();
        assert!(s.snapshot("patient", Instant(5)).unwrap().is_empty());
        s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
        s.update("patient", "p1", payload("Ann", 41), Instant(20)).unwrap();
        let at_end = s.snapshot("patient", Instant(20)).unwrap();
        assert_eq!(at_end.len(), 1);
        assert_eq!(at_end[0].payload["age"], Value::Int(41));
        assert_eq!(s.snapshot("patient", Instant(19)).unwrap()[0].payload["age"], Value::Int(40));
    }

    #[test]
    fn tt_is_monotone_even_if_clock_steps_back() {
        let (mut s, clock) = store();
        s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
        clock.set(Instant(500));
        s.insert("patient", "p2", payload("Bob", 4), Instant(10)).unwrap();
        let t = s.table("patient").unwrap();
        assert_eq!(t.current_for("p2").unwrap().tt, Instant(1_000));
    }

    #[test]
    fn int_widens_to_real() {
        let clock = ManualClock::new(Instant(0));
        let mut s = TemporalStore::in_memory(clock);
        s.create_table("v", Schema::new(vec![Attribute::new("x", AttrType::Real)]).unwrap()).unwrap();
        s.insert("v", "k", [("x".to_owned(), Value::Int(3))].into(), Instant(0)).unwrap();
        assert_eq!(s.table("v").unwrap().current_for("k").unwrap().payload["x"], Value::Real(3.0));
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(Schema::new(vec![Attribute::new("key", AttrType::Text)]).is_err());
        assert!(Schema::new(vec![Attribute::new("select", AttrType::Text)]).is_err());
        assert!(Schema::new(vec![Attribute::new("a b", AttrType::Text)]).is_err());
        assert!(Schema::new(vec![Attribute::new("a", AttrType::Text), Attribute::new("a", AttrType::Int)]).is_err());
    }

    #[test]
    fn journal_replay_restores_state() {
        let dir = tempfile::tempdir().unwrap();
        let clock = ManualClock::new(Instant(100));
        let before = {
            let mut s = TemporalStore::open(dir.path(), clock.clone()).unwrap();
            s.create_table("patient", schema()).unwrap();
            s.insert("patient", "p1", payload("Ann", 40), Instant(10)).unwrap();
            clock.advance(5);
            s.update("patient", "p1", payload("Ann", 41), Instant(20)).unwrap();
            s.insert("patient", "p2", payload("Bob", 7), Instant(15)).unwrap();
            s.delete("patient", "p2", Instant(40)).unwrap();
            s.fingerprint()
        };
        let mut reopened = TemporalStore::open(dir.path(), ManualClock::new(Instant(0))).unwrap();
        assert_eq!(reopened.fingerprint(), before);
        assert_eq!(reopened.now(), Instant(105));
        let id = reopened.insert("patient", "p3", payload("Cy", 1), Instant(0)).unwrap();
        assert_eq!(id, RecordId(4));
    }
}
