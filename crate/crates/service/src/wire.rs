//! Request and response bodies. Distances travel as strings with four
//! decimals so every client renders the same digits.

use std::collections::BTreeMap;

use medtriage_core::inference::{Phase, Session};
use medtriage_core::temporal::{Value, Version};
use medtriage_core::tsql::QueryOutput;
use medtriage_core::{DiagnosisResult, KnowledgePack};
use serde::{Deserialize, Serialize};

pub fn format_distance(d: f64) -> String {
    format!("{d:.4}")
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartRequest {
    pub patient_id: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymptomsRequest {
    pub subpart: Option<String>,
    pub severities: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnswerRequest {
    pub question_id: String,
    pub severity: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TsqlRequest {
    pub query: String,
}

#[derive(Debug, Deserialize)]
pub struct HistoryParams {
    pub as_of: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ResultItem {
    pub rank: usize,
    pub disease_id: String,
    pub disease: String,
    pub icd: String,
    pub distance: String,
}

impl ResultItem {
    pub fn new(r: &DiagnosisResult, pack: &KnowledgePack) -> Self {
        ResultItem {
            rank: r.rank,
            disease_id: r.disease_id.clone(),
            disease: pack.disease(&r.disease_id).map(|d| d.name.clone()).unwrap_or_default(),
            icd: r.icd.to_string(),
            distance: format_distance(r.distance),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub session_id: String,
    pub patient_id: String,
    pub phase: Phase,
    pub subpart: Option<String>,
    pub reported: BTreeMap<String, f64>,
    pub asked: Vec<String>,
    pub top: Vec<ResultItem>,
}

impl SessionView {
    pub fn new(s: &Session, pack: &KnowledgePack) -> Self {
        SessionView {
            session_id: s.id.clone(),
            patient_id: s.patient_id.clone(),
            phase: s.phase,
            subpart: s.subpart.clone(),
            reported: s.reported.iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            asked: s.asked.clone(),
            top: s.top().iter().map(|r| ResultItem::new(r, pack)).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PartItem {
    pub id: String,
    pub subpart_count: usize,
}

#[derive(Debug, Serialize)]
pub struct PartsView {
    pub parts: Vec<PartItem>,
}

#[derive(Debug, Serialize)]
pub struct SubpartItem {
    pub id: String,
    pub name: String,
    pub symptom_count: usize,
    pub disease_count: usize,
}

#[derive(Debug, Serialize)]
pub struct SubpartsView {
    pub part: String,
    pub subparts: Vec<SubpartItem>,
}

#[derive(Debug, Serialize)]
pub struct SymptomItem {
    pub id: String,
    pub name: String,
    pub icd: String,
}

#[derive(Debug, Serialize)]
pub struct SymptomsView {
    pub subpart: String,
    pub symptoms: Vec<SymptomItem>,
}

#[derive(Debug, Serialize)]
pub struct DiagnosisView {
    pub session_id: String,
    pub phase: Phase,
    pub results: Vec<ResultItem>,
    pub decision: Option<ResultItem>,
}

#[derive(Debug, Serialize)]
pub struct FinalizeView {
    pub session_id: String,
    /// False when the decision had already been stored.
    pub stored: bool,
    pub decision: ResultItem,
    pub decided_at: String,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum TsqlView {
    Rows { columns: Vec<String>, rows: Vec<Vec<Value>> },
    Affected { affected: usize },
}

impl From<QueryOutput> for TsqlView {
    fn from(out: QueryOutput) -> Self {
        match out {
            QueryOutput::Rows(rs) => {
                TsqlView::Rows { columns: rs.columns, rows: rs.rows.into_iter().map(|r| r.values).collect() }
            }
            QueryOutput::Affected(n) => TsqlView::Affected { affected: n },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct HistoryRecord {
    pub session_id: String,
    pub disease_id: String,
    pub disease: String,
    pub icd: String,
    pub distance: String,
    pub valid_from: String,
    pub valid_to: String,
    pub recorded_at: String,
}

impl HistoryRecord {
    pub fn new(v: &Version) -> Self {
        let text = |k: &str| match v.payload.get(k) {
            Some(Value::Text(s)) => s.clone(),
            Some(other) => other.to_string(),
            None => String::new(),
        };
        let distance = match v.payload.get("distance") {
            Some(Value::Real(d)) => format_distance(*d),
            _ => String::new(),
        };
        HistoryRecord {
            session_id: v.key.clone(),
            disease_id: text("disease_id"),
            disease: text("disease"),
            icd: text("icd"),
            distance,
            valid_from: v.valid.start().to_string(),
            valid_to: v.valid.end().to_string(),
            recorded_at: v.tt.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct HistoryView {
    pub patient_id: String,
    pub as_of: String,
    pub records: Vec<HistoryRecord>,
}
