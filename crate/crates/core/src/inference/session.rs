use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::candidates::{generate_candidates, rank_candidates, TOP_N};
use super::rules::{load_rules, RuleBase};
use crate::diagnosis::{DiagnosisConfig, DiagnosisError, DiagnosisResult};
use crate::knowledge::KnowledgePack;
use crate::temporal::{AttrType, Attribute, Clock, Instant, Payload, Schema, StoreError, TemporalStore, Value};
use crate::SeverityVector;

/// Table that receives final decisions, keyed by session id.
pub const DIAGNOSIS_TABLE: &str = "diagnosis";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Collecting,
    Questioning,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Question {
    pub id: String,
    pub symptom_id: String,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum NextQuestion {
    Ask(Question),
    Done,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Session {
    pub id: String,
    pub patient_id: String,
    pub subpart: Option<String>,
    pub reported: SeverityVector,
    /// Symptom ids asked about, in order.
    pub asked: Vec<String>,
    /// Answered question ids.
    pub answered: Vec<String>,
    /// Ranked, with unlikely diseases excluded. Sorted by distance.
    pub candidates: Vec<DiagnosisResult>,
    pub fired_rules: Vec<String>,
    pub phase: Phase,
    pub decision: Option<DiagnosisResult>,
    pub decided_at: Option<Instant>,
}

impl Session {
    pub fn top(&self) -> &[DiagnosisResult] {
        &self.candidates[..self.candidates.len().min(TOP_N)]
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TriageError {
    #[error("session is {actual:?}, expected {expected:?}")]
    WrongPhase { expected: Phase, actual: Phase },
    #[error("unknown subpart `{0}`")]
    UnknownSubpart(String),
    #[error("unknown symptom `{0}`")]
    UnknownSymptom(String),
    #[error("unknown question `{0}`")]
    UnknownQuestion(String),
    #[error("question `{0}` was already answered")]
    DuplicateAnswer(String),
    #[error("no condition in the pack matches the reported symptoms")]
    NoCandidates,
    #[error(transparent)]
    Diagnosis(#[from] DiagnosisError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct EngineConfig {
    pub diagnosis: DiagnosisConfig,
    /// Regroup overfull candidate lists with k-means before truncation.
    pub cluster_candidates: bool,
}

/// Drives triage sessions against one pack. Sessions are plain values the
/// caller owns; the engine itself is immutable and shareable.
pub struct TriageEngine {
    pack: Arc<KnowledgePack>,
    rules: RuleBase,
    config: EngineConfig,
    clock: Arc<dyn Clock>,
}

impl TriageEngine {
    pub fn new(pack: Arc<KnowledgePack>, config: EngineConfig, clock: Arc<dyn Clock>) -> Result<Self, TriageError> {
        config.diagnosis.validate()?;
        let rules = load_rules(&pack);
        Ok(TriageEngine { pack, rules, config, clock })
    }

    pub fn pack(&self) -> &KnowledgePack {
        &self.pack
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn start(&self, session_id: impl Into<String>, patient_id: impl Into<String>) -> Session {
        Session {
            id: session_id.into(),
            patient_id: patient_id.into(),
            subpart: None,
            reported: SeverityVector::default(),
            asked: Vec::new(),
            answered: Vec::new(),
            candidates: Vec::new(),
            fired_rules: Vec::new(),
            phase: Phase::Collecting,
            decision: None,
            decided_at: None,
        }
    }

    fn expect_phase(session: &Session, expected: Phase) -> Result<(), TriageError> {
        if session.phase == expected {
            Ok(())
        } else {
            Err(TriageError::WrongPhase { expected, actual: session.phase })
        }
    }

    pub fn select_subpart(&self, session: &mut Session, subpart: &str) -> Result<(), TriageError> {
        Self::expect_phase(session, Phase::Collecting)?;
        if self.pack.subpart(subpart).is_none() {
            return Err(TriageError::UnknownSubpart(subpart.to_owned()));
        }
        session.subpart = Some(subpart.to_owned());
        Ok(())
    }

    /// Merges reported severities, generates and scores candidates, and moves
    /// the session to questioning (or straight to final when nothing is left
    /// to ask).
    pub fn submit_symptoms(&self, session: &mut Session, severities: &SeverityVector) -> Result<(), TriageError> {
        Self::expect_phase(session, Phase::Collecting)?;
        if severities.is_empty() {
            return Err(DiagnosisError::EmptyVector.into());
        }
        if let Some((s, _)) = severities.iter().find(|(s, _)| self.pack.symptom(s).is_none()) {
            return Err(TriageError::UnknownSymptom(s.to_owned()));
        }
        let mut reported = session.reported.clone();
        for (s, v) in severities.iter() {
            reported.set(s, v)?;
        }
        let generated = generate_candidates(&reported, &self.rules, &self.pack, self.config.cluster_candidates);
        if generated.diseases.is_empty() {
            return Err(TriageError::NoCandidates);
        }
        let ranked = rank_candidates(&generated.diseases, &reported, &self.pack, &self.config.diagnosis)?;
        session.reported = reported;
        session.fired_rules = generated.fired;
        session.candidates = ranked;
        session.phase = Phase::Questioning;
        self.settle(session);
        Ok(())
    }

    /// The unasked symptom whose band weight varies most across the current
    /// candidates (a missing profile entry counts as weight 0).
    pub fn next_question(&self, session: &Session) -> Result<NextQuestion, TriageError> {
        match session.phase {
            Phase::Final => return Ok(NextQuestion::Done),
            Phase::Collecting => {
                return Err(TriageError::WrongPhase { expected: Phase::Questioning, actual: Phase::Collecting })
            }
            Phase::Questioning => {}
        }
        if session.candidates.len() <= 1 {
            return Ok(NextQuestion::Done);
        }
        let profiles: Vec<_> = session
            .candidates
            .iter()
            .map(|c| &self.pack.disease(&c.disease_id).expect("ranked from pack").profile)
            .collect();
        let mut spread: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for p in &profiles {
            for s in p.keys() {
                spread.entry(s.as_str()).or_insert((f64::INFINITY, f64::NEG_INFINITY));
            }
        }
        for (s, (lo, hi)) in spread.iter_mut() {
            for p in &profiles {
                let w = p.get(*s).map_or(0.0, |b| b.weight);
                *lo = lo.min(w);
                *hi = hi.max(w);
            }
        }
        let best = spread
            .into_iter()
            .filter(|(s, _)| !session.reported.contains(s) && !session.asked.iter().any(|a| a == s))
            .map(|(s, (lo, hi))| (s, hi - lo))
            .filter(|&(_, d)| d > 0.0)
            // BTreeMap order makes the first maximum the smallest id
            .fold(None::<(&str, f64)>, |acc, (s, d)| match acc {
                Some((_, best)) if best >= d => acc,
                _ => Some((s, d)),
            });
        Ok(match best {
            None => NextQuestion::Done,
            Some((symptom, _)) => NextQuestion::Ask(self.question(session, symptom)),
        })
    }

    fn question(&self, session: &Session, symptom: &str) -> Question {
        let name = self.pack.symptom(symptom).map_or(symptom, |s| s.name.as_str());
        Question {
            id: format!("q{}-{}", session.asked.len() + 1, symptom),
            symptom_id: symptom.to_owned(),
            prompt: format!("How severe is \"{name}\"? Answer 0 if absent, up to 1 if severe."),
        }
    }

    /// Records the answer to the pending question, re-scores the candidates
    /// and finalizes when no discriminating question remains.
    pub fn apply_answer(&self, session: &mut Session, question_id: &str, severity: f64) -> Result<(), TriageError> {
        Self::expect_phase(session, Phase::Questioning)?;
        if session.answered.iter().any(|q| q == question_id) {
            return Err(TriageError::DuplicateAnswer(question_id.to_owned()));
        }
        let NextQuestion::Ask(q) = self.next_question(session)? else {
            return Err(TriageError::UnknownQuestion(question_id.to_owned()));
        };
        if q.id != question_id {
            return Err(TriageError::UnknownQuestion(question_id.to_owned()));
        }
        let mut reported = session.reported.clone();
        reported.set(q.symptom_id.clone(), severity)?;
        let ids: Vec<String> = session.candidates.iter().map(|c| c.disease_id.clone()).collect();
        session.candidates = rank_candidates(&ids, &reported, &self.pack, &self.config.diagnosis)?;
        session.reported = reported;
        session.asked.push(q.symptom_id);
        session.answered.push(q.id);
        self.settle(session);
        Ok(())
    }

    fn settle(&self, session: &mut Session) {
        if matches!(self.next_question(session), Ok(NextQuestion::Done)) {
            session.phase = Phase::Final;
            session.decision = session.candidates.first().cloned();
            session.decided_at = Some(self.clock.now());
        }
    }

    /// Persists the final decision as a bitemporal record valid from the
    /// decision instant. Returns `false` when the session was already stored.
    pub fn decision_history(&self, session: &Session, store: &mut TemporalStore) -> Result<bool, TriageError> {
        Self::expect_phase(session, Phase::Final)?;
        let decision = session.decision.as_ref().expect("final sessions carry a decision");
        if !store.has_table(DIAGNOSIS_TABLE) {
            store.create_table(DIAGNOSIS_TABLE, diagnosis_schema())?;
        }
        if store.table(DIAGNOSIS_TABLE)?.versions().any(|v| v.key == session.id) {
            return Ok(false);
        }
        let name = self.pack.disease(&decision.disease_id).map_or("", |d| d.name.as_str());
        let payload: Payload = [
            ("patient_id", Value::Text(session.patient_id.clone())),
            ("disease_id", Value::Text(decision.disease_id.clone())),
            ("icd", Value::Text(decision.icd.to_string())),
            ("disease", Value::Text(name.to_owned())),
            ("distance", Value::Real(decision.distance)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        let at = session.decided_at.expect("set with the decision");
        store.insert(DIAGNOSIS_TABLE, &session.id, payload, at)?;
        Ok(true)
    }
}

pub fn diagnosis_schema() -> Schema {
    Schema::new(vec![
        Attribute::new("patient_id", AttrType::Text),
        Attribute::new("disease_id", AttrType::Text),
        Attribute::new("icd", AttrType::Text),
        Attribute::new("disease", AttrType::Text),
        Attribute::new("distance", AttrType::Real),
    ])
    .expect("static schema is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnosis::disease_distance;
    use crate::temporal::ManualClock;
    use crate::tsql::{run, QueryOutput};

    fn engine(clock: ManualClock) -> TriageEngine {
        TriageEngine::new(Arc::new(KnowledgePack::demo()), EngineConfig::default(), Arc::new(clock)).unwrap()
    }

    fn patient_x() -> SeverityVector {
        SeverityVector::from_pairs([
            ("strange_smell", 0.1),
            ("sneezing", 0.7),
            ("nasal_congestion", 0.4),
            ("runny_nose", 0.6),
        ])
        .unwrap()
    }

    #[test]
    fn worked_example_finalizes_on_common_cold() {
        let e = engine(ManualClock::new(Instant(1_000)));
        let mut s = e.start("s1", "p1");
        e.select_subpart(&mut s, "nose").unwrap();
        e.submit_symptoms(&mut s, &patient_x()).unwrap();
        // every nose profile symptom was reported, nothing left to ask
        assert_eq!(s.phase, Phase::Final);
        assert_eq!(e.next_question(&s).unwrap(), NextQuestion::Done);
        assert_eq!(s.decision.as_ref().unwrap().disease_id, "common_cold");
        assert_eq!(s.top().len(), 3);
    }

    #[test]
    fn ear_session_asks_and_converges() {
        let e = engine(ManualClock::new(Instant(1_000)));
        let mut s = e.start("s2", "p2");
        e.submit_symptoms(&mut s, &SeverityVector::from_pairs([("ear_pain", 0.7)]).unwrap()).unwrap();
        assert_eq!(s.phase, Phase::Questioning);
        let mut asked = 0;
        while let NextQuestion::Ask(q) = e.next_question(&s).unwrap() {
            assert!(!s.reported.contains(&q.symptom_id));
            e.apply_answer(&mut s, &q.id, 0.5).unwrap();
            assert!(matches!(
                e.apply_answer(&mut s, &q.id, 0.5),
                Err(TriageError::DuplicateAnswer(_) | TriageError::WrongPhase { .. })
            ));
            asked += 1;
        }
        assert_eq!(s.phase, Phase::Final);
        assert!(asked <= 4);
    }

    #[test]
    fn answer_inside_band_helps_that_disease() {
        let e = engine(ManualClock::new(Instant(0)));
        let pack = e.pack().clone();
        let mut s = e.start("s3", "p3");
        e.submit_symptoms(&mut s, &SeverityVector::from_pairs([("ear_pain", 0.7)]).unwrap()).unwrap();
        let NextQuestion::Ask(q) = e.next_question(&s).unwrap() else { panic!() };
        // A: a candidate whose band excludes the implicit absent severity 0,
        // so the answer carries new information; B: one whose band excludes
        // A's midpoint
        let defs: Vec<_> = s.candidates.iter().map(|c| pack.disease(&c.disease_id).unwrap().clone()).collect();
        let a = defs.iter().find(|d| d.profile.get(&q.symptom_id).is_some_and(|b| b.lower > 0.0)).unwrap();
        let inside = a.profile[&q.symptom_id].midpoint();
        let b = defs
            .iter()
            .find(|d| d.profile.get(&q.symptom_id).is_some_and(|b| inside < b.lower || inside > b.upper))
            .unwrap();
        let (a, b) = (a.clone(), b.clone());
        let cfg = DiagnosisConfig::default();
        let gap_before =
            disease_distance(&s.reported, &a, &cfg).unwrap() - disease_distance(&s.reported, &b, &cfg).unwrap();
        e.apply_answer(&mut s, &q.id, inside).unwrap();
        let gap_after =
            disease_distance(&s.reported, &a, &cfg).unwrap() - disease_distance(&s.reported, &b, &cfg).unwrap();
        assert!(gap_after < gap_before);
    }

    #[test]
    fn answer_errors() {
        let e = engine(ManualClock::new(Instant(0)));
        let mut s = e.start("s4", "p4");
        assert!(matches!(e.next_question(&s), Err(TriageError::WrongPhase { .. })));
        e.submit_symptoms(&mut s, &SeverityVector::from_pairs([("ear_pain", 0.7)]).unwrap()).unwrap();
        let NextQuestion::Ask(q) = e.next_question(&s).unwrap() else { panic!() };
        assert!(matches!(e.apply_answer(&mut s, &q.id, 1.5), Err(TriageError::Diagnosis(_))));
        assert!(matches!(e.apply_answer(&mut s, "q9-nope", 0.5), Err(TriageError::UnknownQuestion(_))));
        assert!(matches!(
            e.submit_symptoms(&mut s, &patient_x()),
            Err(TriageError::WrongPhase { expected: Phase::Collecting, .. })
        ));
        let mut t = e.start("s5", "p5");
        assert!(matches!(
            e.submit_symptoms(&mut t, &SeverityVector::from_pairs([("hiccups", 0.5)]).unwrap()),
            Err(TriageError::UnknownSymptom(_))
        ));
        assert!(matches!(e.select_subpart(&mut t, "elbow"), Err(TriageError::UnknownSubpart(_))));
    }

    #[test]
    fn decision_history_is_queryable_and_idempotent() {
        let clock = ManualClock::new(Instant::parse("2024-03-01T10:00:00Z").unwrap());
        let e = engine(clock.clone());
        let mut store = TemporalStore::in_memory(clock.clone());
        let mut s = e.start("s6", "p6");
        assert!(matches!(e.decision_history(&s, &mut store), Err(TriageError::WrongPhase { .. })));
        e.submit_symptoms(&mut s, &patient_x()).unwrap();
        assert!(e.decision_history(&s, &mut store).unwrap());
        assert!(!e.decision_history(&s, &mut store).unwrap());
        clock.advance(60);
        let since = Instant(clock.now().secs() - 3600);
        let q = format!("SELECT key, disease_id FROM diagnosis WHEN VALID OVERLAPS [{since}, FOREVER)");
        let QueryOutput::Rows(rs) = run(&q, &mut store).unwrap() else { panic!() };
        assert_eq!(rs.rows.len(), 1);
        assert_eq!(rs.rows[0].values, vec![Value::Text("s6".into()), Value::Text("common_cold".into())]);
    }
}
