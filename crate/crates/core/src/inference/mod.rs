//! Forward-chaining rule engine and triage sessions.
//!
//! Rules are derived from the pack's disease profiles. A session collects
//! severities, fires the rules to pick 5 to 10 candidate diseases, scores them
//! with the band distance, and asks the most discriminating question until a
//! single decision stands.

mod candidates;
mod rules;
mod session;

pub use candidates::{
    generate_candidates, rank_candidates, score_and_rank, Candidates, MAX_CANDIDATES, MIN_CANDIDATES, TOP_N,
};
pub use rules::{load_rules, Rule, RuleBase, HALLMARK_WEIGHT};
pub use session::{
    diagnosis_schema, EngineConfig, NextQuestion, Phase, Question, Session, TriageEngine, TriageError, DIAGNOSIS_TABLE,
};
