//! Decision-support engine for first-level medical triage.
//!
//! The crate is organised around the pieces of the pipeline:
//!
//! * [`knowledge`] loads and validates an ICD-10 coded knowledge pack (body map,
//!   symptoms, diseases and their fuzzy severity bands).
//! * [`diagnosis`] scores diseases against a patient's severity vector with a
//!   weight-normalised Minkowski band distance.
//! * [`temporal`] is a bitemporal store with current and history tables and an
//!   append-only journal.
//! * [`tsql`] parses and evaluates the temporal query dialect (`WHEN` clauses,
//!   instant comparisons and Allen's interval relations).
//! * [`analytics`] holds least-squares trend fitting and k-means clustering.
//! * [`inference`] is the forward-chaining rule engine and triage session logic.

pub mod analytics;
pub mod diagnosis;
pub mod inference;
pub mod knowledge;
pub mod temporal;
pub mod tsql;

pub use diagnosis::{DiagnosisConfig, DiagnosisResult, SeverityVector};
pub use knowledge::{IcdCode, KnowledgePack};
pub use temporal::{Instant, Interval, TemporalStore};

/// The calibrated demo pack shipped with the crate (nose and ears subparts).
pub const DEMO_PACK_JSON: &str = include_str!("../data/demo_pack.json");
