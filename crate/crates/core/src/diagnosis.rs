//! Fuzzy band-distance scoring of diseases against a patient's reported
//! symptom severities.
//!
//! Each profile symptom contributes a deviation: zero when the reported
//! severity falls inside the disease's band, otherwise the distance to the
//! nearest band bound. Deviations are aggregated with a weight-normalised
//! Minkowski mean of order `p`:
//!
//! ```text
//! D = ( Σ w_i · d_i^p / Σ w_i )^(1/p)
//! ```
//!
//! With `p = 2` and point bands (`lower == upper`) this is a weighted
//! Euclidean distance to the disease prototype.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::knowledge::{DiseaseDef, FuzzyBand, IcdCode};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosisError {
    #[error("severity for `{symptom}` is {value}, expected a value in [0, 1]")]
    SeverityOutOfRange { symptom: String, value: f64 },
    #[error("severity vector is empty")]
    EmptyVector,
    #[error("disease `{0}` has no positive weight in its profile")]
    DegenerateProfile(String),
    #[error("no candidate diseases to rank")]
    NoCandidates,
    #[error("invalid diagnosis config: {0}")]
    InvalidConfig(String),
}

/// Patient-reported symptom severities, each in `[0, 1]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeverityVector(BTreeMap<String, f64>);

impl SeverityVector {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self, DiagnosisError> {
        if entries.is_empty() {
            return Err(DiagnosisError::EmptyVector);
        }
        for (symptom, &value) in &entries {
            check_severity(symptom, value)?;
        }
        Ok(SeverityVector(entries))
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, DiagnosisError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self::new(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn get(&self, symptom: &str) -> Option<f64> {
        self.0.get(symptom).copied()
    }

    /// Sets a severity, replacing any previous value for the symptom.
    pub fn set(&mut self, symptom: impl Into<String>, value: f64) -> Result<(), DiagnosisError> {
        let symptom = symptom.into();
        check_severity(&symptom, value)?;
        self.0.insert(symptom, value);
        Ok(())
    }

    pub fn contains(&self, symptom: &str) -> bool {
        self.0.contains_key(symptom)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symptoms reported with a severity above zero.
    pub fn present(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter(|(_, &v)| v > 0.0).map(|(k, _)| k.as_str())
    }
}

fn check_severity(symptom: &str, value: f64) -> Result<(), DiagnosisError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(DiagnosisError::SeverityOutOfRange { symptom: symptom.to_owned(), value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisConfig {
    /// Minkowski order, at least 1.
    pub minkowski_order: f64,
    /// Distances above this are dropped by [`exclude_unlikely`].
    pub exclusion_threshold: f64,
    /// Severity assumed for profile symptoms the patient did not report.
    pub absent_severity: f64,
}

impl Default for DiagnosisConfig {
    fn default() -> Self {
        DiagnosisConfig { minkowski_order: 2.0, exclusion_threshold: 0.75, absent_severity: 0.0 }
    }
}

impl DiagnosisConfig {
    pub fn validate(&self) -> Result<(), DiagnosisError> {
        if !(self.minkowski_order >= 1.0 && self.minkowski_order.is_finite()) {
            return Err(DiagnosisError::InvalidConfig(format!(
                "minkowski order {} must be a finite value >= 1",
                self.minkowski_order
            )));
        }
        if !(0.0..=1.0).contains(&self.exclusion_threshold) {
            return Err(DiagnosisError::InvalidConfig(format!(
                "exclusion threshold {} outside [0, 1]",
                self.exclusion_threshold
            )));
        }
        if !(0.0..=1.0).contains(&self.absent_severity) {
            return Err(DiagnosisError::InvalidConfig(format!(
                "absent severity {} outside [0, 1]",
                self.absent_severity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosisResult {
    pub disease_id: String,
    pub icd: IcdCode,
    pub distance: f64,
    pub rank: usize,
}

/// Deviation of a severity from a band: zero inside, distance to the nearest
/// bound outside.
pub fn band_distance(severity: f64, band: &FuzzyBand) -> f64 {
    if severity < band.lower {
        band.lower - severity
    } else if severity > band.upper {
        severity - band.upper
    } else {
        0.0
    }
}

pub fn disease_distance(
    vector: &SeverityVector,
    disease: &DiseaseDef,
    config: &DiagnosisConfig,
) -> Result<f64, DiagnosisError> {
    let total_weight = disease.total_weight();
    if total_weight.is_nan() || total_weight <= 0.0 {
        return Err(DiagnosisError::DegenerateProfile(disease.id.clone()));
    }
    let p = config.minkowski_order;
    let weighted: f64 = disease
        .profile
        .iter()
        .map(|(symptom, band)| {
            let severity = vector.get(symptom).unwrap_or(config.absent_severity);
            band.weight * band_distance(severity, band).powf(p)
        })
        .sum();
    Ok((weighted / total_weight).powf(p.recip()))
}

fn by_distance_then_code(a: &DiagnosisResult, b: &DiagnosisResult) -> Ordering {
    a.distance.total_cmp(&b.distance).then_with(|| a.icd.cmp(&b.icd)).then_with(|| a.disease_id.cmp(&b.disease_id))
}

/// Scores and sorts candidates ascending by distance; ties fall back to ICD
/// code, then disease id. Ranks start at 1.
pub fn rank_diseases<'a, I>(
    vector: &SeverityVector,
    candidates: I,
    config: &DiagnosisConfig,
) -> Result<Vec<DiagnosisResult>, DiagnosisError>
where
    I: IntoIterator<Item = &'a DiseaseDef>,
{
    let mut results = candidates
        .into_iter()
        .map(|d| {
            Ok(DiagnosisResult {
                disease_id: d.id.clone(),
                icd: d.icd.clone(),
                distance: disease_distance(vector, d, config)?,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>, DiagnosisError>>()?;
    if results.is_empty() {
        return Err(DiagnosisError::NoCandidates);
    }
    results.sort_by(by_distance_then_code);
    rerank(&mut results);
    Ok(results)
}

fn rerank(results: &mut [DiagnosisResult]) {
    for (i, r) in results.iter_mut().enumerate() {
        r.rank = i + 1;
    }
}

/// Drops results farther than the exclusion threshold. The rank-1 entry is
/// always kept.
pub fn exclude_unlikely(results: Vec<DiagnosisResult>, config: &DiagnosisConfig) -> Vec<DiagnosisResult> {
    let mut kept: Vec<_> = results
        .into_iter()
        .enumerate()
        .filter(|(i, r)| *i == 0 || r.distance <= config.exclusion_threshold)
        .map(|(_, r)| r)
        .collect();
    rerank(&mut kept);
    kept
}
