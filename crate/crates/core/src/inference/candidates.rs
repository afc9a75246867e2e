use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::rules::{Rule, RuleBase};
use crate::analytics::kmeans;
use crate::diagnosis::{exclude_unlikely, rank_diseases, DiagnosisConfig, DiagnosisError, DiagnosisResult};
use crate::knowledge::KnowledgePack;
use crate::SeverityVector;

pub const MIN_CANDIDATES: usize = 5;
pub const MAX_CANDIDATES: usize = 10;
pub const TOP_N: usize = 3;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Candidates {
    /// Disease ids in selection order.
    pub diseases: Vec<String>,
    /// Ids of the rules that fired, in firing order.
    pub fired: Vec<String>,
}

/// Forward chaining over `rules`. Applicable rules (every antecedent symptom
/// present) go on an agenda ordered by specificity, most specific first, ties
/// by rule id; each fires once and adds its consequent. More than
/// [`MAX_CANDIDATES`] results keep the earliest fired. Fewer than
/// [`MIN_CANDIDATES`] are padded with the conditions of the most severe
/// reported symptoms.
///
/// With `cluster` set, an overfull candidate list is first regrouped by
/// k-means over profile midpoints so the cluster nearest the patient leads.
pub fn generate_candidates(
    reported: &SeverityVector,
    rules: &RuleBase,
    pack: &KnowledgePack,
    cluster: bool,
) -> Candidates {
    let present: HashSet<&str> = reported.present().collect();
    let mut seen = HashSet::new();
    let mut agenda: Vec<&Rule> = present
        .iter()
        .flat_map(|s| rules.rules_mentioning(s))
        .filter(|r| seen.insert(r.id.as_str()))
        .filter(|r| r.antecedent.iter().all(|s| present.contains(s.as_str())))
        .collect();
    agenda.sort_by(|a, b| b.specificity().cmp(&a.specificity()).then_with(|| a.id.cmp(&b.id)));

    let mut out = Candidates::default();
    for rule in agenda {
        out.fired.push(rule.id.clone());
        if pack.disease(&rule.consequent).is_some() && !out.diseases.contains(&rule.consequent) {
            out.diseases.push(rule.consequent.clone());
        }
    }

    if out.diseases.len() > MAX_CANDIDATES {
        if cluster {
            out.diseases = nearest_cluster_first(out.diseases, reported, pack);
        }
        out.diseases.truncate(MAX_CANDIDATES);
    }

    if out.diseases.len() < MIN_CANDIDATES {
        let mut by_severity: Vec<(&str, f64)> = reported.iter().filter(|&(_, v)| v > 0.0).collect();
        by_severity.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        'pad: for (symptom, _) in by_severity {
            for d in pack.conditions_for_symptom(symptom).unwrap_or_default() {
                if out.diseases.len() >= MIN_CANDIDATES {
                    break 'pad;
                }
                if !out.diseases.contains(&d.id) {
                    out.diseases.push(d.id.clone());
                }
            }
        }
    }
    out
}

fn nearest_cluster_first(diseases: Vec<String>, reported: &SeverityVector, pack: &KnowledgePack) -> Vec<String> {
    let axes: Vec<&str> = diseases
        .iter()
        .flat_map(|d| pack.disease(d).unwrap().profile.keys().map(String::as_str))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let points: Vec<Vec<f64>> = diseases
        .iter()
        .map(|d| {
            let profile = &pack.disease(d).unwrap().profile;
            axes.iter().map(|s| profile.get(*s).map_or(0.0, |b| b.midpoint())).collect()
        })
        .collect();
    let patient: Vec<f64> = axes.iter().map(|s| reported.get(s).unwrap_or(0.0)).collect();
    let k = TOP_N.min(points.len());
    let Ok(c) = kmeans(&points, k, 100) else { return diseases };
    let gap = |j: usize| -> f64 { c.centroids[j].iter().zip(&patient).map(|(a, b)| (a - b) * (a - b)).sum() };
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| gap(a).total_cmp(&gap(b)).then(a.cmp(&b)));
    let rank_of = |j: usize| order.iter().position(|&o| o == j).unwrap();
    let mut indexed: Vec<(usize, String)> = diseases.into_iter().enumerate().collect();
    indexed.sort_by_key(|(i, _)| (rank_of(c.assignment[*i]), *i));
    indexed.into_iter().map(|(_, d)| d).collect()
}

/// Ranks every candidate, drops the unlikely ones and keeps the top three.
pub fn score_and_rank(
    candidates: &[String],
    reported: &SeverityVector,
    pack: &KnowledgePack,
    config: &DiagnosisConfig,
) -> Result<Vec<DiagnosisResult>, DiagnosisError> {
    let mut ranked = rank_candidates(candidates, reported, pack, config)?;
    ranked.truncate(TOP_N);
    Ok(ranked)
}

/// [`score_and_rank`] without the final truncation.
pub fn rank_candidates(
    candidates: &[String],
    reported: &SeverityVector,
    pack: &KnowledgePack,
    config: &DiagnosisConfig,
) -> Result<Vec<DiagnosisResult>, DiagnosisError> {
    let defs = candidates.iter().filter_map(|id| pack.disease(id));
    Ok(exclude_unlikely(rank_diseases(reported, defs, config)?, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::load_rules;

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
    fn patient_x_candidates() {
        let pack = KnowledgePack::demo();
        let c = generate_candidates(&patient_x(), &load_rules(&pack), &pack, false);
        let set: BTreeSet<&str> = c.diseases.iter().map(String::as_str).collect();
        assert_eq!(set, BTreeSet::from(["common_cold", "dust_exposure", "foreign_object_in_nose"]));
        // most specific rules fire first
        assert_eq!(c.fired, ["dust_exposure", "foreign_object_in_nose", "common_cold"]);
    }

    #[test]
    fn worked_example_top_three() {
        let pack = KnowledgePack::demo();
        let c = generate_candidates(&patient_x(), &load_rules(&pack), &pack, false);
        let top = score_and_rank(&c.diseases, &patient_x(), &pack, &DiagnosisConfig::default()).unwrap();
        let got: Vec<(&str, f64)> = top.iter().map(|r| (r.disease_id.as_str(), r.distance)).collect();
        let want = [("common_cold", 0.19), ("dust_exposure", 0.39), ("foreign_object_in_nose", 0.54)];
        for ((g, d), (w, e)) in got.iter().zip(want) {
            assert_eq!(*g, w);
            assert!((d - e).abs() <= 0.005, "{g}: {d}");
        }
    }

    #[test]
    fn unknown_symptom_gives_nothing() {
        let pack = KnowledgePack::demo();
        let v = SeverityVector::from_pairs([("hiccups", 0.9)]).unwrap();
        assert!(generate_candidates(&v, &load_rules(&pack), &pack, false).diseases.is_empty());
    }

    #[test]
    fn padding_uses_most_severe_symptom_first() {
        let pack = KnowledgePack::demo();
        // ear pain alone fires no hallmark rule
        let v = SeverityVector::from_pairs([("ear_pain", 0.8), ("sneezing", 0.2)]).unwrap();
        let c = generate_candidates(&v, &load_rules(&pack), &pack, false);
        assert!(c.fired.is_empty());
        assert_eq!(c.diseases.len(), 5);
        let ear: Vec<String> = pack.conditions_for_symptom("ear_pain").unwrap().iter().map(|d| d.id.clone()).collect();
        assert_eq!(c.diseases[..3], ear[..]);
    }
}
