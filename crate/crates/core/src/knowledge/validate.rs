use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::layout::{self, FULL_DISEASE_TOTAL, FULL_SYMPTOM_TOTAL};
use super::{BodyPartName, KnowledgePack, PackProfile};

/// One violated pack invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, msg: impl Into<String>) {
        self.violations.push(Violation(msg.into()));
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lists every violated invariant. Violations are report entries, never
/// errors; an empty report means the pack is valid.
pub fn validate_pack(pack: &KnowledgePack) -> ValidationReport {
    let mut report = ValidationReport::default();
    let doc = pack.document();

    let mut seen_parts = BTreeSet::new();
    for part in &doc.parts {
        if !seen_parts.insert(part.name) {
            report.push(format!("body part {} listed more than once", part.name));
        }
        for sub in &part.subparts {
            if sub.symptom_ids.is_empty() {
                report.push(format!("subpart {} has no symptoms", sub.id));
            }
            if sub.disease_ids.is_empty() {
                report.push(format!("subpart {} has no diseases", sub.id));
            }
            for sid in &sub.symptom_ids {
                let listed_back = pack.symptom(sid).is_some_and(|s| s.subpart_ids.iter().any(|x| x == &sub.id));
                if !listed_back {
                    report.push(format!("symptom {sid} is in subpart {} but does not list it", sub.id));
                }
            }
        }
    }

    for s in &doc.symptoms {
        if s.name.trim().is_empty() {
            report.push(format!("symptom {} has an empty name", s.id));
        }
        for sub_id in &s.subpart_ids {
            let listed = pack.subpart(sub_id).is_some_and(|sub| sub.symptom_ids.iter().any(|x| x == &s.id));
            if !listed {
                report.push(format!("symptom {} lists subpart {sub_id} which does not list it", s.id));
            }
        }
    }

    for d in &doc.diseases {
        if d.name.trim().is_empty() {
            report.push(format!("disease {} has an empty name", d.id));
        }
        if d.profile.is_empty() {
            report.push(format!("disease {} has an empty profile", d.id));
            continue;
        }
        for (sid, band) in &d.profile {
            if !(0.0..=1.0).contains(&band.lower) || !(0.0..=1.0).contains(&band.upper) {
                report.push(format!("band {}/{sid} bounds [{}, {}] outside [0, 1]", d.id, band.lower, band.upper));
            }
            if band.lower > band.upper {
                report.push(format!("band {}/{sid} has lower {} > upper {}", d.id, band.lower, band.upper));
            }
            if !(0.0..=1.0).contains(&band.weight) {
                report.push(format!("band {}/{sid} weight {} outside [0, 1]", d.id, band.weight));
            }
        }
        if !d.profile.values().any(|b| b.weight > 0.0) {
            report.push(format!("disease {} has no band with positive weight", d.id));
        }
    }

    for r in &doc.rules {
        if r.antecedent.is_empty() {
            report.push(format!("rule {} has an empty antecedent", r.id));
        }
    }

    check_counts(pack, &mut report);
    if doc.manifest.profile == PackProfile::Full {
        check_full_profile(pack, &mut report);
    }
    report
}

fn check_counts(pack: &KnowledgePack, report: &mut ValidationReport) {
    let doc = pack.document();
    let m = &doc.manifest;
    if m.declared_symptom_count != doc.symptoms.len() {
        report.push(format!("declared symptom count {} but pack has {}", m.declared_symptom_count, doc.symptoms.len()));
    }
    if m.declared_disease_count != doc.diseases.len() {
        report.push(format!("declared disease count {} but pack has {}", m.declared_disease_count, doc.diseases.len()));
    }
    let actual: BTreeMap<&str, (usize, usize)> = doc
        .parts
        .iter()
        .flat_map(|p| &p.subparts)
        .map(|s| (s.id.as_str(), (s.symptom_ids.len(), s.disease_ids.len())))
        .collect();
    for (id, &(symptoms, diseases)) in &actual {
        match m.subpart_counts.get(*id) {
            None => report.push(format!("manifest has no counts for subpart {id}")),
            Some(c) => {
                if c.symptoms != symptoms {
                    report.push(format!("subpart {id} declares {} symptoms but lists {symptoms}", c.symptoms));
                }
                if c.diseases != diseases {
                    report.push(format!("subpart {id} declares {} diseases but lists {diseases}", c.diseases));
                }
            }
        }
    }
}

fn check_full_profile(pack: &KnowledgePack, report: &mut ValidationReport) {
    let doc = pack.document();
    let m = &doc.manifest;
    if m.declared_symptom_count != FULL_SYMPTOM_TOTAL {
        report.push(format!("symptom total {} ≠ {FULL_SYMPTOM_TOTAL}", m.declared_symptom_count));
    }
    if m.declared_disease_count != FULL_DISEASE_TOTAL {
        report.push(format!("disease total {} ≠ {FULL_DISEASE_TOTAL}", m.declared_disease_count));
    }
    if doc.parts.len() != BodyPartName::ALL.len() {
        report.push(format!("full pack has {} body parts, expected 8", doc.parts.len()));
    }
    for part in BodyPartName::ALL {
        let present: Vec<&str> =
            pack.list_subparts(part.as_str()).unwrap_or_default().iter().map(|s| s.id.as_str()).collect();
        let expected: Vec<&str> = layout::layout_for(part).map(|r| r.subpart_id).collect();
        if present != expected {
            report.push(format!(
                "part {part} has subparts [{}], expected [{}]",
                present.join(", "),
                expected.join(", ")
            ));
        }
    }
    for row in layout::FULL_LAYOUT.iter() {
        let Some(sub) = pack.subpart(row.subpart_id) else { continue };
        if sub.symptom_ids.len() != row.symptoms {
            report.push(format!(
                "subpart {} lists {} symptoms ≠ {}",
                row.subpart_id,
                sub.symptom_ids.len(),
                row.symptoms
            ));
        }
        if sub.disease_ids.len() != row.diseases {
            report.push(format!(
                "subpart {} lists {} diseases ≠ {}",
                row.subpart_id,
                sub.disease_ids.len(),
                row.diseases
            ));
        }
    }
}
