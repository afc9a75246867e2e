//! ICD-10 coded knowledge pack: body map, symptoms, diseases with their fuzzy
//! severity bands, and optional hand-authored rules.
//!
//! Packs are stored as a single JSON document with the top-level keys
//! `diseases`, `manifest`, `parts`, `rules` and `symptoms`. The canonical
//! serialization (see [`KnowledgePack::to_canonical_json`]) sorts every
//! object's keys lexicographically and pretty-prints with two-space indent.

mod icd;
pub mod layout;
mod skeleton;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use icd::{IcdCode, InvalidIcdCode};
pub use skeleton::full_skeleton;
pub use validate::{validate_pack, ValidationReport, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyPartName {
    Head,
    Neck,
    Chest,
    Abdomen,
    Pelvic,
    Leg,
    Arm,
    Back,
}

impl BodyPartName {
    pub const ALL: [BodyPartName; 8] = [
        BodyPartName::Head,
        BodyPartName::Neck,
        BodyPartName::Chest,
        BodyPartName::Abdomen,
        BodyPartName::Pelvic,
        BodyPartName::Leg,
        BodyPartName::Arm,
        BodyPartName::Back,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BodyPartName::Head => "head",
            BodyPartName::Neck => "neck",
            BodyPartName::Chest => "chest",
            BodyPartName::Abdomen => "abdomen",
            BodyPartName::Pelvic => "pelvic",
            BodyPartName::Leg => "leg",
            BodyPartName::Arm => "arm",
            BodyPartName::Back => "back",
        }
    }
}

impl fmt::Display for BodyPartName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BodyPartName {
    type Err = LookupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BodyPartName::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| LookupError::UnknownPart(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyPart {
    pub name: BodyPartName,
    pub subparts: Vec<SubpartDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubpartDef {
    pub id: String,
    pub name: String,
    pub symptom_ids: Vec<String>,
    pub disease_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymptomDef {
    pub id: String,
    pub icd: IcdCode,
    pub name: String,
    pub subpart_ids: Vec<String>,
}

/// Severity interval within which a symptom is fully consistent with a
/// disease, and the symptom's weight for that disease.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuzzyBand {
    pub lower: f64,
    pub upper: f64,
    pub weight: f64,
}

impl FuzzyBand {
    pub fn new(lower: f64, upper: f64, weight: f64) -> Self {
        FuzzyBand { lower, upper, weight }
    }

    pub fn is_well_formed(&self) -> bool {
        (0.0..=1.0).contains(&self.lower)
            && (0.0..=1.0).contains(&self.upper)
            && self.lower <= self.upper
            && (0.0..=1.0).contains(&self.weight)
    }

    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiseaseDef {
    pub id: String,
    pub icd: IcdCode,
    pub name: String,
    pub profile: BTreeMap<String, FuzzyBand>,
}

impl DiseaseDef {
    pub fn total_weight(&self) -> f64 {
        self.profile.values().map(|b| b.weight).sum()
    }
}

/// A hand-authored rule kept in the pack alongside the ones derived from
/// disease profiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDef {
    pub id: String,
    pub antecedent: Vec<String>,
    pub consequent: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PackProfile {
    Full,
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubpartCount {
    pub symptoms: usize,
    pub diseases: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackManifest {
    pub profile: PackProfile,
    pub declared_symptom_count: usize,
    pub declared_disease_count: usize,
    pub subpart_counts: BTreeMap<String, SubpartCount>,
}

/// The serialized shape of a pack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackDocument {
    pub manifest: PackManifest,
    pub parts: Vec<BodyPart>,
    pub symptoms: Vec<SymptomDef>,
    pub diseases: Vec<DiseaseDef>,
    #[serde(default)]
    pub rules: Vec<RuleDef>,
}

#[derive(Debug, thiserror::Error)]
pub enum PackError {
    #[error("cannot read pack {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed pack at line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    #[error("{message} at line {line}, column {column}")]
    InvalidIcd { line: usize, column: usize, message: String },
    #[error("{from} references unknown {kind} `{id}`")]
    Dangling { from: String, kind: &'static str, id: String },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LookupError {
    #[error("unknown body part `{0}`")]
    UnknownPart(String),
    #[error("unknown subpart `{0}`")]
    UnknownSubpart(String),
    #[error("unknown symptom `{0}`")]
    UnknownSymptom(String),
    #[error("unknown disease `{0}`")]
    UnknownDisease(String),
}

/// A loaded, cross-referenced pack. Immutable once built.
#[derive(Debug, Clone)]
pub struct KnowledgePack {
    doc: PackDocument,
    symptom_idx: HashMap<String, usize>,
    disease_idx: HashMap<String, usize>,
    subpart_idx: HashMap<String, (usize, usize)>,
    // symptom id -> disease indices, sorted by (icd, id)
    conditions: HashMap<String, Vec<usize>>,
}

pub fn load_pack(path: impl AsRef<Path>) -> Result<KnowledgePack, PackError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| PackError::Io { path: path.display().to_string(), source })?;
    KnowledgePack::from_json(&text)
}

impl KnowledgePack {
    pub fn from_json(text: &str) -> Result<Self, PackError> {
        let doc: PackDocument = serde_json::from_str(text).map_err(|e| {
            let (line, column) = (e.line(), e.column());
            let full = e.to_string();
            // serde_json appends " at line L column C"; keep only the message
            let message = match full.rfind(" at line ") {
                Some(i) => full[..i].to_owned(),
                None => full,
            };
            if message.starts_with("invalid ICD-10 code") {
                PackError::InvalidIcd { line, column, message }
            } else {
                PackError::Malformed { line, column, message }
            }
        })?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: PackDocument) -> Result<Self, PackError> {
        let mut symptom_idx = HashMap::new();
        for (i, s) in doc.symptoms.iter().enumerate() {
            if symptom_idx.insert(s.id.clone(), i).is_some() {
                return Err(PackError::DuplicateId { kind: "symptom", id: s.id.clone() });
            }
        }
        let mut disease_idx = HashMap::new();
        for (i, d) in doc.diseases.iter().enumerate() {
            if disease_idx.insert(d.id.clone(), i).is_some() {
                return Err(PackError::DuplicateId { kind: "disease", id: d.id.clone() });
            }
        }
        let mut subpart_idx = HashMap::new();
        for (pi, part) in doc.parts.iter().enumerate() {
            for (si, sub) in part.subparts.iter().enumerate() {
                if subpart_idx.insert(sub.id.clone(), (pi, si)).is_some() {
                    return Err(PackError::DuplicateId { kind: "subpart", id: sub.id.clone() });
                }
            }
        }

        let dangling =
            |from: String, kind: &'static str, id: &str| PackError::Dangling { from, kind, id: id.to_owned() };
        for part in &doc.parts {
            for sub in &part.subparts {
                for id in &sub.symptom_ids {
                    if !symptom_idx.contains_key(id) {
                        return Err(dangling(format!("subpart `{}`", sub.id), "symptom", id));
                    }
                }
                for id in &sub.disease_ids {
                    if !disease_idx.contains_key(id) {
                        return Err(dangling(format!("subpart `{}`", sub.id), "disease", id));
                    }
                }
            }
        }
        for s in &doc.symptoms {
            for id in &s.subpart_ids {
                if !subpart_idx.contains_key(id) {
                    return Err(dangling(format!("symptom `{}`", s.id), "subpart", id));
                }
            }
        }
        for d in &doc.diseases {
            for id in d.profile.keys() {
                if !symptom_idx.contains_key(id) {
                    return Err(dangling(format!("disease `{}`", d.id), "symptom", id));
                }
            }
        }
        for r in &doc.rules {
            if !disease_idx.contains_key(&r.consequent) {
                return Err(dangling(format!("rule `{}`", r.id), "disease", &r.consequent));
            }
            for id in &r.antecedent {
                if !symptom_idx.contains_key(id) {
                    return Err(dangling(format!("rule `{}`", r.id), "symptom", id));
                }
            }
        }
        for id in doc.manifest.subpart_counts.keys() {
            if !subpart_idx.contains_key(id) {
                return Err(dangling("manifest".to_owned(), "subpart", id));
            }
        }

        let mut conditions: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, d) in doc.diseases.iter().enumerate() {
            for sid in d.profile.keys() {
                conditions.entry(sid.clone()).or_default().push(i);
            }
        }
        for list in conditions.values_mut() {
            list.sort_by(|&a, &b| {
                let (da, db) = (&doc.diseases[a], &doc.diseases[b]);
                da.icd.cmp(&db.icd).then_with(|| da.id.cmp(&db.id))
            });
        }

        Ok(KnowledgePack { doc, symptom_idx, disease_idx, subpart_idx, conditions })
    }

    /// The calibrated demo pack bundled with the crate.
    pub fn demo() -> Self {
        Self::from_json(crate::DEMO_PACK_JSON).expect("bundled demo pack is valid")
    }

    pub fn document(&self) -> &PackDocument {
        &self.doc
    }

    pub fn manifest(&self) -> &PackManifest {
        &self.doc.manifest
    }

    pub fn parts(&self) -> &[BodyPart] {
        &self.doc.parts
    }

    pub fn symptoms(&self) -> &[SymptomDef] {
        &self.doc.symptoms
    }

    pub fn diseases(&self) -> &[DiseaseDef] {
        &self.doc.diseases
    }

    pub fn authored_rules(&self) -> &[RuleDef] {
        &self.doc.rules
    }

    pub fn symptom(&self, id: &str) -> Option<&SymptomDef> {
        self.symptom_idx.get(id).map(|&i| &self.doc.symptoms[i])
    }

    pub fn disease(&self, id: &str) -> Option<&DiseaseDef> {
        self.disease_idx.get(id).map(|&i| &self.doc.diseases[i])
    }

    pub fn subpart(&self, id: &str) -> Option<&SubpartDef> {
        self.subpart_idx.get(id).map(|&(p, s)| &self.doc.parts[p].subparts[s])
    }

    pub fn part_of(&self, subpart_id: &str) -> Option<BodyPartName> {
        self.subpart_idx.get(subpart_id).map(|&(p, _)| self.doc.parts[p].name)
    }

    /// Subparts of `part` in pack order. Empty when the pack omits the part.
    pub fn list_subparts(&self, part: &str) -> Result<Vec<&SubpartDef>, LookupError> {
        let name: BodyPartName = part.parse()?;
        Ok(self.doc.parts.iter().filter(|p| p.name == name).flat_map(|p| p.subparts.iter()).collect())
    }

    pub fn symptoms_for_subpart(&self, subpart_id: &str) -> Result<Vec<&SymptomDef>, LookupError> {
        let sub = self.subpart(subpart_id).ok_or_else(|| LookupError::UnknownSubpart(subpart_id.to_owned()))?;
        Ok(sub.symptom_ids.iter().map(|id| self.symptom(id).expect("resolved at load")).collect())
    }

    /// Every disease whose profile mentions the symptom, ordered by ICD code
    /// then id.
    pub fn conditions_for_symptom(&self, symptom_id: &str) -> Result<Vec<&DiseaseDef>, LookupError> {
        if !self.symptom_idx.contains_key(symptom_id) {
            return Err(LookupError::UnknownSymptom(symptom_id.to_owned()));
        }
        Ok(self
            .conditions
            .get(symptom_id)
            .map(|v| v.iter().map(|&i| &self.doc.diseases[i]).collect())
            .unwrap_or_default())
    }

    pub fn to_canonical_json(&self) -> String {
        save_document(&self.doc)
    }
}

/// Canonical serialization: keys sorted lexicographically, pretty-printed,
/// trailing newline.
pub fn save_document(doc: &PackDocument) -> String {
    // serde_json::Value keeps objects in a BTreeMap, which sorts the keys
    let value = serde_json::to_value(doc).expect("pack documents always serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

pub fn save_pack(pack: &KnowledgePack) -> String {
    pack.to_canonical_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_pack_is_canonical() {
        let pack = KnowledgePack::demo();
        assert_eq!(save_pack(&pack), crate::DEMO_PACK_JSON);
    }

    #[test]
    fn nose_symptoms_in_pack_order() {
        let pack = KnowledgePack::demo();
        let names: Vec<_> = pack.symptoms_for_subpart("nose").unwrap().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["Strange smell", "Sneezing", "Nasal congestion", "Runny nose"]);
    }

    #[test]
    fn sneezing_conditions() {
        let pack = KnowledgePack::demo();
        let mut ids: Vec<_> = pack.conditions_for_symptom("sneezing").unwrap().iter().map(|d| d.id.as_str()).collect();
        ids.sort();
        assert_eq!(ids, ["common_cold", "dust_exposure", "foreign_object_in_nose"]);
    }

    #[test]
    fn lookup_errors() {
        let pack = KnowledgePack::demo();
        assert_eq!(pack.list_subparts("torso").unwrap_err(), LookupError::UnknownPart("torso".into()));
        assert!(matches!(pack.symptoms_for_subpart("nowhere"), Err(LookupError::UnknownSubpart(_))));
        assert!(matches!(pack.conditions_for_symptom("sym_x"), Err(LookupError::UnknownSymptom(_))));
    }

    #[test]
    fn demo_omits_most_subparts() {
        let pack = KnowledgePack::demo();
        assert_eq!(pack.parts().len(), 8);
        assert!(pack.list_subparts("neck").unwrap().is_empty());
        let head: Vec<_> = pack.list_subparts("head").unwrap().iter().map(|s| s.id.as_str()).collect();
        assert_eq!(head, ["ears", "nose"]);
    }

    #[test]
    fn empty_file_is_malformed() {
        assert!(matches!(KnowledgePack::from_json(""), Err(PackError::Malformed { .. })));
    }

    #[test]
    fn bad_icd_is_reported_with_position() {
        let text = crate::DEMO_PACK_JSON.replacen("\"J00\"", "\"J0\"", 1);
        match KnowledgePack::from_json(&text) {
            Err(PackError::InvalidIcd { line, message, .. }) => {
                assert!(line > 1);
                assert!(message.contains("J0"));
            }
            other => panic!("expected InvalidIcd, got {other:?}"),
        }
    }

    #[test]
    fn dangling_profile_symptom() {
        let mut doc = KnowledgePack::demo().document().clone();
        doc.diseases[0].profile.insert("sym_x".into(), FuzzyBand::new(0.1, 0.2, 0.5));
        match KnowledgePack::from_document(doc) {
            Err(PackError::Dangling { kind, id, .. }) => {
                assert_eq!(kind, "symptom");
                assert_eq!(id, "sym_x");
            }
            other => panic!("expected Dangling, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_symptom_id() {
        let mut doc = KnowledgePack::demo().document().clone();
        let dup = doc.symptoms[0].clone();
        doc.symptoms.push(dup);
        assert!(matches!(KnowledgePack::from_document(doc), Err(PackError::DuplicateId { kind: "symptom", .. })));
    }
}
