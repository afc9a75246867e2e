use std::collections::BTreeMap;

use super::layout::{FULL_DISEASE_TOTAL, FULL_LAYOUT, FULL_SYMPTOM_TOTAL};
use super::*;

/// A structurally complete full-profile pack filled with placeholder
/// symptoms and diseases: every part and subpart of the reference layout,
/// the reference membership counts, and the reference distinct totals.
/// Useful as a template for authoring and for exercising validation.
pub fn full_skeleton() -> PackDocument {
    let mut symptoms: Vec<SymptomDef> = (0..FULL_SYMPTOM_TOTAL)
        .map(|i| SymptomDef {
            id: format!("sym_{i:03}"),
            icd: placeholder_icd('R', i),
            name: format!("Symptom {i}"),
            subpart_ids: Vec::new(),
        })
        .collect();
    let diseases: Vec<DiseaseDef> = (0..FULL_DISEASE_TOTAL)
        .map(|i| DiseaseDef {
            id: format!("dis_{i:04}"),
            icd: placeholder_icd('A', i),
            name: format!("Disease {i}"),
            profile: BTreeMap::from([(format!("sym_{:03}", i % FULL_SYMPTOM_TOTAL), FuzzyBand::new(0.25, 0.75, 1.0))]),
        })
        .collect();

    // Memberships are handed out in layout order, wrapping around the
    // distinct entities. No subpart is longer than the totals, so no
    // subpart lists an entity twice.
    let (mut next_symptom, mut next_disease) = (0, 0);
    let mut parts: Vec<BodyPart> =
        BodyPartName::ALL.iter().map(|&name| BodyPart { name, subparts: Vec::new() }).collect();
    let mut subpart_counts = BTreeMap::new();
    for row in FULL_LAYOUT.iter() {
        let symptom_ids: Vec<String> = (0..row.symptoms)
            .map(|_| {
                let i = next_symptom % FULL_SYMPTOM_TOTAL;
                next_symptom += 1;
                symptoms[i].subpart_ids.push(row.subpart_id.to_owned());
                symptoms[i].id.clone()
            })
            .collect();
        let disease_ids: Vec<String> = (0..row.diseases)
            .map(|_| {
                let i = next_disease % FULL_DISEASE_TOTAL;
                next_disease += 1;
                diseases[i].id.clone()
            })
            .collect();
        subpart_counts
            .insert(row.subpart_id.to_owned(), SubpartCount { symptoms: row.symptoms, diseases: row.diseases });
        let part = parts.iter_mut().find(|p| p.name == row.part).expect("all parts present");
        part.subparts.push(SubpartDef {
            id: row.subpart_id.to_owned(),
            name: row.name.to_owned(),
            symptom_ids,
            disease_ids,
        });
    }

    PackDocument {
        manifest: PackManifest {
            profile: PackProfile::Full,
            declared_symptom_count: FULL_SYMPTOM_TOTAL,
            declared_disease_count: FULL_DISEASE_TOTAL,
            subpart_counts,
        },
        parts,
        symptoms,
        diseases,
        rules: Vec::new(),
    }
}

fn placeholder_icd(letter: char, i: usize) -> IcdCode {
    IcdCode::parse(&format!("{letter}{:02}.{}", i % 100, i / 100)).expect("well-formed placeholder")
}
