//! Reference body map for full-profile packs: eight parts, thirty-five
//! subparts and the symptom/disease counts listed for each subpart.
//!
//! Row counts are subpart memberships. A symptom or disease may be listed
//! under several subparts, so the rows add up to more than the distinct
//! totals ([`FULL_SYMPTOM_TOTAL`], [`FULL_DISEASE_TOTAL`]).

use super::BodyPartName;

/// Distinct symptoms in a full pack.
pub const FULL_SYMPTOM_TOTAL: usize = 839;
/// Distinct diseases in a full pack.
pub const FULL_DISEASE_TOTAL: usize = 4210;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutRow {
    pub part: BodyPartName,
    pub subpart_id: &'static str,
    pub name: &'static str,
    pub symptoms: usize,
    pub diseases: usize,
}

const fn row(
    part: BodyPartName,
    subpart_id: &'static str,
    name: &'static str,
    symptoms: usize,
    diseases: usize,
) -> LayoutRow {
    LayoutRow { part, subpart_id, name, symptoms, diseases }
}

use BodyPartName::*;

// "Back" carries sole/calf/hamstring exactly as the reference table prints it.
pub const FULL_LAYOUT: [LayoutRow; 35] = [
    row(Head, "head", "Head", 84, 543),
    row(Head, "ears", "Ears", 16, 76),
    row(Head, "eyes", "Eyes", 75, 327),
    row(Head, "nose", "Nose", 20, 101),
    row(Head, "mouth", "Mouth", 66, 248),
    row(Head, "face", "Face", 21, 88),
    row(Neck, "neck", "Neck", 38, 221),
    row(Chest, "chest", "Chest", 34, 218),
    row(Chest, "side_of_chest", "Side of chest", 11, 46),
    row(Chest, "sternum", "Sternum", 16, 94),
    row(Abdomen, "upper_abdomen", "Upper abdomen", 22, 166),
    row(Abdomen, "lower_abdomen", "Lower abdomen", 27, 158),
    row(Pelvic, "inguinal", "Inguinal", 14, 56),
    row(Pelvic, "pelvis", "Pelvis", 23, 83),
    row(Pelvic, "genital", "Genital", 35, 160),
    row(Pelvic, "hip", "Hip", 20, 79),
    row(Arm, "fingers", "Fingers", 32, 149),
    row(Arm, "palm", "Palm", 23, 102),
    row(Arm, "wrist", "Wrist", 11, 66),
    row(Arm, "forearm", "Forearm", 16, 56),
    row(Arm, "elbow", "Elbow", 20, 89),
    row(Arm, "upper_arm", "Upper arm", 14, 59),
    row(Arm, "shoulder", "Shoulder", 13, 75),
    row(Leg, "foot", "Foot", 21, 94),
    row(Leg, "ankle", "Ankle", 13, 83),
    row(Leg, "shin", "Shin", 18, 69),
    row(Leg, "knee", "Knee", 19, 97),
    row(Leg, "thigh", "Thigh", 16, 69),
    row(Leg, "toe", "Toe", 18, 97),
    row(Back, "sole", "Sole", 18, 86),
    row(Back, "calf", "Calf", 17, 75),
    row(Back, "hamstring", "Hamstring", 19, 68),
    row(Back, "back", "Back", 16, 626),
    row(Back, "upper_spine", "Upper spine", 14, 64),
    row(Back, "lower_spine", "Lower spine", 18, 70),
];

pub fn layout_row(subpart_id: &str) -> Option<&'static LayoutRow> {
    FULL_LAYOUT.iter().find(|r| r.subpart_id == subpart_id)
}

pub fn layout_for(part: BodyPartName) -> impl Iterator<Item = &'static LayoutRow> {
    FULL_LAYOUT.iter().filter(move |r| r.part == part)
}
