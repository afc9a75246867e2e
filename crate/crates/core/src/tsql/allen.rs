use std::fmt;

use serde::{Deserialize, Serialize};

use crate::temporal::Interval;

/// Allen's thirteen interval relations, read as "a REL b".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AllenRelation {
    Before,
    After,
    Meets,
    MetBy,
    Overlaps,
    OverlappedBy,
    Starts,
    StartedBy,
    During,
    Contains,
    Finishes,
    FinishedBy,
    Equals,
}

impl AllenRelation {
    pub const ALL: [AllenRelation; 13] = [
        AllenRelation::Before,
        AllenRelation::After,
        AllenRelation::Meets,
        AllenRelation::MetBy,
        AllenRelation::Overlaps,
        AllenRelation::OverlappedBy,
        AllenRelation::Starts,
        AllenRelation::StartedBy,
        AllenRelation::During,
        AllenRelation::Contains,
        AllenRelation::Finishes,
        AllenRelation::FinishedBy,
        AllenRelation::Equals,
    ];

    pub fn inverse(self) -> AllenRelation {
        use AllenRelation::*;
        match self {
            Before => After,
            After => Before,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            Starts => StartedBy,
            StartedBy => Starts,
            During => Contains,
            Contains => During,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
        }
    }

    pub fn keyword(self) -> &'static str {
        use AllenRelation::*;
        match self {
            Before => "BEFORE",
            After => "AFTER",
            Meets => "MEETS",
            MetBy => "MET_BY",
            Overlaps => "OVERLAPS",
            OverlappedBy => "OVERLAPPED_BY",
            Starts => "STARTS",
            StartedBy => "STARTED_BY",
            During => "DURING",
            Contains => "CONTAINS",
            Finishes => "FINISHES",
            FinishedBy => "FINISHED_BY",
            Equals => "EQUALS",
        }
    }

    pub fn from_keyword(word: &str) -> Option<AllenRelation> {
        AllenRelation::ALL.into_iter().find(|r| r.keyword().eq_ignore_ascii_case(word))
    }

    /// Whether the relation holds for `(a, b)`.
    pub fn holds(self, a: &Interval, b: &Interval) -> bool {
        allen_relation(a, b) == self
    }
}

impl fmt::Display for AllenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The unique relation between two half-open intervals. A shared endpoint
/// (`a.end == b.start`) is `Meets`; a gap is `Before`.
pub fn allen_relation(a: &Interval, b: &Interval) -> AllenRelation {
    use std::cmp::Ordering::*;
    use AllenRelation::*;
    let (as_, ae, bs, be) = (a.start(), a.end(), b.start(), b.end());
    if ae < bs {
        return Before;
    }
    if ae == bs {
        return Meets;
    }
    if be < as_ {
        return After;
    }
    if be == as_ {
        return MetBy;
    }
    match (as_.cmp(&bs), ae.cmp(&be)) {
        (Equal, Equal) => Equals,
        (Equal, Less) => Starts,
        (Equal, Greater) => StartedBy,
        (Greater, Equal) => Finishes,
        (Less, Equal) => FinishedBy,
        (Greater, Less) => During,
        (Less, Greater) => Contains,
        (Less, Less) => Overlaps,
        (Greater, Greater) => OverlappedBy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> Interval {
        Interval::from_secs(a, b).unwrap()
    }

    #[test]
    fn named_examples() {
        assert_eq!(allen_relation(&iv(1, 3), &iv(3, 5)), AllenRelation::Meets);
        assert_eq!(allen_relation(&iv(1, 5), &iv(2, 3)), AllenRelation::Contains);
        assert_eq!(allen_relation(&iv(2, 4), &iv(2, 6)), AllenRelation::Starts);
    }

    #[test]
    fn one_witness_per_relation() {
        use AllenRelation::*;
        let cases = [
            (iv(1, 2), iv(3, 4), Before),
            (iv(3, 4), iv(1, 2), After),
            (iv(1, 3), iv(3, 4), Meets),
            (iv(3, 4), iv(1, 3), MetBy),
            (iv(1, 3), iv(2, 4), Overlaps),
            (iv(2, 4), iv(1, 3), OverlappedBy),
            (iv(1, 2), iv(1, 4), Starts),
            (iv(1, 4), iv(1, 2), StartedBy),
            (iv(2, 3), iv(1, 4), During),
            (iv(1, 4), iv(2, 3), Contains),
            (iv(2, 4), iv(1, 4), Finishes),
            (iv(1, 4), iv(2, 4), FinishedBy),
            (iv(1, 4), iv(1, 4), Equals),
        ];
        for (a, b, want) in cases {
            assert_eq!(allen_relation(&a, &b), want, "{a} {b}");
        }
    }

    #[test]
    fn keywords_round_trip() {
        for r in AllenRelation::ALL {
            assert_eq!(AllenRelation::from_keyword(&r.keyword().to_lowercase()), Some(r));
            assert_eq!(r.inverse().inverse(), r);
        }
    }
}
