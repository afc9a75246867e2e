use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::knowledge::KnowledgePack;

/// Band weight at or above which a profile symptom counts as a hallmark.
pub const HALLMARK_WEIGHT: f64 = 0.5;

/// "If every antecedent symptom is present, consider the consequent disease."
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: String,
    pub antecedent: BTreeSet<String>,
    pub consequent: String,
}

impl Rule {
    pub fn specificity(&self) -> usize {
        self.antecedent.len()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleBase {
    rules: Vec<Rule>,
    by_symptom: HashMap<String, Vec<usize>>,
    by_subpart: BTreeMap<String, Vec<usize>>,
}

impl RuleBase {
    /// Indexes `rules`. Subpart grouping needs the pack to know where each
    /// antecedent symptom lives.
    pub fn new(rules: Vec<Rule>, pack: &KnowledgePack) -> Self {
        let mut by_symptom: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_subpart: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, rule) in rules.iter().enumerate() {
            let mut subparts = BTreeSet::new();
            for s in &rule.antecedent {
                by_symptom.entry(s.clone()).or_default().push(i);
                if let Some(def) = pack.symptom(s) {
                    subparts.extend(def.subpart_ids.iter().cloned());
                }
            }
            for sp in subparts {
                by_subpart.entry(sp).or_default().push(i);
            }
        }
        RuleBase { rules, by_symptom, by_subpart }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules_mentioning(&self, symptom: &str) -> impl Iterator<Item = &Rule> {
        self.by_symptom.get(symptom).into_iter().flatten().map(|&i| &self.rules[i])
    }

    pub fn rules_for_subpart(&self, subpart: &str) -> impl Iterator<Item = &Rule> {
        self.by_subpart.get(subpart).into_iter().flatten().map(|&i| &self.rules[i])
    }

    /// Number of distinct consequent diseases per subpart rule group.
    pub fn consequent_counts(&self) -> BTreeMap<&str, usize> {
        self.by_subpart
            .iter()
            .map(|(sp, idx)| {
                let distinct: BTreeSet<&str> = idx.iter().map(|&i| self.rules[i].consequent.as_str()).collect();
                (sp.as_str(), distinct.len())
            })
            .collect()
    }

    /// Subpart groups whose consequent count falls outside `min..=max`.
    pub fn check_group_bounds(&self, min: usize, max: usize) -> Vec<String> {
        self.consequent_counts()
            .into_iter()
            .filter(|&(_, n)| n < min || n > max)
            .map(|(sp, n)| format!("rule group {sp} has {n} conditions, outside {min}..={max}"))
            .collect()
    }
}

/// Derives one rule per disease from its hallmark symptoms (band weight at
/// least [`HALLMARK_WEIGHT`]). A disease without a hallmark gets one
/// single-symptom rule per profile entry instead. Rules authored in the pack
/// are appended.
pub fn load_rules(pack: &KnowledgePack) -> RuleBase {
    let mut rules = Vec::new();
    for d in pack.diseases() {
        let hallmarks: BTreeSet<String> =
            d.profile.iter().filter(|(_, b)| b.weight >= HALLMARK_WEIGHT).map(|(s, _)| s.clone()).collect();
        if hallmarks.is_empty() {
            for s in d.profile.keys() {
                rules.push(Rule {
                    id: format!("{}/{}", d.id, s),
                    antecedent: BTreeSet::from([s.clone()]),
                    consequent: d.id.clone(),
                });
            }
        } else {
            rules.push(Rule { id: d.id.clone(), antecedent: hallmarks, consequent: d.id.clone() });
        }
    }
    for r in pack.authored_rules() {
        rules.push(Rule {
            id: r.id.clone(),
            antecedent: r.antecedent.iter().cloned().collect(),
            consequent: r.consequent.clone(),
        });
    }
    RuleBase::new(rules, pack)
}
