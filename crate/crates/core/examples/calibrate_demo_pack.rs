//! Checks the demo pack's calibration against the Patient X targets.
//!
//! Band shapes are fixed; weights live on a 0.05 grid and must keep each
//! disease's hallmark pattern (weight >= 0.5 exactly for its hallmark
//! symptoms). For each nose disease this prints the shipped weights and
//! distance next to the best grid point, and exits non-zero if a shipped
//! distance misses its target by more than 0.005.
//!
//! cargo run -p medtriage-core --example calibrate_demo_pack

use std::process::ExitCode;

use medtriage_core::diagnosis::disease_distance;
use medtriage_core::inference::HALLMARK_WEIGHT;
use medtriage_core::knowledge::{DiseaseDef, FuzzyBand};
use medtriage_core::{DiagnosisConfig, KnowledgePack, SeverityVector};

const TARGETS: [(&str, f64); 3] = [("common_cold", 0.19), ("dust_exposure", 0.39), ("foreign_object_in_nose", 0.54)];
const TOLERANCE: f64 = 0.005;

fn grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

fn best_on_grid(d: &DiseaseDef, x: &SeverityVector, cfg: &DiagnosisConfig, target: f64) -> (Vec<f64>, f64) {
    let symptoms: Vec<&String> = d.profile.keys().collect();
    let hallmark: Vec<bool> = symptoms.iter().map(|s| d.profile[*s].weight >= HALLMARK_WEIGHT).collect();
    let g = grid();
    let mut best = (Vec::new(), f64::INFINITY);
    let mut idx = vec![0usize; symptoms.len()];
    loop {
        let weights: Vec<f64> = idx.iter().map(|&i| g[i]).collect();
        if weights.iter().zip(&hallmark).all(|(w, h)| (*w >= HALLMARK_WEIGHT) == *h) {
            let mut trial = d.clone();
            for (s, w) in symptoms.iter().zip(&weights) {
                let b = trial.profile[*s];
                trial.profile.insert((*s).clone(), FuzzyBand::new(b.lower, b.upper, *w));
            }
            let err = (disease_distance(x, &trial, cfg).unwrap() - target).abs();
            if err < best.1 {
                best = (weights, err);
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < g.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn main() -> ExitCode {
    let pack = KnowledgePack::demo();
    let cfg = DiagnosisConfig::default();
    let x = SeverityVector::from_pairs([
        ("strange_smell", 0.1),
        ("sneezing", 0.7),
        ("nasal_congestion", 0.4),
        ("runny_nose", 0.6),
    ])
    .unwrap();

    let mut ok = true;
    for (id, target) in TARGETS {
        let d = pack.disease(id).unwrap();
        let shipped: Vec<f64> = d.profile.values().map(|b| b.weight).collect();
        let dist = disease_distance(&x, d, &cfg).unwrap();
        let (best, err) = best_on_grid(d, &x, &cfg, target);
        let pass = (dist - target).abs() <= TOLERANCE;
        ok &= pass;
        println!("{id}");
        println!("  symptoms  {:?}", d.profile.keys().collect::<Vec<_>>());
        println!("  shipped   {shipped:?} -> {dist:.6} (target {target}, {})", if pass { "ok" } else { "MISS" });
        println!("  best grid {best:?} -> error {err:.6}");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
