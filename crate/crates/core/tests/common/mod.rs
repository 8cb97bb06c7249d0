#![allow(dead_code)]

use std::collections::HashMap;

use cpmap_core::{HardnessOrder, ScoredTrials, TrialKey};
use cpmap_oracle::SplitMix64;

/// Random instance with coarse scores (ties likely) and an independent
/// random ordering.
pub fn instance(rng: &mut SplitMix64, max_pos: u64, max_neg: u64) -> (ScoredTrials, HardnessOrder) {
    let p = rng.range(1, max_pos + 1) as usize;
    let q = rng.range(1, max_neg + 1) as usize;
    let shift = rng.range(0, 5) as f64 / 2.0;
    let scored = ScoredTrials::from_class_scores(&rng.scores(p, shift), &rng.scores(q, 0.0)).unwrap();
    let order = HardnessOrder::new(shuffled(rng, scored.positives()), shuffled(rng, scored.negatives())).unwrap();
    (scored, order)
}

fn shuffled(rng: &mut SplitMix64, trials: &[(TrialKey, f64)]) -> Vec<TrialKey> {
    let mut keys: Vec<TrialKey> = trials.iter().map(|(k, _)| k.clone()).collect();
    for i in (1..keys.len()).rev() {
        let j = rng.range(0, i as u64 + 1) as usize;
        keys.swap(i, j);
    }
    keys
}

/// Looks up the scores of the first `n_pos` / `n_neg` keys of the ordering
/// one by one, without any of the library's prefix machinery.
pub fn materialize(scored: &ScoredTrials, order: &HardnessOrder, n_pos: usize, n_neg: usize) -> (Vec<f64>, Vec<f64>) {
    let lookup: HashMap<&TrialKey, f64> = scored
        .positives()
        .iter()
        .chain(scored.negatives())
        .map(|(k, s)| (k, *s))
        .collect();
    let pos = order.positive_order()[..n_pos].iter().map(|k| lookup[k]).collect();
    let neg = order.negative_order()[..n_neg].iter().map(|k| lookup[k]).collect();
    (pos, neg)
}

/// `ceil(i * n / m)` via floating point with an integer check, kept apart
/// from the library's integer formula.
pub fn prefix(i: usize, m: usize, n: usize) -> usize {
    let mut k = (i as f64 * n as f64 / m as f64).ceil() as usize;
    while k * m < i * n {
        k += 1;
    }
    while k > 0 && (k - 1) * m >= i * n {
        k -= 1;
    }
    k
}

pub fn map_scores(scored: &ScoredTrials, f: impl Fn(f64) -> f64) -> ScoredTrials {
    let pos = scored.positives().iter().map(|(k, s)| (k.clone(), f(*s))).collect();
    let neg = scored.negatives().iter().map(|(k, s)| (k.clone(), f(*s))).collect();
    ScoredTrials::new(pos, neg).unwrap()
}
