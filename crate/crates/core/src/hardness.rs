//! Hardness ordering of trials, the axes of a C-P map.
//!
//! A positive trial is hard when it scores low; a negative trial is hard
//! when it scores high. Several reference systems can be combined into one
//! ordering by averaging their (optionally rank-normalized) scores.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rustc_hash::{FxBuildHasher, FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::score_io::ScoredTrials;
use crate::trial::TrialKey;

pub const POSITIVE_ORDER_FILE: &str = "positive_order.txt";
pub const NEGATIVE_ORDER_FILE: &str = "negative_order.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FusionMethod {
    /// Mean of per-system rank-normalized scores.
    #[default]
    RankMean,
    /// Mean of raw scores.
    RawMean,
}

impl FromStr for FusionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rank_mean" => Ok(FusionMethod::RankMean),
            "raw_mean" => Ok(FusionMethod::RawMean),
            other => Err(Error::Input(format!(
                "unknown fusion method '{other}' (expected rank_mean or raw_mean)"
            ))),
        }
    }
}

/// Hardest-first permutations of the positive and negative trial keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardnessOrder {
    positive_order: Vec<TrialKey>,
    negative_order: Vec<TrialKey>,
}

impl HardnessOrder {
    pub fn new(positive_order: Vec<TrialKey>, negative_order: Vec<TrialKey>) -> Result<Self> {
        let mut seen = FxHashSet::with_capacity_and_hasher(positive_order.len() + negative_order.len(), FxBuildHasher);
        for key in positive_order.iter().chain(&negative_order) {
            if !seen.insert(key) {
                return Err(Error::Input(format!("trial '{key}' appears twice in the ordering")));
            }
        }
        Ok(HardnessOrder {
            positive_order,
            negative_order,
        })
    }

    pub fn positive_order(&self) -> &[TrialKey] {
        &self.positive_order
    }

    pub fn negative_order(&self) -> &[TrialKey] {
        &self.negative_order
    }

    /// Ordering induced by a system's own scores.
    pub fn from_scores(scored: &ScoredTrials) -> Self {
        fuse_orderings(std::slice::from_ref(scored), FusionMethod::RawMean)
            .expect("a single system always agrees with itself")
    }
}

/// Replaces each value by `(average rank - 1) / (n - 1)`, tied values
/// sharing their average rank. A single value maps to 0.5.
pub fn rank_normalize(scores: &[f64]) -> Result<Vec<f64>> {
    if scores.is_empty() {
        return Err(Error::Input("cannot rank-normalize an empty sequence".into()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Input("cannot rank-normalize NaN".into()));
    }
    let n = scores.len();
    if n == 1 {
        return Ok(vec![0.5]);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut out = vec![0.0; n];
    let denom = (n - 1) as f64;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && scores[idx[end]] == scores[idx[start]] {
            end += 1;
        }
        // 1-based ranks start+1..=end; (avg - 1) = (start + end - 1) / 2
        let value = (start + end - 1) as f64 / 2.0 / denom;
        for &i in &idx[start..end] {
            out[i] = value;
        }
        start = end;
    }
    Ok(out)
}

/// One score row per system.
type ScoreRows = Vec<Vec<f64>>;

/// Per-system, per-class scores aligned to the key order of the first system.
fn aligned_scores(systems: &[ScoredTrials]) -> Result<(ScoreRows, ScoreRows)> {
    let first = &systems[0];
    let mut pos = vec![first.positive_scores()];
    let mut neg = vec![first.negative_scores()];
    for (s, system) in systems.iter().enumerate().skip(1) {
        pos.push(align_class(first.positives(), system.positives(), s, "positive")?);
        neg.push(align_class(first.negatives(), system.negatives(), s, "negative")?);
    }
    Ok((pos, neg))
}

fn align_class(
    reference: &[(TrialKey, f64)],
    other: &[(TrialKey, f64)],
    system: usize,
    class: &str,
) -> Result<Vec<f64>> {
    let lookup: FxHashMap<&TrialKey, f64> = other.iter().map(|(k, s)| (k, *s)).collect();
    let mut out = Vec::with_capacity(reference.len());
    for (key, _) in reference {
        match lookup.get(key) {
            Some(&s) => out.push(s),
            None => {
                return Err(Error::KeyMismatch(format!(
                    "system {} has no {class} trial '{key}' (present in system 1)",
                    system + 1
                )))
            }
        }
    }
    if other.len() != reference.len() {
        let known: FxHashSet<&TrialKey> = reference.iter().map(|(k, _)| k).collect();
        let extra = other
            .iter()
            .find(|(k, _)| !known.contains(k))
            .map(|(k, _)| k.to_string())
            .unwrap_or_default();
        return Err(Error::KeyMismatch(format!(
            "system {} has {class} trial '{extra}' not present in system 1",
            system + 1
        )));
    }
    Ok(out)
}

/// Orders trials hardest first using the mean score over `systems`.
///
/// All systems must score the same trial keys with the same labels. Ties
/// in the fused score are broken by ascending trial key.
pub fn fuse_orderings(systems: &[ScoredTrials], method: FusionMethod) -> Result<HardnessOrder> {
    if systems.is_empty() {
        return Err(Error::Input("at least one system is required".into()));
    }
    let (mut pos, mut neg) = aligned_scores(systems)?;
    if method == FusionMethod::RankMean {
        for (p, n) in pos.iter_mut().zip(neg.iter_mut()) {
            if p.is_empty() && n.is_empty() {
                continue;
            }
            let pooled: Vec<f64> = p.iter().chain(n.iter()).copied().collect();
            let ranks = rank_normalize(&pooled)?;
            let (rp, rn) = ranks.split_at(p.len());
            p.copy_from_slice(rp);
            n.copy_from_slice(rn);
        }
    }
    let fused_pos = column_means(&pos);
    let fused_neg = column_means(&neg);

    let first = &systems[0];
    let mut pos_idx: Vec<usize> = (0..fused_pos.len()).collect();
    pos_idx.sort_by(|&a, &b| {
        fused_pos[a]
            .total_cmp(&fused_pos[b])
            .then_with(|| first.positives()[a].0.cmp(&first.positives()[b].0))
    });
    let mut neg_idx: Vec<usize> = (0..fused_neg.len()).collect();
    neg_idx.sort_by(|&a, &b| {
        fused_neg[b]
            .total_cmp(&fused_neg[a])
            .then_with(|| first.negatives()[a].0.cmp(&first.negatives()[b].0))
    });
    Ok(HardnessOrder {
        positive_order: pos_idx.into_iter().map(|i| first.positives()[i].0.clone()).collect(),
        negative_order: neg_idx.into_iter().map(|i| first.negatives()[i].0.clone()).collect(),
    })
}

fn column_means(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len() as f64;
    (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect()
}

// ---------------------------------------------------------------------------
// Order files
// ---------------------------------------------------------------------------

/// One `<enroll> <test>` per line, hardest first.
pub fn write_order_list(keys: &[TrialKey]) -> String {
    let mut out = String::with_capacity(keys.len() * 24);
    for k in keys {
        let _ = writeln!(out, "{} {}", k.enroll, k.test);
    }
    out
}

pub fn parse_order_list(text: &str) -> Result<Vec<TrialKey>> {
    let mut keys = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [enroll, test] = fields[..] else {
            return Err(Error::parse(
                i + 1,
                format!("expected '<enroll> <test>', found {} field(s)", fields.len()),
            ));
        };
        keys.push(TrialKey::new(enroll, test));
    }
    Ok(keys)
}

pub fn write_order_dir(dir: impl AsRef<Path>, order: &HardnessOrder) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(POSITIVE_ORDER_FILE), write_order_list(order.positive_order()))?;
    std::fs::write(dir.join(NEGATIVE_ORDER_FILE), write_order_list(order.negative_order()))?;
    Ok(())
}

pub fn read_order_dir(dir: impl AsRef<Path>) -> Result<HardnessOrder> {
    let dir = dir.as_ref();
    let pos = parse_order_list(&std::fs::read_to_string(dir.join(POSITIVE_ORDER_FILE))?)?;
    let neg = parse_order_list(&std::fs::read_to_string(dir.join(NEGATIVE_ORDER_FILE))?)?;
    HardnessOrder::new(pos, neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(s: &str) -> TrialKey {
        TrialKey::new(s, "t")
    }

    fn system(pos: &[(&str, f64)], neg: &[(&str, f64)]) -> ScoredTrials {
        ScoredTrials::new(
            pos.iter().map(|(k, s)| (key(k), *s)).collect(),
            neg.iter().map(|(k, s)| (key(k), *s)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_normalize_examples() {
        assert_eq!(rank_normalize(&[3.0, 1.0, 2.0]).unwrap(), vec![1.0, 0.0, 0.5]);
        assert_eq!(rank_normalize(&[5.0, 5.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(rank_normalize(&[1.0, 2.0, 2.0, 4.0]).unwrap(), vec![0.0, 0.5, 0.5, 1.0]);
        assert_eq!(rank_normalize(&[7.0]).unwrap(), vec![0.5]);
        assert!(rank_normalize(&[]).is_err());
        assert!(rank_normalize(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn single_system_sort() {
        let s = system(&[("b", 0.9), ("a", 0.2)], &[("x", -1.0), ("y", 0.5)]);
        let order = fuse_orderings(&[s], FusionMethod::RankMean).unwrap();
        assert_eq!(order.positive_order(), &[key("a"), key("b")]);
        assert_eq!(order.negative_order(), &[key("y"), key("x")]);
    }

    #[test]
    fn raw_mean_by_hand() {
        let s1 = system(&[("a", 1.0), ("b", 3.0)], &[("n", 0.0)]);
        let s2 = system(&[("a", 5.0), ("b", 1.0)], &[("n", 0.0)]);
        let order = fuse_orderings(&[s1, s2], FusionMethod::RawMean).unwrap();
        assert_eq!(order.positive_order(), &[key("b"), key("a")]);
    }

    #[test]
    fn ties_break_by_key() {
        let s = system(&[("c", 1.0), ("a", 1.0), ("b", 1.0)], &[("z", 2.0), ("y", 2.0)]);
        let order = fuse_orderings(&[s], FusionMethod::RankMean).unwrap();
        assert_eq!(order.positive_order(), &[key("a"), key("b"), key("c")]);
        assert_eq!(order.negative_order(), &[key("y"), key("z")]);
    }

    #[test]
    fn rank_mean_ignores_monotone_rescaling() {
        let pos = [("a", 0.3), ("b", 1.7), ("c", -0.2), ("d", 0.9)];
        let neg = [("w", -1.5), ("x", 0.4), ("y", -0.1), ("z", 2.2)];
        let g = |s: f64| 1000.0 * s.powi(3) + s - 7.0;
        let base = system(&pos, &neg);
        let warped = system(&pos.map(|(k, s)| (k, g(s))), &neg.map(|(k, s)| (k, g(s))));
        let own = fuse_orderings(std::slice::from_ref(&base), FusionMethod::RankMean).unwrap();
        let fused = fuse_orderings(&[base, warped], FusionMethod::RankMean).unwrap();
        assert_eq!(fused, own);
    }

    #[test]
    fn mismatched_keys_are_named() {
        let s1 = system(&[("a", 1.0), ("b", 2.0)], &[("n", 0.0)]);
        let s2 = system(&[("a", 1.0), ("c", 2.0)], &[("n", 0.0)]);
        let err = fuse_orderings(&[s1.clone(), s2], FusionMethod::RankMean).unwrap_err();
        assert!(matches!(&err, Error::KeyMismatch(m) if m.contains("'b t'")), "{err}");

        let s3 = system(&[("a", 1.0), ("b", 2.0)], &[("n", 0.0), ("m", 1.0)]);
        let err = fuse_orderings(&[s1, s3], FusionMethod::RankMean).unwrap_err();
        assert!(matches!(&err, Error::KeyMismatch(m) if m.contains("'m t'")), "{err}");
        assert!(fuse_orderings(&[], FusionMethod::RankMean).is_err());
    }

    #[test]
    fn order_list_round_trip() {
        let keys = vec![TrialKey::new("e1", "t1"), TrialKey::new("e2", "t9")];
        let text = write_order_list(&keys);
        assert_eq!(text, "e1 t1\ne2 t9\n");
        assert_eq!(parse_order_list(&text).unwrap(), keys);
        assert!(matches!(
            parse_order_list("a b\nc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn order_must_not_repeat_keys() {
        assert!(HardnessOrder::new(vec![key("a")], vec![key("a")]).is_err());
    }
}
