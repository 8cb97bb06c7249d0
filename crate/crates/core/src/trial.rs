//! Trial domain types and cross-pairing trial generation.
//!
//! Full cross-pairing uses ordered pairs: for `N` speakers with `K`
//! utterances each it yields `N*K*(K-1)` target and `N*(N-1)*K^2`
//! non-target trials. Unbalanced inputs are accepted.

use std::collections::HashSet;
use std::fmt;

use rustc_hash::{FxBuildHasher, FxHashSet};

use crate::error::{Error, Result};

/// Identifies a trial by its enrollment and test sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrialKey {
    pub enroll: String,
    pub test: String,
}

impl TrialKey {
    pub fn new(enroll: impl Into<String>, test: impl Into<String>) -> Self {
        TrialKey {
            enroll: enroll.into(),
            test: test.into(),
        }
    }
}

impl fmt::Display for TrialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.enroll, self.test)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Target,
    Nontarget,
}

impl Label {
    /// Case-insensitive parse of `target` / `nontarget`.
    pub fn parse(token: &str) -> Option<Label> {
        if token.eq_ignore_ascii_case("target") {
            Some(Label::Target)
        } else if token.eq_ignore_ascii_case("nontarget") {
            Some(Label::Nontarget)
        } else {
            None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Target => "target",
            Label::Nontarget => "nontarget",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub speaker_id: String,
    pub utt_id: String,
}

impl Utterance {
    pub fn new(speaker_id: impl Into<String>, utt_id: impl Into<String>) -> Self {
        Utterance {
            speaker_id: speaker_id.into(),
            utt_id: utt_id.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub key: TrialKey,
    pub label: Label,
}

impl Trial {
    pub fn new(enroll: impl Into<String>, test: impl Into<String>, label: Label) -> Self {
        Trial {
            key: TrialKey::new(enroll, test),
            label,
        }
    }

    pub fn enroll_id(&self) -> &str {
        &self.key.enroll
    }

    pub fn test_id(&self) -> &str {
        &self.key.test
    }
}

/// An ordered list of trials with no repeated `(enroll, test)` pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TrialSet {
    trials: Vec<Trial>,
    num_target: usize,
}

impl TrialSet {
    pub fn new(trials: Vec<Trial>) -> Result<Self> {
        let mut seen = FxHashSet::with_capacity_and_hasher(trials.len(), FxBuildHasher);
        for t in &trials {
            if !seen.insert(&t.key) {
                return Err(Error::Input(format!("duplicate trial '{}'", t.key)));
            }
        }
        drop(seen);
        Ok(Self::from_unique(trials))
    }

    /// Caller guarantees the keys are distinct.
    pub(crate) fn from_unique(trials: Vec<Trial>) -> Self {
        let num_target = trials.iter().filter(|t| t.label == Label::Target).count();
        TrialSet { trials, num_target }
    }

    pub fn trials(&self) -> &[Trial] {
        &self.trials
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn num_target(&self) -> usize {
        self.num_target
    }

    pub fn num_nontarget(&self) -> usize {
        self.trials.len() - self.num_target
    }

    /// `(num_target, num_nontarget)`
    pub fn counts(&self) -> (usize, usize) {
        (self.num_target(), self.num_nontarget())
    }

    pub fn into_trials(self) -> Vec<Trial> {
        self.trials
    }
}

fn check_token(kind: &str, token: &str) -> Result<()> {
    if token.is_empty() {
        return Err(Error::Input(format!("empty {kind}")));
    }
    if token.chars().any(char::is_whitespace) {
        return Err(Error::Input(format!("{kind} '{token}' contains whitespace")));
    }
    Ok(())
}

fn check_utterances<'a>(utts: &'a [Utterance], seen: &mut HashSet<&'a str>) -> Result<()> {
    for u in utts {
        check_token("speaker id", &u.speaker_id)?;
        check_token("utterance id", &u.utt_id)?;
        if !seen.insert(u.utt_id.as_str()) {
            return Err(Error::Input(format!("duplicate utterance id '{}'", u.utt_id)));
        }
    }
    Ok(())
}

fn label_for(a: &Utterance, b: &Utterance) -> Label {
    if a.speaker_id == b.speaker_id {
        Label::Target
    } else {
        Label::Nontarget
    }
}

fn sorted_set(mut trials: Vec<Trial>) -> TrialSet {
    trials.sort_by(|a, b| a.key.cmp(&b.key));
    let num_target = trials.iter().filter(|t| t.label == Label::Target).count();
    TrialSet { trials, num_target }
}

/// Pairs every utterance with every other utterance (ordered, no
/// self-pairs). Output is sorted by `(enroll, test)`.
pub fn generate_full_cross_pairing(utts: &[Utterance]) -> Result<TrialSet> {
    check_utterances(utts, &mut HashSet::new())?;
    if utts.len() < 2 {
        return Err(Error::Input(format!(
            "full cross-pairing needs at least 2 utterances, got {}",
            utts.len()
        )));
    }
    let mut trials = Vec::with_capacity(utts.len() * (utts.len() - 1));
    for (i, enroll) in utts.iter().enumerate() {
        for (j, test) in utts.iter().enumerate() {
            if i != j {
                trials.push(Trial::new(&enroll.utt_id, &test.utt_id, label_for(enroll, test)));
            }
        }
    }
    Ok(sorted_set(trials))
}

/// Pairs each speaker's single enrollment utterance with every test
/// utterance. Output is sorted by `(enroll, test)`.
pub fn generate_enrollment_fixed(enrollments: &[Utterance], tests: &[Utterance]) -> Result<TrialSet> {
    if enrollments.is_empty() || tests.is_empty() {
        return Err(Error::Input(
            "enrollment-fixed pairing needs at least one enrollment and one test utterance".into(),
        ));
    }
    let mut ids = HashSet::new();
    check_utterances(enrollments, &mut ids)?;
    let enrolled_ids: HashSet<&str> = ids.clone();
    for t in tests {
        if enrolled_ids.contains(t.utt_id.as_str()) {
            return Err(Error::Input(format!(
                "utterance id '{}' appears in both enrollment and test sets",
                t.utt_id
            )));
        }
    }
    check_utterances(tests, &mut ids)?;

    let mut speakers = HashSet::new();
    for e in enrollments {
        if !speakers.insert(e.speaker_id.as_str()) {
            return Err(Error::Input(format!(
                "speaker '{}' has more than one enrollment",
                e.speaker_id
            )));
        }
    }

    let mut trials = Vec::with_capacity(enrollments.len() * tests.len());
    for e in enrollments {
        for t in tests {
            trials.push(Trial::new(&e.utt_id, &t.utt_id, label_for(e, t)));
        }
    }
    Ok(sorted_set(trials))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(n: usize, k: usize) -> Vec<Utterance> {
        (0..n)
            .flat_map(|s| (0..k).map(move |u| Utterance::new(format!("spk{s}"), format!("spk{s}_u{u}"))))
            .collect()
    }

    // Independent enumeration over index pairs, without the generator.
    fn enumerate_counts(utts: &[Utterance]) -> (usize, usize) {
        let mut counts = (0, 0);
        for a in 0..utts.len() {
            for b in 0..utts.len() {
                if a == b {
                    continue;
                }
                if utts[a].speaker_id == utts[b].speaker_id {
                    counts.0 += 1;
                } else {
                    counts.1 += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn full_three_speakers_two_utts() {
        let set = generate_full_cross_pairing(&balanced(3, 2)).unwrap();
        assert_eq!(set.counts(), (6, 24));
    }

    #[test]
    fn full_single_speaker() {
        let set = generate_full_cross_pairing(&balanced(1, 2)).unwrap();
        assert_eq!(set.counts(), (2, 0));
    }

    #[test]
    fn full_two_speakers_three_utts_matches_enumeration() {
        let utts = balanced(2, 3);
        assert_eq!(enumerate_counts(&utts), (12, 18));
        let set = generate_full_cross_pairing(&utts).unwrap();
        assert_eq!(set.counts(), (12, 18));
        assert_eq!(set.len(), 30);
    }

    #[test]
    fn count_law_small_grid() {
        for n in 1..=4 {
            for k in 1..=4 {
                if n * k < 2 {
                    continue;
                }
                let utts = balanced(n, k);
                let set = generate_full_cross_pairing(&utts).unwrap();
                assert_eq!(set.counts(), (n * k * (k - 1), n * (n - 1) * k * k));
                assert_eq!(set.counts(), enumerate_counts(&utts));
                assert!(set.trials().iter().all(|t| t.enroll_id() != t.test_id()));
            }
        }
    }

    #[test]
    fn full_output_is_sorted_and_deterministic() {
        let mut utts = balanced(3, 3);
        utts.reverse();
        let a = generate_full_cross_pairing(&utts).unwrap();
        let b = generate_full_cross_pairing(&utts).unwrap();
        assert_eq!(a, b);
        assert!(a.trials().windows(2).all(|w| w[0].key < w[1].key));
    }

    #[test]
    fn full_rejects_bad_input() {
        let dup = vec![Utterance::new("a", "u1"), Utterance::new("b", "u1")];
        assert!(matches!(generate_full_cross_pairing(&dup), Err(Error::Input(_))));
        let one = vec![Utterance::new("a", "u1")];
        assert!(matches!(generate_full_cross_pairing(&one), Err(Error::Input(_))));
        let empty_spk = vec![Utterance::new("", "u1"), Utterance::new("a", "u2")];
        assert!(generate_full_cross_pairing(&empty_spk).is_err());
    }

    #[test]
    fn enrollment_fixed_counts() {
        let enroll: Vec<_> = (0..3)
            .map(|s| Utterance::new(format!("s{s}"), format!("e{s}")))
            .collect();
        let tests: Vec<_> = (0..3)
            .flat_map(|s| (0..2).map(move |u| Utterance::new(format!("s{s}"), format!("t{s}_{u}"))))
            .collect();
        let set = generate_enrollment_fixed(&enroll, &tests).unwrap();
        assert_eq!(set.counts(), (6, 12));

        let one = [Utterance::new("s", "e")];
        let four: Vec<_> = (0..4).map(|u| Utterance::new("s", format!("t{u}"))).collect();
        assert_eq!(generate_enrollment_fixed(&one, &four).unwrap().counts(), (4, 0));
    }

    #[test]
    fn enrollment_fixed_exact_listing() {
        let enroll = [Utterance::new("A", "A_e"), Utterance::new("B", "B_e")];
        let tests = [
            Utterance::new("A", "A_t1"),
            Utterance::new("A", "A_t2"),
            Utterance::new("B", "B_t1"),
            Utterance::new("B", "B_t2"),
        ];
        let mut expected = Vec::new();
        for e in &enroll {
            for t in &tests {
                let label = if e.speaker_id == t.speaker_id {
                    Label::Target
                } else {
                    Label::Nontarget
                };
                expected.push(Trial::new(&e.utt_id, &t.utt_id, label));
            }
        }
        expected.sort_by(|a, b| a.key.cmp(&b.key));
        let set = generate_enrollment_fixed(&enroll, &tests).unwrap();
        assert_eq!(set.trials(), expected.as_slice());
        assert_eq!(set.counts(), (4, 4));
    }

    #[test]
    fn enrollment_fixed_rejects_bad_input() {
        let enroll = [Utterance::new("A", "e1"), Utterance::new("A", "e2")];
        let tests = [Utterance::new("A", "t1")];
        assert!(generate_enrollment_fixed(&enroll, &tests).is_err());

        let enroll = [Utterance::new("A", "x")];
        let tests = [Utterance::new("A", "x")];
        assert!(generate_enrollment_fixed(&enroll, &tests).is_err());
    }

    #[test]
    fn trial_set_rejects_duplicates() {
        let trials = vec![
            Trial::new("a", "b", Label::Target),
            Trial::new("a", "b", Label::Nontarget),
        ];
        assert!(TrialSet::new(trials).is_err());
    }

    #[test]
    fn label_parse_is_case_insensitive() {
        assert_eq!(Label::parse("TARGET"), Some(Label::Target));
        assert_eq!(Label::parse("NonTarget"), Some(Label::Nontarget));
        assert_eq!(Label::parse("impostor"), None);
    }
}
