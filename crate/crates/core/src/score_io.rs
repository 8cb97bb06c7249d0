//! Trial-key and score files, and joining them into per-class score lists.
//!
//! Both files are ASCII-whitespace-delimited, three columns per line:
//!
//! ```text
//! # trials                    # scores
//! spk1_u1 spk1_u2 target      spk1_u1 spk1_u2 2.75
//! spk1_u1 spk2_u1 nontarget   spk1_u1 spk2_u1 -1.5e-1
//! ```
//!
//! Blank lines and lines starting with `#` are skipped; CRLF is accepted.

use std::fmt::Write as _;
use std::path::Path;

use indexmap::map::Entry;
use indexmap::{Equivalent, IndexMap};
use rustc_hash::{FxBuildHasher, FxHashSet};

use crate::error::{Error, Result};
use crate::trial::{Label, Trial, TrialKey, TrialSet};

/// Maximum number of keys quoted in a missing-score error.
pub const MISSING_KEYS_REPORTED: usize = 10;

/// Scores keyed by trial, in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    entries: IndexMap<TrialKey, f64, FxBuildHasher>,
}

impl ScoreTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a score, rejecting non-finite values and repeated keys.
    pub fn insert(&mut self, key: TrialKey, score: f64) -> Result<()> {
        if !score.is_finite() {
            return Err(Error::Input(format!("non-finite score {score} for '{key}'")));
        }
        match self.entries.entry(key) {
            Entry::Occupied(e) => Err(Error::Input(format!("duplicate score for '{}'", e.key()))),
            Entry::Vacant(e) => {
                e.insert(score);
                Ok(())
            }
        }
    }

    pub fn get(&self, key: &TrialKey) -> Option<f64> {
        self.entries.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TrialKey, f64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }
}

/// One system's scores split by class.
///
/// Keys are unique across both lists and every score is finite. Either list
/// may be empty here; metric computations reject empty classes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoredTrials {
    positives: Vec<(TrialKey, f64)>,
    negatives: Vec<(TrialKey, f64)>,
}

impl ScoredTrials {
    pub fn new(positives: Vec<(TrialKey, f64)>, negatives: Vec<(TrialKey, f64)>) -> Result<Self> {
        let mut seen = FxHashSet::with_capacity_and_hasher(positives.len() + negatives.len(), FxBuildHasher);
        for (key, score) in positives.iter().chain(&negatives) {
            if !score.is_finite() {
                return Err(Error::Input(format!("non-finite score {score} for '{key}'")));
            }
            if !seen.insert(key) {
                return Err(Error::Input(format!("trial '{key}' appears more than once")));
            }
        }
        Ok(ScoredTrials { positives, negatives })
    }

    /// Wraps bare class scores with synthetic keys `pos_<i>` / `neg_<i>`.
    pub fn from_class_scores(positives: &[f64], negatives: &[f64]) -> Result<Self> {
        let pos = positives
            .iter()
            .enumerate()
            .map(|(i, &s)| (TrialKey::new(format!("pos_{i}"), format!("pos_{i}_test")), s))
            .collect();
        let neg = negatives
            .iter()
            .enumerate()
            .map(|(i, &s)| (TrialKey::new(format!("neg_{i}"), format!("neg_{i}_test")), s))
            .collect();
        Self::new(pos, neg)
    }

    pub fn positives(&self) -> &[(TrialKey, f64)] {
        &self.positives
    }

    pub fn negatives(&self) -> &[(TrialKey, f64)] {
        &self.negatives
    }

    pub fn positive_scores(&self) -> Vec<f64> {
        self.positives.iter().map(|(_, s)| *s).collect()
    }

    pub fn negative_scores(&self) -> Vec<f64> {
        self.negatives.iter().map(|(_, s)| *s).collect()
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Trials (target first, then non-target) and their score table.
    pub fn split(&self) -> (TrialSet, ScoreTable) {
        let mut trials = Vec::with_capacity(self.len());
        let mut table = ScoreTable::new();
        for (label, list) in [(Label::Target, &self.positives), (Label::Nontarget, &self.negatives)] {
            for (key, score) in list {
                trials.push(Trial {
                    key: key.clone(),
                    label,
                });
                table.entries.insert(key.clone(), *score);
            }
        }
        let trials = TrialSet::from_unique(trials);
        (trials, table)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Yields `(1-based line number, fields)` for every content line. Lines
/// with other than three fields yield `Err(field count)`.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, std::result::Result<[&str; 3], usize>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_ascii();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let mut it = line.split_ascii_whitespace();
        let fields = match (it.next(), it.next(), it.next(), it.next()) {
            (Some(a), Some(b), Some(c), None) => Ok([a, b, c]),
            _ => Err(line.split_ascii_whitespace().count()),
        };
        Some((i + 1, fields))
    })
}

/// Upper bound on the number of content lines, for preallocation.
fn line_capacity(text: &str) -> usize {
    text.bytes().filter(|&b| b == b'\n').count() + 1
}

pub fn parse_trials(text: &str) -> Result<TrialSet> {
    let mut trials = Vec::with_capacity(line_capacity(text));
    let mut lines = Vec::with_capacity(trials.capacity());
    for (line, fields) in content_lines(text) {
        let [enroll, test, label] = fields
            .map_err(|n| Error::parse(line, format!("expected '<enroll> <test> <label>', found {n} field(s)")))?;
        let label = Label::parse(label).ok_or_else(|| Error::parse(line, format!("unknown label '{label}'")))?;
        trials.push(Trial::new(enroll, test, label));
        lines.push(line);
    }
    let mut seen = FxHashSet::with_capacity_and_hasher(trials.len(), FxBuildHasher);
    for (t, &line) in trials.iter().zip(&lines) {
        if !seen.insert(&t.key) {
            return Err(Error::parse(line, format!("duplicate trial '{}'", t.key)));
        }
    }
    drop(seen);
    Ok(TrialSet::from_unique(trials))
}

/// Trial key borrowed from file text. Hashes and compares like [`TrialKey`]
/// so owned keys can look it up without allocating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct KeyRef<'a> {
    enroll: &'a str,
    test: &'a str,
}

impl Equivalent<KeyRef<'_>> for TrialKey {
    fn equivalent(&self, key: &KeyRef<'_>) -> bool {
        self.enroll == key.enroll && self.test == key.test
    }
}

type ScoreRefs<'a> = IndexMap<KeyRef<'a>, f64, FxBuildHasher>;

/// Score lines in file order, not yet checked for repeated keys.
struct ScoreLines<'a> {
    keys: Vec<KeyRef<'a>>,
    scores: Vec<f64>,
    lines: Vec<usize>,
}

fn parse_score_lines(text: &str) -> Result<ScoreLines<'_>> {
    let cap = line_capacity(text);
    let mut out = ScoreLines {
        keys: Vec::with_capacity(cap),
        scores: Vec::with_capacity(cap),
        lines: Vec::with_capacity(cap),
    };
    for (line, fields) in content_lines(text) {
        let [enroll, test, score] = fields
            .map_err(|n| Error::parse(line, format!("expected '<enroll> <test> <score>', found {n} field(s)")))?;
        let value: f64 = score
            .parse()
            .map_err(|_| Error::parse(line, format!("cannot parse score '{score}'")))?;
        if !value.is_finite() {
            return Err(Error::parse(line, format!("non-finite score '{score}'")));
        }
        out.keys.push(KeyRef { enroll, test });
        out.scores.push(value);
        out.lines.push(line);
    }
    Ok(out)
}

impl<'a> ScoreLines<'a> {
    fn into_map(self) -> Result<ScoreRefs<'a>> {
        let mut map = ScoreRefs::with_capacity_and_hasher(self.keys.len(), FxBuildHasher);
        for ((key, score), line) in self.keys.into_iter().zip(self.scores).zip(self.lines) {
            if map.insert(key, score).is_some() {
                return Err(Error::parse(
                    line,
                    format!("duplicate score for '{} {}'", key.enroll, key.test),
                ));
            }
        }
        Ok(map)
    }

    /// Scores in trial order when the file lists exactly the trials, in
    /// the same order. Keys are then unique because trial keys are.
    fn aligned_with(&self, trials: &TrialSet) -> Option<&[f64]> {
        let aligned =
            self.keys.len() == trials.len() && trials.trials().iter().zip(&self.keys).all(|(t, k)| t.key.equivalent(k));
        aligned.then_some(&self.scores[..])
    }
}

fn parse_score_refs(text: &str) -> Result<ScoreRefs<'_>> {
    parse_score_lines(text)?.into_map()
}

pub fn parse_scores(text: &str) -> Result<ScoreTable> {
    let refs = parse_score_refs(text)?;
    let mut entries = IndexMap::with_capacity_and_hasher(refs.len(), FxBuildHasher);
    for (key, score) in refs {
        entries.insert(TrialKey::new(key.enroll, key.test), score);
    }
    Ok(ScoreTable { entries })
}

pub fn read_trials_file(path: impl AsRef<Path>) -> Result<TrialSet> {
    parse_trials(&std::fs::read_to_string(path)?)
}

pub fn read_scores_file(path: impl AsRef<Path>) -> Result<ScoreTable> {
    parse_scores(&std::fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

/// Canonical trials text: single spaces, lowercase labels, LF endings.
pub fn write_trials(trials: &TrialSet) -> String {
    let mut out = String::with_capacity(trials.len() * 32);
    for t in trials.trials() {
        let _ = writeln!(out, "{} {} {}", t.key.enroll, t.key.test, t.label);
    }
    out
}

/// Canonical scores text; scores use the shortest representation that
/// parses back to the same double.
pub fn write_scores(scores: &ScoreTable) -> String {
    let mut out = String::with_capacity(scores.len() * 32);
    for (key, score) in scores.iter() {
        let _ = writeln!(out, "{} {} {}", key.enroll, key.test, score);
    }
    out
}

// ---------------------------------------------------------------------------
// Join
// ---------------------------------------------------------------------------

/// Attaches scores to trials, preserving trial order within each class.
/// Scores for keys absent from `trials` are ignored.
pub fn join(trials: &TrialSet, scores: &ScoreTable) -> Result<ScoredTrials> {
    let (n_pos, n_neg) = trials.counts();
    join_with(trials.trials().iter().cloned(), n_pos, n_neg, |k| scores.get(k))
}

/// [`join`] that moves the keys out of `trials` instead of cloning them.
pub fn join_owned(trials: TrialSet, scores: &ScoreTable) -> Result<ScoredTrials> {
    let (n_pos, n_neg) = trials.counts();
    join_with(trials.into_trials().into_iter(), n_pos, n_neg, |k| scores.get(k))
}

/// Same result as `join_owned(trials, &parse_scores(text)?)` without
/// allocating a key per score line.
pub fn join_score_text(trials: TrialSet, text: &str) -> Result<ScoredTrials> {
    join_score_lines(trials, parse_score_lines(text)?)
}

/// Reads and joins a trials file and a scores file.
pub fn read_scored(trials: impl AsRef<Path>, scores: impl AsRef<Path>) -> Result<ScoredTrials> {
    let trials_text = std::fs::read_to_string(trials)?;
    let scores_text = std::fs::read_to_string(scores)?;
    #[cfg(feature = "parallel")]
    let (trials, scores) = rayon::join(|| parse_trials(&trials_text), || parse_score_lines(&scores_text));
    #[cfg(not(feature = "parallel"))]
    let (trials, scores) = (parse_trials(&trials_text), parse_score_lines(&scores_text));
    join_score_lines(trials?, scores?)
}

fn join_score_lines(trials: TrialSet, scores: ScoreLines<'_>) -> Result<ScoredTrials> {
    let (n_pos, n_neg) = trials.counts();
    if let Some(aligned) = scores.aligned_with(&trials) {
        let mut next = aligned.iter();
        return join_with(trials.into_trials().into_iter(), n_pos, n_neg, |_| next.next().copied());
    }
    let map = scores.into_map()?;
    join_with(trials.into_trials().into_iter(), n_pos, n_neg, |k| map.get(k).copied())
}

fn join_with(
    trials: impl Iterator<Item = Trial>,
    n_pos: usize,
    n_neg: usize,
    mut lookup: impl FnMut(&TrialKey) -> Option<f64>,
) -> Result<ScoredTrials> {
    let mut positives = Vec::with_capacity(n_pos);
    let mut negatives = Vec::with_capacity(n_neg);
    let mut missing = Vec::new();
    let mut total_missing = 0;
    for t in trials {
        match lookup(&t.key) {
            Some(score) => match t.label {
                Label::Target => positives.push((t.key, score)),
                Label::Nontarget => negatives.push((t.key, score)),
            },
            None => {
                total_missing += 1;
                if missing.len() < MISSING_KEYS_REPORTED {
                    missing.push(t.key);
                }
            }
        }
    }
    if total_missing > 0 {
        return Err(Error::MissingScores {
            total: total_missing,
            sample: missing,
        });
    }
    // TrialSet and the score parser already guarantee unique keys and
    // finite scores.
    Ok(ScoredTrials { positives, negatives })
}
