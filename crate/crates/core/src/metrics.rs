//! Equal error rate, minimum detection cost and DET operating points.
//!
//! Decision rule: a trial is accepted when `score >= theta`. So
//! `FRR(theta) = #{positive < theta} / P` and
//! `FAR(theta) = #{negative >= theta} / Q`.
//!
//! The empirical operating points are those reached with `theta` equal to
//! each distinct pooled score, plus the reject-all point at `+inf`. The EER
//! is read off the ROC segment on which `FRR - FAR` changes sign, by linear
//! interpolation.

use crate::error::{Error, Result};
use crate::score_io::ScoredTrials;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EerResult {
    pub eer: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcfParams {
    p_target: f64,
    c_miss: f64,
    c_fa: f64,
}

impl DcfParams {
    pub fn new(p_target: f64, c_miss: f64, c_fa: f64) -> Result<Self> {
        if !(p_target > 0.0 && p_target < 1.0) {
            return Err(Error::Input(format!("p_target must lie in (0, 1), got {p_target}")));
        }
        if !(c_miss > 0.0 && c_miss.is_finite()) || !(c_fa > 0.0 && c_fa.is_finite()) {
            return Err(Error::Input(format!(
                "costs must be positive and finite, got c_miss={c_miss} c_fa={c_fa}"
            )));
        }
        Ok(DcfParams { p_target, c_miss, c_fa })
    }

    pub fn p_target(&self) -> f64 {
        self.p_target
    }

    pub fn c_miss(&self) -> f64 {
        self.c_miss
    }

    pub fn c_fa(&self) -> f64 {
        self.c_fa
    }

    /// Cost of the better of the two trivial systems (accept-all, reject-all).
    pub fn normalizer(&self) -> f64 {
        (self.c_miss * self.p_target).min(self.c_fa * (1.0 - self.p_target))
    }

    /// Normalized DCF for the given error rates.
    pub fn normalized_cost(&self, frr: f64, far: f64) -> f64 {
        (self.c_miss * self.p_target * frr + self.c_fa * (1.0 - self.p_target) * far) / self.normalizer()
    }
}

impl Default for DcfParams {
    /// `p_target = 0.01`, unit costs.
    fn default() -> Self {
        DcfParams {
            p_target: 0.01,
            c_miss: 1.0,
            c_fa: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcfResult {
    pub min_dcf: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetPoint {
    pub far: f64,
    pub frr: f64,
}

/// Error counts at one operating point. `threshold` is the smallest
/// score accepted, `+inf` for reject-all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OperatingPoint {
    pub miss: usize,
    pub fa: usize,
    pub threshold: f64,
}

/// Midpoint of a threshold interval, shared by every code path that
/// reports one so that results agree bit for bit.
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) / 2.0
}

pub(crate) fn rate(count: usize, total: usize) -> f64 {
    count as f64 / total as f64
}

/// `FRR >= FAR`, decided on integer counts.
pub(crate) fn frr_at_least_far(miss: usize, n_pos: usize, fa: usize, n_neg: usize) -> bool {
    miss as u128 * n_neg as u128 >= fa as u128 * n_pos as u128
}

pub(crate) fn frr_equals_far(miss: usize, n_pos: usize, fa: usize, n_neg: usize) -> bool {
    miss as u128 * n_neg as u128 == fa as u128 * n_pos as u128
}

/// Crossing of the ROC segment between `before` (FRR < FAR) and `after`
/// (FRR >= FAR) with the line FRR = FAR.
pub(crate) fn interpolate_eer(before: (usize, usize), after: (usize, usize), n_pos: usize, n_neg: usize) -> f64 {
    let (frr0, far0) = (rate(before.0, n_pos), rate(before.1, n_neg));
    let (frr1, far1) = (rate(after.0, n_pos), rate(after.1, n_neg));
    let gap0 = far0 - frr0;
    let gap1 = far1 - frr1;
    let alpha = gap0 / (gap0 - gap1);
    frr0 + alpha * (frr1 - frr0)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_unstable_by(f64::total_cmp);
    v
}

fn sorted_classes(scored: &ScoredTrials) -> Result<(Vec<f64>, Vec<f64>)> {
    check_non_empty(scored)?;
    Ok((sorted(scored.positive_scores()), sorted(scored.negative_scores())))
}

fn check_non_empty(scored: &ScoredTrials) -> Result<()> {
    if scored.positives().is_empty() || scored.negatives().is_empty() {
        return Err(Error::Evaluation(format!(
            "both classes must be non-empty (positives={}, negatives={})",
            scored.positives().len(),
            scored.negatives().len()
        )));
    }
    Ok(())
}

/// Walks the empirical operating points of two ascending score lists in
/// order of increasing threshold, ending with the reject-all point.
pub(crate) fn operating_points(pos: &[f64], neg: &[f64]) -> Vec<OperatingPoint> {
    let mut points = Vec::with_capacity(pos.len() + neg.len() + 1);
    let (mut i, mut j) = (0, 0);
    while i < pos.len() || j < neg.len() {
        let t = match (pos.get(i), neg.get(j)) {
            (Some(&p), Some(&n)) => p.min(n),
            (Some(&p), None) => p,
            (None, Some(&n)) => n,
            (None, None) => unreachable!(),
        };
        points.push(OperatingPoint {
            miss: i,
            fa: neg.len() - j,
            threshold: t,
        });
        while i < pos.len() && pos[i] == t {
            i += 1;
        }
        while j < neg.len() && neg[j] == t {
            j += 1;
        }
    }
    points.push(OperatingPoint {
        miss: pos.len(),
        fa: 0,
        threshold: f64::INFINITY,
    });
    points
}

pub(crate) fn eer_from_points(points: &[OperatingPoint], n_pos: usize, n_neg: usize) -> EerResult {
    // The first point always has FRR = 0 < FAR = 1 and the last FRR = 1 > FAR = 0.
    let k = points
        .iter()
        .position(|p| frr_at_least_far(p.miss, n_pos, p.fa, n_neg))
        .expect("reject-all point satisfies FRR >= FAR");
    let (prev, cur) = (points[k - 1], points[k]);
    if frr_equals_far(cur.miss, n_pos, cur.fa, n_neg) {
        EerResult {
            eer: rate(cur.miss, n_pos),
            threshold: midpoint(prev.threshold, cur.threshold),
        }
    } else {
        EerResult {
            eer: interpolate_eer((prev.miss, prev.fa), (cur.miss, cur.fa), n_pos, n_neg),
            threshold: prev.threshold,
        }
    }
}

/// Running minimum of the normalized DCF over operating points pushed in
/// increasing-threshold order.
pub(crate) struct MinDcfTracker<'a> {
    params: &'a DcfParams,
    n_pos: usize,
    n_neg: usize,
    best: DcfResult,
    prev_threshold: Option<f64>,
}

impl<'a> MinDcfTracker<'a> {
    pub fn new(params: &'a DcfParams, n_pos: usize, n_neg: usize) -> Self {
        MinDcfTracker {
            params,
            n_pos,
            n_neg,
            best: DcfResult {
                min_dcf: f64::INFINITY,
                threshold: f64::NAN,
            },
            prev_threshold: None,
        }
    }

    pub fn push(&mut self, p: OperatingPoint) {
        let cost = self
            .params
            .normalized_cost(rate(p.miss, self.n_pos), rate(p.fa, self.n_neg));
        if cost < self.best.min_dcf {
            let threshold = match self.prev_threshold {
                None => f64::NEG_INFINITY,
                Some(_) if p.threshold.is_infinite() => f64::INFINITY,
                Some(prev) => midpoint(prev, p.threshold),
            };
            self.best = DcfResult {
                min_dcf: cost,
                threshold,
            };
        }
        self.prev_threshold = Some(p.threshold);
    }

    pub fn finish(self) -> DcfResult {
        self.best
    }
}

pub(crate) fn min_dcf_from_points(
    points: &[OperatingPoint],
    n_pos: usize,
    n_neg: usize,
    params: &DcfParams,
) -> DcfResult {
    let mut tracker = MinDcfTracker::new(params, n_pos, n_neg);
    for &p in points {
        tracker.push(p);
    }
    tracker.finish()
}

/// `(frr, far)` at a fixed threshold.
pub fn error_rates_at(scored: &ScoredTrials, theta: f64) -> Result<(f64, f64)> {
    check_non_empty(scored)?;
    if theta.is_nan() {
        return Err(Error::Input("threshold is NaN".into()));
    }
    let miss = scored.positives().iter().filter(|(_, s)| *s < theta).count();
    let fa = scored.negatives().iter().filter(|(_, s)| *s >= theta).count();
    Ok((rate(miss, scored.positives().len()), rate(fa, scored.negatives().len())))
}

pub fn compute_eer(scored: &ScoredTrials) -> Result<EerResult> {
    let (pos, neg) = sorted_classes(scored)?;
    Ok(eer_from_sorted(&pos, &neg))
}

/// EER of two ascending, non-empty score lists.
pub fn eer_from_sorted(pos: &[f64], neg: &[f64]) -> EerResult {
    eer_from_points(&operating_points(pos, neg), pos.len(), neg.len())
}

pub fn compute_min_dcf(scored: &ScoredTrials, params: &DcfParams) -> Result<DcfResult> {
    let (pos, neg) = sorted_classes(scored)?;
    Ok(min_dcf_from_sorted(&pos, &neg, params))
}

pub fn min_dcf_from_sorted(pos: &[f64], neg: &[f64], params: &DcfParams) -> DcfResult {
    min_dcf_from_points(&operating_points(pos, neg), pos.len(), neg.len(), params)
}

/// All distinct empirical operating points ordered by increasing threshold:
/// starts at `(far=1, frr=0)` and ends at `(far=0, frr=1)`.
pub fn det_points(scored: &ScoredTrials) -> Result<Vec<DetPoint>> {
    let (pos, neg) = sorted_classes(scored)?;
    let mut out: Vec<DetPoint> = Vec::new();
    for p in operating_points(&pos, &neg) {
        let point = DetPoint {
            far: rate(p.fa, neg.len()),
            frr: rate(p.miss, pos.len()),
        };
        if out.last() != Some(&point) {
            out.push(point);
        }
    }
    Ok(out)
}

/// Both metrics in one pass over the sorted scores.
pub fn evaluate(scored: &ScoredTrials, params: &DcfParams) -> Result<(EerResult, DcfResult)> {
    let (pos, neg) = sorted_classes(scored)?;
    let points = operating_points(&pos, &neg);
    Ok((
        eer_from_points(&points, pos.len(), neg.len()),
        min_dcf_from_points(&points, pos.len(), neg.len(), params),
    ))
}
