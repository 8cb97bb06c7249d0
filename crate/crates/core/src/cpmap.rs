//! Config-Performance maps.
//!
//! Cell `(x, y)` of an `M x M` map holds the metric over the trial config
//! made of the `ceil(x/M * P)` hardest positives and the `ceil(y/M * Q)`
//! hardest negatives. Configs grow towards the top-right cell `(M, M)`,
//! which is the full trial set.
//!
//! EER cells are answered from two wavelet matrices over score ranks laid
//! out in hardness order: a prefix of each is a config, and the FRR/FAR
//! crossing is found by bisection over ranks. minDCF is not unimodal in the
//! threshold, so its cells are computed with one sweep over the pooled
//! scores per cell.

use std::fmt::{self, Write as _};
use std::str::FromStr;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::hardness::HardnessOrder;
use crate::metrics::{
    frr_at_least_far, frr_equals_far, interpolate_eer, midpoint, rate, DcfParams, EerResult, MinDcfTracker,
    OperatingPoint,
};
use crate::score_io::ScoredTrials;
use crate::trial::TrialKey;
use crate::wavelet::{bits_for, WaveletMatrix};

pub const DEFAULT_RESOLUTION: usize = 20;
pub const MAX_RESOLUTION: usize = 500;
pub const DEFAULT_MIN_TRIALS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
    min_trials_per_class: usize,
}

impl GridSpec {
    pub fn new(resolution: usize, min_trials_per_class: usize) -> Result<Self> {
        if !(2..=MAX_RESOLUTION).contains(&resolution) {
            return Err(Error::Input(format!(
                "grid resolution must be in 2..={MAX_RESOLUTION}, got {resolution}"
            )));
        }
        if min_trials_per_class == 0 {
            return Err(Error::Input("min_trials_per_class must be at least 1".into()));
        }
        Ok(GridSpec {
            resolution,
            min_trials_per_class,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn min_trials_per_class(&self) -> usize {
        self.min_trials_per_class
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: DEFAULT_RESOLUTION,
            min_trials_per_class: DEFAULT_MIN_TRIALS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Eer,
    MinDcf,
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eer" => Ok(MetricKind::Eer),
            "min_dcf" => Ok(MetricKind::MinDcf),
            other => Err(Error::Input(format!(
                "unknown metric '{other}' (expected eer or min_dcf)"
            ))),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Eer => "eer",
            MetricKind::MinDcf => "min_dcf",
        })
    }
}

/// `ceil(index / resolution * total)`, exact in integers.
pub fn prefix_len(index: usize, resolution: usize, total: usize) -> usize {
    ((index as u128 * total as u128).div_ceil(resolution as u128)) as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub x_index: usize,
    pub y_index: usize,
    pub num_positives: usize,
    pub num_negatives: usize,
}

impl TrialConfig {
    pub fn positives<'a>(&self, order: &'a HardnessOrder) -> &'a [TrialKey] {
        &order.positive_order()[..self.num_positives]
    }

    pub fn negatives<'a>(&self, order: &'a HardnessOrder) -> &'a [TrialKey] {
        &order.negative_order()[..self.num_negatives]
    }
}

/// The trial config at 1-based grid location `(x_index, y_index)`.
pub fn config_at(order: &HardnessOrder, spec: &GridSpec, x_index: usize, y_index: usize) -> Result<TrialConfig> {
    let m = spec.resolution();
    if !(1..=m).contains(&x_index) || !(1..=m).contains(&y_index) {
        return Err(Error::Input(format!(
            "grid index ({x_index}, {y_index}) outside 1..={m}"
        )));
    }
    Ok(TrialConfig {
        x_index,
        y_index,
        num_positives: prefix_len(x_index, m, order.positive_order().len()),
        num_negatives: prefix_len(y_index, m, order.negative_order().len()),
    })
}

/// Square grid of optional values indexed by 1-based `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid {
    resolution: usize,
    // row-major, row = y - 1
    cells: Vec<Option<f64>>,
}

impl CellGrid {
    pub fn new(resolution: usize, cells: Vec<Option<f64>>) -> Result<Self> {
        if resolution == 0 || cells.len() != resolution * resolution {
            return Err(Error::Input(format!(
                "a {resolution}x{resolution} grid needs {} cells, got {}",
                resolution * resolution,
                cells.len()
            )));
        }
        Ok(CellGrid { resolution, cells })
    }

    pub fn filled(resolution: usize, value: Option<f64>) -> Self {
        CellGrid {
            resolution,
            cells: vec![value; resolution * resolution],
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    fn index(&self, x: usize, y: usize) -> usize {
        assert!(
            (1..=self.resolution).contains(&x) && (1..=self.resolution).contains(&y),
            "cell ({x}, {y}) outside a {0}x{0} grid",
            self.resolution
        );
        (y - 1) * self.resolution + (x - 1)
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.cells[self.index(x, y)]
    }

    pub fn set(&mut self, x: usize, y: usize, value: Option<f64>) {
        let i = self.index(x, y);
        self.cells[i] = value;
    }

    /// `(x, y, value)` for every cell, row by row from `y = 1`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Option<f64>)> + '_ {
        let m = self.resolution;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, v)| (i % m + 1, i / m + 1, *v))
    }

    pub fn cells(&self) -> &[Option<f64>] {
        &self.cells
    }

    pub fn defined_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// `(min, max)` over defined cells.
    pub fn value_range(&self) -> Option<(f64, f64)> {
        self.cells.iter().flatten().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub system: String,
    pub ordering: String,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            system: "system".into(),
            ordering: "external".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpMap {
    pub grid: CellGrid,
    pub metric: MetricKind,
    pub spec: GridSpec,
    pub provenance: Provenance,
}

impl CpMap {
    pub fn with_provenance(mut self, system: impl Into<String>, ordering: impl Into<String>) -> Self {
        self.provenance = Provenance {
            system: system.into(),
            ordering: ordering.into(),
        };
        self
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.grid.get(x, y)
    }
}

/// Target-system scores laid out in hardness order.
fn ordered_scores(list: &[(TrialKey, f64)], order: &[TrialKey], class: &str) -> Result<Vec<f64>> {
    if list.len() != order.len() {
        return Err(Error::KeyMismatch(format!(
            "ordering has {} {class} trials but the scores have {}",
            order.len(),
            list.len()
        )));
    }
    let lookup: FxHashMap<&TrialKey, f64> = list.iter().map(|(k, s)| (k, *s)).collect();
    order
        .iter()
        .map(|k| {
            lookup
                .get(k)
                .copied()
                .ok_or_else(|| Error::KeyMismatch(format!("ordered {class} trial '{k}' has no score")))
        })
        .collect()
}

/// Precomputed per-system state shared by every cell.
struct CellEngine<'a> {
    // distinct pooled scores, ascending; index = rank
    values: Vec<f64>,
    pos: WaveletMatrix,
    neg: WaveletMatrix,
    // pooled trials by ascending rank: (rank, is_positive, position in hardness order)
    sweep: Vec<(u32, bool, u32)>,
    dcf: Option<&'a DcfParams>,
}

impl<'a> CellEngine<'a> {
    fn new(pos_scores: &[f64], neg_scores: &[f64], metric: MetricKind, dcf: Option<&'a DcfParams>) -> Self {
        let mut values: Vec<f64> = pos_scores.iter().chain(neg_scores).copied().collect();
        values.sort_unstable_by(f64::total_cmp);
        values.dedup();
        let rank = |s: &f64| values.partition_point(|v| v < s) as u32;
        let pos_ranks: Vec<u32> = pos_scores.iter().map(rank).collect();
        let neg_ranks: Vec<u32> = neg_scores.iter().map(rank).collect();

        let bits = bits_for(values.len() as u32);
        let pos = WaveletMatrix::new(&pos_ranks, bits);
        let neg = WaveletMatrix::new(&neg_ranks, bits);

        let sweep = if metric == MetricKind::MinDcf {
            let mut sweep: Vec<(u32, bool, u32)> = pos_ranks
                .iter()
                .enumerate()
                .map(|(i, &r)| (r, true, i as u32))
                .chain(neg_ranks.iter().enumerate().map(|(i, &r)| (r, false, i as u32)))
                .collect();
            sweep.sort_unstable();
            sweep
        } else {
            Vec::new()
        };
        CellEngine {
            values,
            pos,
            neg,
            sweep,
            dcf,
        }
    }

    /// (miss, fa) for the config when accepting ranks `>= r`.
    fn counts(&self, n_pos: usize, n_neg: usize, r: u32) -> (usize, usize) {
        (self.pos.count_less(n_pos, r), n_neg - self.neg.count_less(n_neg, r))
    }

    fn eer(&self, n_pos: usize, n_neg: usize) -> EerResult {
        let sigma = self.values.len() as u32;
        // predicate false at rank 0 (accept all), true at sigma (reject all)
        let (mut lo, mut hi) = (0u32, sigma);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let (miss, fa) = self.counts(n_pos, n_neg, mid);
            if frr_at_least_far(miss, n_pos, fa, n_neg) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let cur = self.counts(n_pos, n_neg, hi);
        let prev = self.counts(n_pos, n_neg, hi - 1);
        // minimality of `hi` puts a config score exactly at rank hi - 1
        let lower = self.values[(hi - 1) as usize];
        if frr_equals_far(cur.0, n_pos, cur.1, n_neg) {
            let next = match (self.pos.next_value(n_pos, hi), self.neg.next_value(n_neg, hi)) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!("FRR = FAR is impossible at the reject-all point"),
            };
            EerResult {
                eer: rate(cur.0, n_pos),
                threshold: midpoint(lower, self.values[next as usize]),
            }
        } else {
            EerResult {
                eer: interpolate_eer(prev, cur, n_pos, n_neg),
                threshold: lower,
            }
        }
    }

    fn min_dcf(&self, n_pos: usize, n_neg: usize) -> f64 {
        let params = self.dcf.expect("min_dcf maps carry DCF parameters");
        let mut tracker = MinDcfTracker::new(params, n_pos, n_neg);
        let (mut miss, mut neg_seen) = (0usize, 0usize);
        let mut k = 0;
        while k < self.sweep.len() {
            let rank = self.sweep[k].0;
            let (mut gp, mut gn) = (0, 0);
            while k < self.sweep.len() && self.sweep[k].0 == rank {
                let (_, positive, at) = self.sweep[k];
                if positive && (at as usize) < n_pos {
                    gp += 1;
                } else if !positive && (at as usize) < n_neg {
                    gn += 1;
                }
                k += 1;
            }
            if gp + gn > 0 {
                tracker.push(OperatingPoint {
                    miss,
                    fa: n_neg - neg_seen,
                    threshold: self.values[rank as usize],
                });
                miss += gp;
                neg_seen += gn;
            }
        }
        tracker.push(OperatingPoint {
            miss: n_pos,
            fa: 0,
            threshold: f64::INFINITY,
        });
        tracker.finish().min_dcf
    }
}

/// Computes the metric for every cell of the grid.
///
/// Membership of each cell is decided by `order`; values come from
/// `scored`, which may be a different system from the one that produced
/// the ordering.
pub fn compute_cp_map(
    scored: &ScoredTrials,
    order: &HardnessOrder,
    spec: &GridSpec,
    metric: MetricKind,
    dcf: Option<&DcfParams>,
) -> Result<CpMap> {
    match (metric, dcf) {
        (MetricKind::MinDcf, None) => {
            return Err(Error::Input("min_dcf maps need DCF parameters".into()));
        }
        (MetricKind::Eer, Some(_)) => {
            return Err(Error::Input("DCF parameters given for an EER map".into()));
        }
        _ => {}
    }
    if scored.positives().is_empty() || scored.negatives().is_empty() {
        return Err(Error::Evaluation(format!(
            "both classes must be non-empty (positives={}, negatives={})",
            scored.positives().len(),
            scored.negatives().len()
        )));
    }
    let pos = ordered_scores(scored.positives(), order.positive_order(), "positive")?;
    let neg = ordered_scores(scored.negatives(), order.negative_order(), "negative")?;
    let engine = CellEngine::new(&pos, &neg, metric, dcf);

    let m = spec.resolution();
    let cell = |i: usize| -> Option<f64> {
        let (x, y) = (i % m + 1, i / m + 1);
        let n_pos = prefix_len(x, m, pos.len());
        let n_neg = prefix_len(y, m, neg.len());
        if n_pos < spec.min_trials_per_class() || n_neg < spec.min_trials_per_class() {
            return None;
        }
        Some(match metric {
            MetricKind::Eer => engine.eer(n_pos, n_neg).eer,
            MetricKind::MinDcf => engine.min_dcf(n_pos, n_neg),
        })
    };
    #[cfg(feature = "parallel")]
    let cells: Vec<Option<f64>> = (0..m * m).into_par_iter().map(cell).collect();
    #[cfg(not(feature = "parallel"))]
    let cells: Vec<Option<f64>> = (0..m * m).map(cell).collect();

    Ok(CpMap {
        grid: CellGrid::new(m, cells)?,
        metric,
        spec: *spec,
        provenance: Provenance::default(),
    })
}

/// EER and threshold of a single trial config, through the same engine as
/// [`compute_cp_map`].
pub fn config_eer(scored: &ScoredTrials, order: &HardnessOrder, config: &TrialConfig) -> Result<EerResult> {
    if config.num_positives == 0 || config.num_negatives == 0 {
        return Err(Error::Evaluation("config has an empty class".into()));
    }
    let pos = ordered_scores(scored.positives(), order.positive_order(), "positive")?;
    let neg = ordered_scores(scored.negatives(), order.negative_order(), "negative")?;
    if config.num_positives > pos.len() || config.num_negatives > neg.len() {
        return Err(Error::Input("config larger than the trial set".into()));
    }
    let engine = CellEngine::new(&pos, &neg, MetricKind::Eer, None);
    Ok(engine.eer(config.num_positives, config.num_negatives))
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// CSV with a header of x fractions and one row per y fraction, top row
/// `y = M`, so the text reads like the rendered figure. Undefined cells
/// are written as `NA`.
pub fn export_grid_csv(grid: &CellGrid) -> String {
    let m = grid.resolution();
    let mut out = String::from("x_frac");
    for x in 1..=m {
        let _ = write!(out, ",{:.6}", x as f64 / m as f64);
    }
    out.push('\n');
    for y in (1..=m).rev() {
        let _ = write!(out, "{:.6}", y as f64 / m as f64);
        for x in 1..=m {
            match grid.get(x, y) {
                Some(v) => {
                    let _ = write!(out, ",{v:.6}");
                }
                None => out.push_str(",NA"),
            }
        }
        out.push('\n');
    }
    out
}

pub fn export_cp_map(map: &CpMap) -> String {
    export_grid_csv(&map.grid)
}

/// Reads a grid written by [`export_grid_csv`].
pub fn parse_grid_csv(text: &str) -> Result<CellGrid> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty CSV"))?;
    let header: Vec<&str> = header.trim().split(',').collect();
    if header[0] != "x_frac" || header.len() < 2 {
        return Err(Error::parse(
            1,
            "header must start with 'x_frac' followed by column fractions",
        ));
    }
    let m = header.len() - 1;
    let mut grid = CellGrid::filled(m, None);
    let mut rows = 0;
    for (i, line) in lines {
        let line_no = i + 1;
        if rows == m {
            return Err(Error::parse(line_no, format!("more than {m} data rows")));
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != m + 1 {
            return Err(Error::parse(
                line_no,
                format!("expected {} fields, found {}", m + 1, fields.len()),
            ));
        }
        let y = m - rows;
        let y_frac: f64 = fields[0]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad y fraction '{}'", fields[0])))?;
        if (y_frac - y as f64 / m as f64).abs() > 1e-6 {
            return Err(Error::parse(line_no, format!("y fraction {y_frac} out of sequence")));
        }
        for (x, field) in fields[1..].iter().enumerate() {
            let value = if *field == "NA" {
                None
            } else {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad cell value '{field}'")))?;
                if !v.is_finite() {
                    return Err(Error::parse(line_no, format!("non-finite cell value '{field}'")));
                }
                Some(v)
            };
            grid.set(x + 1, y, value);
        }
        rows += 1;
    }
    if rows != m {
        return Err(Error::Input(format!("expected {m} data rows, found {rows}")));
    }
    Ok(grid)
}
