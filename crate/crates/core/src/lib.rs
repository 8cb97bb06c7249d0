//! Evaluation of verification systems from trial and score files.
//!
//! The pipeline: parse trials and scores ([`score_io`]), compute EER and
//! minDCF ([`metrics`]), order trials by hardness ([`hardness`]), evaluate
//! every hardest-first trial config on a grid ([`cpmap`]), and compare two
//! systems cell by cell ([`delta`]). [`synth`] provides a Gaussian score
//! model with a closed-form EER for self-checks, and [`render`] writes the
//! maps as plain-text images.

pub mod cpmap;
pub mod delta;
mod error;
pub mod hardness;
pub mod metrics;
pub mod render;
pub mod score_io;
pub mod synth;
pub mod trial;
mod wavelet;

pub use cpmap::{compute_cp_map, config_at, CellGrid, CpMap, GridSpec, MetricKind, TrialConfig};
pub use delta::{compute_delta_map, summarize_wtl, DeltaMap, WtlSummary};
pub use error::{Error, ErrorCategory, Result};
pub use hardness::{fuse_orderings, rank_normalize, FusionMethod, HardnessOrder};
pub use metrics::{compute_eer, compute_min_dcf, det_points, error_rates_at, DcfParams, DcfResult, EerResult};
pub use score_io::{join, parse_scores, parse_trials, ScoreTable, ScoredTrials};
pub use synth::{analytic_eer, sample_scores, GaussianScoreModel, SampleSpec};
pub use trial::{Label, Trial, TrialKey, TrialSet, Utterance};
