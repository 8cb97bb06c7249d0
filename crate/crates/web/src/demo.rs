use cpmap_core::delta::{compute_delta_map, DEFAULT_EPSILON};
use cpmap_core::metrics::evaluate;
use cpmap_core::{
    analytic_eer, compute_cp_map, sample_scores, summarize_wtl, CellGrid, DcfParams, GaussianScoreModel, GridSpec,
    HardnessOrder, MetricKind, SampleSpec, ScoredTrials,
};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

type Result<T> = std::result::Result<T, String>;

fn flatten(grid: &CellGrid) -> Vec<f64> {
    grid.cells().iter().map(|c| c.unwrap_or(f64::NAN)).collect()
}

#[allow(clippy::too_many_arguments)]
pub fn eer_explorer(
    mu_pos: f64,
    sigma_pos: f64,
    mu_neg: f64,
    sigma_neg: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
    p_target: f64,
) -> Result<Vec<f64>> {
    let model = GaussianScoreModel::new(mu_pos, sigma_pos, mu_neg, sigma_neg).map_err(|e| e.to_string())?;
    let exact = analytic_eer(&model).map_err(|e| e.to_string())?;
    let spec = SampleSpec::new(n_pos, n_neg, seed).map_err(|e| e.to_string())?;
    let scored = sample_scores(&model, &spec).map_err(|e| e.to_string())?;
    let params = DcfParams::new(p_target, 1.0, 1.0).map_err(|e| e.to_string())?;
    let (eer, dcf) = evaluate(&scored, &params).map_err(|e| e.to_string())?;
    Ok(vec![exact.eer, exact.threshold, eer.eer, eer.threshold, dcf.min_dcf])
}

#[allow(clippy::too_many_arguments)]
pub fn synthetic_cp_map(
    separation: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
    grid: usize,
    min_trials: usize,
    metric: &str,
    p_target: f64,
) -> Result<Vec<f64>> {
    let metric: MetricKind = metric.parse().map_err(|e: cpmap_core::Error| e.to_string())?;
    let model = GaussianScoreModel::new(separation, 1.0, 0.0, 1.0).map_err(|e| e.to_string())?;
    let spec = SampleSpec::new(n_pos, n_neg, seed).map_err(|e| e.to_string())?;
    let scored = sample_scores(&model, &spec).map_err(|e| e.to_string())?;
    let grid_spec = GridSpec::new(grid, min_trials).map_err(|e| e.to_string())?;
    let params = match metric {
        MetricKind::MinDcf => Some(DcfParams::new(p_target, 1.0, 1.0).map_err(|e| e.to_string())?),
        MetricKind::Eer => None,
    };
    let order = HardnessOrder::from_scores(&scored);
    let map = compute_cp_map(&scored, &order, &grid_spec, metric, params.as_ref()).map_err(|e| e.to_string())?;
    Ok(flatten(&map.grid))
}

/// Two systems scoring the same trials. Each score is
/// `mean + rho * z + sqrt(1 - rho^2) * e` with `z` shared per trial, so
/// `correlation` controls how much the systems agree on what is hard.
fn correlated_systems(
    separations: [f64; 2],
    correlation: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
) -> Result<[ScoredTrials; 2]> {
    if !(0.0..=1.0).contains(&correlation) {
        return Err(format!("correlation must be in [0, 1], got {correlation}"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let private = (1.0 - correlation * correlation).sqrt();
    let mut pos = [vec![0.0; n_pos], vec![0.0; n_pos]];
    let mut neg = [vec![0.0; n_neg], vec![0.0; n_neg]];
    for (scores, positive) in [(&mut pos, true), (&mut neg, false)] {
        let [a, b] = scores;
        for (sa, sb) in a.iter_mut().zip(b.iter_mut()) {
            let z: f64 = StandardNormal.sample(&mut rng);
            for (s, slot) in [sa, sb].into_iter().enumerate() {
                let e: f64 = StandardNormal.sample(&mut rng);
                let mean = if positive { separations[s] } else { 0.0 };
                *slot = mean + correlation * z + private * e;
            }
        }
    }
    let a = ScoredTrials::from_class_scores(&pos[0], &neg[0]).map_err(|e| e.to_string())?;
    let b = ScoredTrials::from_class_scores(&pos[1], &neg[1]).map_err(|e| e.to_string())?;
    Ok([a, b])
}

#[allow(clippy::too_many_arguments)]
pub fn synthetic_delta_map(
    ref_separation: f64,
    test_separation: f64,
    correlation: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u64,
    grid: usize,
    min_trials: usize,
) -> Result<Vec<f64>> {
    if n_pos == 0 || n_neg == 0 {
        return Err("both classes need at least one trial".into());
    }
    let [reference, test] = correlated_systems([ref_separation, test_separation], correlation, n_pos, n_neg, seed)?;
    let spec = GridSpec::new(grid, min_trials).map_err(|e| e.to_string())?;
    // both maps share the reference system's ordering
    let order = HardnessOrder::from_scores(&reference);
    let ref_map = compute_cp_map(&reference, &order, &spec, MetricKind::Eer, None).map_err(|e| e.to_string())?;
    let test_map = compute_cp_map(&test, &order, &spec, MetricKind::Eer, None).map_err(|e| e.to_string())?;
    let delta = compute_delta_map(&ref_map, &test_map, DEFAULT_EPSILON).map_err(|e| e.to_string())?;
    let mut out = flatten(&delta.grid);
    match summarize_wtl(&delta) {
        Ok(s) => out.extend([s.win, s.tie, s.lose]),
        Err(_) => out.extend([f64::NAN; 3]),
    }
    Ok(out)
}
