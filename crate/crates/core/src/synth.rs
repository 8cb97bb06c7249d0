//! Gaussian class-conditional score model.
//!
//! With positive scores `N(mu_pos, sigma_pos^2)` and negative scores
//! `N(mu_neg, sigma_neg^2)` the EER threshold solves
//! `Phi((t - mu_pos) / sigma_pos) = Phi((mu_neg - t) / sigma_neg)`,
//! i.e. false rejection equals false alarm. The left side increases and the
//! right side decreases in `t`, so the root is unique and bisection finds it
//! for equal and unequal variances alike.
//!
//! Sampling uses ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64`, whose output stream is specified independently of
//! platform and word size, and the ziggurat `StandardNormal` sampler from
//! `rand_distr`.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::metrics::EerResult;
use crate::score_io::ScoredTrials;

/// Bisection stops once the bracket is narrower than this.
pub const THRESHOLD_TOLERANCE: f64 = 1e-12;

/// Standard normal CDF, `Phi(x) = erfc(-x / sqrt(2)) / 2`.
///
/// `erfc` is the FreeBSD msun implementation (via `libm`), which keeps
/// relative accuracy in the lower tail where `1 - erf` would cancel.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianScoreModel {
    pub mu_pos: f64,
    pub sigma_pos: f64,
    pub mu_neg: f64,
    pub sigma_neg: f64,
}

impl GaussianScoreModel {
    pub fn new(mu_pos: f64, sigma_pos: f64, mu_neg: f64, sigma_neg: f64) -> Result<Self> {
        if !mu_pos.is_finite() || !mu_neg.is_finite() {
            return Err(Error::Model("means must be finite".into()));
        }
        if !(sigma_pos > 0.0 && sigma_pos.is_finite()) || !(sigma_neg > 0.0 && sigma_neg.is_finite()) {
            return Err(Error::Model(format!(
                "standard deviations must be positive, got {sigma_pos} and {sigma_neg}"
            )));
        }
        Ok(GaussianScoreModel {
            mu_pos,
            sigma_pos,
            mu_neg,
            sigma_neg,
        })
    }

    /// False rejection probability at threshold `t`.
    pub fn frr(&self, t: f64) -> f64 {
        normal_cdf((t - self.mu_pos) / self.sigma_pos)
    }

    /// False alarm probability at threshold `t`.
    pub fn far(&self, t: f64) -> f64 {
        normal_cdf((self.mu_neg - t) / self.sigma_neg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    pub n_pos: usize,
    pub n_neg: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(n_pos: usize, n_neg: usize, seed: u64) -> Result<Self> {
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::Input(format!(
                "sample counts must be positive, got n_pos={n_pos} n_neg={n_neg}"
            )));
        }
        Ok(SampleSpec { n_pos, n_neg, seed })
    }
}

/// Exact EER of the model and its threshold.
pub fn analytic_eer(model: &GaussianScoreModel) -> Result<EerResult> {
    if model.mu_pos <= model.mu_neg {
        return Err(Error::Model(format!(
            "mu_pos ({}) must exceed mu_neg ({})",
            model.mu_pos, model.mu_neg
        )));
    }
    let gap = |t: f64| model.frr(t) - model.far(t);
    let mut lo = model.mu_neg - 10.0 * model.sigma_neg;
    let mut hi = model.mu_pos + 10.0 * model.sigma_pos;
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let threshold = lo + (hi - lo) / 2.0;
    Ok(EerResult {
        eer: model.frr(threshold),
        threshold,
    })
}

/// Draws `n_pos` positive then `n_neg` negative scores from one ChaCha20
/// stream. Keys are `pos_<i>` / `neg_<i>`.
pub fn sample_scores(model: &GaussianScoreModel, spec: &SampleSpec) -> Result<ScoredTrials> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut draw = |mu: f64, sigma: f64| -> f64 {
        let z: f64 = StandardNormal.sample(&mut rng);
        mu + sigma * z
    };
    let pos: Vec<f64> = (0..spec.n_pos).map(|_| draw(model.mu_pos, model.sigma_pos)).collect();
    let neg: Vec<f64> = (0..spec.n_neg).map(|_| draw(model.mu_neg, model.sigma_neg)).collect();
    ScoredTrials::from_class_scores(&pos, &neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(mu_pos: f64, mu_neg: f64) -> GaussianScoreModel {
        GaussianScoreModel::new(mu_pos, 1.0, mu_neg, 1.0).unwrap()
    }

    #[test]
    fn three_sigma_separation() {
        let r = analytic_eer(&model(3.0, 0.0)).unwrap();
        assert!((r.threshold - 1.5).abs() < 1e-10, "{}", r.threshold);
        assert_eq!(format!("{:.4}", r.eer), "0.0668");
    }

    #[test]
    fn two_sigma_separation_is_phi_minus_one() {
        let r = analytic_eer(&model(2.0, 0.0)).unwrap();
        assert!((r.threshold - 1.0).abs() < 1e-10);
        // Phi(-1) from standard tables
        assert!((r.eer - 0.158_655_253_931_457).abs() < 1e-12, "{}", r.eer);
    }

    #[test]
    fn far_separation_is_numerically_zero() {
        let r = analytic_eer(&model(20.0, 0.0)).unwrap();
        assert!(r.eer < 1e-15);
    }

    #[test]
    fn unequal_variances_balance() {
        let m = GaussianScoreModel::new(2.0, 0.5, -1.0, 2.0).unwrap();
        let r = analytic_eer(&m).unwrap();
        assert!((m.frr(r.threshold) - m.far(r.threshold)).abs() < 1e-10);
        assert!(r.threshold > -1.0 && r.threshold < 2.0);
    }

    #[test]
    fn shifting_means_shifts_threshold_only() {
        let base = analytic_eer(&GaussianScoreModel::new(1.7, 0.8, -0.4, 1.3).unwrap()).unwrap();
        let moved = analytic_eer(&GaussianScoreModel::new(6.7, 0.8, 4.6, 1.3).unwrap()).unwrap();
        assert!((moved.threshold - base.threshold - 5.0).abs() < 1e-9);
        assert!((moved.eer - base.eer).abs() < 1e-10);
    }

    #[test]
    fn model_validation() {
        assert!(GaussianScoreModel::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(GaussianScoreModel::new(1.0, 1.0, 0.0, -1.0).is_err());
        assert!(GaussianScoreModel::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        assert!(matches!(analytic_eer(&model(0.0, 0.0)), Err(Error::Model(_))));
        assert!(matches!(analytic_eer(&model(-1.0, 0.0)), Err(Error::Model(_))));
        assert!(SampleSpec::new(0, 1, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = model(3.0, 0.0);
        let spec = SampleSpec::new(50, 70, 42).unwrap();
        let a = sample_scores(&m, &spec).unwrap();
        let b = sample_scores(&m, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.positives().len(), a.negatives().len()), (50, 70));
        let c = sample_scores(&m, &SampleSpec::new(50, 70, 43).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sample_mean_converges() {
        let m = model(3.0, 0.0);
        let s = sample_scores(&m, &SampleSpec::new(1_000_000, 1, 7).unwrap()).unwrap();
        let mean = s.positive_scores().iter().sum::<f64>() / 1e6;
        assert!((mean - 3.0).abs() < 0.01, "{mean}");
    }
}
