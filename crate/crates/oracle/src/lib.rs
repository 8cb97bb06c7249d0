//! Brute-force reference metrics for tests.
//!
//! Nothing here shares code with `cpmap-core`. Every threshold region is
//! enumerated explicitly and error rates are recounted from scratch at a
//! representative threshold inside the region, so the cost is quadratic.

/// `(frr, far)` at `theta` under "score >= theta accepts".
pub fn rates(pos: &[f64], neg: &[f64], theta: f64) -> (f64, f64) {
    let miss = pos.iter().filter(|&&s| s < theta).count();
    let fa = neg.iter().filter(|&&s| s >= theta).count();
    (miss as f64 / pos.len() as f64, fa as f64 / neg.len() as f64)
}

/// One threshold inside every region delimited by the distinct pooled
/// scores: below the minimum, between neighbours, above the maximum.
pub fn region_thresholds(pos: &[f64], neg: &[f64]) -> Vec<f64> {
    let mut values: Vec<f64> = pos.iter().chain(neg).copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values.dedup();
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(values[0] - 1.0);
    for w in values.windows(2) {
        out.push((w[0] + w[1]) / 2.0);
    }
    out.push(values[values.len() - 1] + 1.0);
    out
}

/// `(frr, far)` in every threshold region, in increasing threshold order.
pub fn sweep(pos: &[f64], neg: &[f64]) -> Vec<(f64, f64)> {
    region_thresholds(pos, neg)
        .into_iter()
        .map(|t| rates(pos, neg, t))
        .collect()
}

/// Interpolated EER from an exhaustive region sweep.
pub fn eer(pos: &[f64], neg: &[f64]) -> f64 {
    let points = sweep(pos, neg);
    let k = points.iter().position(|(frr, far)| frr >= far).unwrap();
    let (frr1, far1) = points[k];
    if frr1 == far1 {
        return frr1;
    }
    let (frr0, far0) = points[k - 1];
    // intersect the segment with frr = far
    let alpha = (far0 - frr0) / ((far0 - frr0) - (far1 - frr1));
    frr0 + alpha * (frr1 - frr0)
}

/// Normalized minimum DCF over every threshold region.
pub fn min_dcf(pos: &[f64], neg: &[f64], p_target: f64, c_miss: f64, c_fa: f64) -> f64 {
    let norm = (c_miss * p_target).min(c_fa * (1.0 - p_target));
    sweep(pos, neg)
        .into_iter()
        .map(|(frr, far)| (c_miss * p_target * frr + c_fa * (1.0 - p_target) * far) / norm)
        .fold(f64::INFINITY, f64::min)
}

/// Small deterministic generator (SplitMix64) so fixtures do not depend
/// on the generator used by the code under test.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `lo..hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next_u64() % (hi - lo)
    }

    /// Score on a coarse grid (multiples of 1/64 in [-8, 8]) so ties occur
    /// and monotone transforms never merge distinct values.
    pub fn grid_score(&mut self) -> f64 {
        (self.range(0, 1025) as f64 - 512.0) / 64.0
    }

    pub fn scores(&mut self, n: usize, shift: f64) -> Vec<f64> {
        (0..n).map(|_| self.grid_score() + shift).collect()
    }
}
