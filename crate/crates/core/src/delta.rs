//! Cell-wise comparison of two C-P maps.
//!
//! `RCR = (ref - test) / ref`: positive when the test system has the lower
//! error. A cell is tied when `|RCR| < epsilon`.

use std::fmt;

use crate::cpmap::{CellGrid, CpMap};
use crate::error::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMap {
    pub grid: CellGrid,
    pub ref_name: String,
    pub test_name: String,
    pub epsilon: f64,
    /// Cells defined in both inputs but left undefined because the
    /// reference value is zero.
    pub zero_ref_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WtlSummary {
    pub win: f64,
    pub tie: f64,
    pub lose: f64,
    pub defined_cells: usize,
}

impl fmt::Display for WtlSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "win={:.6} tie={:.6} lose={:.6} defined={}",
            self.win, self.tie, self.lose, self.defined_cells
        )
    }
}

/// Relative change ratio of one cell.
pub fn relative_change(reference: f64, test: f64) -> f64 {
    (reference - test) / reference
}

/// Compares two C-P maps built on the same grid, metric and ordering.
pub fn compute_delta_map(reference: &CpMap, test: &CpMap, epsilon: f64) -> Result<DeltaMap> {
    if reference.spec != test.spec {
        return Err(Error::Input(format!(
            "grid specs differ: {:?} vs {:?}",
            reference.spec, test.spec
        )));
    }
    if reference.metric != test.metric {
        return Err(Error::Input(format!(
            "metrics differ: {} vs {}",
            reference.metric, test.metric
        )));
    }
    if reference.provenance.ordering != test.provenance.ordering {
        return Err(Error::Input(format!(
            "maps use different orderings: '{}' vs '{}'",
            reference.provenance.ordering, test.provenance.ordering
        )));
    }
    compute_delta_grid(
        &reference.grid,
        &test.grid,
        epsilon,
        &reference.provenance.system,
        &test.provenance.system,
    )
}

/// Grid-level comparison, for maps read back from CSV where only the cell
/// values survive.
pub fn compute_delta_grid(
    reference: &CellGrid,
    test: &CellGrid,
    epsilon: f64,
    ref_name: &str,
    test_name: &str,
) -> Result<DeltaMap> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
    }
    if reference.resolution() != test.resolution() {
        return Err(Error::Input(format!(
            "grid sizes differ: {} vs {}",
            reference.resolution(),
            test.resolution()
        )));
    }
    let mut zero_ref_cells = 0;
    let cells = reference
        .cells()
        .iter()
        .zip(test.cells())
        .map(|(r, t)| match (r, t) {
            (Some(r), Some(_)) if *r == 0.0 => {
                zero_ref_cells += 1;
                None
            }
            (Some(r), Some(t)) => Some(relative_change(*r, *t)),
            _ => None,
        })
        .collect();
    Ok(DeltaMap {
        grid: CellGrid::new(reference.resolution(), cells)?,
        ref_name: ref_name.to_string(),
        test_name: test_name.to_string(),
        epsilon,
        zero_ref_cells,
    })
}

pub fn summarize_wtl(delta: &DeltaMap) -> Result<WtlSummary> {
    let eps = delta.epsilon;
    let (mut win, mut tie, mut lose) = (0usize, 0usize, 0usize);
    for v in delta.grid.cells().iter().flatten() {
        if v.abs() < eps {
            tie += 1;
        } else if *v >= eps {
            win += 1;
        } else {
            lose += 1;
        }
    }
    let defined = win + tie + lose;
    if defined == 0 {
        return Err(Error::Evaluation("delta map has no defined cells".into()));
    }
    let n = defined as f64;
    Ok(WtlSummary {
        win: win as f64 / n,
        tie: tie as f64 / n,
        lose: lose as f64 / n,
        defined_cells: defined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpmap::{GridSpec, MetricKind, Provenance};

    fn map(cells: Vec<Option<f64>>, m: usize) -> CpMap {
        CpMap {
            grid: CellGrid::new(m, cells).unwrap(),
            metric: MetricKind::Eer,
            spec: GridSpec::new(m, 1).unwrap(),
            provenance: Provenance::default(),
        }
    }

    #[test]
    fn spot_values() {
        assert_eq!(relative_change(0.10, 0.05), 0.5);
        // 0.04 and 0.06 are not exact in binary
        assert!((relative_change(0.04, 0.06) + 0.5).abs() < 1e-12);
        let d = compute_delta_map(
            &map(vec![Some(0.10); 4], 2),
            &map(vec![Some(0.05); 4], 2),
            DEFAULT_EPSILON,
        )
        .unwrap();
        assert!(d.grid.cells().iter().all(|c| *c == Some(0.5)));
    }

    #[test]
    fn self_comparison_ties() {
        let m = map(vec![Some(0.2), Some(0.0), None, Some(0.05)], 2);
        let d = compute_delta_map(&m, &m, DEFAULT_EPSILON).unwrap();
        assert!(d.grid.cells().iter().flatten().all(|v| *v == 0.0));
        assert_eq!(d.grid.defined_count(), 2);
        assert_eq!(d.zero_ref_cells, 1);
        let s = summarize_wtl(&d).unwrap();
        assert_eq!((s.win, s.tie, s.lose, s.defined_cells), (0.0, 1.0, 0.0, 2));
    }

    #[test]
    fn bands_counted_by_hand() {
        let grid = CellGrid::new(2, vec![Some(0.2), Some(-0.3), Some(0.0), Some(5e-6)]).unwrap();
        let d = DeltaMap {
            grid,
            ref_name: "a".into(),
            test_name: "b".into(),
            epsilon: 1e-5,
            zero_ref_cells: 0,
        };
        let s = summarize_wtl(&d).unwrap();
        assert_eq!((s.win, s.tie, s.lose), (0.25, 0.5, 0.25));
        assert_eq!(s.to_string(), "win=0.250000 tie=0.500000 lose=0.250000 defined=4");
    }

    #[test]
    fn tie_band_is_strict() {
        let grid = CellGrid::new(2, vec![Some(1e-5), Some(-1e-5), Some(0.99e-5), None]).unwrap();
        let d = DeltaMap {
            grid,
            ref_name: String::new(),
            test_name: String::new(),
            epsilon: 1e-5,
            zero_ref_cells: 0,
        };
        let s = summarize_wtl(&d).unwrap();
        assert_eq!(s.defined_cells, 3);
        assert_eq!((s.win * 3.0, s.tie * 3.0, s.lose * 3.0), (1.0, 1.0, 1.0));
    }

    #[test]
    fn mismatches_are_rejected() {
        let a = map(vec![Some(0.1); 4], 2);
        let b = map(vec![Some(0.1); 9], 3);
        assert!(compute_delta_map(&a, &b, DEFAULT_EPSILON).is_err());
        let mut c = a.clone();
        c.metric = MetricKind::MinDcf;
        assert!(compute_delta_map(&a, &c, DEFAULT_EPSILON).is_err());
        let d = a.clone().with_provenance("x", "other");
        assert!(compute_delta_map(&a, &d, DEFAULT_EPSILON).is_err());
        assert!(compute_delta_map(&a, &a, 0.0).is_err());
    }

    #[test]
    fn empty_summary_is_an_error() {
        let m = map(vec![None; 4], 2);
        let d = compute_delta_map(&m, &m, DEFAULT_EPSILON).unwrap();
        assert!(matches!(summarize_wtl(&d), Err(Error::Evaluation(_))));
    }

    proptest::proptest! {
        #[test]
        fn swapping_inputs_swaps_win_and_lose(cells in proptest::collection::vec((1u32..20, 1u32..20), 16)) {
            // coarse values keep every nonzero |RCR| far outside the tie band
            let a = map(cells.iter().map(|c| Some(c.0 as f64 / 20.0)).collect(), 4);
            let b = map(cells.iter().map(|c| Some(c.1 as f64 / 20.0)).collect(), 4);
            let ab = compute_delta_map(&a, &b, DEFAULT_EPSILON).unwrap();
            let ba = compute_delta_map(&b, &a, DEFAULT_EPSILON).unwrap();
            for (x, y) in ab.grid.cells().iter().zip(ba.grid.cells()) {
                let (x, y) = (x.unwrap(), y.unwrap());
                proptest::prop_assert!(x.signum() == -y.signum() || (x == 0.0 && y == 0.0));
            }
            let (s_ab, s_ba) = (summarize_wtl(&ab).unwrap(), summarize_wtl(&ba).unwrap());
            proptest::prop_assert_eq!(s_ab.win, s_ba.lose);
            proptest::prop_assert_eq!(s_ab.lose, s_ba.win);
            proptest::prop_assert_eq!(s_ab.tie, s_ba.tie);
        }

        #[test]
        fn rcr_is_scale_free(cells in proptest::collection::vec((0.01f64..1.0, 0.0f64..1.0), 9), k in 0.001f64..1000.0) {
            let a = map(cells.iter().map(|c| Some(c.0)).collect(), 3);
            let b = map(cells.iter().map(|c| Some(c.1)).collect(), 3);
            let a2 = map(cells.iter().map(|c| Some(c.0 * k)).collect(), 3);
            let b2 = map(cells.iter().map(|c| Some(c.1 * k)).collect(), 3);
            let d1 = compute_delta_map(&a, &b, DEFAULT_EPSILON).unwrap();
            let d2 = compute_delta_map(&a2, &b2, DEFAULT_EPSILON).unwrap();
            for (x, y) in d1.grid.cells().iter().zip(d2.grid.cells()) {
                proptest::prop_assert!((x.unwrap() - y.unwrap()).abs() < 1e-12);
            }
        }

        #[test]
        fn fractions_sum_to_one(cells in proptest::collection::vec(proptest::option::of(-1.0f64..1.0), 25)) {
            let d = DeltaMap {
                grid: CellGrid::new(5, cells).unwrap(),
                ref_name: String::new(),
                test_name: String::new(),
                epsilon: DEFAULT_EPSILON,
                zero_ref_cells: 0,
            };
            if let Ok(s) = summarize_wtl(&d) {
                proptest::prop_assert!((s.win + s.tie + s.lose - 1.0).abs() <= 1e-12);
            }
        }
    }
}
