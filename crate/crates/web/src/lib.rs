//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function wraps a plain Rust function of the same name in
//! [`demo`], which the native tests exercise. Grids come back row-major
//! with `y = 1` first and `NaN` marking undefined cells.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js_err(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// `[analytic_eer, analytic_threshold, sampled_eer, sampled_threshold, sampled_min_dcf]`
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn eer_explorer(
    mu_pos: f64,
    sigma_pos: f64,
    mu_neg: f64,
    sigma_neg: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u32,
    p_target: f64,
) -> Result<Vec<f64>, JsValue> {
    demo::eer_explorer(
        mu_pos,
        sigma_pos,
        mu_neg,
        sigma_neg,
        n_pos,
        n_neg,
        seed.into(),
        p_target,
    )
    .map_err(js_err)
}

/// C-P map of one sampled Gaussian system ordered by its own scores.
/// `metric` is `"eer"` or `"min_dcf"`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn synthetic_cp_map(
    separation: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u32,
    grid: usize,
    min_trials: usize,
    metric: &str,
    p_target: f64,
) -> Result<Vec<f64>, JsValue> {
    demo::synthetic_cp_map(
        separation,
        n_pos,
        n_neg,
        seed.into(),
        grid,
        min_trials,
        metric,
        p_target,
    )
    .map_err(js_err)
}

/// RCR grid of a test system against a reference; the last three entries
/// are the win, tie and lose fractions.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn synthetic_delta_map(
    ref_separation: f64,
    test_separation: f64,
    correlation: f64,
    n_pos: usize,
    n_neg: usize,
    seed: u32,
    grid: usize,
    min_trials: usize,
) -> Result<Vec<f64>, JsValue> {
    demo::synthetic_delta_map(
        ref_separation,
        test_separation,
        correlation,
        n_pos,
        n_neg,
        seed.into(),
        grid,
        min_trials,
    )
    .map_err(js_err)
}
