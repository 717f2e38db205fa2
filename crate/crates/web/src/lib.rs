//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export has a plain Rust counterpart returning `Result<_, String>` so
//! the logic is testable off the wasm target.

use purity_witness::cert::verify::strategy_label;
use purity_witness::{optimizer, witness};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Row-major `B1_max(p, w)` values, `p` outer, both axes on `[0, 1]`.
pub fn surface_values(p_steps: usize, w_steps: usize) -> Result<Vec<f64>, String> {
    purity_witness::cert::surface_rows(p_steps, w_steps)
        .map(|rows| rows.into_iter().map(|(_, _, b)| b).collect())
        .map_err(|e| e.to_string())
}

/// Purity and concurrence bounds for an observed `B1`, plus the
/// post-measurement bound when an initial purity is given.
pub fn bounds_json(b1: f64, initial_purity: Option<f64>) -> Result<String, String> {
    let purity = witness::purity_lower_bound(b1).map_err(|e| e.to_string())?;
    let concurrence = witness::concurrence_upper_from_b1(b1).map_err(|e| e.to_string())?;
    let post = initial_purity
        .map(|p| witness::postmeasurement_purity_bound(b1, p))
        .transpose()
        .map_err(|e| e.to_string())?;
    Ok(json!({
        "b1": b1,
        "purity_bound": purity,
        "concurrence_bound": concurrence,
        "postmeas_bound": post,
    })
    .to_string())
}

/// Runs the qubit multistart search at `(p, w)`.
pub fn optimize_json(p: f64, w: f64, restarts: usize, seed: u64) -> Result<String, String> {
    let r = optimizer::maximize_b1_qubit(p, w, restarts, seed).map_err(|e| e.to_string())?;
    let strategy = strategy_label(p, w, &r.best_params);
    let mut v = serde_json::to_value(&r).map_err(|e| e.to_string())?;
    v["strategy"] = json!(strategy);
    v["threshold"] = json!(witness::branch_threshold(p));
    Ok(v.to_string())
}

#[wasm_bindgen(js_name = surface)]
pub fn surface_js(p_steps: usize, w_steps: usize) -> Result<Vec<f64>, JsValue> {
    surface_values(p_steps, w_steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = bounds)]
pub fn bounds_js(b1: f64, initial_purity: Option<f64>) -> Result<String, JsValue> {
    bounds_json(b1, initial_purity).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = optimize)]
pub fn optimize_js(p: f64, w: f64, restarts: usize, seed: u64) -> Result<String, JsValue> {
    optimize_json(p, w, restarts, seed).map_err(|e| JsValue::from_str(&e))
}
