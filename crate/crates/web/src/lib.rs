//! wasm-bindgen entry points for the browser demo.
//!
//! Every export returns a JSON string. The work happens in the plain
//! functions of the same name in [`demo`], which also run natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Samples `u_Δ` (`"u"`) or `v_Δ` (`"v"`) and its derivative.
#[wasm_bindgen]
pub fn profile_curve(kind: &str, delta: f64, points: usize) -> Result<String, JsError> {
    js(demo::profile_curve(kind, delta, points))
}

/// Runs a sharpness scan; `case` is `bounded`, `above` or `infinity`.
#[wasm_bindgen]
pub fn sharpness(case: &str, delta: f64, alpha: f64, d: usize, count: usize) -> Result<String, JsError> {
    js(demo::sharpness(case, delta, alpha, d, count))
}

/// Samples a power ψ on `(a, b)` next to its transform `ψ_{α,d}`.
#[wasm_bindgen]
pub fn psi_curve(a: f64, b: f64, beta: f64, gamma: f64, alpha: f64, d: usize, points: usize) -> Result<String, JsError> {
    js(demo::psi_curve(a, b, beta, gamma, alpha, d, points))
}
