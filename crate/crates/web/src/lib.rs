//! Browser bindings for the magnitude-curve and two-atom ratio demos.
//!
//! Every exported function returns a flat `Float64Array`; the layouts are
//! documented per function. The plain-Rust versions are public so they can be
//! tested natively.

use momentkit::polylog::{g_alpha, li};
use momentkit::proofcore::extreme_range_scan;
use momentkit::verify::{magnitude_curve, Axis};
use momentkit::{DensitySpec, GridSpec, Measure, SlitPoint, StieltjesFunction};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;
const MAX_SCAN: usize = 40;

fn y_grid(y_lo: f64, y_hi: f64, count: usize) -> Result<GridSpec, String> {
    if count > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points"));
    }
    Axis::geometric("y", y_lo, y_hi, count).map(GridSpec::single).map_err(|e| e.to_string())
}

fn family(name: &str, param: f64) -> Result<StieltjesFunction, String> {
    let density = match name {
        "uniform" => DensitySpec::Uniform,
        "power" => DensitySpec::power(param).map_err(|e| e.to_string())?,
        "log_power" => return g_alpha(param).map_err(|e| e.to_string()),
        "point" => {
            return Measure::point_mass(param).map(StieltjesFunction::from_measure).map_err(|e| e.to_string())
        }
        other => return Err(format!("unknown family '{other}'")),
    };
    Ok(StieltjesFunction::from_measure(Measure::from_density(density)))
}

/// `[y₀, |f(γ+iy₀)|, arg₀, y₁, …]` for a named family on a geometric grid.
pub fn curve(name: &str, param: f64, gamma: f64, y_lo: f64, y_hi: f64, count: usize) -> Result<Vec<f64>, String> {
    let f = family(name, param)?;
    let points = magnitude_curve(&f, gamma, &y_grid(y_lo, y_hi, count)?).map_err(|e| e.to_string())?;
    Ok(points.into_iter().flat_map(|(y, m, a)| [y, m, a]).collect())
}

/// `[y₀, |Li_α(iy₀)|, |Li_β(iy₀)|, y₁, …]`.
pub fn polylog_pair(alpha: f64, beta: f64, y_lo: f64, y_hi: f64, count: usize) -> Result<Vec<f64>, String> {
    let ys = y_grid(y_lo, y_hi, count)?.require("y").map_err(|e| e.to_string())?.points();
    let mut out = Vec::with_capacity(3 * ys.len());
    for y in ys {
        let z = SlitPoint::from_parts(0.0, y).map_err(|e| e.to_string())?;
        let a = li(alpha, z).map_err(|e| e.to_string())?.value.norm();
        let b = li(beta, z).map_err(|e| e.to_string())?.value.norm();
        out.extend([y, a, b]);
    }
    Ok(out)
}

/// Scan of `Re f(γ+iy₁)/f(γ+iy₂) - 1` over two-atom functions on an
/// `n³` grid: `[min_margin, violations, evaluations, ρ, t₁, t₂]` with the
/// last three at the minimum.
pub fn two_atom_scan(gamma: f64, y1: f64, y2: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_SCAN).contains(&n) {
        return Err(format!("grid size must be in 2..={MAX_SCAN}"));
    }
    let axis = |name| Axis::linear(name, 0.0, 1.0, n).map_err(|e| e.to_string());
    let grid = GridSpec::new(vec![axis("rho")?, axis("t1")?, axis("t2")?]).map_err(|e| e.to_string())?;
    let r = extreme_range_scan(y1, y2, gamma, &grid, 1e-9).map_err(|e| e.to_string())?;
    let mut out = vec![r.min_margin, r.violations.len() as f64, r.evaluations as f64];
    out.extend(r.argmin.unwrap_or_default());
    Ok(out)
}

#[wasm_bindgen(js_name = magnitudeCurve)]
pub fn magnitude_curve_js(
    family: &str,
    param: f64,
    gamma: f64,
    y_lo: f64,
    y_hi: f64,
    count: usize,
) -> Result<Vec<f64>, JsError> {
    curve(family, param, gamma, y_lo, y_hi, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = polylogPair)]
pub fn polylog_pair_js(alpha: f64, beta: f64, y_lo: f64, y_hi: f64, count: usize) -> Result<Vec<f64>, JsError> {
    polylog_pair(alpha, beta, y_lo, y_hi, count).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = twoAtomScan)]
pub fn two_atom_scan_js(gamma: f64, y1: f64, y2: f64, n: usize) -> Result<Vec<f64>, JsError> {
    two_atom_scan(gamma, y1, y2, n).map_err(|e| JsError::new(&e))
}
