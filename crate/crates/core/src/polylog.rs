//! Polylogarithms `Li_α(z) = Σ_{k≥1} z^k / k^α` for real `α ∈ [0, 50]` on the
//! slit plane, and the normalized functions `g_α(z) = Li_α(z) / z`.
//!
//! Inside `|z| ≤ 0.5` the defining series is summed with a certified tail
//! bound. Elsewhere `Li_α(z) = z · g_α(z)` where `g_α` is the Stieltjes
//! function of the density `log^{α-1}(1/t) / Γ(α)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stieltjes::{DensitySpec, Measure, SlitPoint, StieltjesFunction};

/// Largest admissible order.
pub const MAX_ALPHA: f64 = 50.0;
/// Radius up to which [`li`] uses the series branch.
pub const SERIES_RADIUS: f64 = 0.5;
const SERIES_TARGET: f64 = 1e-13;
const SERIES_MAX_TERMS: usize = 100_000;

/// Polylogarithm value with an absolute error-bound estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogValue {
    pub value: Complex64,
    pub error_bound: f64,
}

fn check_order(alpha: f64) -> Result<()> {
    if !(0.0..=MAX_ALPHA).contains(&alpha) {
        return Err(Error::Domain(format!("polylog order {alpha} outside [0, {MAX_ALPHA}]")));
    }
    Ok(())
}

/// `Li_α(z)`, switching between the series (`|z| ≤ 0.5`) and the integral
/// representation.
pub fn li(alpha: f64, z: SlitPoint) -> Result<PolylogValue> {
    check_order(alpha)?;
    let w = z.value();
    if alpha == 0.0 {
        return Ok(PolylogValue { value: w / (1.0 - w), error_bound: 4.0 * f64::EPSILON * w.norm() });
    }
    if w.norm() <= SERIES_RADIUS {
        li_series(alpha, w)
    } else {
        li_integral(alpha, z)
    }
}

/// Partial sum of the defining series, stopped once the tail bound
/// `|z|^{N+1} / ((N+1)^α (1 - |z|))` drops below `1e-13`.
pub fn li_series(alpha: f64, z: Complex64) -> Result<PolylogValue> {
    check_order(alpha)?;
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("series branch needs |z| < 1, got {r}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = z;
    let mut bound = f64::INFINITY;
    for k in 1..=SERIES_MAX_TERMS {
        let kf = k as f64;
        sum += power / kf.powf(alpha);
        let next = kf + 1.0;
        bound = r.powf(next) / (next.powf(alpha) * (1.0 - r));
        if bound <= SERIES_TARGET {
            return Ok(PolylogValue { value: sum, error_bound: bound });
        }
        power *= z;
    }
    Err(Error::InsufficientPrecision { bound, target: SERIES_TARGET })
}

/// `z · g_α(z)` through the integral representation.
pub fn li_integral(alpha: f64, z: SlitPoint) -> Result<PolylogValue> {
    check_order(alpha)?;
    if alpha == 0.0 {
        return Err(Error::Domain("integral representation needs alpha > 0".into()));
    }
    let g = g_alpha(alpha)?;
    let est = g.eval_estimate(z)?;
    let w = z.value();
    Ok(PolylogValue { value: w * est.value, error_bound: est.error * w.norm() })
}

/// `g_α(z) = Li_α(z) / z` as a Stieltjes function; `α = 1` is the uniform
/// density.
pub fn g_alpha(alpha: f64) -> Result<StieltjesFunction> {
    if !(alpha > 0.0 && alpha <= MAX_ALPHA) {
        return Err(Error::Domain(format!("g_alpha needs 0 < alpha <= {MAX_ALPHA}, got {alpha}")));
    }
    let density = if alpha == 1.0 { DensitySpec::Uniform } else { DensitySpec::log_power(alpha)? };
    Ok(StieltjesFunction::from_measure(Measure::from_density(density)))
}

// Lanczos coefficients (g ≈ 10.900511, 11 terms).
const LANCZOS_G: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.860_382_734_205_265_717_336_249_247_266_663_112;

fn lanczos(x: f64) -> f64 {
    let s = LANCZOS_DK
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_DK[0], |s, (i, &dk)| s + dk / (x + i as f64 - 1.0));
    let base = (x - 0.5 + LANCZOS_G) / std::f64::consts::E;
    s * TWO_SQRT_E_OVER_PI * base.powf(x - 0.5)
}

/// `Γ(α)` for `α ∈ (0, 50]`, relative error ≲ 1e-14.
pub fn gamma_fn(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= MAX_ALPHA) {
        return Err(Error::Domain(format!("gamma_fn needs 0 < alpha <= {MAX_ALPHA}, got {alpha}")));
    }
    if alpha < 0.5 {
        Ok(PI / ((PI * alpha).sin() * lanczos(1.0 - alpha)))
    } else {
        // The coefficient sum cancels badly for large arguments, so shift
        // down to [0.5, 2) and multiply back up.
        let (mut x, mut scale) = (alpha, 1.0);
        while x >= 2.0 {
            x -= 1.0;
            scale *= x;
        }
        Ok(scale * lanczos(x))
    }
}
