use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::polylog::{gamma_fn, MAX_ALPHA};
use crate::quad::{exp_sinh, gauss_kronrod, Estimate, QuadOptions};
use crate::scalar::rational_from_f64;

/// Anything that can be sampled as a non-negative function on `(0, 1)`.
pub trait Density {
    fn value(&self, t: f64) -> f64;
}

/// A probability density on `[0, 1]`. Every family is normalized to unit
/// mass.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    /// `σ ≡ 1`
    Uniform,
    /// `σ(t) = (p + 1) t^p`, `p > -1`
    Power { p: f64 },
    /// `σ(t) = log^{α-1}(1/t) / Γ(α)`
    LogPower { alpha: f64, gamma: f64 },
    /// Log-linear interpolation of positive samples.
    Tabulated(Tabulated),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    samples: Vec<(f64, f64)>,
    // Log-linear knots on [0, 1], including extrapolated end values.
    knots: Vec<(f64, f64)>,
    mass: f64,
    source: Option<PathBuf>,
}

impl Tabulated {
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Total mass of the raw samples' interpolant before normalization.
    pub fn raw_mass(&self) -> f64 {
        self.mass
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    fn raw_value(&self, t: f64) -> f64 {
        let k = &self.knots;
        let i = match k.binary_search_by(|p| p.0.total_cmp(&t)) {
            Ok(i) => return k[i].1,
            Err(i) => i.clamp(1, k.len() - 1),
        };
        let (a, ya) = k[i - 1];
        let (b, yb) = k[i];
        let s = (t - a) / (b - a);
        (ya.ln() * (1.0 - s) + yb.ln() * s).exp()
    }

    /// `t σ'(t) / σ(t)` from centered differences of `log σ` at the samples,
    /// linearly interpolated between samples; one-sided at the end samples.
    fn log_slope(&self, t: f64) -> Result<f64> {
        let s = &self.samples;
        if s.len() < 3 {
            return Err(Error::InvalidDensity(
                "log-derivative of a tabulated density needs at least 3 samples".into(),
            ));
        }
        let n = s.len();
        let node_slope = |i: usize| -> f64 {
            let (lo, hi) = match i {
                0 => (0, 1),
                i if i == n - 1 => (n - 2, n - 1),
                i => (i - 1, i + 1),
            };
            s[i].0 * (s[hi].1.ln() - s[lo].1.ln()) / (s[hi].0 - s[lo].0)
        };
        if t <= s[0].0 {
            return Ok(t * (s[1].1.ln() - s[0].1.ln()) / (s[1].0 - s[0].0));
        }
        if t >= s[n - 1].0 {
            return Ok(t * (s[n - 1].1.ln() - s[n - 2].1.ln()) / (s[n - 1].0 - s[n - 2].0));
        }
        let i = s.partition_point(|p| p.0 <= t);
        let (a, b) = (s[i - 1].0, s[i].0);
        let w = (t - a) / (b - a);
        Ok(node_slope(i - 1) * (1.0 - w) + node_slope(i) * w)
    }
}

fn log_linear_mass(a: f64, ya: f64, b: f64, yb: f64) -> f64 {
    let r = (yb / ya).ln();
    if r.abs() < 1e-12 {
        (b - a) * 0.5 * (ya + yb)
    } else {
        (b - a) * (yb - ya) / r
    }
}

impl DensitySpec {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > -1.0) || !p.is_finite() {
            return Err(Error::InvalidDensity(format!("power density needs p > -1, got {p}")));
        }
        Ok(DensitySpec::Power { p })
    }

    pub fn log_power(alpha: f64) -> Result<Self> {
        let gamma = gamma_fn(alpha).map_err(|_| {
            Error::InvalidDensity(format!("log_power needs 0 < alpha <= {MAX_ALPHA}, got {alpha}"))
        })?;
        Ok(DensitySpec::LogPower { alpha, gamma })
    }

    /// Tabulated samples `(t, σ(t))`, strictly increasing in `t ∈ [0, 1]`,
    /// positive values. Outside the sampled range the end segments are
    /// extended log-linearly. The result is normalized to unit mass.
    pub fn tabulated(samples: Vec<(f64, f64)>, source: Option<PathBuf>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidDensity("tabulated density needs at least 2 samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidDensity("tabulated t values must be strictly increasing".into()));
            }
        }
        for &(t, v) in &samples {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidDensity(format!("tabulated t = {t} outside [0, 1]")));
            }
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidDensity(format!("tabulated value {v} at t = {t} is not positive")));
            }
        }
        let mut knots = samples.clone();
        let n = knots.len();
        if knots[0].0 > 0.0 {
            let (a, ya) = knots[0];
            let (b, yb) = knots[1];
            let slope = (yb.ln() - ya.ln()) / (b - a);
            knots.insert(0, (0.0, (ya.ln() - slope * a).exp()));
        }
        if knots[knots.len() - 1].0 < 1.0 {
            let (a, ya) = samples[n - 2];
            let (b, yb) = samples[n - 1];
            let slope = (yb.ln() - ya.ln()) / (b - a);
            knots.push((1.0, (yb.ln() + slope * (1.0 - b)).exp()));
        }
        let mass: f64 = knots.windows(2).map(|w| log_linear_mass(w[0].0, w[0].1, w[1].0, w[1].1)).sum();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidDensity("tabulated density has no finite positive mass".into()));
        }
        Ok(DensitySpec::Tabulated(Tabulated { samples, knots, mass, source }))
    }

    /// `t σ'(t) / σ(t)`: analytic for the named families.
    pub fn log_slope(&self, t: f64) -> Result<f64> {
        match self {
            DensitySpec::Uniform => Ok(0.0),
            DensitySpec::Power { p } => Ok(*p),
            DensitySpec::LogPower { alpha, .. } => Ok((1.0 - alpha) / (1.0 / t).ln()),
            DensitySpec::Tabulated(tab) => tab.log_slope(t),
        }
    }

    /// Interior kinks of the density.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            DensitySpec::Tabulated(tab) => tab.knots.iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }

    /// `∫ t^k σ(t) dt` as an exact rational when a closed form exists.
    pub fn exact_moment(&self, k: usize) -> Option<BigRational> {
        match self {
            DensitySpec::Uniform => Some(BigRational::new(1.into(), (k + 1).into())),
            DensitySpec::Power { p } => {
                let p = rational_from_f64(*p)?;
                let one = BigRational::one();
                Some((&p + &one) / (p + BigRational::from_integer((k + 1).into())))
            }
            DensitySpec::LogPower { alpha, .. } => {
                if alpha.fract() != 0.0 {
                    return None;
                }
                let n = alpha.to_usize()?;
                let base = num_bigint::BigInt::from(k + 1);
                Some(BigRational::new(1.into(), num_traits::pow(base, n)))
            }
            DensitySpec::Tabulated(_) => None,
        }
    }

    /// `∫ t^k σ(t) dt` in floating point.
    pub fn moment(&self, k: usize) -> Result<f64> {
        let kf = k as f64;
        match self {
            DensitySpec::Uniform => Ok(1.0 / (kf + 1.0)),
            DensitySpec::Power { p } => Ok((p + 1.0) / (kf + p + 1.0)),
            DensitySpec::LogPower { alpha, .. } => Ok((kf + 1.0).powf(-alpha)),
            DensitySpec::Tabulated(_) => {
                let est = self.integrate(|t, _| Complex64::new(t.powi(k as i32), 0.0), 1e-14)?;
                Ok(est.value.re)
            }
        }
    }

    /// `∫₀¹ g(t) σ(t) dt` where the integrand receives `(t, 1 - t)` with
    /// `1 - t` computed without cancellation.
    ///
    /// Bounded densities use adaptive Gauss–Kronrod in `1 - t`;
    /// `power(p < 0)` first substitutes `v = t^{p+1}`; `log_power` maps `u = log(1/t)` and
    /// uses the exp-sinh rule on `(0, ∞)`.
    pub fn integrate<G>(&self, mut g: G, abs_tol: f64) -> Result<Estimate>
    where
        G: FnMut(f64, f64) -> Complex64,
    {
        let opts = QuadOptions::absolute(abs_tol);
        // Bounded families integrate in `s = 1 - t` so nodes near the pole
        // at `t = 1` keep full relative precision in `1 - t`.
        match self {
            DensitySpec::Uniform => gauss_kronrod(|s| g(1.0 - s, s), 0.0, 1.0, &[], opts),
            DensitySpec::Power { p } if *p < 0.0 => {
                let inv = 1.0 / (p + 1.0);
                gauss_kronrod(
                    |s| {
                        let ln_t = (-s).ln_1p() * inv;
                        g(ln_t.exp(), -ln_t.exp_m1())
                    },
                    0.0,
                    1.0,
                    &[],
                    opts,
                )
            }
            DensitySpec::Power { p } => {
                let c = p + 1.0;
                gauss_kronrod(|s| g(1.0 - s, s) * (c * (1.0 - s).powf(*p)), 0.0, 1.0, &[], opts)
            }
            DensitySpec::LogPower { alpha, gamma } => {
                let ln_gamma = gamma.ln();
                let at_u = |g: &mut G, u: f64| g((-u).exp(), -(-u).exp_m1());
                let fast = exp_sinh(
                    |u, ln_u| {
                        let weight = (alpha * ln_u - u - ln_gamma).exp();
                        if weight == 0.0 {
                            return Complex64::new(0.0, 0.0);
                        }
                        at_u(&mut g, u) * weight
                    },
                    abs_tol,
                );
                match fast {
                    Err(Error::Quadrature { .. }) => {}
                    other => return other,
                }
                // The fixed exp-sinh nodes cannot resolve a near-pole (z close
                // to the cut); fall back to bisection. On u ∈ (0, 1] the map
                // u = v^(1/α) turns u^(α-1) du into dv/α; the tail u ≥ 1 is
                // mapped onto [0, 1) by u = 1 + x/(1-x).
                let inv = 1.0 / alpha;
                let head_scale = 1.0 / (alpha * gamma);
                let head = gauss_kronrod(
                    |v| {
                        let u = v.powf(inv);
                        at_u(&mut g, u) * ((-u).exp() * head_scale)
                    },
                    0.0,
                    1.0,
                    &[],
                    opts,
                )?;
                let tail = gauss_kronrod(
                    |x| {
                        let one_minus_x = 1.0 - x;
                        let u = 1.0 + x / one_minus_x;
                        let weight = ((alpha - 1.0) * u.ln() - u - ln_gamma).exp() / (one_minus_x * one_minus_x);
                        if weight == 0.0 || !weight.is_finite() {
                            return Complex64::new(0.0, 0.0);
                        }
                        at_u(&mut g, u) * weight
                    },
                    0.0,
                    1.0,
                    &[],
                    opts,
                )?;
                Ok(Estimate {
                    value: head.value + tail.value,
                    error: head.error + tail.error,
                    evaluations: head.evaluations + tail.evaluations,
                })
            }
            DensitySpec::Tabulated(tab) => {
                let scale = 1.0 / tab.mass;
                let bp: Vec<f64> = self.breakpoints().iter().rev().map(|t| 1.0 - t).collect();
                gauss_kronrod(|s| g(1.0 - s, s) * (tab.raw_value(1.0 - s) * scale), 0.0, 1.0, &bp, opts)
            }
        }
    }

    /// Text form used in `density` lines of measure files.
    pub fn to_text(&self) -> Result<String> {
        Ok(match self {
            DensitySpec::Uniform => "uniform".to_string(),
            DensitySpec::Power { p } => format!("power {p:?}"),
            DensitySpec::LogPower { alpha, .. } => format!("log_power {alpha:?}"),
            DensitySpec::Tabulated(tab) => match &tab.source {
                Some(path) => format!("tabulated {}", path.display()),
                None => {
                    return Err(Error::InvalidDensity(
                        "tabulated density without a source file cannot be serialized".into(),
                    ))
                }
            },
        })
    }
}

impl Density for DensitySpec {
    fn value(&self, t: f64) -> f64 {
        match self {
            DensitySpec::Uniform => 1.0,
            DensitySpec::Power { p } => (p + 1.0) * t.powf(*p),
            DensitySpec::LogPower { alpha, gamma } => (1.0 / t).ln().powf(alpha - 1.0) / gamma,
            DensitySpec::Tabulated(tab) => tab.raw_value(t) / tab.mass,
        }
    }
}

impl fmt::Display for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensitySpec::Tabulated(tab) => write!(f, "tabulated[{} samples]", tab.samples.len()),
            other => write!(f, "{}", other.to_text().unwrap_or_default()),
        }
    }
}

/// Parses a two-column `t,sigma` CSV; a non-numeric first line is taken as a
/// header.
pub fn parse_tabulated_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => return Err(Error::Parse { line: i + 1, msg: "expected two columns".into() }),
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(t), Ok(v)) => out.push((t, v)),
            _ if out.is_empty() && i == 0 => continue,
            _ => return Err(Error::Parse { line: i + 1, msg: format!("bad number in '{line}'") }),
        }
    }
    Ok(out)
}
