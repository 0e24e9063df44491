//! Grid harness turning each half-plane / monotonicity / quotient claim into
//! a [`VerificationReport`].

mod grid;
mod report;

pub use grid::{Axis, GridSpec, Spacing};
pub use report::{VerificationReport, Violation};
pub(crate) use report::ReportBuilder;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::moments::{difference_table, ArithmeticMode, MomentSequence, Series, FLOAT_TOLERANCE_BASE};
use crate::proofcore::{counterexample_value, extreme_range_scan, log_slope_decreasing_check};
use crate::scalar::{rational_from_f64, rational_to_f64};
use crate::stieltjes::{hadamard_eval, quotient_taylor, DensitySpec, Measure, SlitPoint, StieltjesFunction};

/// Environment variable that overrides every default tolerance.
pub const TOLERANCE_ENV: &str = "MOMENTKIT_TOL";

/// Default values of `γ` for half-plane scans.
pub const DEFAULT_GAMMAS: [f64; 5] = [-2.0, -0.5, 0.0, 0.5, 1.0];

/// Step in `log y` for the log-log slope.
const SLOPE_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub theorem1: f64,
    pub corollary1: f64,
    pub theorem2: f64,
    pub theorem3: f64,
    /// `base` in `ε_n = base · 2ⁿ · max|c_k|` for float CM checks.
    pub cm_base: f64,
    pub scan: f64,
    pub lemma2: f64,
    pub gate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            theorem1: 1e-9,
            corollary1: 1e-10,
            theorem2: 1e-9,
            theorem3: 1e-8,
            cm_base: FLOAT_TOLERANCE_BASE,
            scan: 1e-9,
            lemma2: 1e-12,
            gate: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Tolerances {
            theorem1: tol,
            corollary1: tol,
            theorem2: tol,
            theorem3: tol,
            cm_base: tol,
            scan: tol,
            lemma2: tol,
            gate: tol,
        }
    }

    /// Defaults, or [`Tolerances::uniform`] when `MOMENTKIT_TOL` is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Err(_) => Ok(Self::default()),
            Ok(raw) => match raw.trim().parse::<f64>() {
                Ok(t) if t >= 0.0 && t.is_finite() => Ok(Self::uniform(t)),
                _ => Err(Error::Domain(format!("{TOLERANCE_ENV}={raw} is not a non-negative decimal"))),
            },
        }
    }
}

/// The two reports produced for the Hadamard-product inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Report {
    /// `Re (f*g)(iy)/f(iy) - 1`.
    pub ratio: VerificationReport,
    /// `|(f*g)(iy)| - |f(iy)|`.
    pub magnitude: VerificationReport,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.ratio.passed && self.magnitude.passed
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Verifier {
    pub tol: Tolerances,
}

fn y_points(grid: &GridSpec) -> Result<Vec<f64>> {
    let ys = grid.require("y")?.points();
    if ys[0] <= 0.0 {
        return Err(Error::InvalidGrid("y grid must be positive".into()));
    }
    Ok(ys)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma <= 1.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be <= 1")));
    }
    Ok(())
}

fn density_function(sigma: &DensitySpec) -> StieltjesFunction {
    StieltjesFunction::from_measure(Measure::from_density(sigma.clone()))
}

fn rational_power(base: u64, exponent: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(base).pow(exponent))
}

fn as_integer_order(a: f64) -> Option<u32> {
    (a.fract() == 0.0 && (0.0..=64.0).contains(&a)).then_some(a as u32)
}

impl Verifier {
    pub fn new(tol: Tolerances) -> Self {
        Verifier { tol }
    }

    /// `Re f(γ+iy₁)/f(γ+iy₂) ≥ 1` over every `γ` and grid pair `y₁ ≤ y₂`.
    pub fn theorem1(&self, f: &StieltjesFunction, gammas: &[f64], y_grid: &GridSpec) -> Result<VerificationReport> {
        let ys = y_points(y_grid)?;
        let mut report = ReportBuilder::new("thm1", y_grid.clone(), &["gamma", "y1", "y2"], self.tol.theorem1);
        for &gamma in gammas {
            check_gamma(gamma)?;
            let values = ys
                .iter()
                .map(|&y| {
                    SlitPoint::from_parts(gamma, y)
                        .and_then(|z| f.eval(z))
                        .map_err(|e| e.at(&[("gamma", gamma), ("y", y)]))
                })
                .collect::<Result<Vec<_>>>()?;
            for i in 0..ys.len() {
                for j in i..ys.len() {
                    let margin = if i == j { 0.0 } else { (values[i] / values[j]).re - 1.0 };
                    report.record(&[gamma, ys[i], ys[j]], margin);
                }
            }
        }
        Ok(report.finish())
    }

    /// `|f(γ+iy)|` non-increasing along the grid.
    pub fn corollary1(&self, f: &StieltjesFunction, gamma: f64, y_grid: &GridSpec) -> Result<VerificationReport> {
        check_gamma(gamma)?;
        let ys = y_points(y_grid)?;
        let mags = ys
            .iter()
            .map(|&y| {
                SlitPoint::from_parts(gamma, y)
                    .and_then(|z| f.eval(z))
                    .map(|v| v.norm())
                    .map_err(|e| e.at(&[("gamma", gamma), ("y", y)]))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut report = ReportBuilder::new("cor1", y_grid.clone(), &["gamma", "y1", "y2"], self.tol.corollary1);
        for j in 0..ys.len() - 1 {
            report.record(&[gamma, ys[j], ys[j + 1]], mags[j] - mags[j + 1]);
        }
        Ok(report.finish())
    }

    /// `Re (f*g)(iy)/f(iy) ≥ 1`, together with `|(f*g)(iy)| ≥ |f(iy)|`.
    pub fn theorem2(&self, f: &StieltjesFunction, g: &StieltjesFunction, y_grid: &GridSpec) -> Result<Theorem2Report> {
        let ys = y_points(y_grid)?;
        let mut ratio = ReportBuilder::new("thm2", y_grid.clone(), &["y"], self.tol.theorem2);
        let mut magnitude = ReportBuilder::new("thm2-magnitude", y_grid.clone(), &["y"], self.tol.theorem2);
        for &y in &ys {
            let at = |e: Error| e.at(&[("y", y)]);
            let z = SlitPoint::from_parts(0.0, y).map_err(at)?;
            let fg = hadamard_eval(f, g, z).map_err(at)?;
            let fv = f.eval(z).map_err(at)?;
            ratio.record(&[y], (fg / fv).re - 1.0);
            magnitude.record(&[y], fg.norm() - fv.norm());
        }
        Ok(Theorem2Report { ratio: ratio.finish(), magnitude: magnitude.finish() })
    }

    fn gate(&self, sigma: &DensitySpec) -> Result<()> {
        let gate = log_slope_decreasing_check(sigma, &GridSpec::default_t(), self.tol.gate)?;
        if gate.passed {
            Ok(())
        } else {
            Err(Error::HypothesisGate(Box::new(gate)))
        }
    }

    /// `y ↦ d log|f(iy)| / d log y` non-increasing for the function with
    /// density `σ`, after checking that `tσ'(t)/σ(t)` is non-increasing.
    pub fn theorem3(&self, sigma: &DensitySpec, y_grid: &GridSpec) -> Result<VerificationReport> {
        self.gate(sigma)?;
        let ys = y_points(y_grid)?;
        let f = density_function(sigma);
        let log_mag = |ly: f64| -> Result<f64> {
            let y = ly.exp();
            let v = f.eval(SlitPoint::from_parts(0.0, y)?).map_err(|e| e.at(&[("y", y)]))?;
            Ok(v.norm().ln())
        };
        let mut slopes = Vec::with_capacity(ys.len());
        for &y in &ys {
            let ly = y.ln();
            let diff = |h: f64| -> Result<f64> { Ok((log_mag(ly + h)? - log_mag(ly - h)?) / (2.0 * h)) };
            let coarse = diff(SLOPE_STEP)?;
            let fine = diff(SLOPE_STEP / 2.0)?;
            slopes.push((4.0 * fine - coarse) / 3.0);
        }
        let mut report = ReportBuilder::new("thm3", y_grid.clone(), &["y1", "y2"], self.tol.theorem3);
        if let DensitySpec::Tabulated(_) = sigma {
            report.note("tabulated density normalized to unit mass before use");
        }
        report.add_evaluations(4 * ys.len());
        for j in 0..ys.len() - 1 {
            report.record(&[ys[j], ys[j + 1]], slopes[j] - slopes[j + 1]);
        }
        Ok(report.finish())
    }

    /// Finite-order complete monotonicity of the Taylor coefficients of
    /// `f(z)/f(xz)`, after the same hypothesis gate as [`Verifier::theorem3`].
    ///
    /// `2·order + 1` coefficients are checked up to difference order `order`.
    pub fn theorem4(&self, sigma: &DensitySpec, x: f64, order: usize, mode: ArithmeticMode) -> Result<VerificationReport> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::Domain(format!("x = {x} must lie in (0, 1]")));
        }
        self.gate(sigma)?;
        let count = 2 * order + 1;
        let f = density_function(sigma);
        let (num, den) = match mode {
            ArithmeticMode::Exact => {
                let a = (0..count)
                    .map(|k| sigma.exact_moment(k))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::NotExact(format!("{sigma} has no rational moments")))?;
                let xr = rational_from_f64(x).expect("finite");
                let mut p = BigRational::one();
                let scaled = a
                    .iter()
                    .map(|ak| {
                        let v = ak * &p;
                        p *= &xr;
                        v
                    })
                    .collect();
                (Series::Exact(a), Series::Exact(scaled))
            }
            ArithmeticMode::Float => {
                let a = f.taylor(count)?.into_series().to_f64_vec();
                let scaled = a.iter().enumerate().map(|(k, ak)| ak * x.powi(k as i32)).collect();
                (Series::Float(a), Series::Float(scaled))
            }
        };
        let quotient = quotient_taylor(&num, &den, count)?;
        self.cm_report("thm4", &quotient, order, &[("x", x)])
    }

    /// Finite-order complete monotonicity of the coefficients of
    /// `Li_α/Li_β`, i.e. of `(k+1)^{-α}` divided by `(k+1)^{-β}`.
    /// Exact when both orders are integers.
    pub fn polylog_quotient(&self, alpha: f64, beta: f64, order: usize) -> Result<VerificationReport> {
        if !(0.0 <= alpha && alpha <= beta && beta.is_finite()) {
            return Err(Error::Domain(format!("need 0 <= alpha <= beta, got alpha={alpha}, beta={beta}")));
        }
        let count = 2 * order + 1;
        let (num, den) = match (as_integer_order(alpha), as_integer_order(beta)) {
            (Some(a), Some(b)) => {
                let seq = |e: u32| {
                    Series::Exact((1..=count as u64).map(|k| rational_power(k, e).recip()).collect())
                };
                (seq(a), seq(b))
            }
            _ => {
                let seq = |e: f64| Series::Float((1..=count).map(|k| (k as f64).powf(-e)).collect());
                (seq(alpha), seq(beta))
            }
        };
        let quotient = quotient_taylor(&num, &den, count)?;
        self.cm_report("liquot", &quotient, order, &[("alpha", alpha), ("beta", beta)])
    }

    fn cm_report(&self, claim: &str, quotient: &Series, order: usize, fixed: &[(&str, f64)]) -> Result<VerificationReport> {
        if quotient.to_f64_vec()[0] != 1.0 {
            return Err(Error::InvalidSequence(format!("{claim}: quotient does not start at 1")));
        }
        MomentSequence::new(quotient.clone()).map_err(|e| e.at(fixed))?;
        let n_axis = Axis::linear("n", 0.0, order.max(1) as f64, order.max(1) + 1)?;
        let k_axis = Axis::linear("k", 0.0, (quotient.len() - 1) as f64, quotient.len())?;
        let grid = GridSpec::new(vec![n_axis, k_axis])?;
        let mut names: Vec<&str> = fixed.iter().map(|(n, _)| *n).collect();
        names.extend(["n", "k"]);
        let mut report = ReportBuilder::new(claim, grid, &names, 0.0);
        let max_abs = quotient.max_abs();
        for (n, row) in difference_table(quotient, order)?.iter().enumerate() {
            let eps = self.tol.cm_base * 2f64.powi(n as i32) * max_abs;
            let margins: Vec<f64> = match row {
                Series::Exact(v) => v
                    .iter()
                    .map(|d| {
                        let m = rational_to_f64(d);
                        if d.is_negative() { m.min(-f64::MIN_POSITIVE) } else { m.max(0.0) }
                    })
                    .collect(),
                Series::Float(v) => v.iter().map(|d| d + eps).collect(),
            };
            for (k, m) in margins.into_iter().enumerate() {
                let mut params: Vec<f64> = fixed.iter().map(|(_, v)| *v).collect();
                params.extend([n as f64, k as f64]);
                report.record(&params, m);
            }
        }
        if quotient.mode() == ArithmeticMode::Float {
            report.note(format!("float differences checked against {:e}·2^n·max|c_k|", self.tol.cm_base));
        }
        Ok(report.finish())
    }

    /// Confirms `Re f(1+ε+iε)/f(1+ε+i) < 1` for the two-atom counterexample
    /// at each `ε ≠ 1` (margin `1 - value`, strict), and notes what the
    /// two-atom scan finds at `γ = 1.5`.
    pub fn counterexample(&self, eps_list: &[f64]) -> Result<VerificationReport> {
        let axis = Axis::linear("eps", 0.0, 1.0, 2)?;
        let mut report = ReportBuilder::new("counterexample", GridSpec::single(axis), &["eps", "value"], 0.0).strict();
        for &eps in eps_list {
            let value = counterexample_value(eps).map_err(|e| e.at(&[("eps", eps)]))?;
            if eps == 1.0 {
                report.note("eps = 1 gives value 1 exactly and is skipped");
                continue;
            }
            report.record(&[eps, value], 1.0 - value);
        }
        let scan = extreme_range_scan(0.5, 1.0, 1.5, &GridSpec::default_two_atom(), self.tol.scan)?;
        report.note(format!(
            "two-atom scan at gamma=1.5, (y1,y2)=(0.5,1): {} violations, min Re-1 = {:e}",
            scan.violations.len(),
            scan.min_margin
        ));
        Ok(report.finish())
    }
}

/// `|f(γ+iy)|` and `arg f(γ+iy)` along a `y` grid.
pub fn magnitude_curve(f: &StieltjesFunction, gamma: f64, y_grid: &GridSpec) -> Result<Vec<(f64, f64, f64)>> {
    y_points(y_grid)?
        .into_iter()
        .map(|y| {
            let v: Complex64 = SlitPoint::from_parts(gamma, y)
                .and_then(|z| f.eval(z))
                .map_err(|e| e.at(&[("gamma", gamma), ("y", y)]))?;
            Ok((y, v.norm(), v.arg()))
        })
        .collect()
}
