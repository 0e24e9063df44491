//! Closed-form quantities behind the half-plane inequality
//! `Re f(γ+iy₁)/f(γ+iy₂) ≥ 1` and the quotient-membership criterion.
//!
//! For two-atom functions `ρ/(1-t₁z) + (1-ρ)/(1-t₂z)` evaluated at
//! `z = 1 + iy₁` and `z = 1 + iy₂`, put `κ = (1-ρ)/ρ` and `τ = y₁/y₂`. The
//! ratio becomes [`q_value`]; as `κ` runs over `[0, ∞]` it traces a circular
//! arc from [`v_value`]`(t₁)` to `v(t₂)`, and the sign of [`re_w_prime_zero`]
//! keeps the arc inside `Re w ≥ 1`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::rational_from_f64;
use crate::stieltjes::{Density, DensitySpec, Measure, SlitPoint, StieltjesFunction};
use crate::verify::{GridSpec, ReportBuilder, VerificationReport};

/// Parameters `(κ, y, τ, t₁, t₂)` of the two-atom ratio.
///
/// `κ ∈ [0, ∞]`; `κ = ∞` is the arc endpoint `v(t₂)`. Construction
/// normalizes to `t₁ ≤ t₂` by swapping the atoms, which maps `κ ↦ 1/κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofPoint {
    pub kappa: f64,
    pub y: f64,
    pub tau: f64,
    pub t1: f64,
    pub t2: f64,
}

fn unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} = {x} must be positive and finite")));
    }
    Ok(())
}

impl ProofPoint {
    pub fn new(kappa: f64, y: f64, tau: f64, t1: f64, t2: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::Domain(format!("kappa = {kappa} must be >= 0")));
        }
        positive("y", y)?;
        unit("tau", tau)?;
        unit("t1", t1)?;
        unit("t2", t2)?;
        if t1 <= t2 {
            Ok(ProofPoint { kappa, y, tau, t1, t2 })
        } else {
            Ok(ProofPoint { kappa: kappa.recip(), y, tau, t1: t2, t2: t1 })
        }
    }

    /// Same point with a different `κ`.
    pub fn with_kappa(self, kappa: f64) -> Result<Self> {
        Self::new(kappa, self.y, self.tau, self.t1, self.t2)
    }
}

/// `1 - t - i s t`, the shared denominator shape.
fn affine(t: f64, s: f64) -> Complex64 {
    Complex64::new(1.0 - t, -s * t)
}

fn checked_inv(a: Complex64, what: &str) -> Result<Complex64> {
    if a.re == 0.0 && a.im == 0.0 {
        return Err(Error::Degenerate(format!("{what} vanishes")));
    }
    Ok(a.inv())
}

/// `q(κ,y,τ,t₁,t₂) = (1/(1-t₁-iτyt₁) + κ/(1-t₂-iτyt₂)) / (1/(1-t₁-iyt₁) + κ/(1-t₂-iyt₂))`.
pub fn q_value(p: &ProofPoint) -> Result<Complex64> {
    if p.kappa.is_infinite() {
        return q_at_infinity(p);
    }
    let mut num = checked_inv(affine(p.t1, p.tau * p.y), "1 - t1 - i tau y t1")?;
    let mut den = checked_inv(affine(p.t1, p.y), "1 - t1 - i y t1")?;
    if p.kappa != 0.0 {
        num += checked_inv(affine(p.t2, p.tau * p.y), "1 - t2 - i tau y t2")? * p.kappa;
        den += checked_inv(affine(p.t2, p.y), "1 - t2 - i y t2")? * p.kappa;
    }
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::Degenerate("denominator of q vanishes".into()));
    }
    Ok(num / den)
}

/// `lim_{κ→∞} q`: the ratio of the `κ`-coefficients, equal to `v(t₂)`.
pub fn q_at_infinity(p: &ProofPoint) -> Result<Complex64> {
    let num = checked_inv(affine(p.t2, p.tau * p.y), "1 - t2 - i tau y t2")?;
    let den = checked_inv(affine(p.t2, p.y), "1 - t2 - i y t2")?;
    Ok(num / den)
}

/// `v(t) = (1 - t - iyt) / (1 - t - iτyt)`.
pub fn v_value(t: f64, y: f64, tau: f64) -> Result<Complex64> {
    unit("t", t)?;
    positive("y", y)?;
    unit("tau", tau)?;
    let den = affine(t, tau * y);
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::Degenerate(format!("v({t}) has a vanishing denominator (tau = {tau})")));
    }
    Ok(affine(t, y) / den)
}

/// `s(τ) = t₁t₂* + t₂t₁* - τ(t₂ - t₁)` with `t* = 1 - t`.
pub fn s_tau(p: &ProofPoint) -> f64 {
    let (s1, s2) = (1.0 - p.t1, 1.0 - p.t2);
    p.t1 * s2 + p.t2 * s1 - p.tau * (p.t2 - p.t1)
}

/// `Z = t₁*t₂*(t₂-t₁) + (t₁t₂* + t₂t₁*) t₁*t₂* τ + t₁t₂y²τ s(τ)`.
pub fn z_term(p: &ProofPoint) -> f64 {
    let (s1, s2) = (1.0 - p.t1, 1.0 - p.t2);
    let d = p.t2 - p.t1;
    s1 * s2 * d + (p.t1 * s2 + p.t2 * s1) * s1 * s2 * p.tau + p.t1 * p.t2 * p.y * p.y * p.tau * s_tau(p)
}

/// `N = ((1-t₁)² + (t₁yτ)²)((1-t₂)² + (t₂yτ)²)((1-t₂)² + (t₂y)²)`.
pub fn n_term(p: &ProofPoint) -> f64 {
    let sq = |t: f64, s: f64| (1.0 - t).powi(2) + (t * s).powi(2);
    sq(p.t1, p.y * p.tau) * sq(p.t2, p.y * p.tau) * sq(p.t2, p.y)
}

/// `Re w'(0) = (1-τ)(t₂-t₁) y² Z / N`, the `κ`-derivative of `Re q` at 0.
pub fn re_w_prime_zero(p: &ProofPoint) -> Result<f64> {
    let n = n_term(p);
    if n == 0.0 {
        return Err(Error::Degenerate("N vanishes".into()));
    }
    Ok((1.0 - p.tau) * (p.t2 - p.t1) * p.y * p.y * z_term(p) / n)
}

/// `ρ/(1 - t₁z) + (1 - ρ)/(1 - t₂z)`; zero-weight atoms are dropped.
pub fn two_atom_function(rho: f64, t1: f64, t2: f64) -> Result<StieltjesFunction> {
    unit("rho", rho)?;
    unit("t1", t1)?;
    unit("t2", t2)?;
    let exact = |x: f64| rational_from_f64(x).expect("finite");
    let r = exact(rho);
    let rest = BigRational::one() - &r;
    let atoms = if t1 == t2 {
        vec![(exact(t1), BigRational::one())]
    } else {
        [(exact(t1), r), (exact(t2), rest)]
            .into_iter()
            .filter(|(_, w)| *w != BigRational::from_integer(0.into()))
            .collect()
    };
    Ok(StieltjesFunction::from_measure(Measure::from_exact_atoms(atoms, None)?))
}

/// Range of `λ(f) = f(γ+iy₁)/f(γ+iy₂)` over two-atom functions on a
/// `(rho, t1, t2)` grid. Margin is `Re λ - 1`.
pub fn extreme_range_scan(
    y1: f64,
    y2: f64,
    gamma: f64,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<VerificationReport> {
    positive("y1", y1)?;
    if !(y1 <= y2) || !y2.is_finite() {
        return Err(Error::Domain(format!("need 0 < y1 <= y2, got y1={y1}, y2={y2}")));
    }
    let z1 = SlitPoint::from_parts(gamma, y1)?;
    let z2 = SlitPoint::from_parts(gamma, y2)?;
    let rhos = grid.require("rho")?.points();
    let t1s = grid.require("t1")?.points();
    let t2s = grid.require("t2")?.points();
    let mut report = ReportBuilder::new("lemma1-scan", grid.clone(), &["rho", "t1", "t2"], tolerance);
    if gamma > 1.0 {
        report.note(format!("gamma = {gamma} > 1: the inequality is not claimed here"));
    }
    for &rho in &rhos {
        for &t1 in &t1s {
            for &t2 in &t2s {
                let f = two_atom_function(rho, t1, t2)?;
                let at = |e: Error| e.at(&[("rho", rho), ("t1", t1), ("t2", t2)]);
                let ratio = f.eval(z1).map_err(at)? / f.eval(z2).map_err(at)?;
                report.record(&[rho, t1, t2], ratio.re - 1.0);
            }
        }
    }
    Ok(report.finish())
}

/// The two-atom function `1/(1+2ε) + (2ε/(1+2ε)) · 1/(1-z)`.
pub fn counterexample_function(eps: f64) -> Result<StieltjesFunction> {
    positive("eps", eps)?;
    let w1 = 2.0 * eps / (1.0 + 2.0 * eps);
    Ok(StieltjesFunction::from_measure(Measure::from_atoms(vec![(0.0, 1.0 - w1), (1.0, w1)])?))
}

/// `Re f(1+ε+iε) / f(1+ε+i)` for [`counterexample_function`]; equals
/// `2ε/(1+ε²)`, which is below 1 for every `ε ≠ 1`.
pub fn counterexample_value(eps: f64) -> Result<f64> {
    let f = counterexample_function(eps)?;
    let gamma = 1.0 + eps;
    let a = f.eval(SlitPoint::from_parts(gamma, eps)?)?;
    let b = f.eval(SlitPoint::from_parts(gamma, 1.0)?)?;
    Ok((a / b).re)
}

/// `σ*(t) = σ(t/x)/x` for `t ≤ x`, zero for `t > x`: the density of
/// `f(xz)` as a function of `z`.
pub fn sigma_star<D: Density + ?Sized>(sigma: &D, x: f64, t: f64) -> f64 {
    if t <= x {
        sigma.value(t / x) / x
    } else {
        0.0
    }
}

/// [`sigma_star`] as a [`Density`].
#[derive(Debug, Clone)]
pub struct SigmaStar<'a> {
    pub sigma: &'a DensitySpec,
    pub x: f64,
}

impl Density for SigmaStar<'_> {
    fn value(&self, t: f64) -> f64 {
        sigma_star(self.sigma, self.x, t)
    }
}

/// Checks `φ(t)ψ(s) ≥ φ(s)ψ(t)` for all grid pairs `s < t` on the `t` axis.
/// Margins are relative to `max(φ(t)ψ(s), φ(s)ψ(t))`.
pub fn lemma2_check(
    phi: &dyn Density,
    psi: &dyn Density,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<VerificationReport> {
    let ts = grid.require("t")?.points();
    if ts.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::InvalidGrid("lemma2 grid must lie inside (0, 1)".into()));
    }
    let phis: Vec<f64> = ts.iter().map(|&t| phi.value(t)).collect();
    let psis: Vec<f64> = ts.iter().map(|&t| psi.value(t)).collect();
    let mut report = ReportBuilder::new("lemma2", grid.clone(), &["s", "t"], tolerance);
    for j in 0..ts.len() {
        for i in 0..j {
            let lhs = phis[j] * psis[i];
            let rhs = phis[i] * psis[j];
            let scale = lhs.abs().max(rhs.abs());
            let margin = if scale > 0.0 { (lhs - rhs) / scale } else { 0.0 };
            report.record(&[ts[i], ts[j]], margin);
        }
    }
    Ok(report.finish())
}

/// Samples `h(t) = tσ'(t)/σ(t)` and checks it is non-increasing; margins
/// `h(t_j) - h(t_{j+1})` are scaled by `max(1, |h|)`.
pub fn log_slope_decreasing_check(
    sigma: &DensitySpec,
    grid: &GridSpec,
    tolerance: f64,
) -> Result<VerificationReport> {
    let ts = grid.require("t")?.points();
    if ts.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
        return Err(Error::InvalidGrid("log-slope grid must lie inside (0, 1)".into()));
    }
    let hs = ts.iter().map(|&t| sigma.log_slope(t)).collect::<Result<Vec<_>>>()?;
    let mut report = ReportBuilder::new("log-slope-decreasing", grid.clone(), &["t1", "t2"], tolerance);
    for j in 0..hs.len() - 1 {
        let scale = 1f64.max(hs[j].abs()).max(hs[j + 1].abs());
        report.record(&[ts[j], ts[j + 1]], (hs[j] - hs[j + 1]) / scale);
    }
    Ok(report.finish())
}
