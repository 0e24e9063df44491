use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::measure::Measure;
use super::SlitPoint;
use crate::error::{Error, Result};
use crate::moments::{moments_of, MomentSequence, Series};
use crate::quad::Estimate;

/// Internal quadrature target for direct evaluation (contract: 1e-12).
pub const EVAL_TOLERANCE: f64 = 1e-13;
/// Quadrature target for composition integrals (contract: 1e-10).
pub const COMPOSITION_TOLERANCE: f64 = 1e-11;
/// Error target of [`series_eval`].
pub const SERIES_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Kind {
    Measure(Measure),
    // Hadamard product of measure-backed factors; evaluated inside-out, the
    // last factor being the outermost composition.
    Product(Vec<Measure>),
}

/// A generating function `F(z) = ∫ dμ(t) / (1 - t z)`, either backed by a
/// measure or by a Hadamard product of such.
#[derive(Debug, Clone)]
pub struct StieltjesFunction {
    kind: Kind,
    taylor: OnceLock<MomentSequence>,
}

impl StieltjesFunction {
    pub fn from_measure(measure: Measure) -> Self {
        StieltjesFunction { kind: Kind::Measure(measure), taylor: OnceLock::new() }
    }

    /// `None` for compositional Hadamard products.
    pub fn measure(&self) -> Option<&Measure> {
        match &self.kind {
            Kind::Measure(m) => Some(m),
            Kind::Product(_) => None,
        }
    }

    /// Measure factors whose Hadamard product is this function.
    pub fn factors(&self) -> Vec<Measure> {
        match &self.kind {
            Kind::Measure(m) => vec![m.clone()],
            Kind::Product(fs) => fs.clone(),
        }
    }

    pub fn eval(&self, z: SlitPoint) -> Result<Complex64> {
        Ok(self.eval_estimate(z)?.value)
    }

    /// Value with the attained quadrature error estimate.
    pub fn eval_estimate(&self, z: SlitPoint) -> Result<Estimate> {
        self.eval_raw(z.value())
    }

    pub(crate) fn eval_raw(&self, z: Complex64) -> Result<Estimate> {
        match &self.kind {
            Kind::Measure(m) => eval_measure(m, z),
            Kind::Product(fs) => eval_product(fs, z),
        }
    }

    /// First `count` Taylor coefficients (the moments of the measure, or
    /// their termwise product for a Hadamard product).
    pub fn taylor(&self, count: usize) -> Result<MomentSequence> {
        if let Some(cached) = self.taylor.get() {
            if cached.len() >= count {
                return cached.prefix(count);
            }
        }
        let seq = match &self.kind {
            Kind::Measure(m) => moments_of(m, count)?,
            Kind::Product(fs) => {
                let mut acc = moments_of(&fs[0], count)?;
                for f in &fs[1..] {
                    acc = acc.termwise_product(&moments_of(f, count)?)?;
                }
                acc
            }
        };
        let _ = self.taylor.set(seq.clone());
        Ok(seq)
    }
}

fn eval_measure(m: &Measure, z: Complex64) -> Result<Estimate> {
    if z == Complex64::zero() {
        return Ok(Estimate { value: Complex64::one(), error: 0.0, evaluations: 0 });
    }
    let one_minus_z = 1.0 - z;
    let kernel = |t: f64, one_minus_t: f64| (one_minus_t + t * one_minus_z).inv();
    let mut value: Complex64 = m.atoms().iter().map(|a| kernel(a.t, 1.0 - a.t) * a.w).sum();
    let mut error = 0.0;
    let mut evaluations = m.atoms().len();
    if let (Some(d), w) = (m.density(), m.density_weight()) {
        if w > 0.0 {
            let est = d.integrate(kernel, EVAL_TOLERANCE)?;
            value += est.value * w;
            error += est.error * w;
            evaluations += est.evaluations;
        }
    }
    Ok(Estimate { value, error, evaluations })
}

fn eval_product(factors: &[Measure], z: Complex64) -> Result<Estimate> {
    match factors {
        [] => unreachable!("products have at least one factor"),
        [single] => eval_measure(single, z),
        [inner @ .., outer] => compose(|w| eval_product(inner, w), outer, z),
    }
}

/// `∫ inner(t z) dμ_outer(t)`.
fn compose<F>(mut inner: F, outer: &Measure, z: Complex64) -> Result<Estimate>
where
    F: FnMut(Complex64) -> Result<Estimate>,
{
    if z == Complex64::zero() {
        return Ok(Estimate { value: Complex64::one(), error: 0.0, evaluations: 0 });
    }
    let mut value = Complex64::zero();
    let mut error = 0.0;
    let mut evaluations = 0;
    for a in outer.atoms() {
        if a.w == 0.0 {
            continue;
        }
        let est = inner(z * a.t)?;
        value += est.value * a.w;
        error += est.error * a.w;
        evaluations += est.evaluations;
    }
    if let (Some(d), w) = (outer.density(), outer.density_weight()) {
        if w > 0.0 {
            let mut failure = None;
            let mut inner_error = 0.0f64;
            let est = d.integrate(
                |t, _| match inner(z * t) {
                    Ok(e) => {
                        inner_error = inner_error.max(e.error);
                        evaluations += e.evaluations;
                        e.value
                    }
                    Err(err) => {
                        failure.get_or_insert(err);
                        Complex64::zero()
                    }
                },
                COMPOSITION_TOLERANCE,
            );
            if let Some(err) = failure {
                return Err(err);
            }
            let est = est?;
            value += est.value * w;
            error += (est.error + inner_error) * w;
        }
    }
    Ok(Estimate { value, error, evaluations })
}

fn is_unit_point_mass(m: &Measure) -> bool {
    m.is_atomic() && m.atoms().iter().all(|a| a.w == 0.0 || a.t == 1.0)
}

/// Pushforward of the product measure under `(s, t) ↦ s t` for two atomic
/// measures.
fn atom_product(a: &Measure, b: &Measure) -> Result<Measure> {
    if let (Some(ea), Some(eb)) = (a.exact_atoms(), b.exact_atoms()) {
        let mut atoms: Vec<(BigRational, BigRational)> = Vec::with_capacity(ea.len() * eb.len());
        for (s, w) in ea {
            for (t, v) in eb {
                atoms.push((s * t, w * v));
            }
        }
        atoms.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(BigRational, BigRational)> = Vec::with_capacity(atoms.len());
        for (t, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == t => last.1 += w,
                _ => merged.push((t, w)),
            }
        }
        return Measure::from_exact_atoms(merged, None);
    }
    let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(a.atoms().len() * b.atoms().len());
    for x in a.atoms() {
        for y in b.atoms() {
            atoms.push((x.t * y.t, x.w * y.w));
        }
    }
    atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (t, w) in atoms {
        match merged.last_mut() {
            Some(last) if last.0 == t => last.1 += w,
            _ => merged.push((t, w)),
        }
    }
    Measure::from_atoms(merged)
}

/// Hadamard product `(f * g)(z) = Σ a_k b_k z^k`.
///
/// Atomic factors are multiplied exactly into a single atomic measure; any
/// factor with a density stays a separate factor and is evaluated by
/// composition.
pub fn hadamard(f: &StieltjesFunction, g: &StieltjesFunction) -> StieltjesFunction {
    let mut atomic: Option<Measure> = None;
    let mut dense = Vec::new();
    for m in f.factors().into_iter().chain(g.factors()) {
        if m.is_atomic() {
            atomic = Some(match atomic {
                None => m,
                Some(acc) => atom_product(&acc, &m).expect("product of probability atoms is a probability measure"),
            });
        } else {
            dense.push(m);
        }
    }
    if let Some(a) = atomic {
        if dense.is_empty() || !is_unit_point_mass(&a) {
            dense.push(a);
        }
    }
    let kind = if dense.len() == 1 { Kind::Measure(dense.pop().unwrap()) } else { Kind::Product(dense) };
    StieltjesFunction { kind, taylor: OnceLock::new() }
}

/// `(f * g)(z) = ∫ f(t z) dμ_g(t)`: the composition integral over the
/// measure of `g`. Valid on the whole slit plane since `t z` stays in it.
pub fn hadamard_eval(f: &StieltjesFunction, g: &StieltjesFunction, z: SlitPoint) -> Result<Complex64> {
    let z = z.value();
    let est = match (g.measure(), f.measure()) {
        (Some(mg), _) => compose(|w| f.eval_raw(w), mg, z)?,
        (None, Some(mf)) => compose(|w| g.eval_raw(w), mf, z)?,
        (None, None) => hadamard(f, g).eval_raw(z)?,
    };
    Ok(est.value)
}

/// Partial sum with a certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub error_bound: f64,
    pub terms: usize,
}

/// Sums `Σ a_k z^k` for `|z| ≤ 0.5`.
///
/// The tail after `N` terms is bounded by `a_{N-1} |z|^N / (1 - |z|)`, which
/// holds for non-increasing coefficients (every completely monotone
/// sequence). Fails when that bound cannot reach `1e-12` within
/// `min(budget, len)` terms.
pub fn series_eval<S: AsRef<Series>>(seq: &S, z: Complex64, budget: usize) -> Result<SeriesValue> {
    let r = z.norm();
    if !(r <= 0.5) {
        return Err(Error::Domain(format!("series_eval needs |z| <= 0.5, got {r}")));
    }
    let coeffs = seq.as_ref().to_f64_vec();
    let n_max = budget.min(coeffs.len());
    let mut sum = Complex64::zero();
    let mut power = Complex64::one();
    let mut bound = f64::INFINITY;
    for (k, &a) in coeffs.iter().take(n_max).enumerate() {
        sum += power * a;
        power *= z;
        bound = a.abs() * r.powi(k as i32 + 1) / (1.0 - r);
        if bound <= SERIES_TOLERANCE {
            return Ok(SeriesValue { value: sum, error_bound: bound, terms: k + 1 });
        }
    }
    Err(Error::InsufficientPrecision { bound, target: SERIES_TOLERANCE })
}

/// First `count` coefficients of `num / den` by power-series long division.
/// Exact when both inputs are exact.
pub fn quotient_taylor<A, B>(num: &A, den: &B, count: usize) -> Result<Series>
where
    A: AsRef<Series>,
    B: AsRef<Series>,
{
    let (num, den) = (num.as_ref(), den.as_ref());
    let needed = num.len().min(den.len());
    if needed < count {
        return Err(Error::IndexOutOfRange { needed: count - 1, len: needed });
    }
    match (num, den) {
        (Series::Exact(n), Series::Exact(d)) => {
            if d[0].is_zero() {
                return Err(Error::DivisionByZero);
            }
            let mut out: Vec<BigRational> = Vec::with_capacity(count);
            for k in 0..count {
                let mut acc = n[k].clone();
                for j in 1..=k {
                    acc -= &d[j] * &out[k - j];
                }
                out.push(acc / &d[0]);
            }
            Ok(Series::Exact(out))
        }
        _ => {
            let n = num.to_f64_vec();
            let d = den.to_f64_vec();
            if d[0] == 0.0 {
                return Err(Error::DivisionByZero);
            }
            let mut out: Vec<f64> = Vec::with_capacity(count);
            for k in 0..count {
                let acc = (1..=k).fold(n[k], |acc, j| acc - d[j] * out[k - j]);
                out.push(acc / d[0]);
            }
            Ok(Series::Float(out))
        }
    }
}
