//! Coefficient sequences, the forward-difference operator and Hausdorff's
//! complete-monotonicity criterion `Δⁿ a_k ≥ 0`.
//!
//! Sequences are exact (`BigRational`) whenever the data is rational-valued;
//! the difference operator amplifies rounding by up to `2ⁿ`, so float
//! sequences are checked against an order-dependent tolerance.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_float, format_rational, looks_exact, parse_rational, rational_to_f64, Scalar};
use crate::stieltjes::Measure;

/// Default number of terms for generated sequences.
pub const DEFAULT_COUNT: usize = 40;
/// Default highest difference order checked.
pub const DEFAULT_MAX_ORDER: usize = 20;
/// Base of the float-mode tolerance `ε_n = base · 2ⁿ · max|a_k|`.
pub const FLOAT_TOLERANCE_BASE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

/// A finite coefficient sequence with no further invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum Series {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl AsRef<Series> for Series {
    fn as_ref(&self) -> &Series {
        self
    }
}

impl Series {
    pub fn len(&self) -> usize {
        match self {
            Series::Exact(v) => v.len(),
            Series::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self {
            Series::Exact(_) => ArithmeticMode::Exact,
            Series::Float(_) => ArithmeticMode::Float,
        }
    }

    pub fn get(&self, k: usize) -> Option<Scalar> {
        match self {
            Series::Exact(v) => v.get(k).cloned().map(Scalar::Exact),
            Series::Float(v) => v.get(k).copied().map(Scalar::Float),
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Series::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Series::Float(v) => v.clone(),
        }
    }

    pub fn to_float(&self) -> Series {
        Series::Float(self.to_f64_vec())
    }

    /// Largest absolute value of the terms.
    pub fn max_abs(&self) -> f64 {
        self.to_f64_vec().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Parses one scalar per line: `p/q` or integers are exact, anything
    /// else is a float. A single float line puts the whole sequence in float
    /// mode.
    pub fn parse(text: &str) -> Result<Series> {
        let mut tokens = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            tokens.push((i + 1, line));
        }
        if tokens.is_empty() {
            return Err(Error::Parse { line: 1, msg: "empty sequence".into() });
        }
        if tokens.iter().all(|(_, t)| looks_exact(t)) {
            let terms = tokens
                .iter()
                .map(|&(line, t)| {
                    parse_rational(t).ok_or_else(|| Error::Parse { line, msg: format!("bad rational '{t}'") })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Series::Exact(terms));
        }
        let terms = tokens
            .iter()
            .map(|&(line, t)| {
                let bad = || Error::Parse { line, msg: format!("bad number '{t}'") };
                if t.contains('/') {
                    parse_rational(t).map(|r| rational_to_f64(&r)).ok_or_else(bad)
                } else {
                    t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(bad)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::Float(terms))
    }

    /// One scalar per line; floats carry 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Series::Exact(v) => v.iter().for_each(|r| {
                let _ = writeln!(out, "{}", format_rational(r));
            }),
            Series::Float(v) => v.iter().for_each(|x| {
                let _ = writeln!(out, "{}", format_float(*x));
            }),
        }
        out
    }
}

/// A candidate Hausdorff moment sequence: non-empty, non-negative terms,
/// `a₀ = 1` (exactly in exact mode, within 1e-12 in float mode).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence(Series);

impl AsRef<Series> for MomentSequence {
    fn as_ref(&self) -> &Series {
        &self.0
    }
}

impl MomentSequence {
    pub fn new(series: Series) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::InvalidSequence("moment sequence needs at least one term".into()));
        }
        match &series {
            Series::Exact(v) => {
                if let Some(k) = v.iter().position(|x| x.is_negative()) {
                    return Err(Error::InvalidSequence(format!("term {k} is negative")));
                }
                if !v[0].is_one() {
                    return Err(Error::InvalidSequence(format!("a_0 = {} but must be 1", format_rational(&v[0]))));
                }
            }
            Series::Float(v) => {
                if let Some(k) = v.iter().position(|x| !(*x >= 0.0) || !x.is_finite()) {
                    return Err(Error::InvalidSequence(format!("term {k} is negative or not finite")));
                }
                if (v[0] - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidSequence(format!("a_0 = {} but must be 1", v[0])));
                }
            }
        }
        Ok(MomentSequence(series))
    }

    pub fn exact(terms: Vec<BigRational>) -> Result<Self> {
        Self::new(Series::Exact(terms))
    }

    pub fn float(terms: Vec<f64>) -> Result<Self> {
        Self::new(Series::Float(terms))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mode(&self) -> ArithmeticMode {
        self.0.mode()
    }

    pub fn into_series(self) -> Series {
        self.0
    }

    pub fn prefix(&self, count: usize) -> Result<Self> {
        if count == 0 || count > self.len() {
            return Err(Error::IndexOutOfRange { needed: count.saturating_sub(1), len: self.len() });
        }
        Ok(MomentSequence(match &self.0 {
            Series::Exact(v) => Series::Exact(v[..count].to_vec()),
            Series::Float(v) => Series::Float(v[..count].to_vec()),
        }))
    }

    /// Termwise product `(a_k b_k)`, the coefficients of a Hadamard product.
    pub fn termwise_product(&self, other: &MomentSequence) -> Result<Self> {
        let n = self.len().min(other.len());
        let series = match (&self.0, &other.0) {
            (Series::Exact(a), Series::Exact(b)) => Series::Exact((0..n).map(|k| &a[k] * &b[k]).collect()),
            (a, b) => {
                let (a, b) = (a.to_f64_vec(), b.to_f64_vec());
                Series::Float((0..n).map(|k| a[k] * b[k]).collect())
            }
        };
        Self::new(series)
    }
}

/// `Δⁿ a_k` via `Δⁿ a_k = Δⁿ⁻¹ a_k − Δⁿ⁻¹ a_{k+1}`.
pub fn forward_difference<S: AsRef<Series>>(seq: &S, n: usize, k: usize) -> Result<Scalar> {
    let seq = seq.as_ref();
    if k + n >= seq.len() {
        return Err(Error::IndexOutOfRange { needed: k + n, len: seq.len() });
    }
    Ok(match seq {
        Series::Exact(v) => {
            let mut row: Vec<BigRational> = v[k..=k + n].to_vec();
            for _ in 0..n {
                row = row.windows(2).map(|w| &w[0] - &w[1]).collect();
            }
            Scalar::Exact(row.swap_remove(0))
        }
        Series::Float(v) => {
            let mut row: Vec<f64> = v[k..=k + n].to_vec();
            for _ in 0..n {
                row = row.windows(2).map(|w| w[0] - w[1]).collect();
            }
            Scalar::Float(row[0])
        }
    })
}

/// Rows `Δ⁰ … Δ^{max_order}`; row `n` holds `Δⁿ a_k` for `k + n < len`.
pub fn difference_table<S: AsRef<Series>>(seq: &S, max_order: usize) -> Result<Vec<Series>> {
    let seq = seq.as_ref();
    if max_order >= seq.len() {
        return Err(Error::IndexOutOfRange { needed: max_order, len: seq.len() });
    }
    let mut rows = vec![seq.clone()];
    for _ in 0..max_order {
        let next = match rows.last().unwrap() {
            Series::Exact(v) => Series::Exact(v.windows(2).map(|w| &w[0] - &w[1]).collect()),
            Series::Float(v) => Series::Float(v.windows(2).map(|w| w[0] - w[1]).collect()),
        };
        rows.push(next);
    }
    Ok(rows)
}

/// Slack allowed below zero in the complete-monotonicity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CmTolerance {
    /// No slack; the only choice for exact sequences.
    Exact,
    Absolute(f64),
    /// `ε_n = base · 2ⁿ · max|a_k|`.
    OrderScaled { base: f64 },
}

impl CmTolerance {
    pub fn default_for(mode: ArithmeticMode) -> Self {
        match mode {
            ArithmeticMode::Exact => CmTolerance::Exact,
            ArithmeticMode::Float => CmTolerance::OrderScaled { base: FLOAT_TOLERANCE_BASE },
        }
    }

    fn at_order(&self, n: usize, max_abs: f64) -> f64 {
        match *self {
            CmTolerance::Exact => 0.0,
            CmTolerance::Absolute(t) => t,
            CmTolerance::OrderScaled { base } => base * 2f64.powi(n as i32) * max_abs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmReport {
    pub max_order_checked: usize,
    pub max_index_checked: usize,
    pub min_difference: Scalar,
    /// Lexicographically first `(n, k, Δⁿ a_k)` below tolerance.
    pub first_violation: Option<(usize, usize, Scalar)>,
    pub passed: bool,
}

/// Checks `Δⁿ a_k ≥ -ε_n` on the triangle `n ≤ max_order`, `k + n < len`.
pub fn is_completely_monotone<S: AsRef<Series>>(
    seq: &S,
    max_order: usize,
    tolerance: CmTolerance,
) -> Result<CmReport> {
    let seq = seq.as_ref();
    if seq.mode() == ArithmeticMode::Exact {
        match tolerance {
            CmTolerance::Exact => {}
            CmTolerance::Absolute(0.0) => {}
            _ => return Err(Error::InexactTolerance),
        }
    }
    let rows = difference_table(seq, max_order)?;
    let max_abs = seq.max_abs();
    let mut min_difference: Option<Scalar> = None;
    let mut first_violation = None;
    for (n, row) in rows.iter().enumerate() {
        let eps = tolerance.at_order(n, max_abs);
        match row {
            Series::Exact(v) => {
                for (k, d) in v.iter().enumerate() {
                    let smaller = match &min_difference {
                        Some(Scalar::Exact(m)) => d < m,
                        _ => true,
                    };
                    if smaller {
                        min_difference = Some(Scalar::Exact(d.clone()));
                    }
                    if first_violation.is_none() && d.is_negative() {
                        first_violation = Some((n, k, Scalar::Exact(d.clone())));
                    }
                }
            }
            Series::Float(v) => {
                for (k, &d) in v.iter().enumerate() {
                    let smaller = match &min_difference {
                        Some(Scalar::Float(m)) => d < *m,
                        _ => true,
                    };
                    if smaller {
                        min_difference = Some(Scalar::Float(d));
                    }
                    if first_violation.is_none() && d < -eps {
                        first_violation = Some((n, k, Scalar::Float(d)));
                    }
                }
            }
        }
    }
    Ok(CmReport {
        max_order_checked: max_order,
        max_index_checked: seq.len() - 1,
        min_difference: min_difference.expect("difference table is never empty"),
        passed: first_violation.is_none(),
        first_violation,
    })
}

/// Moments `∫ t^k dμ(t)` for `k < count`.
///
/// Exact when the atoms are exact and the density (if it carries mass) has
/// closed-form rational moments; otherwise floats, with quadrature for
/// tabulated densities.
pub fn moments_of(mu: &Measure, count: usize) -> Result<MomentSequence> {
    if count == 0 {
        return Err(Error::InvalidSequence("count must be at least 1".into()));
    }
    if let Some(series) = exact_moments(mu, count) {
        return MomentSequence::new(series);
    }
    let mut terms = vec![0.0f64; count];
    for a in mu.atoms() {
        let mut p = 1.0;
        for term in terms.iter_mut() {
            *term += a.w * p;
            p *= a.t;
        }
    }
    if let Some(d) = mu.density() {
        let w = mu.density_weight();
        if w > 0.0 {
            for (k, term) in terms.iter_mut().enumerate() {
                *term += w * d.moment(k)?;
            }
        }
    }
    MomentSequence::new(Series::Float(terms))
}

fn exact_moments(mu: &Measure, count: usize) -> Option<Series> {
    let atoms = mu.exact_atoms()?;
    let mut terms = vec![BigRational::zero(); count];
    for (t, w) in atoms {
        let mut p = w.clone();
        for term in terms.iter_mut() {
            *term += &p;
            p *= t;
        }
    }
    if let Some(d) = mu.density() {
        let w = mu.exact_density_weight()?;
        if !w.is_zero() {
            for (k, term) in terms.iter_mut().enumerate() {
                *term += &w * d.exact_moment(k)?;
            }
        }
    }
    Some(Series::Exact(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stieltjes::DensitySpec;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn harmonic(len: usize) -> Series {
        Series::Exact((0..len).map(|k| q(1, k as i64 + 1)).collect())
    }

    #[test]
    fn forward_difference_examples() {
        let ones = Series::Exact(vec![BigRational::one(); 4]);
        assert_eq!(forward_difference(&ones, 1, 0).unwrap(), Scalar::Exact(BigRational::zero()));
        assert_eq!(forward_difference(&harmonic(3), 1, 0).unwrap(), Scalar::Exact(q(1, 2)));
        assert!(matches!(
            forward_difference(&harmonic(3), 2, 1),
            Err(Error::IndexOutOfRange { needed: 3, len: 3 })
        ));
    }

    #[test]
    fn beta_identity_small_cases() {
        // Δⁿ a_k = n! k! / (n+k+1)! for a_k = 1/(k+1)
        let seq = harmonic(8);
        assert_eq!(forward_difference(&seq, 2, 1).unwrap(), Scalar::Exact(q(2, 24)));
        assert_eq!(forward_difference(&seq, 3, 0).unwrap(), Scalar::Exact(q(6, 24)));
    }

    #[test]
    fn cm_examples() {
        let r = is_completely_monotone(&harmonic(31), 30, CmTolerance::Exact).unwrap();
        assert!(r.passed);
        assert!(!r.min_difference.is_negative());

        let half = Series::Float((0..21).map(|k| 0.5f64.powi(k)).collect());
        let r = is_completely_monotone(&half, 20, CmTolerance::Absolute(0.0)).unwrap();
        assert!(r.passed);

        let bad = Series::Float(vec![1.0, 0.5, 0.9]);
        let r = is_completely_monotone(&bad, 1, CmTolerance::Absolute(0.0)).unwrap();
        assert!(!r.passed);
        let (n, k, v) = r.first_violation.unwrap();
        assert_eq!((n, k), (1, 1));
        assert!((v.to_f64() + 0.4).abs() < 1e-15);
        assert_eq!(r.max_index_checked, 2);
    }

    #[test]
    fn exact_mode_requires_zero_tolerance() {
        let err = is_completely_monotone(&harmonic(4), 2, CmTolerance::Absolute(1e-9));
        assert!(matches!(err, Err(Error::InexactTolerance)));
        assert!(is_completely_monotone(&harmonic(4), 4, CmTolerance::Exact).is_err());
    }

    #[test]
    fn order_scaled_tolerance_absorbs_rounding() {
        let seq = Series::Float((0..30).map(|k| 1.0 / (k as f64 + 1.0)).collect());
        let r = is_completely_monotone(&seq, 25, CmTolerance::default_for(ArithmeticMode::Float)).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn moments_of_examples() {
        let one = moments_of(&Measure::point_mass(1.0).unwrap(), 4).unwrap();
        assert_eq!(one.as_ref(), &Series::Exact(vec![BigRational::one(); 4]));
        let uni = moments_of(&Measure::from_density(DensitySpec::Uniform), 3).unwrap();
        assert_eq!(uni.as_ref(), &Series::Exact(vec![q(1, 1), q(1, 2), q(1, 3)]));
        let lp = moments_of(&Measure::from_density(DensitySpec::log_power(2.0).unwrap()), 3).unwrap();
        assert_eq!(lp.as_ref(), &Series::Exact(vec![q(1, 1), q(1, 4), q(1, 9)]));
        let half = moments_of(&Measure::from_density(DensitySpec::log_power(0.5).unwrap()), 3).unwrap();
        assert_eq!(half.mode(), ArithmeticMode::Float);
        assert!((half.as_ref().to_f64_vec()[2] - 3f64.powf(-0.5)).abs() < 1e-15);
        assert!(moments_of(&Measure::point_mass(0.5).unwrap(), 0).is_err());
    }

    #[test]
    fn mixed_measure_moments() {
        let mu = Measure::from_exact_atoms(vec![(q(1, 2), q(1, 2))], Some(DensitySpec::Uniform)).unwrap();
        let m = moments_of(&mu, 3).unwrap();
        assert_eq!(m.as_ref(), &Series::Exact(vec![q(1, 1), q(1, 2), q(1, 8) + q(1, 6)]));
    }

    #[test]
    fn moment_sequence_invariants() {
        assert!(MomentSequence::float(vec![]).is_err());
        assert!(MomentSequence::float(vec![1.0, -0.1]).is_err());
        assert!(MomentSequence::exact(vec![q(1, 2)]).is_err());
        assert!(MomentSequence::float(vec![1.0 + 1e-13, 0.2]).is_ok());
    }

    #[test]
    fn text_format() {
        let s = Series::parse("1\n1/2\n# note\n\n1/3\n").unwrap();
        assert_eq!(s, harmonic(3));
        assert_eq!(Series::parse(&s.to_text()).unwrap(), s);
        let f = Series::parse("1\n0.5\n1/4\n").unwrap();
        assert_eq!(f, Series::Float(vec![1.0, 0.5, 0.25]));
        let x = Series::Float(vec![0.1, 1.0 / 3.0]);
        assert_eq!(Series::parse(&x.to_text()).unwrap(), x);
        assert!(Series::parse("").is_err());
        assert!(Series::parse("1\nfoo\n").is_err());
    }
}
