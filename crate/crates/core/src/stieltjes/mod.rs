//! Probability measures on `[0, 1]` and their generating functions
//! `F(z) = ∫ dμ(t) / (1 - t z)` on the slit plane `ℂ \ [1, ∞)`.

mod density;
mod function;
mod measure;

use std::fmt;

use num_complex::Complex64;

pub use density::{parse_tabulated_csv, Density, DensitySpec, Tabulated};
pub use function::{
    hadamard, hadamard_eval, quotient_taylor, series_eval, SeriesValue, StieltjesFunction,
    COMPOSITION_TOLERANCE, EVAL_TOLERANCE, SERIES_TOLERANCE,
};
pub use measure::{Atom, Measure, MASS_TOLERANCE};

use crate::error::{Error, Result};

/// Minimum distance from the cut `[1, ∞)` at which evaluation is allowed.
pub const SLIT_GUARD: f64 = 1e-8;

/// A point of the slit plane at least [`SLIT_GUARD`] away from `[1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitPoint(Complex64);

impl SlitPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain(format!("non-finite point {z}")));
        }
        let distance = distance_to_cut(z);
        if distance < SLIT_GUARD {
            return Err(Error::SlitViolation { re: z.re, im: z.im, distance });
        }
        Ok(SlitPoint(z))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn conj(self) -> Self {
        SlitPoint(self.0.conj())
    }
}

impl fmt::Display for SlitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Euclidean distance from `z` to the ray `[1, ∞)`.
pub fn distance_to_cut(z: Complex64) -> f64 {
    if z.re >= 1.0 {
        z.im.abs()
    } else {
        (z - 1.0).norm()
    }
}
