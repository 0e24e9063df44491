//! Hausdorff moment sequences, their Stieltjes-type generating functions
//! `F(z) = ∫ dμ(t) / (1 - t z)` on `[0, 1]`, and polylogarithms.
//!
//! The crate also carries the closed-form quantities that show up when
//! proving half-plane inequalities for this class of functions, together with
//! a grid/property harness ([`verify`]) that produces finite numerical
//! evidence for each claim.
//!
//! ```
//! use momentkit::{polylog, SlitPoint};
//! use num_complex::Complex64;
//!
//! let z = SlitPoint::new(Complex64::new(-1.0, 0.0)).unwrap();
//! let li1 = polylog::li(1.0, z).unwrap();
//! assert!((li1.value.re + std::f64::consts::LN_2).abs() < 1e-12);
//! ```

pub mod error;
pub mod moments;
pub mod polylog;
pub mod proofcore;
pub mod quad;
pub mod scalar;
pub mod stieltjes;
pub mod verify;

pub use error::{Error, Result};
pub use moments::{
    difference_table, forward_difference, is_completely_monotone, moments_of, ArithmeticMode,
    CmReport, CmTolerance, MomentSequence, Series,
};
pub use scalar::Scalar;
pub use stieltjes::{
    hadamard, hadamard_eval, quotient_taylor, series_eval, Density, DensitySpec, Measure,
    SeriesValue, SlitPoint, StieltjesFunction,
};
pub use verify::{GridSpec, VerificationReport};
