#![allow(dead_code)]

use momentkit::proofcore::{q_value, ProofPoint};
use rand::Rng;

/// `d/dκ Re q` at `κ = 0⁺` from forward differences at
/// `h ∈ {1e-4, 5e-5, 2.5e-5}`, Richardson-extrapolated twice.
pub fn forward_slope(p: &ProofPoint) -> f64 {
    let base = q_value(p).unwrap().re;
    let d = |h: f64| (q_value(&p.with_kappa(h).unwrap()).unwrap().re - base) / h;
    let (d1, d2, d3) = (d(1e-4), d(5e-5), d(2.5e-5));
    let (r1, r2) = (2.0 * d2 - d1, 2.0 * d3 - d2);
    (4.0 * r2 - r1) / 3.0
}

/// `|a - b| ≤ max(rel · |b|, abs)`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= (rel * b.abs()).max(abs)
}

/// Uniform point with `t₁ ≤ t₂ ≤ 0.99`, `y ∈ (0, 10]`, `τ ∈ [0, 1]`, `κ = 0`.
pub fn random_point<R: Rng>(rng: &mut R) -> ProofPoint {
    let y = 10.0 * (1.0 - rng.gen::<f64>());
    let (a, b) = (0.99 * rng.gen::<f64>(), 0.99 * rng.gen::<f64>());
    ProofPoint::new(0.0, y, rng.gen(), a.min(b), a.max(b)).unwrap()
}
