mod common;

use momentkit::proofcore::{
    counterexample_value, extreme_range_scan, lemma2_check, n_term, q_at_infinity, q_value, re_w_prime_zero, s_tau,
    sigma_star, v_value, z_term, ProofPoint, SigmaStar,
};
use momentkit::quad::{gauss_kronrod_real, QuadOptions};
use momentkit::verify::Axis;
use momentkit::{Density, DensitySpec, GridSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = ProofPoint> {
    (0.0..50.0f64, 1e-3..10.0f64, 0.0..=1.0f64, 0.0..0.99f64, 0.0..0.99f64)
        .prop_map(|(k, y, tau, a, b)| ProofPoint::new(k, y, tau, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn proof_terms_are_nonnegative(p in point()) {
        prop_assert!(z_term(&p) >= 0.0);
        prop_assert!(n_term(&p) > 0.0);
    }

    #[test]
    fn s_decreases_in_tau(p in point(), a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let at = |tau| s_tau(&ProofPoint { tau, ..p });
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(at(lo) >= at(hi) - 1e-15);
        prop_assert!(at(1.0) >= 0.0);
    }

    #[test]
    fn arc_endpoints(p in point()) {
        prop_assert!((q_value(&p.with_kappa(0.0).unwrap()).unwrap() - v_value(p.t1, p.y, p.tau).unwrap()).norm() < 1e-12);
        let inf = q_at_infinity(&p).unwrap();
        prop_assert!((inf - v_value(p.t2, p.y, p.tau).unwrap()).norm() < 1e-12);
        let far = q_value(&p.with_kappa(1e12).unwrap()).unwrap();
        prop_assert!((far - inf).norm() < 1e-6 * (1.0 + inf.norm()));
    }

    #[test]
    fn real_part_chain(p in point()) {
        let at_zero = q_value(&p.with_kappa(0.0).unwrap()).unwrap().re;
        let at_inf = q_at_infinity(&p).unwrap().re;
        prop_assert!(at_zero >= 1.0 - 1e-12);
        prop_assert!(at_inf >= at_zero - 1e-12);
        prop_assert!(q_value(&p).unwrap().re >= 1.0 - 1e-12);
    }

    #[test]
    fn counterexample_formula(eps in 1e-3..=2.0f64) {
        let v = counterexample_value(eps).unwrap();
        prop_assert!((v - 2.0 * eps / (1.0 + eps * eps)).abs() <= 1e-12);
        if (eps - 1.0).abs() > 1e-6 {
            prop_assert!(v < 1.0);
        }
    }
}

#[test]
fn derivative_identity_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let p = common::random_point(&mut rng);
        let closed = re_w_prime_zero(&p).unwrap();
        let oracle = common::forward_slope(&p);
        assert!(common::close(closed, oracle, 1e-6, 1e-10), "{p:?}: {closed} vs {oracle}");
    }
}

#[test]
fn derivative_vanishes_at_degenerate_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let p = common::random_point(&mut rng);
        for q in [ProofPoint { tau: 1.0, ..p }, ProofPoint { t2: p.t1, ..p }] {
            assert_eq!(re_w_prime_zero(&q).unwrap(), 0.0);
            // Rounding in q itself is amplified by 1/h, so scale by |q|.
            let scale = q_value(&q).unwrap().norm().max(1.0);
            let slope = common::forward_slope(&q);
            assert!(slope.abs() <= 1e-10 * scale, "{q:?}: {slope}");
        }
    }
}

#[test]
fn sigma_star_preserves_mass() {
    let opts = QuadOptions::absolute(1e-13);
    for sigma in [DensitySpec::Uniform, DensitySpec::power(2.0).unwrap(), DensitySpec::log_power(2.0).unwrap()] {
        let mass = gauss_kronrod_real(|t| sigma.value(t), 0.0, 1.0, &[], opts).unwrap().0;
        for x in [0.25, 0.5, 0.9] {
            let star = gauss_kronrod_real(|t| sigma_star(&sigma, x, t), 0.0, 1.0, &[x], opts).unwrap().0;
            assert!((star - mass).abs() <= 1e-10, "{sigma} x={x}: {star} vs {mass}");
        }
    }
}

#[test]
fn lemma2_for_sigma_and_its_rescaling() {
    let grid = GridSpec::default_t();
    for sigma in [DensitySpec::Uniform, DensitySpec::power(1.5).unwrap(), DensitySpec::log_power(3.0).unwrap()] {
        for x in [0.3, 0.5, 0.8] {
            let star = SigmaStar { sigma: &sigma, x };
            let r = lemma2_check(&sigma, &star, &grid, 1e-12).unwrap();
            assert!(r.passed, "{sigma} x={x}: {}", r.summary());
        }
    }
}

#[test]
fn two_atom_scan_boundaries() {
    let grid = GridSpec::default_two_atom();
    let flat = extreme_range_scan(0.7, 0.7, 1.0, &grid, 1e-9).unwrap();
    assert!(flat.passed);
    assert!(flat.min_margin.abs() < 1e-15);
    let small = GridSpec::new(vec![
        Axis::linear("rho", 0.0, 1.0, 8).unwrap(),
        Axis::linear("t1", 0.0, 1.0, 8).unwrap(),
        Axis::linear("t2", 0.0, 1.0, 8).unwrap(),
    ])
    .unwrap();
    for gamma in [-2.0, 0.0, 1.0] {
        assert!(extreme_range_scan(0.2, 3.0, gamma, &small, 1e-9).unwrap().passed, "gamma={gamma}");
    }
    let r = extreme_range_scan(0.5, 1.0, 1.5, &small, 1e-9).unwrap();
    assert!(!r.passed);
    assert!(!r.notes.is_empty());
    assert!(extreme_range_scan(1.0, 0.5, 1.0, &small, 1e-9).is_err());
}
