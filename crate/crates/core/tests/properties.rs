use momentkit::moments::ArithmeticMode;
use momentkit::polylog::{g_alpha, li, li_integral, li_series};
use momentkit::verify::{Axis, Verifier};
use momentkit::{
    hadamard, hadamard_eval, is_completely_monotone, moments_of, series_eval, CmTolerance, DensitySpec, GridSpec,
    Measure, SlitPoint, StieltjesFunction,
};
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn density() -> impl Strategy<Value = DensitySpec> {
    prop_oneof![
        Just(DensitySpec::Uniform),
        (0.0..4.0f64).prop_map(|p| DensitySpec::power(p).unwrap()),
        (-0.9..0.0f64).prop_map(|p| DensitySpec::power(p).unwrap()),
        (0.3..4.0f64).prop_map(|a| DensitySpec::log_power(a).unwrap()),
    ]
}

fn measure() -> impl Strategy<Value = Measure> {
    let atoms = prop::collection::vec((0.0..=1.0f64, 0.01..1.0f64), 0..3);
    (atoms, prop::option::of(density()), 0.0..0.9f64).prop_map(|(raw, d, atom_share)| {
        let total: f64 = raw.iter().map(|a| a.1).sum();
        match d {
            Some(d) if !raw.is_empty() => {
                let atoms = raw.iter().map(|&(t, w)| (t, w / total * atom_share)).collect();
                Measure::mixed(atoms, d).unwrap()
            }
            Some(d) => Measure::from_density(d),
            None if raw.is_empty() => Measure::point_mass(0.5).unwrap(),
            None => {
                let mut atoms: Vec<(f64, f64)> = raw.iter().map(|&(t, w)| (t, w / total)).collect();
                let head: f64 = atoms[1..].iter().map(|a| a.1).sum();
                atoms[0].1 = 1.0 - head;
                Measure::from_atoms(atoms).unwrap()
            }
        }
    })
}

/// Measures with rational moments: rational atoms with an optional uniform part.
fn exact_measure() -> impl Strategy<Value = Measure> {
    let atoms = prop::collection::vec((0i64..=12, 1i64..=4), 1..3);
    (atoms, any::<bool>()).prop_map(|(raw, with_density)| {
        let scale: i64 = raw.iter().map(|a| a.1).sum::<i64>() * if with_density { 2 } else { 1 };
        let atoms = raw.iter().map(|&(t, w)| (BigRational::new(t.into(), 12.into()), BigRational::new(w.into(), scale.into()))).collect();
        Measure::from_exact_atoms(atoms, with_density.then_some(DensitySpec::Uniform)).unwrap()
    })
}

fn slit_point() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("away from the cut", |&(x, y)| x < 1.0 || y.abs() > 1e-3)
        .prop_map(|(x, y)| Complex64::new(x, y))
}

fn sf(m: Measure) -> StieltjesFunction {
    StieltjesFunction::from_measure(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pick_property(m in measure(), x in -3.0..3.0f64, y in 0.01..5.0f64) {
        let away = m.has_mass_away_from_zero();
        let v = sf(m).eval(SlitPoint::from_parts(x, y).unwrap()).unwrap();
        if away {
            prop_assert!(v.im > 0.0, "{v}");
        } else {
            prop_assert!(v.im >= 0.0);
        }
    }

    #[test]
    fn conjugate_symmetry(m in measure(), z in slit_point()) {
        let f = sf(m);
        let z = SlitPoint::new(z).unwrap();
        let a = f.eval(z.conj()).unwrap();
        let b = f.eval(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
    }

    #[test]
    fn series_matches_integral(m in measure(), r in 0.0..=0.5f64, theta in 0.0..std::f64::consts::TAU) {
        let f = sf(m);
        let z = Complex64::from_polar(r, theta);
        let direct = f.eval(SlitPoint::new(z).unwrap()).unwrap();
        let series = series_eval(&f.taylor(60).unwrap(), z, 60).unwrap();
        prop_assert!((direct - series.value).norm() <= 1e-10, "{direct} vs {}", series.value);
    }

    #[test]
    fn moments_are_completely_monotone(m in exact_measure()) {
        let seq = moments_of(&m, 20).unwrap();
        prop_assert_eq!(seq.mode(), ArithmeticMode::Exact);
        prop_assert!(is_completely_monotone(&seq, 19, CmTolerance::Exact).unwrap().passed);
    }

    #[test]
    fn hadamard_commutes_and_associates(a in exact_measure(), b in exact_measure(), c in exact_measure()) {
        let (f, g, h) = (sf(a), sf(b), sf(c));
        let fg = hadamard(&f, &g).taylor(20).unwrap();
        let gf = hadamard(&g, &f).taylor(20).unwrap();
        prop_assert_eq!(fg.mode(), ArithmeticMode::Exact);
        prop_assert_eq!(&fg, &gf);
        let left = hadamard(&hadamard(&f, &g), &h).taylor(20).unwrap();
        let right = hadamard(&f, &hadamard(&g, &h)).taylor(20).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn hadamard_does_not_shrink_on_imaginary_axis(a in measure(), b in measure(), y in 0.05..20.0f64) {
        let (f, g) = (sf(a), sf(b));
        let z = SlitPoint::from_parts(0.0, y).unwrap();
        let fg = hadamard_eval(&f, &g, z).unwrap();
        let fv = f.eval(z).unwrap();
        prop_assert!(fg.norm() >= fv.norm() - 1e-10, "{} < {}", fg.norm(), fv.norm());
        prop_assert!((fg / fv).re >= 1.0 - 1e-9);
    }

    #[test]
    fn polylog_branches_agree(alpha in prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.2..5.0f64],
                              r in 0.4..=0.5f64, theta in 0.0..std::f64::consts::TAU) {
        let z = Complex64::from_polar(r, theta);
        let s = li_series(alpha, z).unwrap().value;
        let i = li_integral(alpha, SlitPoint::new(z).unwrap()).unwrap().value;
        prop_assert!((s - i).norm() <= 1e-10, "alpha={alpha} z={z}: {s} vs {i}");
    }

    #[test]
    fn polylog_conjugate_symmetry(alpha in 0.0..4.0f64, z in slit_point()) {
        let z = SlitPoint::new(z).unwrap();
        let a = li(alpha, z.conj()).unwrap().value;
        let b = li(alpha, z).unwrap().value.conj();
        prop_assert!((a - b).norm() <= 1e-11 * (1.0 + b.norm()));
    }

    #[test]
    fn polylog_ordering_on_imaginary_axis(alpha in 0.0..3.0f64, step in 0.05..2.0f64, y in 0.05..20.0f64) {
        let z = SlitPoint::from_parts(0.0, y).unwrap();
        let lo = li(alpha, z).unwrap().value.norm();
        let hi = li(alpha + step, z).unwrap().value.norm();
        prop_assert!(lo <= hi + 1e-11);
    }
}

#[test]
fn g_alpha_magnitude_decreases_in_y() {
    let grid = GridSpec::single(Axis::geometric("y", 0.05, 20.0, 40).unwrap());
    let v = Verifier::default();
    for alpha in [0.5, 1.0, 2.0, 3.5] {
        let g = g_alpha(alpha).unwrap();
        for gamma in [-2.0, 0.0, 0.5, 1.0] {
            let r = v.corollary1(&g, gamma, &grid).unwrap();
            assert!(r.passed, "alpha={alpha} gamma={gamma}: {}", r.summary());
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let v = Verifier::default();
    let g2 = g_alpha(2.0).unwrap();
    let grid = GridSpec::single(Axis::geometric("y", 0.1, 10.0, 20).unwrap());
    let a = v.theorem1(&g2, &[-0.5, 1.0], &grid).unwrap();
    let b = v.theorem1(&g2, &[-0.5, 1.0], &grid).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_csv(), b.to_csv());
}

#[test]
fn eval_at_origin_is_one() {
    for m in [Measure::point_mass(0.7).unwrap(), Measure::from_density(DensitySpec::log_power(0.5).unwrap())] {
        assert_eq!(sf(m).eval(SlitPoint::from_parts(0.0, 0.0).unwrap()).unwrap(), Complex64::new(1.0, 0.0));
    }
}
