use std::f64::consts::PI;

use proptest::prelude::*;
use vvlab::conorms::suites::{
    div_curl_suite, embedding_suite, recorded_constants, within_tolerance, SUITE_SAMPLES, SUITE_SEED,
};
use vvlab::conorms::{hco_norm, hco_norm_vec, norm_report, wcoinf_norm, MAX_ORDER};
use vvlab::geometry::{apply_z, build_grid, Axis, ScalarField, VectorField};
use vvlab::initial::InitialData;
use vvlab::solver::Mode;
use vvlab::state::ThermoParams;

fn sample(n: usize, k: f64) -> ScalarField {
    let grid = build_grid(2, n, n).unwrap();
    ScalarField::from_fn(grid, move |x| {
        (2.0 * PI * x[0]).sin() * (k * x[2]).cos() + 0.3 * x[2] * x[2]
    })
}

#[test]
fn norms_grow_with_order() {
    let f = sample(32, 2.3);
    let v: Vec<f64> = (0..=MAX_ORDER).map(|m| hco_norm(&f, m).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] >= w[0]), "{v:?}");
    assert!(wcoinf_norm(&f, 0).unwrap() <= wcoinf_norm(&f, 1).unwrap());
    assert!(wcoinf_norm(&f, 1).unwrap() <= wcoinf_norm(&f, 2).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_of_two_scaling_is_exact(e in -20i32..20, m in 0usize..=MAX_ORDER, k in 0.5f64..4.0) {
        let f = sample(12, k);
        let c = 2f64.powi(e);
        prop_assert_eq!(hco_norm(&f.scale(c), m).unwrap(), c * hco_norm(&f, m).unwrap());
        prop_assert_eq!(wcoinf_norm(&f.scale(-c), 2).unwrap(), c * wcoinf_norm(&f, 2).unwrap());
    }
}

#[test]
fn vector_norm_sums_components() {
    let f = sample(16, 1.0);
    let g = sample(16, 3.0);
    let v = VectorField::new(vec![f.clone(), g.clone()]);
    for m in 0..=2 {
        let a = hco_norm(&f, m).unwrap();
        let b = hco_norm(&g, m).unwrap();
        assert!((hco_norm_vec(&v, m).unwrap() - (a * a + b * b).sqrt()).abs() < 1e-13);
    }
}

#[test]
fn conormal_field_on_sine_profile_is_second_order() {
    // Z (sin pi z) = z (1 - z) pi cos pi z
    let mut errs = Vec::new();
    for n in [16, 32, 64] {
        let grid = build_grid(2, 8, n).unwrap();
        let f = ScalarField::from_fn(grid, |x| (PI * x[2]).sin());
        let exact = ScalarField::from_interior_fn(grid, |x| x[2] * (1.0 - x[2]) * PI * (PI * x[2]).cos());
        errs.push(apply_z(&f, Axis::Z).sub(&exact).max_abs());
        let mut zero_ghosts = f.clone();
        zero_ghosts.set_ghost_layers(0);
        errs.push(apply_z(&zero_ghosts, Axis::Z).sub(&exact).max_abs());
    }
    for pair in [(0, 2), (2, 4), (1, 3), (3, 5)] {
        let order = (errs[pair.0] / errs[pair.1]).log2();
        assert!((order - 2.0).abs() < 0.2, "{errs:?}");
    }
}

#[test]
fn weighted_norm_of_linear_profile() {
    // |z|^2 + |z(1-z)|^2 integrated over (0, 1) = 1/3 + 1/30
    let grid = build_grid(2, 8, 128).unwrap();
    let f = ScalarField::from_fn(grid, |x| x[2]);
    let got = hco_norm(&f, 1).unwrap();
    let expect = (1.0 / 3.0 + 1.0 / 30.0f64).sqrt();
    assert!((got - expect).abs() < 1e-4, "{got} {expect}");
}

#[test]
fn report_is_finite_on_shear_bump() {
    let grid = build_grid(3, 12, 12).unwrap();
    let mut s = InitialData::ShearBump {
        rho_amp: 0.2,
        u_amp: 1.0,
    }
    .state(grid, 2.0, Mode::NavierStokes)
    .unwrap();
    vvlab::boundary::fill_ghosts(&mut s, &vvlab::boundary::SlipLaw::uniform(3, 1.0));
    let r = norm_report(&s, &ThermoParams::default(), 3).unwrap();
    assert!(r.get("Nm_partial").is_none());
    assert!(r.get("Nm_spatial").unwrap() > 1.0);
    assert!(r.get("H2").unwrap() >= r.get("H1").unwrap());
}

#[test]
fn inequality_constants_are_stable_under_refinement() {
    let rec = recorded_constants().unwrap();
    assert_eq!((rec.samples, rec.seed), (SUITE_SAMPLES, SUITE_SEED));
    for suite in [
        embedding_suite(64, SUITE_SAMPLES, SUITE_SEED).unwrap(),
        div_curl_suite(64, SUITE_SAMPLES, SUITE_SEED).unwrap(),
    ] {
        let recorded = rec.get(suite.name).unwrap();
        assert!(
            within_tolerance(recorded, suite.constant()),
            "{}: recorded {recorded} at n = {}, observed {} at n = 64",
            suite.name,
            rec.grid,
            suite.constant()
        );
    }
}
