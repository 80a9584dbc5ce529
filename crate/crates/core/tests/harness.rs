use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use vvlab::conorms::norm_report;
use vvlab::error::Error;
use vvlab::geometry::{build_grid, ScalarField, VectorField};
use vvlab::harness::{
    fit_rates, gap_errors, restrict, run_sweep, uniform_bound_report, Channel, GapErrors, SweepCase, SweepPlan,
    SweepPoint, SweepResults,
};
use vvlab::initial::InitialData;
use vvlab::oracle::{MmsForcing, ManufacturedCase};
use vvlab::solver::{Mode, RunStats, SolverConfig};
use vvlab::boundary::{fill_ghosts, SlipLaw};
use vvlab::state::{FlowState, ThermoParams};

fn triple(e: f64) -> GapErrors {
    GapErrors {
        l2_rho: 0.6 * e,
        l2_u: 0.8 * e,
        h1_u: e,
        linf_u: e,
    }
}

#[test]
fn synthetic_power_law_fits_exactly() {
    let eps = [1e-2, 1e-3, 1e-4];
    let errs: Vec<GapErrors> = eps.iter().map(|&e| triple(e)).collect();
    let r = fit_rates(SweepCase::FlatSpecial, &eps, &errs).unwrap();
    for f in &r.fits {
        assert!((f.slope - 1.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.pass);
    }
    assert_eq!(r.get(Channel::H1).unwrap().target, 0.75);
}

#[test]
fn flat_errors_fail_every_target() {
    let eps = [4e-2, 2e-2, 1e-2];
    let errs = vec![triple(0.3); 3];
    for case in [SweepCase::FlatSpecial, SweepCase::FlatGeneral] {
        let r = fit_rates(case, &eps, &errs).unwrap();
        assert_eq!(r.fits.len(), 3);
        assert!(r.fits.iter().all(|f| f.slope.abs() < 1e-12 && !f.pass));
    }
}

#[test]
fn zero_error_channel_is_skipped() {
    let eps = [4e-2, 2e-2, 1e-2];
    let mut errs: Vec<GapErrors> = eps.iter().map(|&e| triple(e)).collect();
    errs[1].linf_u = 0.0;
    let r = fit_rates(SweepCase::FlatSpecial, &eps, &errs).unwrap();
    assert!(r.get(Channel::Linf).is_none());
    assert_eq!(r.notes.len(), 1);
    assert!(r.notes[0].starts_with("Linf"));
    assert!(fit_rates(SweepCase::FlatSpecial, &eps[..2], &errs[..2]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fits_ignore_point_order(
        pts in prop::collection::vec((1e-4f64..1.0, 1e-6f64..1.0), 3..8),
        seed in any::<u64>(),
    ) {
        let eps: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let errs: Vec<GapErrors> = pts.iter().map(|p| triple(p.1)).collect();
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        let mut s = seed;
        for i in (1..idx.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            idx.swap(i, (s >> 33) as usize % (i + 1));
        }
        let eps2: Vec<f64> = idx.iter().map(|&i| eps[i]).collect();
        let errs2: Vec<GapErrors> = idx.iter().map(|&i| errs[i]).collect();
        let a = fit_rates(SweepCase::FlatSpecial, &eps, &errs).unwrap();
        let b = fit_rates(SweepCase::FlatSpecial, &eps2, &errs2).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn trig_state(dim: usize, ny: usize, nz: usize) -> FlowState {
    let grid = build_grid(dim, ny, nz).unwrap();
    let f = |x: [f64; 3]| {
        1.0 + 0.2 * (2.0 * PI * x[0]).cos() * (1.0 + x[2] - x[2].powi(3))
            + 0.1 * (6.0 * PI * x[1] + 0.3).sin() * x[2] * x[2]
    };
    let mut comps: Vec<ScalarField> = (0..dim - 1)
        .map(|c| ScalarField::from_fn(grid, move |x| (4.0 * PI * x[c]).sin() * (2.0 - x[2] * x[2])))
        .collect();
    comps.push(ScalarField::from_fn(grid, |x| (2.0 * PI * x[0]).cos() * x[2] * (1.0 - x[2])));
    FlowState::new(ScalarField::from_fn(grid, f), VectorField::new(comps), 0.25).unwrap()
}

#[test]
fn restriction_is_exact_on_cubic_trig_fields() {
    for (dim, fine, coarse) in [(2, (64, 64), (32, 48)), (3, (16, 24), (8, 16))] {
        let s = trig_state(dim, fine.0, fine.1);
        let target = build_grid(dim, coarse.0, coarse.1).unwrap();
        let r = restrict(&s, target).unwrap();
        let exact = trig_state(dim, coarse.0, coarse.1);
        assert_eq!(r.t, 0.25);
        assert!(r.rho.sub(&exact.rho).max_abs() < 1e-12, "dim {dim}");
        assert!(r.u.sub(&exact.u).max_abs() < 1e-12, "dim {dim}");
    }
    let s = trig_state(2, 16, 16);
    let same = restrict(&s, *s.grid()).unwrap();
    assert_eq!(same.rho.interior_values(), s.rho.interior_values());
    assert!(restrict(&s, build_grid(2, 32, 16).unwrap()).is_err());
}

#[test]
fn identical_states_have_no_gap() {
    let s = trig_state(2, 16, 16);
    assert_eq!(gap_errors(&s, &s).unwrap(), GapErrors::default());
    let other = trig_state(2, 16, 32);
    assert!(gap_errors(&s, &other).is_err());
}

#[test]
fn plan_validation() {
    let init = InitialData::ShearBump {
        rho_amp: 0.2,
        u_amp: 1.0,
    };
    let ok = SweepPlan::new(SweepCase::FlatSpecial, vec![0.04, 0.02, 0.01], 2, 16, init, 0.05);
    assert!(ok.validate().is_ok());
    let mut p = ok.clone();
    p.eps_values = vec![0.04, 0.02];
    assert!(p.validate().is_err());
    p.eps_values = vec![0.01, 0.02, 0.04];
    assert!(p.validate().is_err());
    let mut p = ok.clone();
    p.t_eval = 2.0;
    assert!(p.validate().is_err());
    let mut p = ok.clone();
    p.case = SweepCase::FlatGeneral;
    p.slip_beta = 0.0;
    assert!(p.validate().is_err());

    let mut p = ok;
    p.layer_points = Some(4.0);
    assert_eq!(p.nz_for(0.04), 24);
    assert_eq!(p.nz_for(0.0025), 80);
    p.nz = 128;
    assert_eq!(p.nz_for(0.0025), 128);
}

fn synthetic_results(states: Vec<FlowState>, case: SweepCase) -> SweepResults {
    let th = ThermoParams::default();
    let points = states
        .into_iter()
        .zip([0.04, 0.02, 0.01])
        .map(|(state, eps)| SweepPoint {
            eps,
            grid: *state.grid(),
            errors: triple(eps),
            report: norm_report(&state, &th, 2).unwrap(),
            stats: RunStats::default(),
            state,
        })
        .collect();
    SweepResults {
        case,
        t_eval: 0.1,
        points,
        reference_stats: RunStats::default(),
        budget: None,
    }
}

#[test]
fn bound_table_of_identical_states() {
    let mut s = trig_state(2, 16, 16);
    fill_ghosts(&mut s, &SlipLaw::free_slip(2));
    let res = synthetic_results(vec![s.clone(), s.clone(), s], SweepCase::FlatSpecial);
    let rows = uniform_bound_report(&res).unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r.norm.as_str()).collect();
    assert_eq!(names, ["H2", "grad_u_H1inf", "dp_H1co", "Hco_2"]);
    assert!(rows.iter().all(|r| r.ratio == 1.0 && r.bounded && r.claimed));
    assert!(res.rates().unwrap().fits.iter().all(|f| f.pass));

    let mut s = trig_state(2, 16, 16);
    fill_ghosts(&mut s, &SlipLaw::uniform(2, 1.0));
    let res = synthetic_results(vec![s.clone(), s.clone(), s], SweepCase::FlatGeneral);
    assert!(!uniform_bound_report(&res).unwrap()[0].claimed);
}

fn small_plan() -> (SweepPlan, SolverConfig) {
    let init = InitialData::ShearBump {
        rho_amp: 0.2,
        u_amp: 1.0,
    };
    let mut plan = SweepPlan::new(SweepCase::FlatSpecial, vec![0.04, 0.02, 0.01], 2, 32, init, 0.05);
    plan.check_budget = false;
    let cfg = SolverConfig::new(ThermoParams::default(), SlipLaw::free_slip(2), Mode::NavierStokes);
    (plan, cfg)
}

#[test]
fn small_flat_sweep() {
    let (plan, cfg) = small_plan();
    let a = run_sweep(&plan, &cfg).unwrap();
    let e: Vec<f64> = a.points.iter().map(|p| p.errors.channel(Channel::L2)).collect();
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
    assert!(a.points.iter().all(|p| p.stats.max_mass_drift <= 1e-10));
    let b = run_sweep(&plan, &cfg).unwrap();
    for (p, q) in a.points.iter().zip(&b.points) {
        assert_eq!(p.errors, q.errors);
        assert_eq!(p.report, q.report);
    }
    let r = a.rates().unwrap();
    assert!(r.get(Channel::L2).unwrap().slope > 0.5, "{r:?}");
}

#[test]
fn sweep_preconditions() {
    let (mut plan, mut cfg) = small_plan();
    let case = ManufacturedCase::symmetric(2, Mode::NavierStokes);
    cfg.forcing = Some(Arc::new(MmsForcing {
        case,
        thermo: cfg.thermo,
    }));
    assert!(matches!(run_sweep(&plan, &cfg), Err(Error::Precondition(_))));
    cfg.forcing = None;
    plan.grad_limit = 1e-3;
    assert!(matches!(run_sweep(&plan, &cfg), Err(Error::Smoothness { .. })));
}
