use std::f64::consts::PI;

use vvlab::boundary::{fill_ghosts, SlipLaw, Wall};
use vvlab::conorms::norm_report;
use vvlab::diagnostics::{
    eta_field, eta_wall_trace, flat_boundary_identity_residual, profile_layer, weak_density_layer_report,
};
use vvlab::geometry::{build_grid, ScalarField, VectorField};
use vvlab::initial::InitialData;
use vvlab::oracle::ManufacturedCase;
use vvlab::solver::{run, Mode, SolverConfig};
use vvlab::state::{FlowState, ThermoParams};

/// Tangential velocity `a d exp(-z/d)` near both walls: vorticity `a exp(-dist/d)`.
fn layered(n: usize, amp: f64, width: f64, rho_amp: f64) -> FlowState {
    let grid = build_grid(2, 8, n).unwrap();
    let rho = ScalarField::from_fn(grid, |x| 1.0 + rho_amp * (2.0 * PI * x[0]).cos());
    let u = VectorField::new(vec![
        ScalarField::from_fn(grid, |x| {
            amp * width * ((-x[2] / width).exp() - (-(1.0 - x[2]) / width).exp())
        }),
        ScalarField::from_fn(grid, |_| 0.0),
    ]);
    FlowState::new(rho, u, 0.0).unwrap()
}

#[test]
fn equilibrium_has_no_layer() {
    let grid = build_grid(2, 8, 32).unwrap();
    let s = FlowState::equilibrium(grid, 1.0);
    for wall in Wall::BOTH {
        let p = profile_layer(&s, wall);
        assert!(!p.has_layer());
        assert_eq!(p.z_samples.len(), 8);
        assert!(p.density_deviation.iter().all(|d| *d == 0.0));
    }
}

#[test]
fn injected_layer_is_recovered() {
    let width = 0.1_f64;
    for wall in Wall::BOTH {
        let p = profile_layer(&layered(256, 2.0, width, 0.0), wall);
        let w = p.fitted_width.unwrap();
        assert!((w / width - 1.0).abs() <= 0.1, "width {w}");
        assert!((p.fitted_amplitude / 2.0 - 1.0).abs() <= 0.05, "amp {}", p.fitted_amplitude);
    }
}

#[test]
fn profile_is_scale_equivariant() {
    let s = layered(128, 1.0, 0.05, 0.0);
    let mut t = s.clone();
    t.u = s.u.scale(3.0);
    let (a, b) = (profile_layer(&s, Wall::Bottom), profile_layer(&t, Wall::Bottom));
    assert!((b.fitted_amplitude / (3.0 * a.fitted_amplitude) - 1.0).abs() < 1e-12);
    assert!((b.fitted_width.unwrap() / a.fitted_width.unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn layer_width_follows_square_root_of_viscosity() {
    let grid = build_grid(2, 16, 256).unwrap();
    let init = InitialData::DensityWave { rho_amp: 0.1 }
        .state(grid, 2.0, Mode::NavierStokes)
        .unwrap();
    let widths: Vec<f64> = [0.02, 0.01]
        .iter()
        .map(|&eps| {
            let th = ThermoParams::new(2.0, 1.0, 0.0, eps).unwrap();
            let mut cfg = SolverConfig::new(th, SlipLaw::uniform(2, 1.0), Mode::NavierStokes);
            cfg.t_end = 0.1;
            let traj = run(&init, &cfg).unwrap();
            profile_layer(traj.last(), Wall::Bottom).fitted_width.unwrap()
        })
        .collect();
    let ratio = widths[1] / widths[0];
    assert!((0.6..=0.85).contains(&ratio), "widths {widths:?}");
}

fn generic_state(dim: usize, n: usize) -> FlowState {
    let grid = build_grid(dim, n, n).unwrap();
    let rho = ScalarField::from_interior_fn(grid, |x| {
        1.0 + 0.1 * (2.0 * PI * x[0]).cos() * (1.0 + x[2] * x[2])
    });
    let mut comps = vec![ScalarField::from_interior_fn(grid, |x| {
        (2.0 * PI * x[0]).sin() * (1.0 + x[2]) + 0.3 * (3.0 * x[2]).cos()
    })];
    if dim == 3 {
        comps.push(ScalarField::from_interior_fn(grid, |x| {
            (2.0 * PI * x[1]).cos() * (2.0 - x[2] * x[2])
        }));
    }
    comps.push(ScalarField::from_interior_fn(grid, |x| {
        (2.0 * PI * x[0]).cos() * (PI * x[2]).sin()
    }));
    FlowState::new(rho, VectorField::new(comps), 0.0).unwrap()
}

#[test]
fn eta_trace_vanishes_at_second_order() {
    let cases = [
        (ManufacturedCase::robin(1.5), SlipLaw::uniform(2, 1.5), vec![32, 64, 128]),
        (ManufacturedCase::symmetric(3, Mode::NavierStokes), SlipLaw::free_slip(3), vec![32, 64]),
    ];
    // the extrapolation stencil must sit where the cut-off is 1
    for (case, slip, sizes) in cases {
        let traces: Vec<f64> = sizes
            .iter()
            .map(|&n| {
                let grid = build_grid(case.dim, n, n).unwrap();
                let mut s = case.state(grid, 0.4).unwrap();
                fill_ghosts(&mut s, &slip);
                let eta = eta_field(&s, &slip);
                Wall::BOTH.iter().map(|&w| eta_wall_trace(&eta, w)).fold(0.0, f64::max)
            })
            .collect();
        for w in traces.windows(2) {
            assert!((w[0] / w[1]).log2() >= 1.9, "{}: {traces:?}", case.name);
        }
    }
}

#[test]
fn eta_support_and_trivial_case() {
    let mut s = generic_state(2, 32);
    let slip = SlipLaw::uniform(2, 1.0);
    fill_ghosts(&mut s, &slip);
    let eta = eta_field(&s, &slip);
    let grid = *s.grid();
    for k in 0..32 {
        let z = grid.z(k);
        if (0.25..=0.75).contains(&z) {
            for i in 0..32 {
                assert_eq!(eta.comp(0).get(i, 0, k), 0.0);
            }
        }
    }
    assert!(eta.comp(0).max_abs() > 0.0);

    let mut calm = FlowState::equilibrium(grid, 1.0);
    *calm.u.comp_mut(0) = ScalarField::constant(grid, 0.7);
    fill_ghosts(&mut calm, &SlipLaw::free_slip(2));
    assert_eq!(eta_field(&calm, &SlipLaw::free_slip(2)).max_abs(), 0.0);
}

#[test]
fn curl_identity_residual_decays() {
    let th = ThermoParams::new(2.0, 1.0, 0.3, 0.05).unwrap();
    let case = ManufacturedCase::flat_wall();
    let res: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&n| {
            let mut s = case.state(build_grid(2, n, n).unwrap(), 0.3).unwrap();
            fill_ghosts(&mut s, &SlipLaw::free_slip(2));
            flat_boundary_identity_residual(&s, &th, Mode::NavierStokes).unwrap().max()
        })
        .collect();
    for w in res.windows(2) {
        assert!((w[0] / w[1]).log2() >= 0.9, "{res:?}");
    }

    // mirror-symmetric data: both sides vanish exactly in the discrete setting
    let case = ManufacturedCase::symmetric(2, Mode::NavierStokes);
    let mut s = case.state(build_grid(2, 32, 32).unwrap(), 0.3).unwrap();
    fill_ghosts(&mut s, &SlipLaw::free_slip(2));
    assert!(flat_boundary_identity_residual(&s, &th, Mode::NavierStokes).unwrap().max() < 1e-9);

    let grid = build_grid(2, 16, 16).unwrap();
    let mut s = FlowState::equilibrium(grid, 1.0);
    fill_ghosts(&mut s, &SlipLaw::free_slip(2));
    assert_eq!(flat_boundary_identity_residual(&s, &th, Mode::NavierStokes).unwrap().max(), 0.0);
    assert!(flat_boundary_identity_residual(&s, &th, Mode::Euler).is_err());
}

#[test]
fn weak_layer_table() {
    let th = ThermoParams::default();
    let eps = [0.04, 0.02, 0.01];
    let fixed: Vec<_> = eps
        .iter()
        .map(|&e| (e, norm_report(&layered(64, 1.0, 0.1, 0.2), &th, 2).unwrap()))
        .collect();
    let r = weak_density_layer_report(&fixed).unwrap();
    assert_eq!(r.dp_ratio, 1.0);
    assert!(r.density_bounded && !r.vorticity_grows);

    let layers: Vec<_> = eps
        .iter()
        .rev()
        .map(|&e| (e, norm_report(&layered(256, 1.0, e.sqrt(), 0.2), &th, 2).unwrap()))
        .collect();
    let r = weak_density_layer_report(&layers).unwrap();
    assert_eq!(r.rows[0].epsilon, 0.04);
    assert!((r.dp_ratio - 1.0).abs() < 1e-12, "{}", r.dp_ratio);
    assert!(r.density_bounded && r.vorticity_grows);

    assert!(weak_density_layer_report(&fixed[..2]).is_err());
}

