use std::f64::consts::PI;

use vvlab::boundary::{fill_ghosts, mirror_state, SlipLaw};
use vvlab::geometry::{
    build_grid, curl, derivative, div, grad, second_derivative, vector_laplacian, Axis, ScalarField,
    VectorField,
};
use vvlab::initial::InitialData;
use vvlab::solver::{rhs, run, stable_dt, step, Mode, SolverConfig};
use vvlab::state::{FlowState, ThermoParams};

fn thermo(eps: f64) -> ThermoParams {
    ThermoParams::new(2.0, 1.0, 0.0, eps).unwrap()
}

fn shear_bump(dim: usize, n: usize) -> FlowState {
    let grid = build_grid(dim, n, n).unwrap();
    InitialData::ShearBump {
        rho_amp: 0.2,
        u_amp: 1.0,
    }
    .state(grid, 2.0, Mode::NavierStokes)
    .unwrap()
}

#[test]
fn mass_is_conserved() {
    let cases = [
        (shear_bump(2, 32), SlipLaw::free_slip(2), Mode::NavierStokes),
        (shear_bump(2, 32), SlipLaw::uniform(2, 1.0), Mode::NavierStokes),
        (shear_bump(2, 32), SlipLaw::free_slip(2), Mode::Euler),
        (shear_bump(3, 16), SlipLaw::uniform(3, 0.5), Mode::NavierStokes),
    ];
    for (init, slip, mode) in cases {
        let mut cfg = SolverConfig::new(thermo(0.02), slip, mode);
        cfg.t_end = 0.1;
        cfg.outputs = 4;
        let traj = run(&init, &cfg).unwrap();
        assert!(traj.stats.steps > 10);
        assert!(traj.stats.max_mass_drift <= 1e-10, "{:?}", traj.stats);
    }
}

/// Interior values of the upper half copied from the lower half (u_z negated).
fn symmetrize(s: &mut FlowState) {
    let grid = *s.grid();
    let nz = grid.nz() as isize;
    let dim = grid.dim();
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            for k in nz / 2..nz {
                let m = nz - 1 - k;
                let r = s.rho.get(i1, i2, m);
                s.rho.set(i1, i2, k, r);
                for c in 0..dim {
                    let sign = if c == dim - 1 { -1.0 } else { 1.0 };
                    let v = s.u.comp(c).get(i1, i2, m);
                    s.u.comp_mut(c).set(i1, i2, k, sign * v);
                }
            }
        }
    }
}

#[test]
fn mirror_symmetry_survives_1000_steps() {
    let grid = build_grid(2, 32, 32).unwrap();
    let rho = ScalarField::from_interior_fn(grid, |x| {
        1.0 + 0.1 * (2.0 * PI * x[0]).cos() * (2.0 * PI * x[2]).cos()
    });
    let u = VectorField::new(vec![
        ScalarField::from_interior_fn(grid, |x| 0.3 * (2.0 * PI * x[0]).sin() * (PI * x[2]).sin()),
        ScalarField::from_interior_fn(grid, |x| 0.2 * (2.0 * PI * x[0]).cos() * (2.0 * PI * x[2]).sin()),
    ]);
    let mut s = FlowState::new(rho, u, 0.0).unwrap();
    symmetrize(&mut s);
    let cfg = SolverConfig::new(thermo(0.05), SlipLaw::uniform(2, 1.0), Mode::NavierStokes);
    fill_ghosts(&mut s, &cfg.slip);
    let dt = stable_dt(&s, &cfg);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        s = step(&s, &cfg, dt).unwrap();
        let m = mirror_state(&s);
        worst = worst
            .max(s.rho.sub(&m.rho).max_abs())
            .max(s.u.sub(&m.u).max_abs());
    }
    assert!(worst <= 1e-12, "max deviation {worst}");
}

#[test]
fn tangential_galilean_covariance() {
    let t_end = 0.05;
    let v = 5.0;
    let mut errs = Vec::new();
    for n in [32, 64] {
        let base = shear_bump(2, n);
        let mut shifted = base.clone();
        *shifted.u.comp_mut(0) = base.u.comp(0).map(|x| x + v);
        shifted.u.comp_mut(0).set_ghost_layers(0);
        let mut cfg = SolverConfig::new(thermo(0.02), SlipLaw::free_slip(2), Mode::NavierStokes);
        cfg.t_end = t_end;
        let a = run(&base, &cfg).unwrap();
        let b = run(&shifted, &cfg).unwrap();
        let (a, b) = (a.last(), b.last());
        // v t = 1/4 of the period, an exact index shift
        let shift = n / 4;
        let mut e = 0.0_f64;
        for i in 0..n {
            let j = (i + shift) % n;
            for k in 0..n as isize {
                e = e.max((b.rho.get(j, 0, k) - a.rho.get(i, 0, k)).abs());
                e = e.max((b.u.comp(0).get(j, 0, k) - v - a.u.comp(0).get(i, 0, k)).abs());
                e = e.max((b.u.comp(1).get(j, 0, k) - a.u.comp(1).get(i, 0, k)).abs());
            }
        }
        errs.push(e);
    }
    let order = (errs[0] / errs[1]).log2();
    assert!(order >= 1.5, "errors {errs:?}");
}

#[test]
fn navier_stokes_energy_does_not_grow() {
    for beta in [0.0, 1.0, 4.0] {
        let init = shear_bump(2, 48);
        let mut cfg = SolverConfig::new(thermo(0.05), SlipLaw::uniform(2, beta), Mode::NavierStokes);
        cfg.t_end = 0.1;
        cfg.outputs = 10;
        let traj = run(&init, &cfg).unwrap();
        assert!(traj.stats.max_energy_rise <= 1e-8, "beta {beta}: {:?}", traj.stats);
        let e: Vec<f64> = traj.frames.iter().map(|f| f.energy(2.0)).collect();
        assert!(e.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-8)), "{e:?}");
    }
}

fn smooth_field(n: usize) -> VectorField {
    let grid = build_grid(2, n, n).unwrap();
    VectorField::new(vec![
        ScalarField::from_fn(grid, |x| (2.0 * PI * x[0]).sin() * (1.3 * x[2]).cos() + x[2] * x[2]),
        ScalarField::from_fn(grid, |x| (2.0 * PI * x[0]).cos() * (2.1 * x[2]).sin()),
    ])
}

#[test]
fn viscous_forms_agree_to_second_order() {
    let (mu, lam) = (1.0, 0.3);
    let mut errs = Vec::new();
    for n in [16, 32, 64] {
        let u = smooth_field(n);
        let gd = grad(&div(&u));
        let lap_form = vector_laplacian(&u).scale(mu).add(&gd.scale(mu + lam));
        let curl_form = curl(&curl(&u))
            .scale(-mu)
            .add(&gd.scale(2.0 * mu + lam));
        errs.push(lap_form.sub(&curl_form).max_abs());
    }
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.9, "{errs:?}");
    }
}

#[test]
fn fused_rhs_matches_composed_operators() {
    let grid = build_grid(2, 24, 20).unwrap();
    let rho = ScalarField::from_interior_fn(grid, |x| 1.0 + 0.2 * (2.0 * PI * x[0]).cos() * (PI * x[2]).cos());
    let u = VectorField::new(vec![
        ScalarField::from_interior_fn(grid, |x| (2.0 * PI * x[0]).sin() * (1.0 + x[2] * (1.0 - x[2]))),
        ScalarField::from_interior_fn(grid, |x| 0.4 * (2.0 * PI * x[0]).cos() * (PI * x[2]).sin()),
    ]);
    let mut s = FlowState::new(rho, u, 0.0).unwrap();
    let th = ThermoParams::new(1.4, 1.0, 0.5, 0.1).unwrap();
    let cfg = SolverConfig::new(th, SlipLaw::uniform(2, 0.7), Mode::NavierStokes);
    fill_ghosts(&mut s, &cfg.slip);
    let (dr, du) = rhs(&s, &cfg).unwrap();

    let axes = [Axis::Y1, Axis::Z];
    let flux = VectorField::new((0..2).map(|c| s.rho.mul(s.u.comp(c))).collect());
    let dr_ref = div(&flux).scale(-1.0);
    let p = s.rho.map(|r| r.powf(th.gamma));
    let mut worst = dr.sub(&dr_ref).max_abs();
    let d1: Vec<Vec<ScalarField>> = (0..2)
        .map(|c| axes.iter().map(|&ax| derivative(s.u.comp(c), ax)).collect())
        .collect();
    let d2: Vec<Vec<ScalarField>> = (0..2)
        .map(|c| axes.iter().map(|&ax| second_derivative(s.u.comp(c), ax)).collect())
        .collect();
    let dp: Vec<ScalarField> = axes.iter().map(|&ax| derivative(&p, ax)).collect();
    for c in 0..2 {
        // d_c d_a u_a for a != c
        let cross: Vec<ScalarField> = (0..2).map(|a| derivative(&d1[a][a], axes[c])).collect();
        let mut acc = ScalarField::zeros(grid);
        acc.fill_with(0, |i1, i2, k| {
            let r = s.rho.get(i1, i2, k);
            let mut adv = 0.0;
            let mut lap = 0.0;
            let mut gdiv = 0.0;
            for a in 0..2 {
                adv += s.u.comp(a).get(i1, i2, k) * d1[c][a].get(i1, i2, k);
                lap += d2[c][a].get(i1, i2, k);
                gdiv += if a == c {
                    d2[a][a].get(i1, i2, k)
                } else {
                    cross[a].get(i1, i2, k)
                };
            }
            -adv - dp[c].get(i1, i2, k) / r + th.epsilon / r * (th.mu * lap + (th.mu + th.lambda) * gdiv)
        });
        worst = worst.max(du.comp(c).sub(&acc).max_abs());
    }
    assert!(worst < 1e-11, "fused vs composed {worst}");
}
