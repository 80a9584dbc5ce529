//! Manufactured solutions and the linear acoustic standing wave.
//!
//! Every manufactured field is a constant plus a sum of separable terms
//! `amp * f1(y1) f2(y2) f3(z) T(t)`, so values and all derivatives needed by
//! the forcing come in closed form from one-dimensional jets. The forcing is
//! the residual of the momentum and continuity equations evaluated on the
//! exact fields:
//!
//! ```text
//!   F_rho = rho_t + div(rho u)
//!   F_u   = rho (u_t + u.grad u) + grad p - eps (mu lap u + (mu + lambda) grad div u)
//! ```
//!
//! `scripts/mms_derivation.py` derives the same expressions symbolically and
//! records reference values that the tests compare against.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::boundary::SlipLaw;
use crate::error::{Error, Result};
use crate::fit::{observed_order, LineFit};
use crate::geometry::{build_grid, GridSpec, ScalarField, VectorField};
use crate::solver::{run, Forcing, Mode, SolverConfig};
use crate::state::{FlowState, ThermoParams};

/// One-dimensional factor of a separable term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode1d {
    One,
    Sin(f64),
    Cos(f64),
    /// `1 + b x (1 - x)`
    Bump(f64),
    /// `(x (1 - x))^k`: the first `k - 1` derivatives vanish at both ends.
    Flat(i32),
}

impl Mode1d {
    /// `(f, f', f'')` at `x`.
    pub fn jet(self, x: f64) -> [f64; 3] {
        match self {
            Mode1d::One => [1.0, 0.0, 0.0],
            Mode1d::Sin(w) => {
                let (s, c) = (w * x).sin_cos();
                [s, w * c, -w * w * s]
            }
            Mode1d::Cos(w) => {
                let (s, c) = (w * x).sin_cos();
                [c, -w * s, -w * w * c]
            }
            Mode1d::Bump(b) => [1.0 + b * x * (1.0 - x), b * (1.0 - 2.0 * x), -2.0 * b],
            Mode1d::Flat(k) => {
                let (w, dw) = (x * (1.0 - x), 1.0 - 2.0 * x);
                let kf = k as f64;
                let p = |e: i32| if e == 0 { 1.0 } else { w.powi(e) };
                let d1 = if k >= 1 { kf * p(k - 1) * dw } else { 0.0 };
                let d2 = if k >= 2 { kf * (kf - 1.0) * p(k - 2) * dw * dw } else { 0.0 }
                    - if k >= 1 { 2.0 * kf * p(k - 1) } else { 0.0 };
                [p(k), d1, d2]
            }
        }
    }
}

/// `amp * space[0](y1) * space[1](y2) * space[2](z) * time(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub amp: f64,
    pub space: [Mode1d; 3],
    pub time: Mode1d,
}

impl Term {
    pub fn new(amp: f64, y1: Mode1d, y2: Mode1d, z: Mode1d, time: Mode1d) -> Self {
        Self {
            amp,
            space: [y1, y2, z],
            time,
        }
    }
}

/// Value, time derivative, gradient and Hessian at one space-time point,
/// indexed by coordinate slot `(y1, y2, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub t: f64,
    pub d: [f64; 3],
    pub dd: [[f64; 3]; 3],
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactField {
    pub base: f64,
    pub terms: Vec<Term>,
}

impl ExactField {
    pub fn constant(base: f64) -> Self {
        Self {
            base,
            terms: Vec::new(),
        }
    }

    pub fn with(mut self, term: Term) -> Self {
        self.terms.push(term);
        self
    }

    pub fn value(&self, x: [f64; 3], t: f64) -> f64 {
        self.jet(x, t).v
    }

    pub fn jet(&self, x: [f64; 3], t: f64) -> Jet {
        let mut out = Jet {
            v: self.base,
            ..Jet::default()
        };
        for term in &self.terms {
            let f: Vec<[f64; 3]> = (0..3).map(|s| term.space[s].jet(x[s])).collect();
            let tj = term.time.jet(t);
            let prod = |orders: [usize; 3]| -> f64 {
                term.amp * f[0][orders[0]] * f[1][orders[1]] * f[2][orders[2]]
            };
            let v = prod([0, 0, 0]);
            out.v += v * tj[0];
            out.t += v * tj[1];
            for a in 0..3 {
                let mut o = [0; 3];
                o[a] = 1;
                out.d[a] += prod(o) * tj[0];
                for b in 0..3 {
                    let mut o = [0; 3];
                    o[a] += 1;
                    o[b] += 1;
                    out.dd[a][b] += prod(o) * tj[0];
                }
            }
        }
        out
    }
}

/// Coordinate slot of velocity component `c`.
pub fn slot(dim: usize, c: usize) -> usize {
    if dim == 2 && c == 1 {
        2
    } else {
        c
    }
}

/// Closed-form fields with their slip law and the system they solve.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub name: &'static str,
    pub dim: usize,
    pub rho: ExactField,
    pub u: Vec<ExactField>,
    pub slip: SlipLaw,
    pub mode: Mode,
    pub provenance: &'static str,
}

const DERIVATION: &str = "scripts/mms_derivation.py";

/// Named manufactured families selectable from configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MmsKind {
    Equilibrium,
    /// 2-D, Navier slip with `B = beta I`.
    Robin { beta: f64 },
    /// Even density and tangential velocity, odd normal velocity.
    Symmetric,
    /// `rho = 1`, pure shear `u1(z, t)` satisfying the Robin condition.
    RobinShear { beta: f64 },
    /// 2-D, `B = 0`, no mirror symmetry; satisfies the flat-wall curl identity.
    FlatWall,
}

impl MmsKind {
    pub fn name(self) -> &'static str {
        match self {
            MmsKind::Equilibrium => "equilibrium",
            MmsKind::Robin { .. } => "robin",
            MmsKind::Symmetric => "symmetric",
            MmsKind::RobinShear { .. } => "robin_shear",
            MmsKind::FlatWall => "flat_wall",
        }
    }

    pub fn case(self, dim: usize, mode: Mode) -> Result<ManufacturedCase> {
        let case = match self {
            MmsKind::Equilibrium => ManufacturedCase::equilibrium(dim),
            MmsKind::Robin { beta } => ManufacturedCase::robin(beta),
            MmsKind::Symmetric => ManufacturedCase::symmetric(dim, mode),
            MmsKind::RobinShear { beta } => ManufacturedCase::robin_shear(beta),
            MmsKind::FlatWall => ManufacturedCase::flat_wall(),
        };
        if case.dim != dim {
            return Err(Error::Param(format!(
                "manufactured case {} is {}-D, grid is {dim}-D",
                case.name, case.dim
            )));
        }
        if case.mode != mode && !matches!(self, MmsKind::Equilibrium) {
            return Err(Error::Param(format!(
                "manufactured case {} solves the {} system",
                case.name,
                case.mode.name()
            )));
        }
        Ok(ManufacturedCase { mode, ..case })
    }
}

use Mode1d::{Bump, Cos, Flat, One, Sin};

impl ManufacturedCase {
    pub fn equilibrium(dim: usize) -> Self {
        Self {
            name: "equilibrium",
            dim,
            rho: ExactField::constant(1.0),
            u: vec![ExactField::constant(0.0); dim],
            slip: SlipLaw::free_slip(dim),
            mode: Mode::NavierStokes,
            provenance: DERIVATION,
        }
    }

    /// ```text
    ///   rho = 1 + 0.1 cos(2 pi y) cos(pi z) cos t
    ///   u_y = sin(2 pi y) (1 + beta z (1 - z)) cos t
    ///   u_z = 0.5 cos(2 pi y) sin(pi z) cos t
    /// ```
    pub fn robin(beta: f64) -> Self {
        let k = 2.0 * PI;
        Self {
            name: "robin",
            dim: 2,
            rho: ExactField::constant(1.0).with(Term::new(0.1, Cos(k), One, Cos(PI), Cos(1.0))),
            u: vec![
                ExactField::constant(0.0).with(Term::new(1.0, Sin(k), One, Bump(beta), Cos(1.0))),
                ExactField::constant(0.0).with(Term::new(0.5, Cos(k), One, Sin(PI), Cos(1.0))),
            ],
            slip: SlipLaw::uniform(2, beta),
            mode: Mode::NavierStokes,
            provenance: DERIVATION,
        }
    }

    /// Mirror-symmetric about both walls; compatible with `B = 0` and with
    /// the Euler wall closure.
    pub fn symmetric(dim: usize, mode: Mode) -> Self {
        let k = 2.0 * PI;
        let (rho, u) = if dim == 2 {
            (
                ExactField::constant(1.0).with(Term::new(0.1, Cos(k), One, Cos(k), Cos(1.0))),
                vec![
                    ExactField::constant(0.0).with(Term::new(0.5, Sin(k), One, Cos(k), Cos(1.0))),
                    ExactField::constant(0.0).with(Term::new(0.5, Cos(k), One, Sin(k), Cos(1.0))),
                ],
            )
        } else {
            (
                ExactField::constant(1.0).with(Term::new(0.1, Cos(k), Cos(k), Cos(k), Cos(1.0))),
                vec![
                    ExactField::constant(0.0).with(Term::new(0.5, Sin(k), One, Cos(k), Cos(1.0))),
                    ExactField::constant(0.0).with(Term::new(0.5, One, Sin(k), Cos(k), Cos(1.0))),
                    ExactField::constant(0.0).with(Term::new(0.5, Cos(k), Cos(k), Sin(k), Cos(1.0))),
                ],
            )
        };
        Self {
            name: "symmetric",
            dim,
            rho,
            u,
            slip: SlipLaw::free_slip(dim),
            mode,
            provenance: DERIVATION,
        }
    }

    /// `rho = 1`, `u = ((1 + beta z (1 - z)) cos t, 0)`.
    pub fn robin_shear(beta: f64) -> Self {
        Self {
            name: "robin_shear",
            dim: 2,
            rho: ExactField::constant(1.0),
            u: vec![
                ExactField::constant(0.0).with(Term::new(1.0, One, One, Bump(beta), Cos(1.0))),
                ExactField::constant(0.0),
            ],
            slip: SlipLaw::uniform(2, beta),
            mode: Mode::NavierStokes,
            provenance: DERIVATION,
        }
    }

    /// ```text
    ///   rho = 1 + 0.1 cos(2 pi y) (1 + 10 (z (1 - z))^2) cos t
    ///   u_y = sin(2 pi y) (1 + 4 (z (1 - z))^4) cos t
    ///   u_z = 0
    /// ```
    /// `B = 0` holds and both sides of the curl identity vanish on the walls,
    /// while odd powers of the wall distance keep the fields unsymmetric.
    pub fn flat_wall() -> Self {
        let k = 2.0 * PI;
        Self {
            name: "flat_wall",
            dim: 2,
            rho: ExactField::constant(1.0)
                .with(Term::new(0.1, Cos(k), One, One, Cos(1.0)))
                .with(Term::new(1.0, Cos(k), One, Flat(2), Cos(1.0))),
            u: vec![
                ExactField::constant(0.0)
                    .with(Term::new(1.0, Sin(k), One, One, Cos(1.0)))
                    .with(Term::new(4.0, Sin(k), One, Flat(4), Cos(1.0))),
                ExactField::constant(0.0),
            ],
            slip: SlipLaw::free_slip(2),
            mode: Mode::NavierStokes,
            provenance: DERIVATION,
        }
    }

    pub fn is_time_independent(&self) -> bool {
        std::iter::once(&self.rho)
            .chain(self.u.iter())
            .all(|f| f.terms.iter().all(|t| t.time == One))
    }

    /// Exact state on the interior nodes of `grid` at time `t`.
    pub fn state(&self, grid: GridSpec, t: f64) -> Result<FlowState> {
        if grid.dim() != self.dim {
            return Err(Error::GridMismatch(format!(
                "{}-D case on a {}-D grid",
                self.dim,
                grid.dim()
            )));
        }
        let rho = ScalarField::from_interior_fn(grid, |x| self.rho.value(x, t));
        let u = VectorField::new(
            self.u
                .iter()
                .map(|f| ScalarField::from_interior_fn(grid, |x| f.value(x, t)))
                .collect(),
        );
        FlowState::new(rho, u, t)
    }

    /// Largest violation of `u.n = 0` and of the tangential slip law at the
    /// given wall points `(y1, y2, wall_is_top)`, evaluated on closed forms.
    pub fn wall_defect(&self, points: &[(f64, f64, bool)], t: f64) -> f64 {
        let dim = self.dim;
        let nt = dim - 1;
        let mut worst = 0.0_f64;
        for &(y1, y2, top) in points {
            let x = [y1, if dim == 3 { y2 } else { 0.0 }, if top { 1.0 } else { 0.0 }];
            let un = self.u[dim - 1].value(x, t);
            worst = worst.max(un.abs());
            let wall = if top {
                crate::boundary::Wall::Top
            } else {
                crate::boundary::Wall::Bottom
            };
            let b = self.slip.matrix(wall);
            let mut v = [0.0; 2];
            let mut dz = [0.0; 2];
            for c in 0..nt {
                let j = self.u[c].jet(x, t);
                v[c] = j.v;
                dz[c] = j.d[2];
            }
            let bv = b.apply(v);
            let sign = if top { -1.0 } else { 1.0 };
            for c in 0..nt {
                worst = worst.max((dz[c] - sign * bv[c]).abs());
            }
        }
        worst
    }
}

/// Exact forcing `(F_rho, F_u)` at `x` and `t`; `F_u` has `case.dim` entries.
pub fn mms_forcing(case: &ManufacturedCase, thermo: &ThermoParams, x: [f64; 3], t: f64) -> (f64, Vec<f64>) {
    let dim = case.dim;
    let r = case.rho.jet(x, t);
    let u: Vec<Jet> = case.u.iter().map(|f| f.jet(x, t)).collect();
    let eps = match case.mode {
        Mode::NavierStokes => thermo.epsilon,
        Mode::Euler => 0.0,
    };
    let (mu, lam, gamma) = (thermo.mu, thermo.lambda, thermo.gamma);
    let mut f_rho = r.t;
    for a in 0..dim {
        let s = slot(dim, a);
        f_rho += r.d[s] * u[a].v + r.v * u[a].d[s];
    }
    let dp = gamma * r.v.powf(gamma - 1.0);
    let f_u = (0..dim)
        .map(|c| {
            let sc = slot(dim, c);
            let mut adv = u[c].t;
            let mut lap = 0.0;
            let mut gdiv = 0.0;
            for a in 0..dim {
                let sa = slot(dim, a);
                adv += u[a].v * u[c].d[sa];
                lap += u[c].dd[sa][sa];
                gdiv += u[a].dd[sc][sa];
            }
            r.v * adv + dp * r.d[sc] - eps * (mu * lap + (mu + lam) * gdiv)
        })
        .collect();
    (f_rho, f_u)
}

/// Solver forcing hook backed by a manufactured case.
#[derive(Clone, Debug)]
pub struct MmsForcing {
    pub case: ManufacturedCase,
    pub thermo: ThermoParams,
}

impl Forcing for MmsForcing {
    fn sample(&self, grid: &GridSpec, t: f64) -> (ScalarField, VectorField) {
        let dim = grid.dim();
        let mut rho = ScalarField::zeros(*grid);
        let mut u = VectorField::zeros(*grid, dim);
        let g = *grid;
        // one closed-form evaluation per node, scattered to the components
        let vals: Vec<Vec<(f64, Vec<f64>)>> = {
            use rayon::prelude::*;
            (0..g.n1())
                .into_par_iter()
                .map(|i1| {
                    let mut col = Vec::with_capacity(g.n2() * g.nz());
                    for i2 in 0..g.n2() {
                        for k in 0..g.nz() as isize {
                            col.push(mms_forcing(&self.case, &self.thermo, g.coords(i1, i2, k), t));
                        }
                    }
                    col
                })
                .collect()
        };
        for (i1, col) in vals.iter().enumerate() {
            let mut it = col.iter();
            for i2 in 0..g.n2() {
                for k in 0..g.nz() as isize {
                    let (fr, fu) = it.next().expect("one value per node");
                    rho.set(i1, i2, k, *fr);
                    for c in 0..dim {
                        u.comp_mut(c).set(i1, i2, k, fu[c]);
                    }
                }
            }
        }
        rho.set_ghost_layers(0);
        for c in 0..dim {
            u.comp_mut(c).set_ghost_layers(0);
        }
        (rho, u)
    }
}

/// Solver configuration for a forced run of `case`.
pub fn mms_config(case: &ManufacturedCase, thermo: ThermoParams, t_end: f64, cfl: f64) -> SolverConfig {
    let mut cfg = SolverConfig::new(thermo, case.slip, case.mode);
    cfg.t_end = t_end;
    cfg.cfl = cfl;
    cfg.forcing = Some(Arc::new(MmsForcing {
        case: case.clone(),
        thermo,
    }));
    cfg
}

/// Errors of a finished run against the exact fields at its final time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmsError {
    /// `sqrt(|rho - rho*|^2 + |u - u*|^2)` in discrete L2.
    pub l2: f64,
    /// Largest absolute nodal deviation over all fields.
    pub linf: f64,
}

pub fn mms_error(case: &ManufacturedCase, state: &FlowState) -> Result<MmsError> {
    let exact = case.state(*state.grid(), state.t)?;
    let dr = state.rho.sub(&exact.rho);
    let du = state.u.sub(&exact.u);
    Ok(MmsError {
        l2: (dr.l2_norm_sq() + du.l2_norm_sq()).sqrt(),
        linf: dr.max_abs().max(du.max_abs()),
    })
}

/// Forced run of `case` on an `n x n` (2-D) or `n^3` (3-D) grid to `t_end`.
pub fn mms_run(
    case: &ManufacturedCase,
    thermo: ThermoParams,
    n: usize,
    t_end: f64,
    cfl: f64,
) -> Result<(FlowState, MmsError)> {
    let grid = build_grid(case.dim, n, n)?;
    let init = case.state(grid, 0.0)?;
    let cfg = mms_config(case, thermo, t_end, cfl);
    let traj = run(&init, &cfg)?;
    let last = traj.last().clone();
    let err = mms_error(case, &last)?;
    Ok((last, err))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub resolutions: Vec<usize>,
    pub errors: Vec<MmsError>,
    /// Least-squares order over all resolutions (`None` when exact).
    pub order_l2: Option<LineFit>,
    pub order_linf: Option<LineFit>,
    /// Orders between consecutive resolutions.
    pub pairwise_l2: Vec<f64>,
    /// All errors at round-off level.
    pub exact: bool,
}

/// Final-time error orders of forced runs at `resolutions` (at least three,
/// each double the previous).
pub fn convergence_study(
    case: &ManufacturedCase,
    thermo: ThermoParams,
    resolutions: &[usize],
    t_end: f64,
    cfl: f64,
) -> Result<ConvergenceStudy> {
    if resolutions.len() < 3 {
        return Err(Error::Precondition(
            "a convergence study needs at least three resolutions".into(),
        ));
    }
    if resolutions.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Precondition(format!(
            "resolutions must be dyadic, got {resolutions:?}"
        )));
    }
    let mut errors = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        errors.push(mms_run(case, thermo, n, t_end, cfl)?.1);
    }
    let h: Vec<f64> = resolutions.iter().map(|&n| 1.0 / n as f64).collect();
    let l2: Vec<f64> = errors.iter().map(|e| e.l2).collect();
    let linf: Vec<f64> = errors.iter().map(|e| e.linf).collect();
    let exact = linf.iter().all(|&e| e < 1e-12);
    let (order_l2, order_linf, pairwise_l2) = if exact {
        (None, None, Vec::new())
    } else {
        (
            observed_order(&h, &l2),
            observed_order(&h, &linf),
            l2.windows(2).map(|w| (w[0] / w[1]).log2()).collect(),
        )
    };
    Ok(ConvergenceStudy {
        resolutions: resolutions.to_vec(),
        errors,
        order_l2,
        order_linf,
        pairwise_l2,
        exact,
    })
}

/// Small-amplitude standing acoustic wave about `(rho, u) = (1, 0)`:
///
/// ```text
///   rho = 1 + A cos(k pi z) cos(w t),   u_z = A sqrt(gamma) sin(k pi z) sin(w t),
///   w = sqrt(gamma) k pi
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcousticMode {
    pub amplitude: f64,
    pub mode: u32,
    pub gamma: f64,
}

pub const ACOUSTIC_MAX_AMPLITUDE: f64 = 1e-3;

pub fn acoustic_exact(amplitude: f64, mode: u32, gamma: f64) -> Result<AcousticMode> {
    if !(amplitude.abs() <= ACOUSTIC_MAX_AMPLITUDE) {
        return Err(Error::Precondition(format!(
            "acoustic amplitude {amplitude} exceeds the linear regime ({ACOUSTIC_MAX_AMPLITUDE})"
        )));
    }
    if mode == 0 {
        return Err(Error::Param("acoustic mode number must be positive".into()));
    }
    if !(gamma > 1.0) {
        return Err(Error::Param(format!("gamma must exceed 1, got {gamma}")));
    }
    Ok(AcousticMode {
        amplitude,
        mode,
        gamma,
    })
}

impl AcousticMode {
    pub fn omega(&self) -> f64 {
        self.gamma.sqrt() * PI * self.mode as f64
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega()
    }

    pub fn rho(&self, z: f64, t: f64) -> f64 {
        1.0 + self.amplitude * (self.mode as f64 * PI * z).cos() * (self.omega() * t).cos()
    }

    pub fn normal_velocity(&self, z: f64, t: f64) -> f64 {
        self.amplitude
            * self.gamma.sqrt()
            * (self.mode as f64 * PI * z).sin()
            * (self.omega() * t).sin()
    }

    /// Frequency of the same mode under the centred collocated stencil,
    /// `sqrt(gamma) sin(k pi dz) / dz`.
    pub fn discrete_omega(&self, dz: f64) -> f64 {
        self.gamma.sqrt() * (self.mode as f64 * PI * dz).sin() / dz
    }

    /// Interior samples at time `t`.
    pub fn state(&self, grid: GridSpec, t: f64) -> FlowState {
        self.sample(grid, self.omega() * t, t)
    }

    /// Linear solution of the semi-discrete system: same profiles, phase
    /// advanced with [`AcousticMode::discrete_omega`].
    pub fn discrete_state(&self, grid: GridSpec, t: f64) -> FlowState {
        self.sample(grid, self.discrete_omega(grid.dz()) * t, t)
    }

    fn sample(&self, grid: GridSpec, phase: f64, t: f64) -> FlowState {
        let dim = grid.dim();
        let kp = self.mode as f64 * PI;
        let a = self.amplitude;
        let c = self.gamma.sqrt();
        let rho = ScalarField::from_interior_fn(grid, |x| 1.0 + a * (kp * x[2]).cos() * phase.cos());
        let mut u = VectorField::zeros(grid, dim);
        *u.comp_mut(dim - 1) =
            ScalarField::from_interior_fn(grid, |x| a * c * (kp * x[2]).sin() * phase.sin());
        for c in 0..dim - 1 {
            u.comp_mut(c).set_ghost_layers(0);
        }
        FlowState { rho, u, t }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_forcing_vanishes() {
        let c = ManufacturedCase::equilibrium(2);
        let th = ThermoParams::default();
        for x in [[0.1, 0.0, 0.3], [0.7, 0.0, 0.9]] {
            let (fr, fu) = mms_forcing(&c, &th, x, 0.4);
            assert_eq!(fr, 0.0);
            assert!(fu.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn time_independence_detected() {
        assert!(ManufacturedCase::equilibrium(3).is_time_independent());
        assert!(!ManufacturedCase::robin(1.0).is_time_independent());
    }

    #[test]
    fn jets_match_difference_quotients() {
        let f = ExactField::constant(0.3)
            .with(Term::new(0.7, Sin(2.0), Cos(1.0), Bump(0.5), Cos(1.5)));
        let x = [0.2, 0.4, 0.6];
        let j = f.jet(x, 0.3);
        let h = 1e-5;
        for a in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let d = (f.value(xp, 0.3) - f.value(xm, 0.3)) / (2.0 * h);
            assert!((d - j.d[a]).abs() < 1e-8);
            let dd = (f.value(xp, 0.3) - 2.0 * j.v + f.value(xm, 0.3)) / (h * h);
            assert!((dd - j.dd[a][a]).abs() < 1e-4);
        }
        let dt = (f.value(x, 0.3 + h) - f.value(x, 0.3 - h)) / (2.0 * h);
        assert!((dt - j.t).abs() < 1e-8);
    }

    #[test]
    fn acoustic_preconditions() {
        assert!(acoustic_exact(0.1, 1, 2.0).is_err());
        assert!(acoustic_exact(1e-4, 0, 2.0).is_err());
        let m = acoustic_exact(0.0, 1, 2.0).unwrap();
        assert!((m.period() - 2f64.sqrt()).abs() < 1e-15);
        let grid = build_grid(2, 8, 8).unwrap();
        let s = m.state(grid, 0.3);
        assert_eq!(s.u.max_abs(), 0.0);
        assert_eq!(s.rho.interior_values(), vec![1.0; 64]);
    }

    #[test]
    fn kinds_check_dimension_and_mode() {
        assert!(MmsKind::Robin { beta: 1.0 }.case(3, Mode::NavierStokes).is_err());
        assert!(MmsKind::Robin { beta: 1.0 }.case(2, Mode::Euler).is_err());
        assert!(MmsKind::Symmetric.case(3, Mode::Euler).is_ok());
        assert_eq!(MmsKind::Equilibrium.case(2, Mode::Euler).unwrap().mode, Mode::Euler);
    }
}
