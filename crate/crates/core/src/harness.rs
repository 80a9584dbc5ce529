//! Viscosity sweeps against an inviscid reference.
//!
//! For each viscosity the Navier-Stokes solution is run to `t_eval` from the
//! shared initial data and compared with one Euler reference computed on the
//! finest grid of the sweep. Log-log fits of the gaps give the observed
//! rates; the norm reports give the uniform-bound tables.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::boundary::{fill_ghosts, SlipLaw};
use crate::conorms::{nm_spatial, NormReport};
use crate::diagnostics::{bounded_ratio, BOUNDED_RATIO};
use crate::error::{Error, Result};
use crate::fit::least_squares;
use crate::geometry::{build_grid, derivative, GridSpec, ScalarField, VectorField};
use crate::initial::InitialData;
use crate::solver::{run, Mode, RunStats, SolverConfig};
use crate::state::FlowState;

/// Share of the smallest gap that discretization may account for.
pub const BUDGET_FRACTION: f64 = 0.1;
/// A fitted slope passes at this fraction of its target.
pub const PASS_FRACTION: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepCase {
    /// `B = 0`.
    FlatSpecial,
    /// `B = beta I`, `beta != 0`.
    FlatGeneral,
}

impl SweepCase {
    pub fn name(self) -> &'static str {
        match self {
            SweepCase::FlatSpecial => "flat_special",
            SweepCase::FlatGeneral => "flat_general",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "flat_special" => Ok(SweepCase::FlatSpecial),
            "flat_general" => Ok(SweepCase::FlatGeneral),
            other => Err(Error::Param(format!("unknown sweep case {other:?}"))),
        }
    }

    /// Expected decay exponent of each error norm.
    pub fn target(self, channel: Channel) -> f64 {
        match (self, channel) {
            (SweepCase::FlatSpecial, Channel::L2) => 1.0,
            (SweepCase::FlatSpecial, Channel::H1) => 0.75,
            (SweepCase::FlatSpecial, Channel::Linf) => 0.4,
            (SweepCase::FlatGeneral, Channel::L2) => 0.75,
            (SweepCase::FlatGeneral, Channel::H1) => 0.25,
            (SweepCase::FlatGeneral, Channel::Linf) => 0.3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    /// `|(rho - rho_E, u - u_E)|_{L2}`
    L2,
    /// `|u - u_E|_{H1}`
    H1,
    /// `max |u - u_E|`
    Linf,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::L2, Channel::H1, Channel::Linf];

    pub fn name(self) -> &'static str {
        match self {
            Channel::L2 => "L2",
            Channel::H1 => "H1",
            Channel::Linf => "Linf",
        }
    }
}

/// Gap between a viscous state and the reference.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GapErrors {
    pub l2_rho: f64,
    pub l2_u: f64,
    pub h1_u: f64,
    pub linf_u: f64,
}

impl GapErrors {
    pub fn channel(&self, c: Channel) -> f64 {
        match c {
            Channel::L2 => self.l2_rho.hypot(self.l2_u),
            Channel::H1 => self.h1_u,
            Channel::Linf => self.linf_u,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    pub case: SweepCase,
    /// Strictly decreasing.
    pub eps_values: Vec<f64>,
    pub dim: usize,
    pub ny: usize,
    /// Normal resolution, or its floor when layers are resolved.
    pub nz: usize,
    /// When set, `nz` is raised so that `dz <= sqrt(eps) / layer_points`.
    pub layer_points: Option<f64>,
    /// Slip coefficient of the general case.
    pub slip_beta: f64,
    pub initial: InitialData,
    pub t_eval: f64,
    /// Largest admissible `t_eval`.
    pub smooth_horizon: f64,
    /// Smoothness monitor bound on `max |grad u|` of the reference.
    pub grad_limit: f64,
    /// Order `M` of the norm reports.
    pub norm_order: usize,
    /// Runs the refined reference and the half-resolution estimates.
    pub check_budget: bool,
}

impl SweepPlan {
    pub fn new(case: SweepCase, eps_values: Vec<f64>, dim: usize, n: usize, initial: InitialData, t_eval: f64) -> Self {
        Self {
            case,
            eps_values,
            dim,
            ny: n,
            nz: n,
            layer_points: None,
            slip_beta: 1.0,
            initial,
            t_eval,
            smooth_horizon: 1.0,
            grad_limit: 100.0,
            norm_order: 3,
            check_budget: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_values.len() < 3 {
            return Err(Error::Param(format!(
                "a sweep needs at least three viscosities, got {}",
                self.eps_values.len()
            )));
        }
        if self.eps_values.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(Error::Param("viscosities must lie in (0, 1]".into()));
        }
        if self.eps_values.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Param("viscosities must be strictly decreasing".into()));
        }
        if !(self.t_eval > 0.0 && self.t_eval <= self.smooth_horizon) {
            return Err(Error::Param(format!(
                "t_eval = {} must lie in (0, {}]",
                self.t_eval, self.smooth_horizon
            )));
        }
        if !(1..=crate::conorms::MAX_ORDER).contains(&self.norm_order) {
            return Err(Error::NormOrder {
                order: self.norm_order,
                cap: crate::conorms::MAX_ORDER,
            });
        }
        if let Some(p) = self.layer_points {
            if !(p > 0.0) {
                return Err(Error::Param(format!("layer_points must be positive, got {p}")));
            }
        }
        if self.case == SweepCase::FlatGeneral && !(self.slip_beta != 0.0 && self.slip_beta.is_finite()) {
            return Err(Error::Param("the general case needs a nonzero slip coefficient".into()));
        }
        if !(self.grad_limit > 0.0) {
            return Err(Error::Param("grad_limit must be positive".into()));
        }
        build_grid(self.dim, self.ny, self.nz)?;
        Ok(())
    }

    pub fn slip(&self) -> SlipLaw {
        match self.case {
            SweepCase::FlatSpecial => SlipLaw::free_slip(self.dim),
            SweepCase::FlatGeneral => SlipLaw::uniform(self.dim, self.slip_beta),
        }
    }

    pub fn nz_for(&self, eps: f64) -> usize {
        match self.layer_points {
            None => self.nz,
            Some(p) => {
                let need = (p / eps.sqrt()).ceil() as usize;
                self.nz.max(need.div_ceil(8) * 8)
            }
        }
    }

    pub fn grid_for(&self, eps: f64) -> Result<GridSpec> {
        build_grid(self.dim, self.ny, self.nz_for(eps))
    }

    /// Finest grid of the sweep.
    pub fn reference_grid(&self) -> Result<GridSpec> {
        let nz = self.eps_values.iter().map(|&e| self.nz_for(e)).max().unwrap_or(self.nz);
        build_grid(self.dim, self.ny, nz)
    }
}

/// One viscosity of a sweep.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub eps: f64,
    pub grid: GridSpec,
    pub errors: GapErrors,
    pub report: NormReport,
    pub stats: RunStats,
    /// State at `t_eval`, ghosts filled.
    pub state: FlowState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetReport {
    /// Largest change of the `L2` gap when the reference grid is doubled.
    pub reference_shift: f64,
    /// Richardson estimate of each viscous run's own discretization error.
    pub ns_discretization: Vec<f64>,
    pub smallest_gap: f64,
    pub reference_limited: bool,
    pub within_budget: bool,
}

impl BudgetReport {
    pub fn limit(&self) -> f64 {
        BUDGET_FRACTION * self.smallest_gap
    }
}

#[derive(Clone, Debug)]
pub struct SweepResults {
    pub case: SweepCase,
    pub t_eval: f64,
    pub points: Vec<SweepPoint>,
    pub reference_stats: RunStats,
    pub budget: Option<BudgetReport>,
}

impl SweepResults {
    pub fn eps(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.eps).collect()
    }

    pub fn errors(&self) -> Vec<GapErrors> {
        self.points.iter().map(|p| p.errors).collect()
    }

    pub fn reports(&self) -> Vec<(f64, NormReport)> {
        self.points.iter().map(|p| (p.eps, p.report.clone())).collect()
    }

    /// Rate fits; refused when the discretization budget is exceeded.
    pub fn rates(&self) -> Result<RateReport> {
        if let Some(b) = &self.budget {
            if !b.within_budget {
                return Err(Error::Precondition(format!(
                    "discretization budget exceeded: reference shift {:.3e}, largest grid error {:.3e}, limit {:.3e}",
                    b.reference_shift,
                    b.ns_discretization.iter().cloned().fold(0.0, f64::max),
                    b.limit()
                )));
            }
        }
        fit_rates(self.case, &self.eps(), &self.errors())
    }
}

fn euler_config(base: &SolverConfig, t_end: f64, grad_limit: f64, dim: usize) -> SolverConfig {
    let mut cfg = SolverConfig::new(base.thermo, SlipLaw::free_slip(dim), Mode::Euler);
    cfg.cfl = base.cfl;
    cfg.t_end = t_end;
    cfg.grad_limit = Some(grad_limit);
    cfg
}

fn reference_run(plan: &SweepPlan, base: &SolverConfig, grid: GridSpec) -> Result<(FlowState, RunStats)> {
    let init = plan.initial.state(grid, base.thermo.gamma, Mode::Euler)?;
    let traj = run(&init, &euler_config(base, plan.t_eval, plan.grad_limit, plan.dim))?;
    let mut s = traj.last().clone();
    fill_ghosts(&mut s, &SlipLaw::free_slip(plan.dim));
    Ok((s, traj.stats))
}

/// Runs every viscosity of `plan` with the thermodynamics and CFL number of
/// `base` and measures the gap to the inviscid reference.
pub fn run_sweep(plan: &SweepPlan, base: &SolverConfig) -> Result<SweepResults> {
    plan.validate()?;
    if base.forcing.is_some() {
        return Err(Error::Precondition("viscosity sweeps compare unforced solutions".into()));
    }
    let ref_grid = plan.reference_grid()?;
    let (reference, refined) = rayon::join(
        || reference_run(plan, base, ref_grid),
        || plan.check_budget.then(|| reference_run(plan, base, ref_grid.refined())),
    );
    let (reference, reference_stats) = reference?;
    let refined = refined.transpose()?.map(|(s, _)| s);

    let slip = plan.slip();
    let per_eps = |eps: f64| -> Result<(SweepPoint, Option<(f64, f64)>)> {
        let thermo = base.thermo.with_epsilon(eps)?;
        let mut cfg = SolverConfig::new(thermo, slip, Mode::NavierStokes);
        cfg.cfl = base.cfl;
        cfg.t_end = plan.t_eval;
        let grid = plan.grid_for(eps)?;
        let init = plan.initial.state(grid, thermo.gamma, Mode::NavierStokes)?;
        let traj = run(&init, &cfg)?;
        let report = nm_spatial(&traj.windows[0].states, &thermo, plan.norm_order)?;
        let mut state = traj.last().clone();
        fill_ghosts(&mut state, &slip);
        let errors = gap_errors(&state, &restrict(&reference, grid)?)?;
        let budget = match &refined {
            None => None,
            Some(fine_ref) => {
                let shifted = gap_errors(&state, &restrict(fine_ref, grid)?)?;
                let shift = (shifted.channel(Channel::L2) - errors.channel(Channel::L2)).abs();
                let coarse_grid = build_grid(plan.dim, grid.ny() / 2, grid.nz() / 2)?;
                let coarse_init = plan.initial.state(coarse_grid, thermo.gamma, Mode::NavierStokes)?;
                let coarse = run(&coarse_init, &cfg)?;
                let d = gap_errors(coarse.last(), &restrict(&state, coarse_grid)?)?;
                Some((shift, d.channel(Channel::L2) / 3.0))
            }
        };
        Ok((
            SweepPoint {
                eps,
                grid,
                errors,
                report,
                stats: traj.stats,
                state,
            },
            budget,
        ))
    };
    let outcomes: Vec<(SweepPoint, Option<(f64, f64)>)> = plan
        .eps_values
        .par_iter()
        .map(|&eps| per_eps(eps).map_err(|e| Error::SweepRun { eps, source: Box::new(e) }))
        .collect::<Result<_>>()?;

    let budget = if plan.check_budget {
        let smallest_gap = outcomes
            .iter()
            .map(|(p, _)| p.errors.channel(Channel::L2))
            .fold(f64::INFINITY, f64::min);
        let reference_shift = outcomes.iter().filter_map(|(_, b)| b.map(|b| b.0)).fold(0.0, f64::max);
        let ns_discretization: Vec<f64> = outcomes.iter().filter_map(|(_, b)| b.map(|b| b.1)).collect();
        let limit = BUDGET_FRACTION * smallest_gap;
        let reference_limited = !(reference_shift <= limit);
        Some(BudgetReport {
            within_budget: !reference_limited && ns_discretization.iter().all(|d| *d <= limit),
            reference_shift,
            ns_discretization,
            smallest_gap,
            reference_limited,
        })
    } else {
        None
    };
    Ok(SweepResults {
        case: plan.case,
        t_eval: plan.t_eval,
        points: outcomes.into_iter().map(|(p, _)| p).collect(),
        reference_stats,
        budget,
    })
}

fn interior_diff(a: &ScalarField, b: &ScalarField) -> ScalarField {
    let mut d = a.sub(b);
    d.set_ghost_layers(0);
    d
}

/// Discrete gap norms between `state` and `reference` on the same grid.
/// Derivatives of the gap use one-sided stencils at the walls.
pub fn gap_errors(state: &FlowState, reference: &FlowState) -> Result<GapErrors> {
    if state.grid() != reference.grid() {
        return Err(Error::GridMismatch(format!(
            "{:?} against {:?}",
            state.grid(),
            reference.grid()
        )));
    }
    let er = interior_diff(&state.rho, &reference.rho);
    let eu = VectorField::new(
        state
            .u
            .comps()
            .iter()
            .zip(reference.u.comps())
            .map(|(a, b)| interior_diff(a, b))
            .collect(),
    );
    let grad_sq: f64 = eu
        .comps()
        .iter()
        .flat_map(|c| state.grid().axes().iter().map(move |&a| derivative(c, a).l2_norm_sq()))
        .sum();
    let l2_u = eu.l2_norm();
    Ok(GapErrors {
        l2_rho: er.l2_norm(),
        l2_u,
        h1_u: (l2_u * l2_u + grad_sq).sqrt(),
        linf_u: eu.max_magnitude(),
    })
}

/// Interpolates `fine` onto `target`: cubic in `z` (needs two filled ghost
/// layers), trigonometric in the periodic directions. Resolutions may only
/// decrease. The result carries no ghost layers.
pub fn restrict(fine: &FlowState, target: GridSpec) -> Result<FlowState> {
    let g = *fine.grid();
    if g == target {
        let mut s = fine.clone();
        s.rho.set_ghost_layers(0);
        for c in 0..g.dim() {
            s.u.comp_mut(c).set_ghost_layers(0);
        }
        return Ok(s);
    }
    if target.dim() != g.dim() || target.ny() > g.ny() || target.nz() > g.nz() {
        return Err(Error::GridMismatch(format!("cannot restrict {g:?} to {target:?}")));
    }
    let mut planner = FftPlanner::new();
    let plans = (
        planner.plan_fft_forward(g.ny()),
        planner.plan_fft_inverse(target.ny()),
    );
    let f = |s: &ScalarField| restrict_field(s, target, &plans);
    let rho = f(&fine.rho)?;
    let u = VectorField::new(fine.u.comps().iter().map(f).collect::<Result<_>>()?);
    FlowState::new(rho, u, fine.t)
}

type Plans = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

fn restrict_field(f: &ScalarField, target: GridSpec, plans: &Plans) -> Result<ScalarField> {
    let g = *f.grid();
    let mid = GridSpec::new(g.dim(), g.ny(), target.nz())?;
    let mut zf = ScalarField::zeros(mid);
    if target.nz() == g.nz() {
        zf.fill_with(0, |i1, i2, k| f.get(i1, i2, k));
    } else {
        if f.ghost_layers() < 2 {
            return Err(Error::Precondition("restriction in z needs two ghost layers".into()));
        }
        let dz = g.dz();
        zf.fill_with(0, |i1, i2, k| {
            let zt = mid.z(k);
            let k0 = (zt / dz - 0.5).floor() as isize;
            let s = (zt - g.z(k0)) / dz;
            let w = [
                -s * (s - 1.0) * (s - 2.0) / 6.0,
                (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
                -(s + 1.0) * s * (s - 2.0) / 2.0,
                (s + 1.0) * s * (s - 1.0) / 6.0,
            ];
            (0..4).map(|j| w[j] * f.get(i1, i2, k0 - 1 + j as isize)).sum()
        });
    }
    if target.ny() == g.ny() {
        return Ok(zf);
    }
    let (nf, nt, nz) = (g.ny(), target.ny(), target.nz());
    let n2f = g.n2();
    // buf[(i1 * n2 + i2) * nz + k], first periodic direction done
    let mut buf = vec![0.0; nt * n2f * nz];
    for i2 in 0..n2f {
        for k in 0..nz {
            let row: Vec<f64> = (0..nf).map(|i| zf.get(i, i2, k as isize)).collect();
            for (i, v) in resample(&row, nt, plans).into_iter().enumerate() {
                buf[(i * n2f + i2) * nz + k] = v;
            }
        }
    }
    let n2t = target.n2();
    if g.dim() == 3 {
        let mut next = vec![0.0; nt * n2t * nz];
        for i1 in 0..nt {
            for k in 0..nz {
                let row: Vec<f64> = (0..nf).map(|i| buf[(i1 * n2f + i) * nz + k]).collect();
                for (i, v) in resample(&row, nt, plans).into_iter().enumerate() {
                    next[(i1 * n2t + i) * nz + k] = v;
                }
            }
        }
        buf = next;
    }
    let mut out = ScalarField::zeros(target);
    out.fill_with(0, |i1, i2, k| buf[(i1 * n2t + i2) * nz + k as usize]);
    Ok(out)
}

/// Evaluates the trigonometric interpolant of `row` (cell-centred samples)
/// at `n_out` cell centres.
fn resample(row: &[f64], n_out: usize, plans: &Plans) -> Vec<f64> {
    let n = row.len();
    let mut c: Vec<Complex<f64>> = row.iter().map(|&v| Complex::new(v, 0.0)).collect();
    plans.0.process(&mut c);
    let mut d = vec![Complex::new(0.0, 0.0); n_out];
    let shift = 0.5 / n_out as f64 - 0.5 / n as f64;
    let half = (n / 2) as i64;
    for m in -half..=half {
        let mut coef = c[m.rem_euclid(n as i64) as usize];
        if n % 2 == 0 && m.abs() == half {
            coef *= 0.5;
        }
        let ph = Complex::from_polar(1.0, 2.0 * PI * m as f64 * shift);
        d[m.rem_euclid(n_out as i64) as usize] += coef * ph;
    }
    plans.1.process(&mut d);
    d.iter().map(|z| z.re / n as f64).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateFit {
    pub channel: Channel,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub target: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RateReport {
    pub fits: Vec<RateFit>,
    /// Channels that could not be fitted, with the reason.
    pub notes: Vec<String>,
}

impl RateReport {
    pub fn get(&self, channel: Channel) -> Option<&RateFit> {
        self.fits.iter().find(|f| f.channel == channel)
    }
}

/// Least-squares slope of `log(error)` against `log(eps)` per channel.
pub fn fit_rates(case: SweepCase, eps: &[f64], errors: &[GapErrors]) -> Result<RateReport> {
    if eps.len() != errors.len() {
        return Err(Error::Precondition("one error triple per viscosity".into()));
    }
    if eps.len() < 3 {
        return Err(Error::Precondition(format!("rate fits need three points, got {}", eps.len())));
    }
    let mut out = RateReport::default();
    for ch in Channel::ALL {
        let e: Vec<f64> = errors.iter().map(|g| g.channel(ch)).collect();
        if e.iter().any(|v| !(*v > 0.0)) {
            out.notes.push(format!("{}: zero or invalid error, channel skipped", ch.name()));
            continue;
        }
        let lx: Vec<f64> = eps.iter().map(|v| v.ln()).collect();
        let ly: Vec<f64> = e.iter().map(|v| v.ln()).collect();
        let Some(fit) = least_squares(&lx, &ly) else {
            out.notes.push(format!("{}: degenerate viscosities, channel skipped", ch.name()));
            continue;
        };
        let target = case.target(ch);
        out.fits.push(RateFit {
            channel: ch,
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            target,
            pass: fit.slope >= PASS_FRACTION * target,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub norm: String,
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
    pub bounded: bool,
    /// Whether a uniform bound is asserted for this case.
    pub claimed: bool,
}

/// Max/min ratio across the sweep of the norms with uniform-in-`eps` bounds.
pub fn uniform_bound_report(results: &SweepResults) -> Result<Vec<BoundRow>> {
    if results.points.len() < 3 {
        return Err(Error::Precondition("bound tables need three viscosities".into()));
    }
    let m = results
        .points
        .iter()
        .map(|p| p.report.names().iter().filter(|n| n.starts_with("Hco_")).count())
        .min()
        .unwrap_or(1)
        - 1;
    let rows = [
        ("H2".to_string(), results.case == SweepCase::FlatSpecial),
        ("grad_u_H1inf".to_string(), true),
        ("dp_H1co".to_string(), true),
        (format!("Hco_{m}"), true),
    ];
    rows.into_iter()
        .map(|(norm, claimed)| {
            let vals = results
                .points
                .iter()
                .map(|p| {
                    p.report
                        .get(&norm)
                        .ok_or_else(|| Error::Precondition(format!("norm report lacks {norm}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            let ratio = bounded_ratio(vals.iter().cloned());
            Ok(BoundRow {
                min: vals.iter().cloned().fold(f64::INFINITY, f64::min),
                max: vals.iter().cloned().fold(0.0, f64::max),
                bounded: ratio <= BOUNDED_RATIO,
                ratio,
                claimed,
                norm,
            })
        })
        .collect()
}
