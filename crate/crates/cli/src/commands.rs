//! The four subcommands. Each returns its in-memory results as well as
//! writing its files, so callers can inspect outcomes without re-parsing.

use std::path::{Path, PathBuf};

use vvlab::boundary::{fill_ghosts, Wall};
use vvlab::conorms::{nm_spatial, norm_report, NormReport};
use vvlab::diagnostics::{profile_layer, weak_density_layer_report, WeakLayerReport};
use vvlab::geometry::build_grid;
use vvlab::harness::{run_sweep, uniform_bound_report, BoundRow, Channel, RateReport, SweepCase, SweepResults};
use vvlab::oracle::{mms_config, mms_error, MmsError};
use vvlab::solver::{run, Mode, RunStats, SolverConfig};

use crate::checkpoint;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, strings, write_csv, write_dat};

fn ensure_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))
}

fn report_header(first: &[&str], report: &NormReport) -> Vec<String> {
    strings(first.iter().copied().chain(report.names()))
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub checkpoints: Vec<PathBuf>,
    pub reports: Vec<(f64, NormReport)>,
    pub stats: RunStats,
    /// Final-time error for manufactured runs.
    pub mms: Option<MmsError>,
}

/// Integrates the `[run]` section, writing `checkpoint_NNNN.chk` and
/// `norms.csv` (one row per output time) into `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    ensure_dir(out)?;
    let grid = build_grid(cfg.grid.dim, cfg.grid.ny, cfg.grid.nz)?;
    let mut solver = cfg.solver_config()?;
    let case = if cfg.initial.kind == "mms" {
        let case = cfg.mms_kind().case(grid.dim(), cfg.run.mode)?;
        let mut forced = mms_config(&case, cfg.thermo, cfg.run.t_end, cfg.run.cfl);
        forced.outputs = solver.outputs;
        forced.grad_limit = solver.grad_limit;
        solver = forced;
        Some(case)
    } else {
        None
    };
    let init = match &case {
        Some(c) => c.state(grid, 0.0)?,
        None => cfg.initial_data().state(grid, cfg.thermo.gamma, cfg.run.mode)?,
    };
    let traj = run(&init, &solver)?;

    let mut checkpoints = Vec::new();
    let mut reports = Vec::new();
    for (j, (frame, window)) in traj.frames[1..].iter().zip(&traj.windows).enumerate() {
        let path = out.join(format!("checkpoint_{:04}.chk", j + 1));
        checkpoint::save(frame, &path)?;
        checkpoints.push(path);
        reports.push((frame.t, nm_spatial(&window.states, &cfg.thermo, cfg.run.norm_order)?));
    }
    if let Some((_, first)) = reports.first() {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|(t, r)| std::iter::once(*t).chain(r.values()).map(fmt_f64).collect())
            .collect();
        write_csv(&out.join("norms.csv"), &report_header(&["t"], first), &rows)?;
    }
    let mms = match &case {
        Some(c) => {
            let e = mms_error(c, traj.last())?;
            write_csv(
                &out.join("mms_error.csv"),
                &strings(["t", "l2", "linf"]),
                &[vec![fmt_f64(traj.last().t), fmt_f64(e.l2), fmt_f64(e.linf)]],
            )?;
            Some(e)
        }
        None => None,
    };
    Ok(RunOutcome {
        checkpoints,
        reports,
        stats: traj.stats,
        mms,
    })
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub results: SweepResults,
    pub rates: RateReport,
    pub bounds: Vec<BoundRow>,
    pub layer: WeakLayerReport,
}

/// Runs the `[sweep]` section and writes `rates.csv`, `bounds.csv`,
/// `layer.csv`, `budget.csv` (budget check only) and `ratefit.csv`.
///
/// `ratefit.csv` is written last and only when the error budget holds.
pub fn sweep(cfg: &ExperimentConfig, out: &Path) -> Result<SweepOutcome> {
    ensure_dir(out)?;
    let plan = cfg.sweep_plan()?;
    let mut base = SolverConfig::new(cfg.thermo, plan.slip(), Mode::NavierStokes);
    base.cfl = cfg.run.cfl;
    let results = run_sweep(&plan, &base)?;

    let err_cols = ["epsilon", "err_l2_rho", "err_l2_u", "err_h1_u", "err_linf_u"];
    let rows: Vec<Vec<String>> = results
        .points
        .iter()
        .map(|p| {
            let e = &p.errors;
            [p.eps, e.l2_rho, e.l2_u, e.h1_u, e.linf_u]
                .into_iter()
                .chain(p.report.values())
                .map(fmt_f64)
                .collect()
        })
        .collect();
    write_csv(&out.join("rates.csv"), &report_header(&err_cols, &results.points[0].report), &rows)?;

    let bounds = uniform_bound_report(&results)?;
    let rows: Vec<Vec<String>> = bounds
        .iter()
        .map(|b| {
            vec![
                b.norm.clone(),
                fmt_f64(b.min),
                fmt_f64(b.max),
                fmt_f64(b.ratio),
                b.bounded.to_string(),
                b.claimed.to_string(),
            ]
        })
        .collect();
    write_csv(
        &out.join("bounds.csv"),
        &strings(["norm", "min", "max", "ratio", "bounded", "claimed"]),
        &rows,
    )?;

    let layer = weak_density_layer_report(&results.reports())?;
    let rows: Vec<Vec<String>> = results
        .points
        .iter()
        .zip(&layer.rows)
        .map(|(p, l)| {
            let [b, t] = Wall::BOTH.map(|w| profile_layer(&p.state, w));
            vec![
                fmt_f64(p.eps),
                p.grid.nz().to_string(),
                fmt_f64(l.dp_h1co),
                fmt_f64(l.dz_omega_tau),
                fmt_f64(b.fitted_width.unwrap_or(f64::NAN)),
                fmt_f64(t.fitted_width.unwrap_or(f64::NAN)),
                fmt_f64(b.fitted_amplitude),
                fmt_f64(t.fitted_amplitude),
            ]
        })
        .collect();
    write_csv(
        &out.join("layer.csv"),
        &strings([
            "epsilon",
            "nz",
            "dp_H1co",
            "dz_omega_tau_L2",
            "width_bottom",
            "width_top",
            "amplitude_bottom",
            "amplitude_top",
        ]),
        &rows,
    )?;

    if let Some(b) = &results.budget {
        let ns = b.ns_discretization.iter().cloned().fold(0.0, f64::max);
        write_csv(
            &out.join("budget.csv"),
            &strings([
                "reference_shift",
                "ns_discretization",
                "smallest_gap",
                "limit",
                "within_budget",
            ]),
            &[vec![
                fmt_f64(b.reference_shift),
                fmt_f64(ns),
                fmt_f64(b.smallest_gap),
                fmt_f64(b.limit()),
                b.within_budget.to_string(),
            ]],
        )?;
    }

    let rates = results.rates()?;
    let rows: Vec<Vec<String>> = rates
        .fits
        .iter()
        .map(|f| {
            vec![
                f.channel.name().to_string(),
                fmt_f64(f.slope),
                fmt_f64(f.intercept),
                fmt_f64(f.r_squared),
                fmt_f64(f.target),
                f.pass.to_string(),
            ]
        })
        .collect();
    write_csv(
        &out.join("ratefit.csv"),
        &strings(["channel", "slope", "intercept", "r2", "target", "pass"]),
        &rows,
    )?;
    Ok(SweepOutcome {
        results,
        rates,
        bounds,
        layer,
    })
}

/// Norm report of one checkpoint. With a config, ghosts are filled from its
/// slip law and its thermodynamics are used; otherwise the defaults apply
/// and wall derivatives are one-sided.
pub fn norms(checkpoint_path: &Path, cfg: Option<&ExperimentConfig>, order: usize) -> Result<(Vec<String>, Vec<String>)> {
    let mut state = checkpoint::load(checkpoint_path, None)?;
    let thermo = match cfg {
        Some(c) => {
            if c.grid.dim != state.grid().dim() {
                return Err(CliError::Checkpoint {
                    path: checkpoint_path.to_path_buf(),
                    msg: format!("{}-D state, config is {}-D", state.grid().dim(), c.grid.dim),
                });
            }
            let slip = c.solver_config()?.effective_slip(c.grid.dim);
            fill_ghosts(&mut state, &slip);
            c.thermo
        }
        None => ExperimentConfig::default().thermo,
    };
    let report = norm_report(&state, &thermo, order)?;
    let header = report_header(&["t"], &report);
    let row = std::iter::once(state.t).chain(report.values()).map(fmt_f64).collect();
    Ok((header, row))
}

pub fn write_norms(path: &Path, header: &[String], row: &[String]) -> Result<()> {
    write_csv(path, header, &[row.to_vec()])
}

/// One channel of a rates file on log-log axes.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSeries {
    pub channel: Channel,
    /// `(log10 eps, log10 error)`, in file order.
    pub points: Vec<(f64, f64)>,
    /// Two points of slope `target` through the largest-`eps` point.
    pub guide: Vec<(f64, f64)>,
    pub target: f64,
}

fn read_rates(path: &Path) -> Result<Vec<[f64; 5]>> {
    let bad = |row: usize, msg: String| CliError::Csv {
        path: path.to_path_buf(),
        row,
        msg,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(0, e.to_string()))?;
    let header = rdr.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    let want = ["epsilon", "err_l2_rho", "err_l2_u", "err_h1_u", "err_linf_u"];
    let idx = want
        .iter()
        .map(|w| {
            header
                .iter()
                .position(|h| h == *w)
                .ok_or_else(|| bad(1, format!("missing column {w}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let row = n + 2;
        let rec = rec.map_err(|e| bad(row, e.to_string()))?;
        let mut vals = [0.0; 5];
        for (slot, &i) in vals.iter_mut().zip(&idx) {
            let raw = rec.get(i).ok_or_else(|| bad(row, "short row".into()))?;
            *slot = raw
                .trim()
                .parse()
                .map_err(|_| bad(row, format!("cannot parse {raw:?}")))?;
        }
        rows.push(vals);
    }
    if rows.is_empty() {
        return Err(bad(1, "no data rows".into()));
    }
    Ok(rows)
}

/// Writes `<channel>.dat` and `<channel>_guide.dat` for each channel with
/// positive errors.
pub fn plotdata(rates: &Path, case: SweepCase, out: &Path) -> Result<Vec<PlotSeries>> {
    let rows = read_rates(rates)?;
    ensure_dir(out)?;
    let mut series = Vec::new();
    for channel in Channel::ALL {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| {
                let e = match channel {
                    Channel::L2 => r[1].hypot(r[2]),
                    Channel::H1 => r[3],
                    Channel::Linf => r[4],
                };
                (r[0], e)
            })
            .collect();
        if pts.iter().any(|&(eps, e)| !(eps > 0.0 && e > 0.0)) {
            continue;
        }
        let points: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x.log10(), y.log10())).collect();
        let target = case.target(channel);
        let anchor = points.iter().cloned().fold((f64::NEG_INFINITY, 0.0), |a, p| if p.0 > a.0 { p } else { a });
        let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let guide = vec![(lo, anchor.1 + target * (lo - anchor.0)), anchor];
        let name = channel.name().to_lowercase();
        write_dat(&out.join(format!("{name}.dat")), "log10(epsilon) log10(error)", &points)?;
        write_dat(
            &out.join(format!("{name}_guide.dat")),
            &format!("slope {target} guide"),
            &guide,
        )?;
        series.push(PlotSeries {
            channel,
            points,
            guide,
            target,
        });
    }
    Ok(series)
}
