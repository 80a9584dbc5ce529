//! Sectioned `key = value` experiment configuration.
//!
//! Lines are `[section]` headers, `key = value` pairs, blank lines, or
//! comments starting with `#` or `;`. Every key is listed in [`KEYS`]; any
//! other key is rejected with its line number.

use std::fmt::Write as _;
use std::path::Path;

use vvlab::boundary::SlipLaw;
use vvlab::harness::{SweepCase, SweepPlan};
use vvlab::initial::InitialData;
use vvlab::oracle::MmsKind;
use vvlab::solver::{Mode, SolverConfig};
use vvlab::state::ThermoParams;

use crate::error::{CliError, Result};

/// Accepted keys per section, in canonical order.
pub const KEYS: &[(&str, &[&str])] = &[
    ("grid", &["dim", "ny", "nz", "layer_points"]),
    ("thermo", &["gamma", "mu", "lambda", "epsilon"]),
    ("slip", &["beta_bottom", "beta_top"]),
    ("initial", &["kind", "rho0", "rho_amp", "u_amp", "amplitude", "mode", "case", "beta"]),
    ("run", &["mode", "t_end", "cfl", "outputs", "norm_order", "grad_limit"]),
    (
        "sweep",
        &["case", "eps_values", "t_eval", "smooth_horizon", "grad_limit", "check_budget"],
    ),
];

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub dim: usize,
    pub ny: usize,
    pub nz: usize,
    /// Cells per `sqrt(eps)` across the wall layer in sweeps; 0 disables.
    pub layer_points: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlipSection {
    pub beta_bottom: f64,
    pub beta_top: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialSection {
    /// equilibrium | shear_bump | density_wave | acoustic | mms
    pub kind: String,
    pub rho0: f64,
    pub rho_amp: f64,
    pub u_amp: f64,
    pub amplitude: f64,
    pub mode: u32,
    /// Manufactured family for `kind = mms`.
    pub case: String,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSection {
    pub mode: Mode,
    pub t_end: f64,
    pub cfl: f64,
    pub outputs: usize,
    pub norm_order: usize,
    /// 0 disables the gradient guard.
    pub grad_limit: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSection {
    pub case: SweepCase,
    pub eps_values: Option<Vec<f64>>,
    pub t_eval: Option<f64>,
    pub smooth_horizon: f64,
    pub grad_limit: f64,
    pub check_budget: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    pub thermo: ThermoParams,
    pub slip: SlipSection,
    pub initial: InitialSection,
    pub run: RunSection,
    pub sweep: SweepSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: GridSection {
                dim: 2,
                ny: 64,
                nz: 64,
                layer_points: 0.0,
            },
            thermo: ThermoParams::default(),
            slip: SlipSection {
                beta_bottom: 0.0,
                beta_top: 0.0,
            },
            initial: InitialSection {
                kind: "shear_bump".into(),
                rho0: 1.0,
                rho_amp: 0.2,
                u_amp: 1.0,
                amplitude: 1e-4,
                mode: 1,
                case: "robin".into(),
                beta: 1.0,
            },
            run: RunSection {
                mode: Mode::NavierStokes,
                t_end: 0.1,
                cfl: 0.25,
                outputs: 1,
                norm_order: 3,
                grad_limit: 0.0,
            },
            sweep: SweepSection {
                case: SweepCase::FlatSpecial,
                eps_values: None,
                t_eval: None,
                smooth_horizon: 1.0,
                grad_limit: 100.0,
                check_budget: true,
            },
        }
    }
}

fn parse_value<T: std::str::FromStr>(raw: &str, key: &str, line: usize) -> Result<T> {
    raw.parse().map_err(|_| CliError::Config {
        line,
        key: key.to_string(),
        msg: format!("cannot parse {raw:?}"),
    })
}

fn parse_bool(raw: &str, key: &str, line: usize) -> Result<bool> {
    match raw {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config {
            line,
            key: key.to_string(),
            msg: format!("expected a boolean, got {raw:?}"),
        }),
    }
}

fn parse_mode(raw: &str, line: usize) -> Result<Mode> {
    match raw {
        "ns" | "navier_stokes" => Ok(Mode::NavierStokes),
        "euler" => Ok(Mode::Euler),
        _ => Err(CliError::Config {
            line,
            key: "mode".into(),
            msg: format!("expected ns or euler, got {raw:?}"),
        }),
    }
}

fn parse_list(raw: &str, key: &str, line: usize) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| parse_value(s.trim(), key, line))
        .collect()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut section: Option<&'static str> = None;
        let mut seen: Vec<(&str, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') || body.starts_with(';') {
                continue;
            }
            if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                let name = name.trim();
                section = Some(
                    KEYS.iter()
                        .find(|(s, _)| *s == name)
                        .map(|(s, _)| *s)
                        .ok_or_else(|| CliError::Config {
                            line,
                            key: format!("[{name}]"),
                            msg: "unknown section".into(),
                        })?,
                );
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| CliError::Config {
                line,
                key: body.to_string(),
                msg: "expected key = value".into(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.ok_or_else(|| CliError::Config {
                line,
                key: key.to_string(),
                msg: "key outside of any section".into(),
            })?;
            let known = KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !known.contains(&key) {
                return Err(CliError::Config {
                    line,
                    key: key.to_string(),
                    msg: format!("unknown key in [{sec}]"),
                });
            }
            if seen.iter().any(|(s, k)| *s == sec && k == key) {
                return Err(CliError::Config {
                    line,
                    key: key.to_string(),
                    msg: format!("duplicate key in [{sec}]"),
                });
            }
            seen.push((sec, key.to_string()));
            cfg.assign(sec, key, value, line)?;
        }
        cfg.thermo.validate().map_err(|e| CliError::Config {
            line: 0,
            key: "[thermo]".into(),
            msg: e.to_string(),
        })?;
        Ok(cfg)
    }

    fn assign(&mut self, sec: &str, key: &str, v: &str, line: usize) -> Result<()> {
        match (sec, key) {
            ("grid", "dim") => self.grid.dim = parse_value(v, key, line)?,
            ("grid", "ny") => self.grid.ny = parse_value(v, key, line)?,
            ("grid", "nz") => self.grid.nz = parse_value(v, key, line)?,
            ("grid", "layer_points") => self.grid.layer_points = parse_value(v, key, line)?,
            ("thermo", "gamma") => self.thermo.gamma = parse_value(v, key, line)?,
            ("thermo", "mu") => self.thermo.mu = parse_value(v, key, line)?,
            ("thermo", "lambda") => self.thermo.lambda = parse_value(v, key, line)?,
            ("thermo", "epsilon") => self.thermo.epsilon = parse_value(v, key, line)?,
            ("slip", "beta_bottom") => self.slip.beta_bottom = parse_value(v, key, line)?,
            ("slip", "beta_top") => self.slip.beta_top = parse_value(v, key, line)?,
            ("initial", "kind") => {
                if !["equilibrium", "shear_bump", "density_wave", "acoustic", "mms"].contains(&v) {
                    return Err(CliError::Config {
                        line,
                        key: key.into(),
                        msg: format!("unknown initial data {v:?}"),
                    });
                }
                self.initial.kind = v.to_string();
            }
            ("initial", "rho0") => self.initial.rho0 = parse_value(v, key, line)?,
            ("initial", "rho_amp") => self.initial.rho_amp = parse_value(v, key, line)?,
            ("initial", "u_amp") => self.initial.u_amp = parse_value(v, key, line)?,
            ("initial", "amplitude") => self.initial.amplitude = parse_value(v, key, line)?,
            ("initial", "mode") => self.initial.mode = parse_value(v, key, line)?,
            ("initial", "case") => {
                if !["equilibrium", "robin", "symmetric", "robin_shear", "flat_wall"].contains(&v) {
                    return Err(CliError::Config {
                        line,
                        key: key.into(),
                        msg: format!("unknown manufactured case {v:?}"),
                    });
                }
                self.initial.case = v.to_string();
            }
            ("initial", "beta") => self.initial.beta = parse_value(v, key, line)?,
            ("run", "mode") => self.run.mode = parse_mode(v, line)?,
            ("run", "t_end") => self.run.t_end = parse_value(v, key, line)?,
            ("run", "cfl") => self.run.cfl = parse_value(v, key, line)?,
            ("run", "outputs") => self.run.outputs = parse_value(v, key, line)?,
            ("run", "norm_order") => self.run.norm_order = parse_value(v, key, line)?,
            ("run", "grad_limit") => self.run.grad_limit = parse_value(v, key, line)?,
            ("sweep", "case") => {
                self.sweep.case = SweepCase::parse(v).map_err(|e| CliError::Config {
                    line,
                    key: key.into(),
                    msg: e.to_string(),
                })?
            }
            ("sweep", "eps_values") => self.sweep.eps_values = Some(parse_list(v, key, line)?),
            ("sweep", "t_eval") => self.sweep.t_eval = Some(parse_value(v, key, line)?),
            ("sweep", "smooth_horizon") => self.sweep.smooth_horizon = parse_value(v, key, line)?,
            ("sweep", "grad_limit") => self.sweep.grad_limit = parse_value(v, key, line)?,
            ("sweep", "check_budget") => self.sweep.check_budget = parse_bool(v, key, line)?,
            _ => unreachable!("key table and assignment disagree on {sec}.{key}"),
        }
        Ok(())
    }

    /// Canonical form: every section and key in table order, floats in
    /// shortest round-trip notation, optional sweep keys only when set.
    pub fn to_canonical(&self) -> String {
        let mut s = String::new();
        let g = &self.grid;
        let _ = writeln!(s, "[grid]\ndim = {}\nny = {}\nnz = {}\nlayer_points = {:?}", g.dim, g.ny, g.nz, g.layer_points);
        let t = &self.thermo;
        let _ = writeln!(
            s,
            "\n[thermo]\ngamma = {:?}\nmu = {:?}\nlambda = {:?}\nepsilon = {:?}",
            t.gamma, t.mu, t.lambda, t.epsilon
        );
        let _ = writeln!(
            s,
            "\n[slip]\nbeta_bottom = {:?}\nbeta_top = {:?}",
            self.slip.beta_bottom, self.slip.beta_top
        );
        let i = &self.initial;
        let _ = writeln!(
            s,
            "\n[initial]\nkind = {}\nrho0 = {:?}\nrho_amp = {:?}\nu_amp = {:?}\namplitude = {:?}\nmode = {}\ncase = {}\nbeta = {:?}",
            i.kind, i.rho0, i.rho_amp, i.u_amp, i.amplitude, i.mode, i.case, i.beta
        );
        let r = &self.run;
        let _ = writeln!(
            s,
            "\n[run]\nmode = {}\nt_end = {:?}\ncfl = {:?}\noutputs = {}\nnorm_order = {}\ngrad_limit = {:?}",
            r.mode.name(),
            r.t_end,
            r.cfl,
            r.outputs,
            r.norm_order,
            r.grad_limit
        );
        let w = &self.sweep;
        let _ = writeln!(s, "\n[sweep]\ncase = {}", w.case.name());
        if let Some(eps) = &w.eps_values {
            let list: Vec<String> = eps.iter().map(|e| format!("{e:?}")).collect();
            let _ = writeln!(s, "eps_values = {}", list.join(", "));
        }
        if let Some(t) = w.t_eval {
            let _ = writeln!(s, "t_eval = {t:?}");
        }
        let _ = writeln!(
            s,
            "smooth_horizon = {:?}\ngrad_limit = {:?}\ncheck_budget = {}",
            w.smooth_horizon, w.grad_limit, w.check_budget
        );
        s
    }

    pub fn slip_law(&self) -> Result<SlipLaw> {
        let n = self.grid.dim - 1;
        let law = SlipLaw::new(
            vvlab::boundary::TangentialMatrix::scalar(n, self.slip.beta_bottom),
            vvlab::boundary::TangentialMatrix::scalar(n, self.slip.beta_top),
        )?;
        Ok(law)
    }

    pub fn mms_kind(&self) -> MmsKind {
        match self.initial.case.as_str() {
            "equilibrium" => MmsKind::Equilibrium,
            "symmetric" => MmsKind::Symmetric,
            "robin_shear" => MmsKind::RobinShear { beta: self.initial.beta },
            "flat_wall" => MmsKind::FlatWall,
            _ => MmsKind::Robin { beta: self.initial.beta },
        }
    }

    pub fn initial_data(&self) -> InitialData {
        let i = &self.initial;
        match i.kind.as_str() {
            "equilibrium" => InitialData::Equilibrium { rho0: i.rho0 },
            "density_wave" => InitialData::DensityWave { rho_amp: i.rho_amp },
            "acoustic" => InitialData::Acoustic {
                amplitude: i.amplitude,
                mode: i.mode,
            },
            "mms" => InitialData::Manufactured(self.mms_kind()),
            _ => InitialData::ShearBump {
                rho_amp: i.rho_amp,
                u_amp: i.u_amp,
            },
        }
    }

    /// Solver settings of the `[run]` section (no forcing).
    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.thermo, self.slip_law()?, self.run.mode);
        cfg.t_end = self.run.t_end;
        cfg.cfl = self.run.cfl;
        cfg.outputs = self.run.outputs;
        cfg.grad_limit = (self.run.grad_limit > 0.0).then_some(self.run.grad_limit);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn sweep_plan(&self) -> Result<SweepPlan> {
        let missing = |key: &str| CliError::Config {
            line: 0,
            key: key.into(),
            msg: "required in [sweep]".into(),
        };
        let eps = self.sweep.eps_values.clone().ok_or_else(|| missing("eps_values"))?;
        let t_eval = self.sweep.t_eval.ok_or_else(|| missing("t_eval"))?;
        let mut plan = SweepPlan::new(self.sweep.case, eps, self.grid.dim, self.grid.ny, self.initial_data(), t_eval);
        plan.nz = self.grid.nz;
        plan.layer_points = (self.grid.layer_points > 0.0).then_some(self.grid.layer_points);
        if self.sweep.case == SweepCase::FlatGeneral && self.slip.beta_top != self.slip.beta_bottom {
            return Err(CliError::Config {
                line: 0,
                key: "beta_top".into(),
                msg: "sweeps use one slip coefficient on both walls".into(),
            });
        }
        plan.slip_beta = self.slip.beta_bottom;
        plan.smooth_horizon = self.sweep.smooth_horizon;
        plan.grad_limit = self.sweep.grad_limit;
        plan.norm_order = self.run.norm_order;
        plan.check_budget = self.sweep.check_budget;
        plan.validate()?;
        Ok(plan)
    }
}
