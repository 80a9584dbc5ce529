//! Initial data families.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{GridSpec, ScalarField, VectorField};
use crate::oracle::{acoustic_exact, MmsKind};
use crate::solver::Mode;
use crate::state::FlowState;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialData {
    /// Constant density, fluid at rest.
    Equilibrium { rho0: f64 },
    /// Tangential shear plus a density bump, both flat near the walls:
    ///
    /// ```text
    ///   theta(z) = sin^4(pi z)
    ///   rho = 1 + a cos(2 pi y1) theta
    ///   u1  = U theta (1 + 0.5 cos(2 pi y1)),  u2 = 0.5 U theta sin(2 pi y1),  u_z = 0
    /// ```
    ShearBump { rho_amp: f64, u_amp: f64 },
    /// `rho = 1 + a cos(2 pi y1)`, `u = 0`. The inviscid solution stays
    /// independent of `z`, so any slip matrix `B != 0` forces a wall layer.
    DensityWave { rho_amp: f64 },
    /// Linear standing acoustic wave.
    Acoustic { amplitude: f64, mode: u32 },
    /// Manufactured solution at `t = 0` (needs its forcing to evolve).
    Manufactured(MmsKind),
}

impl InitialData {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialData::Equilibrium { .. } => "equilibrium",
            InitialData::ShearBump { .. } => "shear_bump",
            InitialData::DensityWave { .. } => "density_wave",
            InitialData::Acoustic { .. } => "acoustic",
            InitialData::Manufactured(_) => "mms",
        }
    }

    /// Interior samples at `t = 0`; ghosts are filled by the solver.
    pub fn state(&self, grid: GridSpec, gamma: f64, mode: Mode) -> Result<FlowState> {
        let dim = grid.dim();
        let theta = |z: f64| (PI * z).sin().powi(4);
        let s = match *self {
            InitialData::Equilibrium { rho0 } => {
                if !(rho0 > 0.0) {
                    return Err(Error::Param(format!("rho0 must be positive, got {rho0}")));
                }
                let mut s = FlowState::equilibrium(grid, rho0);
                s.rho.set_ghost_layers(0);
                s
            }
            InitialData::ShearBump { rho_amp, u_amp } => {
                if !(rho_amp.abs() < 1.0) {
                    return Err(Error::Param(format!("rho_amp must lie in (-1, 1), got {rho_amp}")));
                }
                let rho = ScalarField::from_interior_fn(grid, |x| {
                    1.0 + rho_amp * (2.0 * PI * x[0]).cos() * theta(x[2])
                });
                let mut comps = vec![ScalarField::from_interior_fn(grid, |x| {
                    u_amp * theta(x[2]) * (1.0 + 0.5 * (2.0 * PI * x[0]).cos())
                })];
                if dim == 3 {
                    comps.push(ScalarField::from_interior_fn(grid, |x| {
                        0.5 * u_amp * theta(x[2]) * (2.0 * PI * x[0]).sin()
                    }));
                }
                comps.push(ScalarField::from_interior_fn(grid, |_| 0.0));
                FlowState::new(rho, VectorField::new(comps), 0.0)?
            }
            InitialData::DensityWave { rho_amp } => {
                if !(rho_amp.abs() < 1.0) {
                    return Err(Error::Param(format!("rho_amp must lie in (-1, 1), got {rho_amp}")));
                }
                let rho = ScalarField::from_interior_fn(grid, |x| 1.0 + rho_amp * (2.0 * PI * x[0]).cos());
                let u = VectorField::new(
                    (0..dim)
                        .map(|_| ScalarField::from_interior_fn(grid, |_| 0.0))
                        .collect(),
                );
                FlowState::new(rho, u, 0.0)?
            }
            InitialData::Acoustic { amplitude, mode: k } => acoustic_exact(amplitude, k, gamma)?.state(grid, 0.0),
            InitialData::Manufactured(kind) => kind.case(dim, mode)?.state(grid, 0.0)?,
        };
        s.check_positive()?;
        Ok(s)
    }
}
