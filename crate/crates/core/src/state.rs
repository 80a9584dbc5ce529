//! Flow state `(rho, u)` at one time level and gamma-law thermodynamics.

use crate::error::{Error, Result};
use crate::geometry::{curl, derivative, div, GridSpec, ScalarField, VectorField};

/// Material and viscosity parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermoParams {
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    /// Viscosity scale (inverse Reynolds number), in `(0, 1]`.
    pub epsilon: f64,
}

impl ThermoParams {
    pub fn new(gamma: f64, mu: f64, lambda: f64, epsilon: f64) -> Result<Self> {
        let p = Self {
            gamma,
            mu,
            lambda,
            epsilon,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) {
            return Err(Error::Param(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.mu > 0.0) {
            return Err(Error::Param(format!("mu must be positive, got {}", self.mu)));
        }
        if !(2.0 * self.mu + 3.0 * self.lambda > 0.0) {
            return Err(Error::Param(format!(
                "2 mu + 3 lambda must be positive, got mu={}, lambda={}",
                self.mu, self.lambda
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Param(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.gamma, self.mu, self.lambda, epsilon)
    }

    #[inline]
    pub fn pressure(&self, rho: f64) -> f64 {
        rho.powf(self.gamma)
    }

    #[inline]
    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.gamma * rho.powf(self.gamma - 1.0)).sqrt()
    }
}

impl Default for ThermoParams {
    /// gamma = 2 with the normalisation mu = 1, 2 mu + lambda = 2.
    fn default() -> Self {
        Self {
            gamma: 2.0,
            mu: 1.0,
            lambda: 0.0,
            epsilon: 1e-2,
        }
    }
}

/// Density and velocity at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub rho: ScalarField,
    pub u: VectorField,
    pub t: f64,
}

impl FlowState {
    pub fn new(rho: ScalarField, u: VectorField, t: f64) -> Result<Self> {
        let grid = *rho.grid();
        if *u.grid() != grid {
            return Err(Error::GridMismatch("density and velocity grids differ".into()));
        }
        if u.len() != grid.dim() {
            return Err(Error::GridMismatch(format!(
                "velocity has {} components on a {}-D grid",
                u.len(),
                grid.dim()
            )));
        }
        Ok(Self { rho, u, t })
    }

    /// Constant density `rho0`, fluid at rest.
    pub fn equilibrium(grid: GridSpec, rho0: f64) -> Self {
        Self {
            rho: ScalarField::constant(grid, rho0),
            u: VectorField::zeros(grid, grid.dim()),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.rho.grid()
    }

    /// Wall-normal velocity component.
    pub fn normal_velocity(&self) -> &ScalarField {
        self.u.comp(self.grid().dim() - 1)
    }

    pub fn check_positive(&self) -> Result<()> {
        check_positive(&self.rho)
    }

    pub fn check_finite(&self) -> Result<()> {
        self.rho.check_finite("rho")?;
        self.u.check_finite("u")
    }

    /// Total mass `sum rho * cell volume`.
    pub fn mass(&self) -> f64 {
        self.rho.integral()
    }

    /// Discrete energy `int 1/2 rho |u|^2 + rho^gamma / (gamma - 1)`.
    pub fn energy(&self, gamma: f64) -> f64 {
        energy_density(self, gamma).integral()
    }
}

/// Pointwise energy density `1/2 rho |u|^2 + rho^gamma / (gamma - 1)`.
pub fn energy_density(state: &FlowState, gamma: f64) -> ScalarField {
    let grid = *state.grid();
    let mut e = ScalarField::zeros(grid);
    e.fill_with(0, |i1, i2, k| {
        let r = state.rho.get(i1, i2, k);
        let ke: f64 = state.u.comps().iter().map(|c| c.get(i1, i2, k).powi(2)).sum();
        0.5 * r * ke + r.powf(gamma) / (gamma - 1.0)
    });
    e
}

fn check_positive(rho: &ScalarField) -> Result<()> {
    let grid = *rho.grid();
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            for k in 0..grid.nz() {
                let v = rho.get(i1, i2, k as isize);
                if !(v > 0.0) {
                    return Err(Error::NonPositiveDensity {
                        value: v,
                        i1,
                        i2,
                        k,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Pointwise `rho^gamma`; non-positive density is a hard error naming the node.
pub fn pressure(rho: &ScalarField, gamma: f64) -> Result<ScalarField> {
    check_positive(rho)?;
    Ok(rho.map(|r| r.powf(gamma)))
}

/// Vorticity `curl u`.
pub fn vorticity(state: &FlowState) -> VectorField {
    curl(&state.u)
}

/// Residual of `div u = -p_t/(gamma p) - u.grad p/(gamma p)` at the middle of
/// three equally spaced states, with `p_t` from the centred time difference
/// of the stored states.
pub fn divu_identity_residual(states: &[FlowState; 3], gamma: f64) -> Result<ScalarField> {
    let grid = *states[1].grid();
    if states.iter().any(|s| *s.grid() != grid) {
        return Err(Error::GridMismatch("states live on different grids".into()));
    }
    let dt = check_uniform_spacing(states)?;
    let p_prev = pressure(&states[0].rho, gamma)?;
    let p_mid = pressure(&states[1].rho, gamma)?;
    let p_next = pressure(&states[2].rho, gamma)?;
    let p_t = p_next.zip_with(&p_prev, |a, b| (a - b) / (2.0 * dt));
    let u = &states[1].u;
    let div_u = div(u);
    let grad_p: Vec<ScalarField> = grid.axes().iter().map(|&a| derivative(&p_mid, a)).collect();
    let mut out = ScalarField::zeros(grid);
    out.fill_with(0, |i1, i2, k| {
        let gp = gamma * p_mid.get(i1, i2, k);
        let adv: f64 = grad_p
            .iter()
            .enumerate()
            .map(|(c, g)| u.comp(c).get(i1, i2, k) * g.get(i1, i2, k))
            .sum();
        div_u.get(i1, i2, k) + p_t.get(i1, i2, k) / gp + adv / gp
    });
    Ok(out)
}

/// Common spacing of three states; errors if the spacing differs.
pub fn check_uniform_spacing(states: &[FlowState; 3]) -> Result<f64> {
    let d0 = states[1].t - states[0].t;
    let d1 = states[2].t - states[1].t;
    let scale = d0.abs().max(d1.abs());
    if !(d0 > 0.0 && d1 > 0.0) || (d0 - d1).abs() > 1e-9 * scale {
        return Err(Error::TimeSpacing(format!(
            "time steps {d0} and {d1} are not equal and positive"
        )));
    }
    Ok(0.5 * (d0 + d1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_grid;
    use std::f64::consts::PI;

    #[test]
    fn pressure_examples() {
        let grid = build_grid(2, 8, 8).unwrap();
        let p = pressure(&ScalarField::constant(grid, 1.0), 2.0).unwrap();
        assert_eq!(p.max_abs(), 1.0);
        let p = pressure(&ScalarField::constant(grid, 2.0), 2.0).unwrap();
        assert_eq!(p.max_abs(), 4.0);
        assert_eq!(p.min_interior(), 4.0);
        let mut r = ScalarField::constant(grid, 1.0);
        r.set(3, 0, 5, 0.0);
        match pressure(&r, 2.0) {
            Err(Error::NonPositiveDensity { i1: 3, k: 5, .. }) => {}
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn thermo_validation() {
        assert!(ThermoParams::new(1.0, 1.0, 0.0, 0.1).is_err());
        assert!(ThermoParams::new(2.0, 0.0, 0.0, 0.1).is_err());
        assert!(ThermoParams::new(2.0, 1.0, -1.0, 0.1).is_err());
        assert!(ThermoParams::new(2.0, 1.0, 0.0, 0.0).is_err());
        assert!(ThermoParams::new(2.0, 1.0, 0.0, 1.5).is_err());
        assert!(ThermoParams::new(1.4, 1.0, -0.5, 1.0).is_ok());
    }

    #[test]
    fn translation_has_no_vorticity() {
        let grid = build_grid(3, 8, 8).unwrap();
        let u = VectorField::new(vec![
            ScalarField::constant(grid, 1.0),
            ScalarField::constant(grid, -2.0),
            ScalarField::constant(grid, 0.5),
        ]);
        let s = FlowState::new(ScalarField::constant(grid, 1.0), u, 0.0).unwrap();
        assert_eq!(vorticity(&s).max_abs(), 0.0);
    }

    #[test]
    fn shear_vorticity() {
        let grid = build_grid(3, 8, 64).unwrap();
        let u = VectorField::new(vec![
            ScalarField::from_fn(grid, |x| (2.0 * PI * x[2]).sin()),
            ScalarField::zeros(grid),
            ScalarField::zeros(grid),
        ]);
        let s = FlowState::new(ScalarField::constant(grid, 1.0), u, 0.0).unwrap();
        let w = vorticity(&s);
        let mut err = 0.0_f64;
        for k in 0..grid.nz() as isize {
            let z = grid.z(k);
            err = err.max((w.comp(1).get(0, 0, k) - 2.0 * PI * (2.0 * PI * z).cos()).abs());
        }
        assert!(err < 0.02, "err {err}");
    }

    #[test]
    fn steady_state_residual_is_zero() {
        let grid = build_grid(2, 8, 8).unwrap();
        let mk = |t| {
            let mut s = FlowState::equilibrium(grid, 1.3);
            s.t = t;
            s
        };
        let r = divu_identity_residual(&[mk(0.0), mk(0.1), mk(0.2)], 2.0).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn residual_rejects_bad_inputs() {
        let g1 = build_grid(2, 8, 8).unwrap();
        let g2 = build_grid(2, 16, 8).unwrap();
        let mut a = FlowState::equilibrium(g1, 1.0);
        let mut b = FlowState::equilibrium(g1, 1.0);
        let mut c = FlowState::equilibrium(g2, 1.0);
        b.t = 0.1;
        c.t = 0.2;
        assert!(matches!(
            divu_identity_residual(&[a.clone(), b.clone(), c], 2.0),
            Err(Error::GridMismatch(_))
        ));
        let mut c = FlowState::equilibrium(g1, 1.0);
        c.t = 0.25;
        assert!(matches!(
            divu_identity_residual(&[a.clone(), b.clone(), c], 2.0),
            Err(Error::TimeSpacing(_))
        ));
        a.t = 0.1;
        let mut c = FlowState::equilibrium(g1, 1.0);
        c.t = 0.1;
        assert!(divu_identity_residual(&[a, b, c], 2.0).is_err());
    }

    #[test]
    fn energy_of_rest_state() {
        let grid = build_grid(2, 8, 8).unwrap();
        let s = FlowState::equilibrium(grid, 2.0);
        assert!((s.energy(2.0) - 4.0).abs() < 1e-14);
        assert!((s.mass() - 2.0).abs() < 1e-14);
    }
}
