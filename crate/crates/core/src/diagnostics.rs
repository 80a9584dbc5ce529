//! Near-wall diagnostics: layer profiles, the cut-off boundary quantity
//! `eta`, the flat-wall curl identity and the weak density layer table.

use crate::boundary::{n_cross_tangential, wall_value_cubic, SlipLaw, Wall};
use crate::conorms::{tangential_vorticity, NormReport};
use crate::error::{Error, Result};
use crate::geometry::{curl, div, grad, vector_laplacian, ScalarField, VectorField};
use crate::solver::Mode;
use crate::state::{FlowState, ThermoParams};

/// Profiles are sampled for wall distances up to this value.
pub const PROFILE_DEPTH: f64 = 0.25;
/// Cut-off `chi` is 1 up to this wall distance ...
pub const CUTOFF_INNER: f64 = 0.125;
/// ... and 0 from this one on.
pub const CUTOFF_OUTER: f64 = 0.25;
/// Profiles whose wall value is below this are treated as layer-free.
pub const LAYER_FLOOR: f64 = 1e-10;
/// Verdict threshold for the max/min ratio of a bounded quantity.
pub const BOUNDED_RATIO: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct LayerProfile {
    pub wall: Wall,
    /// Distance to the wall, increasing.
    pub z_samples: Vec<f64>,
    /// Root mean square over the wall directions of `|omega_tau|`.
    pub tangential_vorticity: Vec<f64>,
    /// Mean of `rho` over the wall directions minus its mid-plane mean.
    pub density_deviation: Vec<f64>,
    /// Distance of the `1/e` crossing; `None` when no layer is detected.
    pub fitted_width: Option<f64>,
    /// Wall value of the vorticity profile.
    pub fitted_amplitude: f64,
}

impl LayerProfile {
    pub fn has_layer(&self) -> bool {
        self.fitted_width.is_some()
    }
}

fn layer_mean<F: Fn(usize, usize) -> f64>(n1: usize, n2: usize, f: F) -> f64 {
    let mut acc = 0.0;
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            acc += f(i1, i2);
        }
    }
    acc / (n1 * n2) as f64
}

/// Extracts the near-wall vorticity and density profiles and fits the layer.
pub fn profile_layer(state: &FlowState, wall: Wall) -> LayerProfile {
    let grid = *state.grid();
    let (n1, n2, nz) = (grid.n1(), grid.n2(), grid.nz());
    let w = tangential_vorticity(&state.u);
    let mid = |i1, i2| {
        if nz % 2 == 0 {
            0.5 * (state.rho.get(i1, i2, nz as isize / 2 - 1) + state.rho.get(i1, i2, nz as isize / 2))
        } else {
            state.rho.get(i1, i2, nz as isize / 2)
        }
    };
    let rho_mid = layer_mean(n1, n2, mid);

    let mut z_samples = Vec::new();
    let mut vort = Vec::new();
    let mut dens = Vec::new();
    for j in 0..nz {
        let d = (j as f64 + 0.5) * grid.dz();
        if d > PROFILE_DEPTH {
            break;
        }
        let k = wall.interior_layer(&grid, j);
        let ms = layer_mean(n1, n2, |i1, i2| w.comps().iter().map(|c| c.get(i1, i2, k).powi(2)).sum());
        z_samples.push(d);
        vort.push(ms.sqrt());
        dens.push(layer_mean(n1, n2, |i1, i2| state.rho.get(i1, i2, k)) - rho_mid);
    }
    let (fitted_width, fitted_amplitude) = fit_layer(&z_samples, &vort);
    LayerProfile {
        wall,
        z_samples,
        tangential_vorticity: vort,
        density_deviation: dens,
        fitted_width,
        fitted_amplitude,
    }
}

/// Wall value by log-linear extrapolation from the two nearest samples and
/// the `1/e` crossing by log-linear interpolation; both exact for
/// exponential profiles.
fn fit_layer(d: &[f64], w: &[f64]) -> (Option<f64>, f64) {
    if d.len() < 2 || !(w[0] > LAYER_FLOOR) || !(w[1] > 0.0) {
        return (None, w.first().copied().unwrap_or(0.0).max(0.0));
    }
    let slope = (w[1].ln() - w[0].ln()) / (d[1] - d[0]);
    let amp = (w[0].ln() - slope * d[0]).exp();
    let target = amp / std::f64::consts::E;
    if w[0] <= target {
        // decays within the first half cell; too thin to resolve
        return (None, amp);
    }
    for j in 1..w.len() {
        if w[j] <= target {
            if !(w[j] > 0.0) {
                return (Some(d[j]), amp);
            }
            let (a, b) = (w[j - 1].ln(), w[j].ln());
            let s = (a - target.ln()) / (a - b);
            return (Some(d[j - 1] + s * (d[j] - d[j - 1])), amp);
        }
    }
    (None, amp)
}

/// Quintic cut-off: 1 for wall distance `<= 1/8`, 0 for `>= 1/4`, C^2.
pub fn cutoff(distance: f64) -> f64 {
    let s = ((distance - CUTOFF_INNER) / (CUTOFF_OUTER - CUTOFF_INNER)).clamp(0.0, 1.0);
    1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
}

/// `eta = chi (omega x n + Pi(B u))` near each wall. Components follow the
/// velocity layout; the normal component is zero.
pub fn eta_field(state: &FlowState, slip: &SlipLaw) -> VectorField {
    let grid = *state.grid();
    let dim = grid.dim();
    let w = curl(&state.u);
    let nw = w.len();
    let at = |i1: usize, i2: usize, k: isize| -> [f64; 2] {
        let z = grid.z(k);
        let (wall, dist) = if z < 0.5 { (Wall::Bottom, z) } else { (Wall::Top, 1.0 - z) };
        let chi = cutoff(dist);
        if chi == 0.0 {
            return [0.0; 2];
        }
        let wv: Vec<f64> = (0..nw).map(|c| w.comp(c).get(i1, i2, k)).collect();
        let nxw = n_cross_tangential(&wv, wall);
        let mut ut = [0.0; 2];
        for (c, v) in ut.iter_mut().enumerate().take(dim - 1) {
            *v = state.u.comp(c).get(i1, i2, k);
        }
        let bu = slip.matrix(wall).apply(ut);
        [chi * (bu[0] - nxw[0]), chi * (bu[1] - nxw[1])]
    };
    let mut comps: Vec<ScalarField> = (0..dim).map(|_| ScalarField::zeros(grid)).collect();
    for (c, comp) in comps.iter_mut().enumerate().take(dim - 1) {
        comp.fill_with(0, |i1, i2, k| at(i1, i2, k)[c]);
    }
    comps[dim - 1].set_ghost_layers(0);
    VectorField::new(comps)
}

/// Largest cubic wall extrapolation of the tangential `eta` over one wall.
pub fn eta_wall_trace(eta: &VectorField, wall: Wall) -> f64 {
    let grid = *eta.grid();
    let mut worst = 0.0_f64;
    for i1 in 0..grid.n1() {
        for i2 in 0..grid.n2() {
            let sq: f64 = eta.comps()[..grid.dim() - 1]
                .iter()
                .map(|c| wall_value_cubic(c, wall, i1, i2).powi(2))
                .sum();
            worst = worst.max(sq.sqrt());
        }
    }
    worst
}

/// Residual of the flat-wall curl identity per wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub bottom: f64,
    pub top: f64,
}

impl IdentityResidual {
    pub fn max(&self) -> f64 {
        self.bottom.max(self.top)
    }
}

/// `max |mu n x (curl curl omega) + n x (grad rho / rho x V)|` over each wall,
/// `V = mu lap u + (mu + lambda) grad div u`. Interior values are extrapolated
/// to the wall with cubic weights. Expects filled ghosts from a `B = 0`
/// Navier-Stokes run.
pub fn flat_boundary_identity_residual(
    state: &FlowState,
    thermo: &ThermoParams,
    mode: Mode,
) -> Result<IdentityResidual> {
    if mode == Mode::Euler {
        return Err(Error::Precondition(
            "the curl identity holds for viscous solutions only".into(),
        ));
    }
    let grid = *state.grid();
    let u = &state.u;
    let ccw = curl(&curl(&curl(u))).scale(thermo.mu);
    let v = vector_laplacian(u)
        .scale(thermo.mu)
        .add(&grad(&div(u)).scale(thermo.mu + thermo.lambda));
    let g = grad(&state.rho).map_comps(|c| c.zip_with(&state.rho, |a, r| a / r));
    let gxv = if grid.dim() == 2 {
        // one-component convention of `curl`: g1 V3 - g3 V1
        VectorField::new(vec![g.comp(0).mul(v.comp(1)).sub(&g.comp(1).mul(v.comp(0)))])
    } else {
        let c = |a: usize, b: usize| g.comp(a).mul(v.comp(b)).sub(&g.comp(b).mul(v.comp(a)));
        VectorField::new(vec![c(1, 2), c(2, 0), c(0, 1)])
    };
    let x = ccw.add(&gxv);
    let mut out = [0.0_f64; 2];
    for (slot, wall) in out.iter_mut().zip(Wall::BOTH) {
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                let xw: Vec<f64> = x.comps().iter().map(|c| wall_value_cubic(c, wall, i1, i2)).collect();
                let r = n_cross_tangential(&xw, wall);
                *slot = slot.max(r[0].hypot(r[1]));
            }
        }
    }
    Ok(IdentityResidual {
        bottom: out[0],
        top: out[1],
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakLayerRow {
    pub epsilon: f64,
    pub dp_h1co: f64,
    pub dz_omega_tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakLayerReport {
    /// Ordered by decreasing `epsilon`.
    pub rows: Vec<WeakLayerRow>,
    pub dp_ratio: f64,
    /// `dp_ratio <= 2`.
    pub density_bounded: bool,
    /// `|d_z omega_tau|` strictly increases as `epsilon` decreases.
    pub vorticity_grows: bool,
}

/// Compares the pressure Laplacian norm against the vorticity layer norm
/// across a viscosity sweep.
pub fn weak_density_layer_report(sweep: &[(f64, NormReport)]) -> Result<WeakLayerReport> {
    if sweep.len() < 3 {
        return Err(Error::Precondition(format!(
            "need at least three viscosities, got {}",
            sweep.len()
        )));
    }
    let mut rows = sweep
        .iter()
        .map(|(eps, r)| {
            let col = |name: &str| {
                r.get(name)
                    .ok_or_else(|| Error::Precondition(format!("norm report lacks {name}")))
            };
            Ok(WeakLayerRow {
                epsilon: *eps,
                dp_h1co: col("dp_H1co")?,
                dz_omega_tau: col("dz_omega_tau_L2")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    let dp_ratio = bounded_ratio(rows.iter().map(|r| r.dp_h1co));
    let vorticity_grows = rows.windows(2).all(|w| w[1].dz_omega_tau > w[0].dz_omega_tau);
    Ok(WeakLayerReport {
        density_bounded: dp_ratio <= BOUNDED_RATIO,
        dp_ratio,
        vorticity_grows,
        rows,
    })
}

/// `max / min` of the values; 1 for a constant (including all-zero) list.
pub fn bounded_ratio(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for v in values {
        lo = lo.min(v.abs());
        hi = hi.max(v.abs());
    }
    if hi == 0.0 {
        1.0
    } else if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(0.125), 1.0);
        assert_eq!(cutoff(0.25), 0.0);
        assert_eq!(cutoff(0.4), 0.0);
        assert!((cutoff(0.1875) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exponential_fit_is_exact() {
        let d: Vec<f64> = (0..20).map(|j| (j as f64 + 0.5) * 0.01).collect();
        let w: Vec<f64> = d.iter().map(|z| 3.0 * (-z / 0.05).exp()).collect();
        let (width, amp) = fit_layer(&d, &w);
        assert!((width.unwrap() - 0.05).abs() < 1e-12);
        assert!((amp - 3.0).abs() < 1e-12);
        assert_eq!(fit_layer(&d, &[0.0; 20]).0, None);
        assert_eq!(fit_layer(&d, &[1.0; 20]).0, None);
    }

    #[test]
    fn ratio_edge_cases() {
        assert_eq!(bounded_ratio([0.0, 0.0]), 1.0);
        assert_eq!(bounded_ratio([2.0, 1.0, 4.0]), 4.0);
        assert!(bounded_ratio([0.0, 1.0]).is_infinite());
    }
}
