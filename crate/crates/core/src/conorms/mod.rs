//! Conormal Sobolev norms and the norm report of a state.
//!
//! The conormal fields are `Z_i = d/dy_i` and `Z_d = z(1-z) d/dz`. A
//! multi-index is the vector of application counts per field; indices are
//! enumerated in lexicographic order and `Z^I` applies the `y` fields first.
//! Quadrature is the midpoint rule on cell centres.
//!
//! Report columns, in order (`M` is the report order):
//!
//! | column | quantity |
//! |---|---|
//! | `Hco_0` .. `Hco_M` | `\|(p, u)\|` in `H^m_co` |
//! | `Wco_0_inf`, `Wco_1_inf` | `\|u\|_{k,inf}` |
//! | `grad_Zm` | `(sum_{\|I\| = M-1} \|grad Z^I u\|^2)^(1/2)` |
//! | `H1`, `H2` | standard Sobolev norms of `u` |
//! | `Linf` | `max \|u\|` |
//! | `dp_H1co` | `\|lap p\|` in `H^1_co` |
//! | `grad_u_H1inf` | `\|grad u\|_{1,inf}`, plus `\|d_t grad u\|_inf` when history is available |
//! | `dz_omega_tau_L2` | `\|d_z` of the tangential vorticity`\|` |
//! | `Nm_spatial` | spatial terms of `N_M` |
//! | `Nm_partial` | `N_M` with first time-derivative levels (history only) |

pub mod suites;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{apply_z, curl, derivative, laplacian, Axis, ScalarField, VectorField};
use crate::state::{check_uniform_spacing, FlowState, ThermoParams};

/// Highest conormal order accepted by the norm routines.
pub const MAX_ORDER: usize = 4;
/// Highest order accepted by [`wcoinf_norm`].
pub const MAX_INF_ORDER: usize = 2;

/// All count vectors over `fields` conormal fields with total at most `m`,
/// in lexicographic order.
pub fn multi_indices(fields: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, fields: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == fields {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(prefix, fields, left - c, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(fields), fields, m, &mut out);
    out
}

fn check_order(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        return Err(Error::NormOrder { order: m, cap });
    }
    Ok(())
}

/// `Z^I f` for every `|I| <= m`, in lexicographic order of `I`.
pub fn conormal_derivatives(f: &ScalarField, m: usize) -> Vec<(Vec<usize>, ScalarField)> {
    let axes = f.grid().axes();
    let mut done: BTreeMap<Vec<usize>, ScalarField> = BTreeMap::new();
    let mut by_order: Vec<Vec<usize>> = multi_indices(axes.len(), m);
    by_order.sort_by_key(|i| i.iter().sum::<usize>());
    for idx in by_order {
        let field = match idx.iter().rposition(|&c| c > 0) {
            None => f.clone(),
            Some(j) => {
                let mut parent = idx.clone();
                parent[j] -= 1;
                apply_z(&done[&parent], axes[j])
            }
        };
        done.insert(idx, field);
    }
    done.into_iter().collect()
}

/// `sum_{|I| <= m} |Z^I f|_{L2}^2`.
pub fn hco_sq(f: &ScalarField, m: usize) -> Result<f64> {
    check_order(m, MAX_ORDER)?;
    Ok(conormal_derivatives(f, m)
        .iter()
        .map(|(_, z)| z.l2_norm_sq())
        .sum())
}

/// Conormal Sobolev norm `|f|_{H^m_co}`.
pub fn hco_norm(f: &ScalarField, m: usize) -> Result<f64> {
    Ok(hco_sq(f, m)?.sqrt())
}

/// `|v|_{H^m_co}` summed over components.
pub fn hco_norm_vec(v: &VectorField, m: usize) -> Result<f64> {
    Ok(hco_sq_vec(v, m)?.sqrt())
}

fn hco_sq_vec(v: &VectorField, m: usize) -> Result<f64> {
    v.comps().iter().map(|c| hco_sq(c, m)).sum()
}

/// `(sum_{|I| <= k} max |Z^I f|^2)^(1/2)`.
pub fn wcoinf_norm(f: &ScalarField, k: usize) -> Result<f64> {
    check_order(k, MAX_INF_ORDER)?;
    Ok(conormal_derivatives(f, k)
        .iter()
        .map(|(_, z)| z.max_abs().powi(2))
        .sum::<f64>()
        .sqrt())
}

/// Vector version of [`wcoinf_norm`]; the pointwise size is the Euclidean
/// norm over components.
pub fn wcoinf_norm_vec(v: &VectorField, k: usize) -> Result<f64> {
    check_order(k, MAX_INF_ORDER)?;
    let per_comp: Vec<Vec<(Vec<usize>, ScalarField)>> =
        v.comps().iter().map(|c| conormal_derivatives(c, k)).collect();
    let n = per_comp[0].len();
    Ok((0..n)
        .map(|i| {
            let fields: Vec<ScalarField> = per_comp.iter().map(|c| c[i].1.clone()).collect();
            VectorField::new(fields).max_magnitude().powi(2)
        })
        .sum::<f64>()
        .sqrt())
}

/// All first derivatives `d_a u_c`, component-major.
pub fn gradient_entries(u: &VectorField) -> VectorField {
    let axes = u.grid().axes();
    VectorField::new(
        u.comps()
            .iter()
            .flat_map(|c| axes.iter().map(move |&a| derivative(c, a)))
            .collect(),
    )
}

/// Tangential vorticity components (the scalar vorticity in 2-D).
pub fn tangential_vorticity(u: &VectorField) -> VectorField {
    let w = curl(u);
    if u.grid().dim() == 2 {
        w
    } else {
        VectorField::new(w.into_comps().into_iter().take(2).collect())
    }
}

/// Named norm values in a fixed column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormReport {
    entries: Vec<(String, f64)>,
}

impl NormReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|(_, v)| *v).collect()
    }

    fn push(&mut self, name: impl Into<String>, value: f64) {
        self.entries.push((name.into(), value));
    }

    /// Every value finite and non-negative.
    pub fn validate(&self) -> Result<()> {
        for (n, v) in &self.entries {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::Precondition(format!("norm {n} is {v}")));
            }
        }
        Ok(())
    }
}

/// Spatial pieces shared by the single-state and history reports.
struct Pieces {
    p: ScalarField,
    grad_u: VectorField,
    grad_p: VectorField,
    lap_p: ScalarField,
}

fn pieces(s: &FlowState, gamma: f64) -> Pieces {
    let p = s.rho.map(|r| r.powf(gamma));
    let grad_p = VectorField::new(s.grid().axes().iter().map(|&a| derivative(&p, a)).collect());
    Pieces {
        grad_u: gradient_entries(&s.u),
        grad_p,
        lap_p: laplacian(&p),
        p,
    }
}

fn second_derivatives_sq(u: &VectorField) -> f64 {
    let axes = u.grid().axes();
    let mut acc = 0.0;
    for c in u.comps() {
        for (i, &a) in axes.iter().enumerate() {
            let da = derivative(c, a);
            for &b in &axes[i..] {
                let dd = if a == b {
                    crate::geometry::second_derivative(c, a)
                } else {
                    derivative(&da, b)
                };
                acc += dd.l2_norm_sq();
            }
        }
    }
    acc
}

/// Report of a single state (no time-derivative levels).
pub fn norm_report(state: &FlowState, thermo: &ThermoParams, m: usize) -> Result<NormReport> {
    build_report(state, None, thermo, m)
}

/// Full report of the middle of the last three states of `tail`, including
/// first time-derivative levels from centred differences.
pub fn nm_spatial(tail: &[FlowState], thermo: &ThermoParams, m: usize) -> Result<NormReport> {
    if tail.len() < 3 {
        return Err(Error::Precondition(format!(
            "time-derivative terms need three stored states, got {}",
            tail.len()
        )));
    }
    let w: [FlowState; 3] = [
        tail[tail.len() - 3].clone(),
        tail[tail.len() - 2].clone(),
        tail[tail.len() - 1].clone(),
    ];
    let dt = check_uniform_spacing(&w)?;
    build_report(&w[1], Some((&w[0], &w[2], dt)), thermo, m)
}

fn build_report(
    s: &FlowState,
    hist: Option<(&FlowState, &FlowState, f64)>,
    thermo: &ThermoParams,
    m: usize,
) -> Result<NormReport> {
    check_order(m, MAX_ORDER)?;
    if m == 0 {
        return Err(Error::NormOrder { order: 0, cap: MAX_ORDER });
    }
    let grid = *s.grid();
    let gamma = thermo.gamma;
    let eps = thermo.epsilon;
    let pc = pieces(s, gamma);
    let mut r = NormReport::default();

    let mut hco_pu = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let v = hco_sq(&pc.p, k)? + hco_sq_vec(&s.u, k)?;
        hco_pu.push(v);
        r.push(format!("Hco_{k}"), v.sqrt());
    }
    for k in 0..=1 {
        r.push(format!("Wco_{k}_inf"), wcoinf_norm_vec(&s.u, k)?);
    }

    let axes = grid.axes();
    let mut grad_zm = 0.0;
    for c in s.u.comps() {
        for (idx, z) in conormal_derivatives(c, m - 1) {
            if idx.iter().sum::<usize>() == m - 1 {
                grad_zm += axes.iter().map(|&a| derivative(&z, a).l2_norm_sq()).sum::<f64>();
            }
        }
    }
    r.push("grad_Zm", grad_zm.sqrt());

    let h1_sq = s.u.l2_norm_sq() + pc.grad_u.l2_norm_sq();
    r.push("H1", h1_sq.sqrt());
    r.push("H2", (h1_sq + second_derivatives_sq(&s.u)).sqrt());
    r.push("Linf", s.u.max_magnitude());
    let lap_p_1 = hco_sq(&pc.lap_p, 1)?;
    r.push("dp_H1co", lap_p_1.sqrt());

    let grad_u_inf_sq = wcoinf_norm_vec(&pc.grad_u, 1)?.powi(2);
    let hist_pieces = hist.map(|(a, b, dt)| (pieces(a, gamma), pieces(b, gamma), a, b, dt));
    let dt_grad_u = hist_pieces
        .as_ref()
        .map(|(a, b, _, _, dt)| b.grad_u.sub(&a.grad_u).scale(0.5 / dt));
    let dt_grad_u_inf_sq = dt_grad_u.as_ref().map_or(0.0, |g| g.max_magnitude().powi(2));
    r.push("grad_u_H1inf", (grad_u_inf_sq + dt_grad_u_inf_sq).sqrt());

    let wt = tangential_vorticity(&s.u);
    let dz_wt = wt.map_comps(|c| derivative(c, Axis::Z));
    r.push("dz_omega_tau_L2", dz_wt.l2_norm());

    let grad_u_m1 = hco_sq_vec(&pc.grad_u, m - 1)?;
    let grad_p_m1 = hco_sq_vec(&pc.grad_p, m - 1)?;
    let lap_p_2 = hco_sq(&pc.lap_p, 2)?;
    let spatial = 1.0 + hco_pu[m] + grad_u_m1 + grad_p_m1 + lap_p_1 + grad_u_inf_sq + eps * lap_p_2;
    r.push("Nm_spatial", spatial);

    if let Some((a, b, sa, sb, dt)) = &hist_pieces {
        let k = 0.5 / dt;
        let dt_p = b.p.sub(&a.p).scale(k);
        let dt_u = sb.u.sub(&sa.u).scale(k);
        let dt_grad_p = b.grad_p.sub(&a.grad_p).scale(k);
        let dt_lap_p = b.lap_p.sub(&a.lap_p).scale(k);
        let dt_grad_u = dt_grad_u.as_ref().expect("history present");
        let mut time = hco_sq(&dt_p, m - 1)? + hco_sq_vec(&dt_u, m - 1)?;
        if m >= 2 {
            time += hco_sq_vec(dt_grad_u, m - 2)? + hco_sq_vec(&dt_grad_p, m - 2)?;
        }
        time += dt_lap_p.l2_norm_sq() + dt_grad_u_inf_sq + eps * hco_sq(&dt_lap_p, 1)?;
        r.push("Nm_partial", spatial + time);
    }
    r.validate()?;
    Ok(r)
}
