//! Wall closure: impermeability plus the generalized Navier-slip condition
//! `n x omega = [B u]_tau` on the flat walls `z = 0` and `z = 1`.
//!
//! With outward normals `-e_z` (bottom) and `+e_z` (top), `u_z = 0` on the
//! wall and hence `d_tau u_z = 0` there, the vorticity condition reduces to
//! the tangential Robin relations
//!
//! ```text
//!   z = 0:  d_z u_tau =  B u_tau
//!   z = 1:  d_z u_tau = -B u_tau
//! ```
//!
//! Ghost values are chosen so that the difference quotient across the wall
//! and the wall-midpoint average satisfy these relations exactly; `u_z` is
//! extended oddly and `rho` evenly.

use crate::error::{Error, Result};
use crate::geometry::{curl, GridSpec, ScalarField, VectorField, GHOST_LAYERS};
use crate::state::FlowState;

/// Which wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wall {
    Bottom,
    Top,
}

impl Wall {
    pub const BOTH: [Wall; 2] = [Wall::Bottom, Wall::Top];

    pub fn name(self) -> &'static str {
        match self {
            Wall::Bottom => "bottom",
            Wall::Top => "top",
        }
    }

    /// Interior layer at wall distance index `j` (0 = wall-adjacent).
    #[inline]
    pub fn interior_layer(self, grid: &GridSpec, j: usize) -> isize {
        match self {
            Wall::Bottom => j as isize,
            Wall::Top => grid.nz() as isize - 1 - j as isize,
        }
    }

    /// Ghost layer `j` (1 = first ghost).
    #[inline]
    pub fn ghost_layer(self, grid: &GridSpec, j: usize) -> isize {
        match self {
            Wall::Bottom => -(j as isize),
            Wall::Top => grid.nz() as isize - 1 + j as isize,
        }
    }
}

/// Symmetric matrix acting on the `d-1` tangential velocity components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentialMatrix {
    n: usize,
    m: [[f64; 2]; 2],
}

impl TangentialMatrix {
    /// `rows` must be `n x n` with `n` in {1, 2}.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if !(n == 1 || n == 2) || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Param(format!(
                "slip matrix must be 1x1 or 2x2, got {} rows",
                rows.len()
            )));
        }
        let mut m = [[0.0; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[i][j] = v;
            }
        }
        Ok(Self { n, m })
    }

    /// `beta * I` on `n` tangential components.
    pub fn scalar(n: usize, beta: f64) -> Self {
        assert!(n == 1 || n == 2, "tangential dimension must be 1 or 2");
        let mut m = [[0.0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate().take(n) {
            row[i] = beta;
        }
        Self { n, m }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let scale = self.m.iter().flatten().fold(1.0_f64, |a, v| a.max(v.abs()));
        (self.m[0][1] - self.m[1][0]).abs() <= 1e-14 * scale
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|&v| v == 0.0)
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// `(I + a B)^{-1} (I - a B)`, the ghost transfer for half-gap `a`.
    fn transfer(&self, a: f64) -> [[f64; 2]; 2] {
        let b = &self.m;
        if self.n == 1 {
            return [[(1.0 - a * b[0][0]) / (1.0 + a * b[0][0]), 0.0], [0.0, 0.0]];
        }
        let p = [[1.0 + a * b[0][0], a * b[0][1]], [a * b[1][0], 1.0 + a * b[1][1]]];
        let q = [[1.0 - a * b[0][0], -a * b[0][1]], [-a * b[1][0], 1.0 - a * b[1][1]]];
        let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
        let inv = [[p[1][1] / det, -p[0][1] / det], [-p[1][0] / det, p[0][0] / det]];
        let mut t = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                t[i][j] = inv[i][0] * q[0][j] + inv[i][1] * q[1][j];
            }
        }
        t
    }
}

/// Slip matrices for both walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlipLaw {
    bottom: TangentialMatrix,
    top: TangentialMatrix,
}

impl SlipLaw {
    pub fn new(bottom: TangentialMatrix, top: TangentialMatrix) -> Result<Self> {
        if bottom.size() != top.size() {
            return Err(Error::Param("slip matrices have different sizes".into()));
        }
        if !bottom.is_symmetric() {
            return Err(Error::AsymmetricSlip { wall: "bottom" });
        }
        if !top.is_symmetric() {
            return Err(Error::AsymmetricSlip { wall: "top" });
        }
        Ok(Self { bottom, top })
    }

    /// `B = 0` on both walls: `n x omega = 0`.
    pub fn free_slip(dim: usize) -> Self {
        Self::uniform(dim, 0.0)
    }

    /// `B = beta I` on both walls.
    pub fn uniform(dim: usize, beta: f64) -> Self {
        let m = TangentialMatrix::scalar(dim - 1, beta);
        Self { bottom: m, top: m }
    }

    pub fn matrix(&self, wall: Wall) -> &TangentialMatrix {
        match wall {
            Wall::Bottom => &self.bottom,
            Wall::Top => &self.top,
        }
    }

    pub fn tangential_dim(&self) -> usize {
        self.bottom.size()
    }

    pub fn is_zero(&self) -> bool {
        self.bottom.is_zero() && self.top.is_zero()
    }
}

/// Populates both ghost layers of `state` for the given slip law.
pub fn fill_ghosts(state: &mut FlowState, slip: &SlipLaw) {
    let grid = *state.grid();
    let dim = grid.dim();
    assert_eq!(slip.tangential_dim(), dim - 1, "slip law does not match grid dimension");
    let dz = grid.dz();
    for wall in Wall::BOTH {
        for j in 1..=GHOST_LAYERS {
            let kin = wall.interior_layer(&grid, j - 1);
            let kg = wall.ghost_layer(&grid, j);
            let t = slip.matrix(wall).transfer(0.5 * (2 * j - 1) as f64 * dz);
            for i1 in 0..grid.n1() {
                for i2 in 0..grid.n2() {
                    let r = state.rho.get(i1, i2, kin);
                    state.rho.set(i1, i2, kg, r);
                    let w = state.u.comp(dim - 1).get(i1, i2, kin);
                    state.u.comp_mut(dim - 1).set(i1, i2, kg, -w);
                    if dim == 2 {
                        let v = state.u.comp(0).get(i1, i2, kin);
                        state.u.comp_mut(0).set(i1, i2, kg, t[0][0] * v);
                    } else {
                        let v0 = state.u.comp(0).get(i1, i2, kin);
                        let v1 = state.u.comp(1).get(i1, i2, kin);
                        state.u.comp_mut(0).set(i1, i2, kg, t[0][0] * v0 + t[0][1] * v1);
                        state.u.comp_mut(1).set(i1, i2, kg, t[1][0] * v0 + t[1][1] * v1);
                    }
                }
            }
        }
    }
    state.rho.set_ghost_layers(GHOST_LAYERS);
    for c in 0..dim {
        state.u.comp_mut(c).set_ghost_layers(GHOST_LAYERS);
    }
}

/// Quadratic extrapolation to the wall from the three nearest interior nodes.
#[inline]
pub fn wall_value(f: &ScalarField, wall: Wall, i1: usize, i2: usize) -> f64 {
    let g = f.grid();
    let v = |j| f.get(i1, i2, wall.interior_layer(g, j));
    (15.0 * v(0) - 10.0 * v(1) + 3.0 * v(2)) / 8.0
}

/// Cubic extrapolation to the wall from the four nearest interior nodes.
#[inline]
pub fn wall_value_cubic(f: &ScalarField, wall: Wall, i1: usize, i2: usize) -> f64 {
    let g = f.grid();
    let v = |j| f.get(i1, i2, wall.interior_layer(g, j));
    (35.0 * v(0) - 35.0 * v(1) + 21.0 * v(2) - 5.0 * v(3)) / 16.0
}

/// Tangential part of `n x w` on `wall` for a vorticity-like vector with
/// components `w` (one out-of-plane component in 2-D, three in 3-D).
#[inline]
pub fn n_cross_tangential(w: &[f64], wall: Wall) -> [f64; 2] {
    let sign = match wall {
        Wall::Bottom => 1.0,
        Wall::Top => -1.0,
    };
    match w.len() {
        // embedded 3-D vorticity is (0, -s, 0)
        1 => [-sign * w[0], 0.0],
        3 => [sign * w[1], -sign * w[0]],
        n => panic!("vorticity with {n} components"),
    }
}

/// Wall traces of `n x omega - [B u]_tau` and `u.n`, one entry per wall column.
#[derive(Clone, Debug, PartialEq)]
pub struct WallTrace {
    /// `tangential[c][column]`, `c` over tangential components.
    pub tangential: Vec<Vec<f64>>,
    pub normal_velocity: Vec<f64>,
}

impl WallTrace {
    pub fn max_tangential(&self) -> f64 {
        self.tangential
            .iter()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn max_normal(&self) -> f64 {
        self.normal_velocity.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryResidual {
    pub bottom: WallTrace,
    pub top: WallTrace,
}

impl BoundaryResidual {
    pub fn wall(&self, wall: Wall) -> &WallTrace {
        match wall {
            Wall::Bottom => &self.bottom,
            Wall::Top => &self.top,
        }
    }

    pub fn max_tangential(&self) -> f64 {
        self.bottom.max_tangential().max(self.top.max_tangential())
    }

    pub fn max_normal(&self) -> f64 {
        self.bottom.max_normal().max(self.top.max_normal())
    }
}

/// Evaluates `n x omega - [B u]_tau` and `u.n` at both walls by one-sided
/// extrapolation of interior values (ghost values never enter the traces).
pub fn boundary_residual(state: &FlowState, slip: &SlipLaw) -> BoundaryResidual {
    let grid = *state.grid();
    let dim = grid.dim();
    let omega = curl(&state.u);
    let trace = |wall: Wall| {
        let b = slip.matrix(wall);
        let nt = dim - 1;
        let mut tangential = vec![Vec::with_capacity(grid.n1() * grid.n2()); nt];
        let mut normal = Vec::with_capacity(grid.n1() * grid.n2());
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                let w: Vec<f64> = omega
                    .comps()
                    .iter()
                    .map(|c| wall_value(c, wall, i1, i2))
                    .collect();
                let nxw = n_cross_tangential(&w, wall);
                let mut ut = [0.0; 2];
                for (c, slot) in ut.iter_mut().enumerate().take(nt) {
                    *slot = wall_value(state.u.comp(c), wall, i1, i2);
                }
                let bu = b.apply(ut);
                for c in 0..nt {
                    tangential[c].push(nxw[c] - bu[c]);
                }
                normal.push(wall_value(state.u.comp(dim - 1), wall, i1, i2));
            }
        }
        WallTrace {
            tangential,
            normal_velocity: normal,
        }
    };
    BoundaryResidual {
        bottom: trace(Wall::Bottom),
        top: trace(Wall::Top),
    }
}

/// Reflection `z -> 1 - z` (normal velocity changes sign). Ghost layers are
/// reflected along with the interior.
pub fn mirror_state(state: &FlowState) -> FlowState {
    let grid = *state.grid();
    let dim = grid.dim();
    let nz = grid.nz() as isize;
    let g = GHOST_LAYERS as isize;
    let reflect = |f: &ScalarField, sign: f64| {
        let mut out = f.clone();
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                for k in -g..nz + g {
                    out.set(i1, i2, k, sign * f.get(i1, i2, nz - 1 - k));
                }
            }
        }
        out
    };
    let u = VectorField::new(
        (0..dim)
            .map(|c| reflect(state.u.comp(c), if c == dim - 1 { -1.0 } else { 1.0 }))
            .collect(),
    );
    FlowState {
        rho: reflect(&state.rho, 1.0),
        u,
        t: state.t,
    }
}
