use rayon::prelude::*;

use super::{GridSpec, GHOST_LAYERS};
use crate::error::{Error, Result};

/// Real values on every node of a [`GridSpec`], ghost layers included.
///
/// `ghosts` records how many ghost layers beyond each wall hold meaningful
/// data. Operators consume one valid layer per normal derivative and fall
/// back to one-sided wall stencils once none are left.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    data: Vec<f64>,
    ghosts: usize,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Constant field; its constant extension fills every ghost layer.
    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            grid,
            data: vec![value; grid.len()],
            ghosts: GHOST_LAYERS,
        }
    }

    /// Samples `f(y1, y2, z)` on interior and ghost nodes alike.
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let mut out = Self::zeros(grid);
        out.fill_with(GHOST_LAYERS, |i1, i2, k| f(grid.coords(i1, i2, k)));
        out
    }

    /// Samples `f(y1, y2, z)` on interior nodes only; ghosts are left invalid.
    pub fn from_interior_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let mut out = Self::zeros(grid);
        out.fill_with(0, |i1, i2, k| f(grid.coords(i1, i2, k)));
        out
    }

    /// Wraps raw storage (length must equal `grid.len()`).
    pub fn from_raw(grid: GridSpec, data: Vec<f64>, ghosts: usize) -> Self {
        assert_eq!(data.len(), grid.len(), "storage length does not match grid");
        Self {
            grid,
            data,
            ghosts: ghosts.min(GHOST_LAYERS),
        }
    }

    /// Overwrites nodes `k in -ghosts..nz+ghosts` with `f(i1, i2, k)` and marks
    /// `ghosts` layers valid. Parallel over `i1` slabs; every node is
    /// computed independently, so the result does not depend on thread count.
    pub fn fill_with<F>(&mut self, ghosts: usize, f: F)
    where
        F: Fn(usize, usize, isize) -> f64 + Sync,
    {
        let grid = self.grid;
        let slab = grid.n2() * grid.nzg();
        let g = ghosts as isize;
        let nz = grid.nz() as isize;
        self.data
            .par_chunks_mut(slab)
            .enumerate()
            .for_each(|(i1, chunk)| {
                for i2 in 0..grid.n2() {
                    let base = i2 * grid.nzg();
                    for k in -g..nz + g {
                        chunk[base + (k + GHOST_LAYERS as isize) as usize] = f(i1, i2, k);
                    }
                }
            });
        self.ghosts = ghosts;
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Number of valid ghost layers.
    pub fn ghost_layers(&self) -> usize {
        self.ghosts
    }

    pub fn set_ghost_layers(&mut self, ghosts: usize) {
        self.ghosts = ghosts.min(GHOST_LAYERS);
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, k: isize) -> f64 {
        self.data[self.grid.index(i1, i2, k)]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, i2: usize, k: isize, value: f64) {
        let idx = self.grid.index(i1, i2, k);
        self.data[idx] = value;
    }

    /// Pointwise map over every stored node; ghost validity is preserved.
    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Sync,
    {
        Self {
            grid: self.grid,
            data: self.data.par_iter().map(|&v| f(v)).collect(),
            ghosts: self.ghosts,
        }
    }

    /// Pointwise combination; the result has the smaller ghost validity.
    pub fn zip_with<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self {
            grid: self.grid,
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ghosts: self.ghosts.min(other.ghosts),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    /// Per-column partial reductions over interior nodes, in column order.
    ///
    /// Columns are fixed by the grid, not by the thread pool, so summing the
    /// returned partials sequentially gives bit-identical totals for any
    /// thread count.
    pub fn column_partials<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let grid = self.grid;
        let nz = grid.nz() as isize;
        (0..grid.n1() * grid.n2())
            .into_par_iter()
            .map(|c| {
                let (i1, i2) = (c / grid.n2(), c % grid.n2());
                let mut acc = 0.0;
                for k in 0..nz {
                    acc += f(self.get(i1, i2, k));
                }
                acc
            })
            .collect()
    }

    /// Sum of `f(value)` over interior nodes, deterministic order.
    pub fn interior_sum<F>(&self, f: F) -> f64
    where
        F: Fn(f64) -> f64 + Sync,
    {
        self.column_partials(f).into_iter().sum()
    }

    /// Midpoint-quadrature integral of `f(value)` over the channel.
    pub fn integral_of<F>(&self, f: F) -> f64
    where
        F: Fn(f64) -> f64 + Sync,
    {
        self.interior_sum(f) * self.grid.cell_volume()
    }

    pub fn integral(&self) -> f64 {
        self.integral_of(|v| v)
    }

    /// Squared discrete L2 norm (midpoint quadrature).
    pub fn l2_norm_sq(&self) -> f64 {
        self.integral_of(|v| v * v)
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Maximum absolute interior value.
    pub fn max_abs(&self) -> f64 {
        let grid = self.grid;
        let nz = grid.nz() as isize;
        (0..grid.n1() * grid.n2())
            .into_par_iter()
            .map(|c| {
                let (i1, i2) = (c / grid.n2(), c % grid.n2());
                (0..nz).fold(0.0_f64, |m, k| m.max(self.get(i1, i2, k).abs()))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn min_interior(&self) -> f64 {
        self.interior_values().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Interior values in storage order (i1, i2, k).
    pub fn interior_values(&self) -> Vec<f64> {
        let grid = self.grid;
        let mut out = Vec::with_capacity(grid.interior_len());
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                for k in 0..grid.nz() as isize {
                    out.push(self.get(i1, i2, k));
                }
            }
        }
        out
    }

    /// Builds a field from interior values in storage order; ghosts invalid.
    pub fn from_interior_values(grid: GridSpec, values: &[f64]) -> Result<Self> {
        if values.len() != grid.interior_len() {
            return Err(Error::GridMismatch(format!(
                "expected {} interior values, got {}",
                grid.interior_len(),
                values.len()
            )));
        }
        let mut out = Self::zeros(grid);
        let nz = grid.nz();
        out.fill_with(0, |i1, i2, k| {
            values[(i1 * grid.n2() + i2) * nz + k as usize]
        });
        Ok(out)
    }

    /// First non-finite interior node, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize, usize)> {
        let grid = self.grid;
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                for k in 0..grid.nz() {
                    if !self.get(i1, i2, k as isize).is_finite() {
                        return Some((i1, i2, k));
                    }
                }
            }
        }
        None
    }

    pub fn check_finite(&self, name: &'static str) -> Result<()> {
        match self.find_non_finite() {
            Some((i1, i2, k)) => Err(Error::NonFinite {
                field: name,
                i1,
                i2,
                k,
            }),
            None => Ok(()),
        }
    }
}

/// A list of scalar components on a common grid.
///
/// Velocity fields carry one component per axis in the order
/// `Y1, (Y2,) Z`; the last component is wall-normal. A two-dimensional curl
/// is the single out-of-plane component.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(comps: Vec<ScalarField>) -> Self {
        assert!(!comps.is_empty(), "vector field needs at least one component");
        let g = *comps[0].grid();
        assert!(comps.iter().all(|c| *c.grid() == g), "components on different grids");
        Self { comps }
    }

    pub fn zeros(grid: GridSpec, n: usize) -> Self {
        Self::new(vec![ScalarField::zeros(grid); n])
    }

    pub fn grid(&self) -> &GridSpec {
        self.comps[0].grid()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comp(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut ScalarField {
        &mut self.comps[i]
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn into_comps(self) -> Vec<ScalarField> {
        self.comps
    }

    pub fn ghost_layers(&self) -> usize {
        self.comps.iter().map(|c| c.ghost_layers()).min().unwrap_or(0)
    }

    pub fn map_comps<F>(&self, f: F) -> Self
    where
        F: Fn(&ScalarField) -> ScalarField,
    {
        Self::new(self.comps.iter().map(f).collect())
    }

    pub fn zip_comps<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(&ScalarField, &ScalarField) -> ScalarField,
    {
        assert_eq!(self.len(), other.len(), "component count mismatch");
        Self::new(
            self.comps
                .iter()
                .zip(other.comps.iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_comps(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_comps(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_comps(|a| a.scale(c))
    }

    /// Sum of squared component L2 norms.
    pub fn l2_norm_sq(&self) -> f64 {
        self.comps.iter().map(|c| c.l2_norm_sq()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Maximum over interior nodes of the Euclidean magnitude.
    pub fn max_magnitude(&self) -> f64 {
        let grid = *self.grid();
        let mut m = 0.0_f64;
        for i1 in 0..grid.n1() {
            for i2 in 0..grid.n2() {
                for k in 0..grid.nz() as isize {
                    let s: f64 = self.comps.iter().map(|c| c.get(i1, i2, k).powi(2)).sum();
                    m = m.max(s.sqrt());
                }
            }
        }
        m
    }

    /// Maximum absolute value over all components.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn check_finite(&self, name: &'static str) -> Result<()> {
        self.comps.iter().try_for_each(|c| c.check_finite(name))
    }
}
