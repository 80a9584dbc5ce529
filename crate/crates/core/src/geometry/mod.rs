//! Flat periodic channel `T^{d-1} x (0,1)`, conormal vector fields and the
//! discrete differential operators shared by the solver and the norms.
//!
//! Nodes are collocated cell centres. Periodic directions are stored without
//! ghosts (indices wrap); the wall-normal direction carries [`GHOST_LAYERS`]
//! ghost layers beyond each wall.

mod field;
mod ops;

pub use field::{ScalarField, VectorField};
pub use ops::{
    apply_z, curl, derivative, div, grad, grad_div, laplacian, second_derivative,
    vector_laplacian,
};

use crate::error::{Error, Result};

/// Ghost layers stored beyond each wall.
pub const GHOST_LAYERS: usize = 2;

/// Smallest admissible resolution in any direction.
pub const MIN_CELLS: usize = 8;

/// Coordinate direction. `Y1`/`Y2` are periodic, `Z` is wall-normal.
///
/// In two dimensions only `Y1` and `Z` exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Y1,
    Y2,
    Z,
}

/// Channel geometry and node layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    dim: usize,
    ny: usize,
    nz: usize,
}

/// Builds the channel grid; rejects dimensions outside {2,3} and resolutions below 8.
pub fn build_grid(dim: usize, ny: usize, nz: usize) -> Result<GridSpec> {
    GridSpec::new(dim, ny, nz)
}

/// Conormal weight `z(1-z)` multiplying `d/dz` in `Z_3`.
#[inline]
pub fn conormal_weight(z: f64) -> f64 {
    z * (1.0 - z)
}

impl GridSpec {
    pub fn new(dim: usize, ny: usize, nz: usize) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Grid(format!("dimension must be 2 or 3, got {dim}")));
        }
        if ny < MIN_CELLS || nz < MIN_CELLS {
            return Err(Error::Grid(format!(
                "resolutions must be at least {MIN_CELLS}, got ny={ny}, nz={nz}"
            )));
        }
        Ok(Self { dim, ny, nz })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn dz(&self) -> f64 {
        1.0 / self.nz as f64
    }

    /// Smallest grid spacing.
    pub fn h(&self) -> f64 {
        self.dy().min(self.dz())
    }

    /// Extent of the first periodic index.
    pub fn n1(&self) -> usize {
        self.ny
    }

    /// Extent of the second periodic index (1 in two dimensions).
    pub fn n2(&self) -> usize {
        if self.dim == 3 {
            self.ny
        } else {
            1
        }
    }

    /// Number of stored z nodes including ghosts.
    pub fn nzg(&self) -> usize {
        self.nz + 2 * GHOST_LAYERS
    }

    /// Number of stored values of one scalar field.
    pub fn len(&self) -> usize {
        self.n1() * self.n2() * self.nzg()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of interior nodes.
    pub fn interior_len(&self) -> usize {
        self.n1() * self.n2() * self.nz
    }

    /// Storage index of node `(i1, i2, k)`; `k` may address ghost layers
    /// (`-GHOST_LAYERS..nz+GHOST_LAYERS`).
    #[inline]
    pub fn index(&self, i1: usize, i2: usize, k: isize) -> usize {
        debug_assert!(k >= -(GHOST_LAYERS as isize) && k < (self.nz + GHOST_LAYERS) as isize);
        (i1 * self.n2() + i2) * self.nzg() + (k + GHOST_LAYERS as isize) as usize
    }

    /// Cell-centre z coordinate of layer `k` (negative or `>= nz` for ghosts).
    #[inline]
    pub fn z(&self, k: isize) -> f64 {
        (k as f64 + 0.5) * self.dz()
    }

    /// Cell-centre coordinate along a periodic direction.
    #[inline]
    pub fn y(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dy()
    }

    pub fn cell_volume(&self) -> f64 {
        self.dy().powi(self.dim as i32 - 1) * self.dz()
    }

    /// Physical coordinates `(y1, y2, z)` of a node; `y2` is 0 in two dimensions.
    #[inline]
    pub fn coords(&self, i1: usize, i2: usize, k: isize) -> [f64; 3] {
        let y2 = if self.dim == 3 { self.y(i2) } else { 0.0 };
        [self.y(i1), y2, self.z(k)]
    }

    pub fn axes(&self) -> &'static [Axis] {
        if self.dim == 3 {
            &[Axis::Y1, Axis::Y2, Axis::Z]
        } else {
            &[Axis::Y1, Axis::Z]
        }
    }

    pub fn tangential_axes(&self) -> &'static [Axis] {
        if self.dim == 3 {
            &[Axis::Y1, Axis::Y2]
        } else {
            &[Axis::Y1]
        }
    }

    /// Velocity component index carried along `axis`.
    pub fn component(&self, axis: Axis) -> usize {
        match axis {
            Axis::Y1 => 0,
            Axis::Y2 => {
                assert!(self.dim == 3, "Y2 does not exist in two dimensions");
                1
            }
            Axis::Z => self.dim - 1,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Y1 | Axis::Y2 => self.dy(),
            Axis::Z => self.dz(),
        }
    }

    pub fn has_axis(&self, axis: Axis) -> bool {
        axis != Axis::Y2 || self.dim == 3
    }

    /// Same grid with both resolutions doubled.
    pub fn refined(&self) -> Self {
        Self {
            dim: self.dim,
            ny: 2 * self.ny,
            nz: 2 * self.nz,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_grid_spacings() {
        let g = build_grid(2, 16, 16).unwrap();
        assert_eq!(g.dz(), 0.0625);
        assert_eq!(g.interior_len(), 256);
        let g3 = build_grid(3, 8, 8).unwrap();
        assert_eq!(g3.z(0), 0.0625);
        assert_eq!(g3.interior_len(), 512);
    }

    #[test]
    fn build_grid_rejects_bad_input() {
        assert!(build_grid(2, 7, 16).is_err());
        assert!(build_grid(2, 16, 4).is_err());
        assert!(build_grid(1, 16, 16).is_err());
        assert!(build_grid(4, 16, 16).is_err());
    }

    #[test]
    fn interior_nodes_strictly_inside() {
        let g = build_grid(2, 8, 8).unwrap();
        for k in 0..g.nz() as isize {
            let z = g.z(k);
            assert!(z > 0.0 && z < 1.0);
        }
        assert!(g.z(-1) < 0.0);
        assert!(g.z(g.nz() as isize) > 1.0);
    }

    #[test]
    fn conormal_weight_values() {
        assert_eq!(conormal_weight(0.0), 0.0);
        assert_eq!(conormal_weight(1.0), 0.0);
        assert_eq!(conormal_weight(0.5), 0.25);
    }
}
