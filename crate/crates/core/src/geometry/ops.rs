//! Second-order finite-difference operators.
//!
//! Periodic directions use centred differences with wrap-around. In `z` a
//! centred stencil is used wherever the neighbours are valid (interior or
//! valid ghost layers); each normal derivative consumes one ghost layer of
//! validity, and with no valid ghosts the wall-adjacent nodes use one-sided
//! second-order stencils built from interior values only.

use super::{conormal_weight, Axis, GridSpec, ScalarField, VectorField};

#[inline]
fn wrap_next(i: usize, n: usize) -> usize {
    if i + 1 == n {
        0
    } else {
        i + 1
    }
}

#[inline]
fn wrap_prev(i: usize, n: usize) -> usize {
    if i == 0 {
        n - 1
    } else {
        i - 1
    }
}

#[inline]
fn shift(grid: &GridSpec, axis: Axis, i1: usize, i2: usize, forward: bool) -> (usize, usize) {
    let n = grid.ny();
    match (axis, forward) {
        (Axis::Y1, true) => (wrap_next(i1, n), i2),
        (Axis::Y1, false) => (wrap_prev(i1, n), i2),
        (Axis::Y2, true) => (i1, wrap_next(i2, n)),
        (Axis::Y2, false) => (i1, wrap_prev(i2, n)),
        (Axis::Z, _) => unreachable!("z is not periodic"),
    }
}

/// First derivative along `axis`.
pub fn derivative(f: &ScalarField, axis: Axis) -> ScalarField {
    let grid = *f.grid();
    assert!(grid.has_axis(axis), "axis {axis:?} not present in {}-D", grid.dim());
    let mut out = ScalarField::zeros(grid);
    match axis {
        Axis::Y1 | Axis::Y2 => {
            let inv = 0.5 / grid.dy();
            out.fill_with(f.ghost_layers(), |i1, i2, k| {
                let (p1, p2) = shift(&grid, axis, i1, i2, true);
                let (m1, m2) = shift(&grid, axis, i1, i2, false);
                (f.get(p1, p2, k) - f.get(m1, m2, k)) * inv
            });
        }
        Axis::Z => {
            let gin = f.ghost_layers();
            let inv = 0.5 / grid.dz();
            let last = grid.nz() as isize - 1;
            if gin > 0 {
                out.fill_with(gin - 1, |i1, i2, k| {
                    (f.get(i1, i2, k + 1) - f.get(i1, i2, k - 1)) * inv
                });
            } else {
                out.fill_with(0, |i1, i2, k| {
                    let v = |kk: isize| f.get(i1, i2, kk);
                    if k == 0 {
                        (-3.0 * v(0) + 4.0 * v(1) - v(2)) * inv
                    } else if k == last {
                        (3.0 * v(last) - 4.0 * v(last - 1) + v(last - 2)) * inv
                    } else {
                        (v(k + 1) - v(k - 1)) * inv
                    }
                });
            }
        }
    }
    out
}

/// Second derivative along `axis` (compact three-point stencil).
pub fn second_derivative(f: &ScalarField, axis: Axis) -> ScalarField {
    let grid = *f.grid();
    assert!(grid.has_axis(axis), "axis {axis:?} not present in {}-D", grid.dim());
    let mut out = ScalarField::zeros(grid);
    match axis {
        Axis::Y1 | Axis::Y2 => {
            let inv = 1.0 / (grid.dy() * grid.dy());
            out.fill_with(f.ghost_layers(), |i1, i2, k| {
                let (p1, p2) = shift(&grid, axis, i1, i2, true);
                let (m1, m2) = shift(&grid, axis, i1, i2, false);
                (f.get(p1, p2, k) - 2.0 * f.get(i1, i2, k) + f.get(m1, m2, k)) * inv
            });
        }
        Axis::Z => {
            let gin = f.ghost_layers();
            let inv = 1.0 / (grid.dz() * grid.dz());
            let last = grid.nz() as isize - 1;
            if gin > 0 {
                out.fill_with(gin - 1, |i1, i2, k| {
                    (f.get(i1, i2, k + 1) - 2.0 * f.get(i1, i2, k) + f.get(i1, i2, k - 1)) * inv
                });
            } else {
                out.fill_with(0, |i1, i2, k| {
                    let v = |kk: isize| f.get(i1, i2, kk);
                    if k == 0 {
                        (2.0 * v(0) - 5.0 * v(1) + 4.0 * v(2) - v(3)) * inv
                    } else if k == last {
                        (2.0 * v(last) - 5.0 * v(last - 1) + 4.0 * v(last - 2) - v(last - 3)) * inv
                    } else {
                        (v(k + 1) - 2.0 * v(k) + v(k - 1)) * inv
                    }
                });
            }
        }
    }
    out
}

/// Conormal derivative `Z_i`: `d/dy_i` for periodic axes, `z(1-z) d/dz` for `Z`.
///
/// The `Z` branch multiplies the output of [`derivative`] by the weight at
/// each node, so it shares one code path with the plain normal derivative.
pub fn apply_z(f: &ScalarField, axis: Axis) -> ScalarField {
    let d = derivative(f, axis);
    if axis != Axis::Z {
        return d;
    }
    let grid = *f.grid();
    let g = d.ghost_layers();
    let mut out = ScalarField::zeros(grid);
    out.fill_with(g, |i1, i2, k| conormal_weight(grid.z(k)) * d.get(i1, i2, k));
    out
}

pub fn grad(f: &ScalarField) -> VectorField {
    VectorField::new(f.grid().axes().iter().map(|&a| derivative(f, a)).collect())
}

pub fn div(v: &VectorField) -> ScalarField {
    let grid = *v.grid();
    assert_eq!(v.len(), grid.dim(), "divergence needs a full vector field");
    let mut acc: Option<ScalarField> = None;
    for &axis in grid.axes() {
        let d = derivative(v.comp(grid.component(axis)), axis);
        acc = Some(match acc {
            None => d,
            Some(a) => a.add(&d),
        });
    }
    acc.expect("at least two axes")
}

/// Curl. In 3-D the usual three components. In 2-D an in-plane field maps to
/// the scalar `d_y u_z - d_z u_y` (one component), and a one-component
/// out-of-plane field `s` maps back to the in-plane field `(d_z s, -d_y s)`.
pub fn curl(v: &VectorField) -> VectorField {
    let grid = *v.grid();
    if grid.dim() == 2 {
        match v.len() {
            2 => {
                let s = derivative(v.comp(1), Axis::Y1).sub(&derivative(v.comp(0), Axis::Z));
                VectorField::new(vec![s])
            }
            1 => {
                let s = v.comp(0);
                VectorField::new(vec![
                    derivative(s, Axis::Z),
                    derivative(s, Axis::Y1).scale(-1.0),
                ])
            }
            n => panic!("2-D curl of a {n}-component field"),
        }
    } else {
        assert_eq!(v.len(), 3, "3-D curl needs three components");
        let d = |c: usize, a: Axis| derivative(v.comp(c), a);
        VectorField::new(vec![
            d(2, Axis::Y2).sub(&d(1, Axis::Z)),
            d(0, Axis::Z).sub(&d(2, Axis::Y1)),
            d(1, Axis::Y1).sub(&d(0, Axis::Y2)),
        ])
    }
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let grid = *f.grid();
    let mut acc: Option<ScalarField> = None;
    for &axis in grid.axes() {
        let d = second_derivative(f, axis);
        acc = Some(match acc {
            None => d,
            Some(a) => a.add(&d),
        });
    }
    acc.expect("at least two axes")
}

pub fn vector_laplacian(v: &VectorField) -> VectorField {
    v.map_comps(laplacian)
}

/// `grad(div v)` by composition.
pub fn grad_div(v: &VectorField) -> VectorField {
    grad(&div(v))
}
