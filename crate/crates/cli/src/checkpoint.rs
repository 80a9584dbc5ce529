//! Binary checkpoints.
//!
//! ```text
//!   "VVLCHKP1"                      8 bytes
//!   version, dim, ny, nz            u32 LE each
//!   t                               f64 LE
//!   rho, u_1 .. u_d                 f64 LE, interior nodes in (i1, i2, k) order
//!   checksum                        u64 LE, XXH64 (seed 0) of all preceding bytes
//! ```

use std::hash::Hasher;
use std::path::Path;

use twox_hash::XxHash64;
use vvlab::geometry::{build_grid, GridSpec, ScalarField, VectorField};
use vvlab::state::FlowState;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 8] = b"VVLCHKP1";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 * 4 + 8;

fn checksum(bytes: &[u8]) -> u64 {
    let mut h = XxHash64::with_seed(0);
    h.write(bytes);
    h.finish()
}

pub fn encode(state: &FlowState) -> Vec<u8> {
    let grid = state.grid();
    let n = grid.interior_len();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * n * (1 + grid.dim()) + 8);
    out.extend_from_slice(MAGIC);
    for v in [VERSION, grid.dim() as u32, grid.ny() as u32, grid.nz() as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&state.t.to_le_bytes());
    for f in std::iter::once(&state.rho).chain(state.u.comps()) {
        for v in f.interior_values() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    let sum = checksum(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

/// Decodes a checkpoint; `expected` pins the grid when given.
pub fn decode(bytes: &[u8], expected: Option<&GridSpec>, path: &Path) -> Result<FlowState> {
    let corrupt = |msg: String| CliError::Checkpoint {
        path: path.to_path_buf(),
        msg,
    };
    if bytes.len() < HEADER_LEN + 8 {
        return Err(corrupt(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..8] != MAGIC {
        return Err(corrupt("bad magic".into()));
    }
    let (body, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().expect("eight bytes"));
    if checksum(body) != stored {
        return Err(corrupt("checksum mismatch".into()));
    }
    let word = |i: usize| u32::from_le_bytes(body[8 + 4 * i..12 + 4 * i].try_into().expect("four bytes"));
    if word(0) != VERSION {
        return Err(corrupt(format!("unsupported version {}", word(0))));
    }
    let (dim, ny, nz) = (word(1) as usize, word(2) as usize, word(3) as usize);
    let grid = build_grid(dim, ny, nz).map_err(|e| corrupt(e.to_string()))?;
    if let Some(g) = expected {
        if *g != grid {
            return Err(corrupt(format!(
                "grid {dim}-D {ny}x{nz} does not match the expected {}-D {}x{}",
                g.dim(),
                g.ny(),
                g.nz()
            )));
        }
    }
    let t = f64::from_le_bytes(body[24..32].try_into().expect("eight bytes"));
    let n = grid.interior_len();
    let payload = &body[HEADER_LEN..];
    if payload.len() != 8 * n * (1 + dim) {
        return Err(corrupt(format!(
            "payload holds {} bytes, expected {}",
            payload.len(),
            8 * n * (1 + dim)
        )));
    }
    let mut fields = payload
        .chunks_exact(8 * n)
        .map(|chunk| {
            let vals: Vec<f64> = chunk
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("eight bytes")))
                .collect();
            ScalarField::from_interior_values(grid, &vals)
        })
        .collect::<vvlab::Result<Vec<_>>>()?;
    let comps = fields.split_off(1);
    let rho = fields.pop().expect("density block");
    Ok(FlowState::new(rho, VectorField::new(comps), t)?)
}

pub fn save(state: &FlowState, path: &Path) -> Result<()> {
    std::fs::write(path, encode(state)).map_err(|e| CliError::io(path, e))
}

pub fn load(path: &Path, expected: Option<&GridSpec>) -> Result<FlowState> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    decode(&bytes, expected, path)
}
