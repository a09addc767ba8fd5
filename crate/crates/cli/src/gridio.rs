//! QuatGrid2D binary format and the `synth` sampler.
//!
//! Layout (little-endian): magic `QG2D`, `u32 n1`, `u32 n2`, `f64 dx1`,
//! `f64 dx2`, `f64 x1_0`, `f64 x2_0`, then `n1 * n2 * 4` f64 components
//! row-major, `(w, x, y, z)` per sample.

use std::io::{self, Read, Write};

use quatsamp_core::qft::{synthesize, QuatGrid2D, SpectrumFn};
use quatsamp_core::quadrature::QuadratureRule;
use quatsamp_core::Quaternion;
use rayon::prelude::*;

const MAGIC: &[u8; 4] = b"QG2D";

pub fn write_grid(w: &mut impl Write, grid: &QuatGrid2D) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.n1() as u32).to_le_bytes())?;
    w.write_all(&(grid.n2() as u32).to_le_bytes())?;
    for v in [grid.dx.0, grid.dx.1, grid.origin.0, grid.origin.1] {
        w.write_all(&v.to_le_bytes())?;
    }
    for q in grid.values() {
        for c in [q.w, q.x, q.y, q.z] {
            w.write_all(&c.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_grid(r: &mut impl Read) -> io::Result<QuatGrid2D> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "not a QG2D grid file",
        ));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let n1 = u32::from_le_bytes(b4) as usize;
    r.read_exact(&mut b4)?;
    let n2 = u32::from_le_bytes(b4) as usize;
    if n1 == 0 || n2 == 0 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            "grid dimensions must be positive",
        ));
    }
    let mut f = || -> io::Result<f64> {
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        Ok(f64::from_le_bytes(b8))
    };
    let dx = (f()?, f()?);
    let origin = (f()?, f()?);
    let mut values = Vec::with_capacity(n1 * n2);
    for _ in 0..n1 * n2 {
        values.push(Quaternion::new(f()?, f()?, f()?, f()?));
    }
    let mut grid = QuatGrid2D::from_fn(n1, n2, |r1, r2| values[r1 * n2 + r2]);
    grid.dx = dx;
    grid.origin = origin;
    Ok(grid)
}

/// Samples the synthesized signal on the centered Nyquist lattice:
/// spacing `T = pi / sigma` per axis, `n x n` points around the origin.
pub fn synth_grid(spec: &SpectrumFn, n: usize, rule: &QuadratureRule) -> QuatGrid2D {
    let t = std::f64::consts::PI / spec.sigma();
    let origin = -((n - 1) as f64) * t / 2.0;
    let rows: Vec<Vec<Quaternion>> = (0..n)
        .into_par_iter()
        .map(|r1| {
            (0..n)
                .map(|r2| synthesize(spec, (origin + r1 as f64 * t, origin + r2 as f64 * t), rule))
                .collect()
        })
        .collect();
    let mut grid = QuatGrid2D::from_fn(n, n, |r1, r2| rows[r1][r2]);
    grid.dx = (t, t);
    grid.origin = (origin, origin);
    grid
}
