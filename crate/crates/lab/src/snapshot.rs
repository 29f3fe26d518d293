//! Binary field snapshots: `TLSNAP01`, then `u32` complex dimension, `u32`
//! points per axis, `u32` kind (0 real, 1 complex), then row-major
//! little-endian `f64` samples (real and imaginary parts interleaved).

use std::io::{self, Read, Write};

use num_complex::Complex64;

use crate::grid::{ComplexField, Grid, GridError, ScalarField};

const MAGIC: &[u8; 8] = b"TLSNAP01";

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a field snapshot")]
    Magic,
    #[error("unknown snapshot kind {0}")]
    Kind(u32),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("expected a {expected} field")]
    WrongKind { expected: &'static str },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Snapshot {
    Real(ScalarField),
    Complex(ComplexField),
}

fn header(w: &mut impl Write, grid: Grid, kind: u32) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(grid.complex_dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&kind.to_le_bytes())
}

pub fn write_real(w: &mut impl Write, f: &ScalarField) -> io::Result<()> {
    header(w, f.grid, 0)?;
    for v in &f.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_complex(w: &mut impl Write, f: &ComplexField) -> io::Result<()> {
    header(w, f.grid, 1)?;
    for v in &f.values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32(r: &mut impl Read) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> io::Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read(r: &mut impl Read) -> Result<Snapshot, SnapshotError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SnapshotError::Magic);
    }
    let dim = read_u32(r)? as usize;
    let n = read_u32(r)? as usize;
    let kind = read_u32(r)?;
    let grid = Grid::new(dim, n)?;
    match kind {
        0 => {
            let values = (0..grid.len()).map(|_| read_f64(r)).collect::<io::Result<_>>()?;
            Ok(Snapshot::Real(ScalarField { grid, values }))
        }
        1 => {
            let values = (0..grid.len())
                .map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?)))
                .collect::<io::Result<_>>()?;
            Ok(Snapshot::Complex(ComplexField { grid, values }))
        }
        k => Err(SnapshotError::Kind(k)),
    }
}

pub fn read_real(r: &mut impl Read) -> Result<ScalarField, SnapshotError> {
    match read(r)? {
        Snapshot::Real(f) => Ok(f),
        Snapshot::Complex(_) => Err(SnapshotError::WrongKind { expected: "real" }),
    }
}
