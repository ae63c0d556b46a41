//! Wavefunction import and export.
//!
//! * CSV (n = 1 only): header `x,re,im`, one row per sample.
//! * Binary: little-endian `u32 n`, `u32 N`, `f64 L`, then N^n interleaved
//!   `f64` (re, im) pairs in row-major order.

use std::io::{BufRead, BufReader, Read, Write};

use num_complex::Complex64;

use super::{GridSpec, GridWavefunction, HilbertError};

pub fn write_csv<W: Write>(psi: &GridWavefunction, mut w: W) -> Result<(), HilbertError> {
    let spec = psi.spec();
    if spec.n != 1 {
        return Err(HilbertError::Format(format!("CSV export needs n = 1, got n = {}", spec.n)));
    }
    writeln!(w, "x,re,im")?;
    for (j, v) in psi.values().iter().enumerate() {
        writeln!(w, "{:e},{:e},{:e}", spec.coord(j), v.re, v.im)?;
    }
    Ok(())
}

/// Reads a CSV written by [`write_csv`]; N and L are recovered from the
/// x column, which must be the standard grid.
pub fn read_csv<R: Read>(r: R) -> Result<GridWavefunction, HilbertError> {
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('x')) {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| HilbertError::Format(format!("line {}: {e}", lineno + 1)))?;
        if cols.len() != 3 {
            return Err(HilbertError::Format(format!("line {}: expected 3 columns", lineno + 1)));
        }
        xs.push(cols[0]);
        values.push(Complex64::new(cols[1], cols[2]));
    }
    if xs.len() < 2 {
        return Err(HilbertError::Format("too few samples".into()));
    }
    let length = xs.len() as f64 * (xs[1] - xs[0]);
    let spec = GridSpec::new(1, xs.len(), length)?;
    let tol = 1e-9 * spec.spacing().max(1.0);
    if xs.iter().enumerate().any(|(j, &x)| (x - spec.coord(j)).abs() > tol) {
        return Err(HilbertError::Format("x column is not a uniform grid starting at -L/2".into()));
    }
    GridWavefunction::new(spec, values)
}

pub fn write_binary<W: Write>(psi: &GridWavefunction, mut w: W) -> Result<(), HilbertError> {
    let spec = psi.spec();
    let dim = |v: usize| u32::try_from(v).map_err(|_| HilbertError::Format("dimension exceeds u32".into()));
    w.write_all(&dim(spec.n)?.to_le_bytes())?;
    w.write_all(&dim(spec.points)?.to_le_bytes())?;
    w.write_all(&spec.length.to_le_bytes())?;
    for v in psi.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<GridWavefunction, HilbertError> {
    let mut u = [0u8; 4];
    let mut f = [0u8; 8];
    r.read_exact(&mut u)?;
    let n = u32::from_le_bytes(u) as usize;
    r.read_exact(&mut u)?;
    let points = u32::from_le_bytes(u) as usize;
    r.read_exact(&mut f)?;
    let spec = GridSpec::new(n, points, f64::from_le_bytes(f))?;
    let mut values = Vec::with_capacity(spec.size());
    for _ in 0..spec.size() {
        r.read_exact(&mut f)?;
        let re = f64::from_le_bytes(f);
        r.read_exact(&mut f)?;
        values.push(Complex64::new(re, f64::from_le_bytes(f)));
    }
    if r.read(&mut u)? != 0 {
        return Err(HilbertError::Format("trailing bytes after payload".into()));
    }
    GridWavefunction::new(spec, values)
}
