//! Binary field container.
//!
//! ```text
//! offset  size  content
//! 0       4     magic "B4NS"
//! 4       4     version (u32 LE)
//! 8       4     dimension d (u32 LE)
//! 12      4     modes per dimension n (u32 LE)
//! 16      8     period L (f64 LE)
//! 24      4     layout tag (u32 LE); 0 = FFT storage order, row-major
//! 28      16·n^d  interleaved (re, im) f64 LE coefficients
//! ```

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::{Error, Result};

pub const FIELD_MAGIC: &[u8; 4] = b"B4NS";
pub const FIELD_VERSION: u32 = 1;
pub const LAYOUT_FFT_ORDER: u32 = 0;

pub fn write_field<W: Write>(mut w: W, field: &SpectralField) -> Result<()> {
    let grid = field.grid();
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&FIELD_VERSION.to_le_bytes())?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&grid.length().to_le_bytes())?;
    w.write_all(&LAYOUT_FFT_ORDER.to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * field.coeffs().len());
    for c in field.coeffs() {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_field<R: Read>(mut r: R) -> Result<SpectralField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != FIELD_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = read_u32(&mut r)?;
    if version != FIELD_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(&mut r)? as usize;
    let n = read_u32(&mut r)? as usize;
    let length = read_f64(&mut r)?;
    let layout = read_u32(&mut r)?;
    if layout != LAYOUT_FFT_ORDER {
        return Err(Error::Format(format!("unknown layout tag {layout}")));
    }
    let grid = Grid::new(dim, n, length)?;
    let mut coeffs = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        coeffs.push(Complex64::new(re, im));
    }
    SpectralField::new(grid, coeffs)
}
