//! Binary spectral snapshots.
//!
//! Layout, all little-endian: magic `CBSV`, version `u32`, `n` `u32`, `L`
//! `f64`, `nu` `f64`, `omega` `f64`, time tag `f64`, component count `u32`,
//! flags `u32` (bit 0 mean free, bit 1 solenoidal), then for each component
//! the `(re, im)` pairs of every mode with wavevectors in row-major order,
//! each axis running from `-n/2+1` to `n/2` and the third axis fastest.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{FlowParams, Grid, SpectralField};

pub const MAGIC: &[u8; 4] = b"CBSV";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 52;

const FLAG_MEAN_FREE: u32 = 1;
const FLAG_SOLENOIDAL: u32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub field: SpectralField,
    pub nu: f64,
    pub omega: f64,
    pub flags: u32,
}

impl Snapshot {
    pub fn mean_free(&self) -> bool {
        self.flags & FLAG_MEAN_FREE != 0
    }

    pub fn solenoidal(&self) -> bool {
        self.flags & FLAG_SOLENOIDAL != 0
    }
}

/// Storage indices in snapshot order.
fn ordered_indices(grid: &Grid) -> Vec<usize> {
    let n = grid.n() as i64;
    let mut out = Vec::with_capacity(grid.len());
    for w1 in -n / 2 + 1..=n / 2 {
        for w2 in -n / 2 + 1..=n / 2 {
            for w3 in -n / 2 + 1..=n / 2 {
                out.push(grid.flat_of_wave([w1, w2, w3]).expect("wave in range"));
            }
        }
    }
    out
}

pub fn encode_snapshot(field: &SpectralField, params: &FlowParams) -> Vec<u8> {
    let grid = field.grid();
    let mut flags = 0;
    if field.is_mean_free() {
        flags |= FLAG_MEAN_FREE;
    }
    if field.n_components() == 3 && field.is_solenoidal() {
        flags |= FLAG_SOLENOIDAL;
    }
    let mut buf = Vec::with_capacity(HEADER_LEN + 16 * field.n_components() * grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    buf.extend_from_slice(&grid.length().to_le_bytes());
    buf.extend_from_slice(&params.nu.to_le_bytes());
    buf.extend_from_slice(&params.omega.to_le_bytes());
    buf.extend_from_slice(&field.time.to_le_bytes());
    buf.extend_from_slice(&(field.n_components() as u32).to_le_bytes());
    buf.extend_from_slice(&flags.to_le_bytes());
    let order = ordered_indices(grid);
    for c in field.components() {
        for &i in &order {
            buf.extend_from_slice(&c[i].re.to_le_bytes());
            buf.extend_from_slice(&c[i].im.to_le_bytes());
        }
    }
    buf
}

fn u32_at(b: &[u8], off: usize) -> u32 {
    u32::from_le_bytes(b[off..off + 4].try_into().unwrap())
}

fn f64_at(b: &[u8], off: usize) -> f64 {
    f64::from_le_bytes(b[off..off + 8].try_into().unwrap())
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<Snapshot> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::PayloadLength {
            expected: HEADER_LEN,
            found: bytes.len(),
        });
    }
    let n = u32_at(bytes, 8) as usize;
    let length = f64_at(bytes, 12);
    let nu = f64_at(bytes, 20);
    let omega = f64_at(bytes, 28);
    let time = f64_at(bytes, 36);
    let ncomp = u32_at(bytes, 44) as usize;
    let flags = u32_at(bytes, 48);
    let grid = Grid::new(n, length)?;
    if ncomp == 0 || ncomp > 3 {
        return Err(Error::InvalidArgument(format!("snapshot component count {ncomp}")));
    }
    let expected = 16 * ncomp * grid.len();
    let found = bytes.len() - HEADER_LEN;
    if found != expected {
        return Err(Error::PayloadLength { expected, found });
    }
    let order = ordered_indices(&grid);
    let mut components = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; ncomp];
    let mut off = HEADER_LEN;
    for comp in components.iter_mut() {
        for &i in &order {
            comp[i] = Complex64::new(f64_at(bytes, off), f64_at(bytes, off + 8));
            off += 16;
        }
    }
    let field = SpectralField::from_components(grid, components)?.with_time(time);
    Ok(Snapshot {
        field,
        nu,
        omega,
        flags,
    })
}

pub fn write_snapshot(field: &SpectralField, params: &FlowParams, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_snapshot(field, params)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Snapshot> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::random_solenoidal;

    fn sample() -> SpectralField {
        let g = Grid::standard(8).unwrap();
        random_solenoidal(1, -1.0, (0, 1), &g).unwrap().with_time(0.25)
    }

    #[test]
    fn round_trip_is_exact() {
        let f = sample();
        let p = FlowParams::new(0.5, 2.0, 0.05).unwrap();
        let bytes = encode_snapshot(&f, &p);
        assert_eq!(bytes.len(), HEADER_LEN + 16 * 3 * 512);
        let s = decode_snapshot(&bytes).unwrap();
        assert_eq!(s.field, f);
        assert_eq!(s.field.time, 0.25);
        assert_eq!((s.nu, s.omega), (0.5, 2.0));
        assert!(s.mean_free() && s.solenoidal());
        assert_eq!(encode_snapshot(&s.field, &p), bytes);
    }

    #[test]
    fn header_layout() {
        let bytes = encode_snapshot(&sample(), &FlowParams::default());
        assert_eq!(&bytes[..4], b"CBSV");
        assert_eq!(u32_at(&bytes, 4), 1);
        assert_eq!(u32_at(&bytes, 8), 8);
        assert_eq!(u32_at(&bytes, 44), 3);
        // first payload entry is the (-3, -3, -3) mode
        let f = sample();
        assert_eq!(f64_at(&bytes, HEADER_LEN), f.coeff(0, [-3, -3, -3]).re);
    }

    #[test]
    fn corrupt_inputs() {
        let mut bytes = encode_snapshot(&sample(), &FlowParams::default());
        let err = decode_snapshot(&bytes[..bytes.len() - 8]).unwrap_err();
        assert!(err.to_string().contains("payload length mismatch"));
        bytes[4..8].copy_from_slice(&99u32.to_le_bytes());
        assert!(decode_snapshot(&bytes).unwrap_err().to_string().contains("unsupported version"));
        bytes[0] = b'X';
        assert!(matches!(decode_snapshot(&bytes), Err(Error::BadMagic)));
    }
}
