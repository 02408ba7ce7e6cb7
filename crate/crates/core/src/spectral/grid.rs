use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[0, L)^3` sampled on `n^3` collocation points.
///
/// Spectral storage follows the FFT convention: along each axis the index
/// `i` carries the integer wavenumber `i` for `i <= n/2` and `i - n`
/// otherwise, with the third axis fastest. The physical wavenumber is the
/// integer one scaled by `2π/L`. The Nyquist index `n/2` is kept in storage
/// but every field holds zero there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    length: f64,
}

/// One lattice mode as seen by per-mode multipliers.
#[derive(Debug, Clone, Copy)]
pub struct Mode {
    pub index: usize,
    pub wave: [i64; 3],
    pub k: [f64; 3],
}

impl Mode {
    pub fn norm_sq(&self) -> f64 {
        self.k[0] * self.k[0] + self.k[1] * self.k[1] + self.k[2] * self.k[2]
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.wave == [0, 0, 0]
    }
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        if n < 8 {
            return Err(Error::GridTooSmall(n));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::NonPositiveLength(length));
        }
        Ok(Self { n, length })
    }

    /// `n = 2^k` points on the standard `2π` box.
    pub fn standard(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `2π/L`, the spacing of physical wavenumbers.
    pub fn base_wavenumber(&self) -> f64 {
        2.0 * PI / self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Integer wavenumber carried by storage index `i` along one axis.
    pub fn wave_of(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Storage index of integer wavenumber `w`, if it lies on the lattice.
    pub fn index_of_wave(&self, w: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if w > half || w <= -half {
            return None;
        }
        Some(if w >= 0 { w as usize } else { (w + self.n as i64) as usize })
    }

    pub fn flat(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    pub fn unflat(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn flat_of_wave(&self, w: [i64; 3]) -> Option<usize> {
        Some(self.flat(
            self.index_of_wave(w[0])?,
            self.index_of_wave(w[1])?,
            self.index_of_wave(w[2])?,
        ))
    }

    pub fn mode(&self, idx: usize) -> Mode {
        let [i1, i2, i3] = self.unflat(idx);
        let wave = [self.wave_of(i1), self.wave_of(i2), self.wave_of(i3)];
        let b = self.base_wavenumber();
        Mode {
            index: idx,
            wave,
            k: [wave[0] as f64 * b, wave[1] as f64 * b, wave[2] as f64 * b],
        }
    }

    /// All lattice modes in storage order.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + 'static {
        let g = *self;
        let n = g.n;
        let b = g.base_wavenumber();
        (0..n).flat_map(move |i1| {
            let w1 = g.wave_of(i1);
            (0..n).flat_map(move |i2| {
                let w2 = g.wave_of(i2);
                (0..n).map(move |i3| {
                    let w3 = g.wave_of(i3);
                    Mode {
                        index: (i1 * n + i2) * n + i3,
                        wave: [w1, w2, w3],
                        k: [w1 as f64 * b, w2 as f64 * b, w3 as f64 * b],
                    }
                })
            })
        })
    }

    /// Storage index of `-k` for the mode stored at `idx`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let n = self.n;
        let [i1, i2, i3] = self.unflat(idx);
        self.flat((n - i1) % n, (n - i2) % n, (n - i3) % n)
    }

    pub fn is_nyquist(&self, wave: [i64; 3]) -> bool {
        let half = (self.n / 2) as i64;
        wave.iter().any(|&w| w == half)
    }

    /// Modes kept by the 2/3 rule: every `|k_i| <= n/3`.
    pub fn in_dealiased_zone(&self, wave: [i64; 3]) -> bool {
        let n = self.n as i64;
        wave.iter().all(|&w| 3 * w.abs() <= n)
    }

    /// Smallest nonzero physical wavenumber magnitude.
    pub fn min_wavenumber(&self) -> f64 {
        self.base_wavenumber()
    }

    /// Largest physical wavenumber magnitude in storage (Nyquist corner).
    pub fn max_wavenumber(&self) -> f64 {
        3f64.sqrt() * (self.n / 2) as f64 * self.base_wavenumber()
    }

    /// Coordinate of collocation point `i` along any axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }
}

/// Viscosity, rotation speed and the smallness threshold for initial data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowParams {
    pub nu: f64,
    pub omega: f64,
    pub smallness_c: f64,
}

impl FlowParams {
    pub fn new(nu: f64, omega: f64, smallness_c: f64) -> Result<Self> {
        let p = Self {
            nu,
            omega,
            smallness_c,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0) || !self.nu.is_finite() {
            return Err(Error::InvalidParams(format!("nu must be > 0 (got {})", self.nu)));
        }
        if !(self.omega >= 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParams(format!(
                "omega must be >= 0 (got {})",
                self.omega
            )));
        }
        if !(self.smallness_c > 0.0) {
            return Err(Error::InvalidParams(format!(
                "smallness_c must be > 0 (got {})",
                self.smallness_c
            )));
        }
        Ok(())
    }
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            nu: 1.0,
            omega: 1.0,
            smallness_c: 0.05,
        }
    }
}
