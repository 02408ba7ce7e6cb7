use num_complex::Complex64;

use super::fft::{self, Direction};
use super::grid::{Grid, Mode};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Fourier coefficients of a real periodic field with one or three components.
///
/// `coeff(k)` is the coefficient of `e^{ik·x}`, so the forward transform
/// carries a `1/n^3` factor. Coefficients obey `coeff(-k) = conj(coeff(k))`
/// and vanish on the Nyquist planes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    components: Vec<Vec<Complex64>>,
    pub time: f64,
}

/// Real samples on the `n^3` collocation lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, n_components: usize) -> Self {
        Self {
            grid,
            components: vec![vec![ZERO; grid.len()]; n_components],
            time: 0.0,
        }
    }

    pub fn from_components(grid: Grid, components: Vec<Vec<Complex64>>) -> Result<Self> {
        for c in &components {
            if c.len() != grid.len() {
                return Err(Error::GridMismatch(format!(
                    "component length {} for grid of {} points",
                    c.len(),
                    grid.len()
                )));
            }
            if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("spectral coefficients"));
            }
        }
        Ok(Self {
            grid,
            components,
            time: 0.0,
        })
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.components[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    /// Coefficient of component `c` at integer wavevector `wave` (zero off-lattice).
    pub fn coeff(&self, c: usize, wave: [i64; 3]) -> Complex64 {
        self.grid
            .flat_of_wave(wave)
            .map(|i| self.components[c][i])
            .unwrap_or(ZERO)
    }

    /// Sets the mode at `wave` and its conjugate partner at `-wave`.
    ///
    /// A self-conjugate mode (`wave = 0`) keeps only the real part. Nyquist
    /// modes are ignored.
    pub fn set_real_mode(&mut self, c: usize, wave: [i64; 3], value: Complex64) {
        if self.grid.is_nyquist(wave) {
            return;
        }
        let Some(i) = self.grid.flat_of_wave(wave) else {
            return;
        };
        let j = self.grid.conjugate_index(i);
        if i == j {
            self.components[c][i] = Complex64::new(value.re, 0.0);
        } else {
            self.components[c][i] = value;
            self.components[c][j] = value.conj();
        }
    }

    pub fn scale(&mut self, a: f64) {
        for comp in &mut self.components {
            for z in comp.iter_mut() {
                *z *= a;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.n_components() != other.n_components() {
            return Err(Error::ComponentMismatch {
                expected: self.n_components(),
                got: other.n_components(),
            });
        }
        Ok(())
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (x, y) in self.components.iter_mut().zip(&other.components) {
            for (u, v) in x.iter_mut().zip(y) {
                *u += a * v;
            }
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    /// `sqrt(Σ_c Σ_k |coeff|^2)`, the L² norm under the normalized measure.
    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Mean of `u·v` over the box.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(x, y)| x.re * y.re + x.im * y.im)
            .sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b))
            .fold(0.0, |m, (x, y)| m.max((x - y).norm())))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().all(|z| *z == ZERO)
    }

    pub fn is_mean_free(&self) -> bool {
        self.components.iter().all(|c| c[0] == ZERO)
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|k̂·û(k)|` over all modes (vector fields only; zero otherwise).
    pub fn max_divergence(&self) -> f64 {
        if self.n_components() != 3 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for m in self.grid.modes() {
            if m.is_zero() {
                continue;
            }
            let kn = m.norm();
            let d = (0..3)
                .map(|c| self.components[c][m.index] * m.k[c])
                .sum::<Complex64>();
            worst = worst.max(d.norm() / kn);
        }
        worst
    }

    /// Solenoidal within `1e-12` per mode, with an absolute floor relative to
    /// the largest coefficient so that cancellations in sums do not trip it.
    pub fn is_solenoidal(&self) -> bool {
        self.n_components() == 3 && self.solenoidal_violation() <= 0.0
    }

    /// Excess of the worst mode over the solenoidal tolerance (<= 0 when satisfied).
    pub(crate) fn solenoidal_violation(&self) -> f64 {
        let floor = 1e-12 * self.max_abs();
        let mut worst = f64::NEG_INFINITY;
        for m in self.grid.modes() {
            if m.is_zero() {
                continue;
            }
            let a: [Complex64; 3] = std::array::from_fn(|c| self.components[c][m.index]);
            let amp = (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt();
            let d = (a[0] * m.k[0] + a[1] * m.k[1] + a[2] * m.k[2]).norm() / m.norm();
            worst = worst.max(d - 1e-12 * amp - floor);
        }
        worst
    }

    /// Largest deviation from `coeff(-k) = conj(coeff(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for comp in &self.components {
            for i in 0..comp.len() {
                let j = self.grid.conjugate_index(i);
                worst = worst.max((comp[i] - comp[j].conj()).norm());
            }
        }
        worst
    }

    /// Enforces Hermitian symmetry and zeroes the Nyquist planes.
    pub fn symmetrize(&mut self) {
        let grid = self.grid;
        for comp in &mut self.components {
            for m in grid.modes() {
                if grid.is_nyquist(m.wave) {
                    comp[m.index] = ZERO;
                    continue;
                }
                let j = grid.conjugate_index(m.index);
                if j < m.index {
                    continue;
                }
                if j == m.index {
                    comp[j] = Complex64::new(comp[j].re, 0.0);
                } else {
                    let avg = 0.5 * (comp[m.index] + comp[j].conj());
                    comp[m.index] = avg;
                    comp[j] = avg.conj();
                }
            }
        }
    }

    /// Multiplies every component by a real per-mode factor.
    pub fn apply_scalar_multiplier(&mut self, mut f: impl FnMut(&Mode) -> f64) {
        let grid = self.grid;
        let factors: Vec<f64> = grid.modes().map(|m| f(&m)).collect();
        for comp in &mut self.components {
            for (z, s) in comp.iter_mut().zip(&factors) {
                *z *= *s;
            }
        }
    }

    /// Applies a per-mode map to the three components of a vector field.
    pub fn apply_vector_map(
        &mut self,
        mut f: impl FnMut(&Mode, [Complex64; 3]) -> [Complex64; 3],
    ) -> Result<()> {
        if self.n_components() != 3 {
            return Err(Error::ComponentMismatch {
                expected: 3,
                got: self.n_components(),
            });
        }
        let grid = self.grid;
        let (c0, rest) = self.components.split_at_mut(1);
        let (c1, c2) = rest.split_at_mut(1);
        let (c0, c1, c2) = (&mut c0[0], &mut c1[0], &mut c2[0]);
        for m in grid.modes() {
            let i = m.index;
            let out = f(&m, [c0[i], c1[i], c2[i]]);
            c0[i] = out[0];
            c1[i] = out[1];
            c2[i] = out[2];
        }
        Ok(())
    }

    /// Whether every nonzero mode lies in the 2/3-rule zone.
    pub fn is_band_limited(&self) -> bool {
        let grid = self.grid;
        grid.modes().all(|m| {
            grid.in_dealiased_zone(m.wave) || self.components.iter().all(|c| c[m.index] == ZERO)
        })
    }

    pub fn to_physical(&self) -> PhysicalField {
        let n = self.grid.n();
        let components = self
            .components
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                fft::transform(&mut buf, n, Direction::Inverse);
                buf.into_iter().map(|z| z.re).collect()
            })
            .collect();
        PhysicalField {
            grid: self.grid,
            components,
        }
    }

    /// Physical samples of a single component.
    pub fn component_to_physical(&self, c: usize) -> Vec<f64> {
        let mut buf = self.components[c].clone();
        fft::transform(&mut buf, self.grid.n(), Direction::Inverse);
        buf.into_iter().map(|z| z.re).collect()
    }
}

impl PhysicalField {
    pub fn new(grid: Grid, components: Vec<Vec<f64>>) -> Result<Self> {
        for c in &components {
            if c.len() != grid.len() {
                return Err(Error::GridMismatch(format!(
                    "component length {} for grid of {} points",
                    c.len(),
                    grid.len()
                )));
            }
        }
        Ok(Self { grid, components })
    }

    /// Samples `f(x1, x2, x3)` for each component.
    pub fn from_fn(grid: Grid, n_components: usize, f: impl Fn(usize, [f64; 3]) -> f64) -> Self {
        let n = grid.n();
        let components = (0..n_components)
            .map(|c| {
                let mut v = Vec::with_capacity(grid.len());
                for i1 in 0..n {
                    for i2 in 0..n {
                        for i3 in 0..n {
                            let x = [grid.coordinate(i1), grid.coordinate(i2), grid.coordinate(i3)];
                            v.push(f(c, x));
                        }
                    }
                }
                v
            })
            .collect();
        Self { grid, components }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Pointwise Euclidean magnitude across components.
    pub fn magnitude(&self) -> Vec<f64> {
        if self.components.len() == 1 {
            return self.components[0].iter().map(|v| v.abs()).collect();
        }
        (0..self.grid.len())
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c[i] * c[i])
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    pub fn to_spectral(&self) -> Result<SpectralField> {
        let n = self.grid.n();
        let inv_vol = 1.0 / self.grid.len() as f64;
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("physical samples"));
            }
            let mut buf: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            fft::transform(&mut buf, n, Direction::Forward);
            for z in &mut buf {
                *z *= inv_vol;
            }
            components.push(buf);
        }
        let mut out = SpectralField {
            grid: self.grid,
            components,
            time: 0.0,
        };
        out.symmetrize();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Grid {
        Grid::standard(n).unwrap()
    }

    #[test]
    fn cosine_has_two_half_coefficients() {
        let g = grid(8);
        let f = PhysicalField::from_fn(g, 1, |_, x| x[0].cos()).to_spectral().unwrap();
        for m in g.modes() {
            let v = f.component(0)[m.index];
            let expect = if m.wave == [1, 0, 0] || m.wave == [-1, 0, 0] { 0.5 } else { 0.0 };
            assert!((v.re - expect).abs() < 1e-14 && v.im.abs() < 1e-14, "{:?}", m.wave);
        }
    }

    #[test]
    fn constant_maps_to_zero_mode() {
        let g = grid(8);
        let f = PhysicalField::from_fn(g, 1, |_, _| 1.0).to_spectral().unwrap();
        assert!((f.coeff(0, [0, 0, 0]).re - 1.0).abs() < 1e-15);
        assert!(!f.is_mean_free());
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = grid(8);
        let f = PhysicalField::from_fn(g, 1, |_, x| if x[0] == 0.0 { f64::NAN } else { 0.0 });
        assert!(matches!(f.to_spectral(), Err(Error::NonFinite(_))));
    }

    #[test]
    fn set_real_mode_fills_partner() {
        let g = grid(8);
        let mut f = SpectralField::zeros(g, 1);
        f.set_real_mode(0, [1, -2, 3], Complex64::new(0.3, 0.4));
        assert_eq!(f.coeff(0, [-1, 2, -3]), Complex64::new(0.3, -0.4));
        assert_eq!(f.hermitian_defect(), 0.0);
        f.set_real_mode(0, [4, 0, 0], Complex64::new(1.0, 0.0));
        assert_eq!(f.coeff(0, [4, 0, 0]), ZERO);
    }
}
