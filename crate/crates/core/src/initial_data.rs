//! Initial data: oscillating vortices on a Gaussian envelope, modulated
//! scalars, and reproducible random solenoidal ensembles.

use log::warn;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::{pow2, DyadicPartition};
use crate::spectral::{project_mode, Grid, SpectralField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Gaussian bump `A exp(-|x - c|² / (2 w²))`, periodized over the box.
///
/// The field is built from its exact Fourier coefficients, so the
/// periodization is part of the definition rather than an error term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSpec {
    pub width: f64,
    pub center: [f64; 3],
    pub amplitude: f64,
}

impl EnvelopeSpec {
    pub fn centered(grid: &Grid, width: f64, amplitude: f64) -> Self {
        let c = 0.5 * grid.length();
        Self {
            width,
            center: [c, c, c],
            amplitude,
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        if !(self.width > 0.0) || self.width > grid.length() / 4.0 {
            return Err(Error::InvalidArgument(format!(
                "envelope width must lie in (0, L/4] (got {})",
                self.width
            )));
        }
        if !self.amplitude.is_finite() || self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("envelope spec"));
        }
        let k_edge = (grid.n() / 2) as f64 * grid.base_wavenumber();
        let tail = (-0.5 * (self.width * k_edge).powi(2)).exp();
        if tail > 1e-8 {
            warn!("envelope of width {} is under-resolved: spectral tail {tail:e}", self.width);
        }
        Ok(())
    }
}

/// Scalar field of the periodized Gaussian envelope.
pub fn gaussian_envelope(env: &EnvelopeSpec, grid: &Grid) -> Result<SpectralField> {
    env.validate(grid)?;
    let w2 = env.width * env.width;
    let vol = grid.length().powi(3);
    let pref = env.amplitude * (2.0 * std::f64::consts::PI * w2).powf(1.5) / vol;
    let mut f = SpectralField::zeros(*grid, 1);
    {
        let dst = f.component_mut(0);
        for m in grid.modes() {
            if grid.is_nyquist(m.wave) {
                continue;
            }
            let phase = -(m.k[0] * env.center[0] + m.k[1] * env.center[1] + m.k[2] * env.center[2]);
            dst[m.index] = Complex64::from_polar(pref * (-0.5 * w2 * m.norm_sq()).exp(), phase);
        }
    }
    f.symmetrize();
    Ok(f)
}

fn check_frequency(m: u32, grid: &Grid) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("oscillation frequency must be positive".into()));
    }
    if (m as usize) * 4 > grid.n() {
        return Err(Error::InvalidArgument(format!(
            "oscillation frequency {m} too large for n = {} (need m <= n/4)",
            grid.n()
        )));
    }
    Ok(())
}

/// Coefficients of `e^{i m x_axis} f` (shift by `+m` along `axis`), dropping
/// modes that leave the lattice.
fn shifted(f: &[Complex64], grid: &Grid, axis: usize, m: i64) -> Vec<Complex64> {
    let mut out = vec![ZERO; grid.len()];
    for mode in grid.modes() {
        let mut src = mode.wave;
        src[axis] -= m;
        if let Some(i) = grid.flat_of_wave(src) {
            out[mode.index] = f[i];
        }
    }
    out
}

/// `sin(m x₃)(-∂₂φ, ∂₁φ, 0)`: the oscillating vortex with `ε = 1/m`.
pub fn oscillating_vortex(m: u32, env: &EnvelopeSpec, grid: &Grid) -> Result<SpectralField> {
    check_frequency(m, grid)?;
    let phi = gaussian_envelope(env, grid)?;
    let phi = phi.component(0);
    let mut d2 = vec![ZERO; grid.len()];
    let mut d1 = vec![ZERO; grid.len()];
    for mode in grid.modes() {
        d1[mode.index] = I * mode.k[0] * phi[mode.index];
        d2[mode.index] = I * mode.k[1] * phi[mode.index];
    }
    let mi = m as i64;
    // sin(m x₃) g = (e^{i m x₃} g - e^{-i m x₃} g) / (2i)
    let modulate = |g: &[Complex64]| -> Vec<Complex64> {
        let plus = shifted(g, grid, 2, mi);
        let minus = shifted(g, grid, 2, -mi);
        plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * I)).collect()
    };
    let u1: Vec<Complex64> = modulate(&d2).into_iter().map(|z| -z).collect();
    let u2 = modulate(&d1);
    let mut u = SpectralField::from_components(*grid, vec![u1, u2, vec![ZERO; grid.len()]])?;
    u.symmetrize();
    Ok(u)
}

/// `φ_ε = e^{i m x₁} φ` stored as the real pair `(cos(m x₁)φ, sin(m x₁)φ)`.
///
/// The pointwise magnitude of the pair equals `|φ_ε|`, and every block of the
/// pair is the real/imaginary split of the corresponding block of `φ_ε`, so
/// all L^p-based norms of the two-component field are those of `φ_ε`.
pub fn modulated_scalar(m: u32, env: &EnvelopeSpec, grid: &Grid) -> Result<SpectralField> {
    check_frequency(m, grid)?;
    let phi = gaussian_envelope(env, grid)?;
    let phi = phi.component(0);
    let mi = m as i64;
    let plus = shifted(phi, grid, 0, mi);
    let minus = shifted(phi, grid, 0, -mi);
    let cos: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| 0.5 * (a + b)).collect();
    let sin: Vec<Complex64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * I)).collect();
    let mut f = SpectralField::from_components(*grid, vec![cos, sin])?;
    f.symmetrize();
    Ok(f)
}

/// Warns when `ε = 1/m` exceeds `1/Ω`, where the oscillation scaling is not promised.
pub fn check_oscillation_regime(m: u32, omega: f64) {
    if (m as f64) < omega {
        warn!("epsilon = 1/{m} exceeds 1/omega = {}", 1.0 / omega);
    }
}

fn stream_key(wave: [i64; 3]) -> u64 {
    const OFF: i64 = 1 << 20;
    let enc = |w: i64| (w + OFF) as u64 & ((1 << 21) - 1);
    (enc(wave[0]) << 42) | (enc(wave[1]) << 21) | enc(wave[2])
}

/// Canonical half of the lattice: first nonzero component positive.
fn is_canonical(wave: [i64; 3]) -> bool {
    wave.iter().find(|&&w| w != 0).is_some_and(|&w| w > 0)
}

/// Per-mode standard complex Gaussians, keyed by `(seed, k)` so the draw for
/// a wavevector does not depend on the grid or on fill order.
fn mode_gaussians<const N: usize>(seed: u64, wave: [i64; 3]) -> [Complex64; N] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_key(wave));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    std::array::from_fn(|_| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re * s, im * s)
    })
}

/// Random divergence-free field with amplitudes `|k|^slope` on the shells
/// `2^{j_lo} <= |k| < 2^{j_hi + 1}`.
pub fn random_solenoidal(seed: u64, slope: f64, band: (i32, i32), grid: &Grid) -> Result<SpectralField> {
    let (j_lo, j_hi) = band;
    let partition = DyadicPartition::for_grid(grid);
    if j_lo > j_hi || j_lo < partition.j_min || j_hi > partition.j_max {
        return Err(Error::InvalidArgument(format!(
            "band [{j_lo}, {j_hi}] outside resolved blocks [{}, {}]",
            partition.j_min, partition.j_max
        )));
    }
    let (lo, hi) = (pow2(j_lo), pow2(j_hi + 1));
    let mut u = SpectralField::zeros(*grid, 3);
    let mut count = 0usize;
    for m in grid.modes() {
        if !is_canonical(m.wave) || grid.is_nyquist(m.wave) {
            continue;
        }
        let r = m.norm();
        if r < lo || r >= hi {
            continue;
        }
        let amp = r.powf(slope);
        let g: [Complex64; 3] = mode_gaussians(seed, m.wave);
        let a = project_mode(m.k, [g[0] * amp, g[1] * amp, g[2] * amp]);
        for (c, v) in a.iter().enumerate() {
            u.set_real_mode(c, m.wave, *v);
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::InvalidArgument(format!("empty band [{j_lo}, {j_hi}]")));
    }
    Ok(u)
}

/// Random real scalar on every nonzero mode of the 2/3-rule zone, amplitudes `|k|^slope`.
pub fn random_band_limited_scalar(seed: u64, slope: f64, grid: &Grid) -> Result<SpectralField> {
    let mut f = SpectralField::zeros(*grid, 1);
    for m in grid.modes() {
        if !is_canonical(m.wave) || grid.is_nyquist(m.wave) || !grid.in_dealiased_zone(m.wave) {
            continue;
        }
        let g: [Complex64; 1] = mode_gaussians(seed, m.wave);
        f.set_real_mode(0, m.wave, g[0] * m.norm().powf(slope));
    }
    Ok(f)
}

/// Random divergence-free field on every nonzero mode of the 2/3-rule zone.
pub fn random_band_limited_solenoidal(seed: u64, slope: f64, grid: &Grid) -> Result<SpectralField> {
    let mut u = SpectralField::zeros(*grid, 3);
    for m in grid.modes() {
        if !is_canonical(m.wave) || grid.is_nyquist(m.wave) || !grid.in_dealiased_zone(m.wave) {
            continue;
        }
        let amp = m.norm().powf(slope);
        let g: [Complex64; 3] = mode_gaussians(seed, m.wave);
        let a = project_mode(m.k, [g[0] * amp, g[1] * amp, g[2] * amp]);
        for (c, v) in a.iter().enumerate() {
            u.set_real_mode(c, m.wave, *v);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::hybrid_parts;
    use crate::spectral::{divergence, PhysicalField};

    #[test]
    fn envelope_matches_sampled_gaussian() {
        let g = Grid::standard(64).unwrap();
        let env = EnvelopeSpec::centered(&g, 0.4, 1.3);
        let f = gaussian_envelope(&env, &g).unwrap();
        let c = env.center;
        let direct = PhysicalField::from_fn(g, 1, |_, x| {
            let r2: f64 = (0..3).map(|i| (x[i] - c[i]).powi(2)).sum();
            1.3 * (-r2 / (2.0 * 0.16)).exp()
        });
        let phys = f.to_physical();
        let err = phys
            .component(0)
            .iter()
            .zip(direct.component(0))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-9, "err = {err}");
    }

    #[test]
    fn vortex_is_solenoidal_and_mean_free() {
        let g = Grid::standard(32).unwrap();
        let env = EnvelopeSpec::centered(&g, 1.0, 1.0);
        let u = oscillating_vortex(8, &env, &g).unwrap();
        assert!(u.is_mean_free());
        assert!(divergence(&u).unwrap().max_abs() < 1e-12);
        assert!(u.hermitian_defect() < 1e-15);
        assert!(oscillating_vortex(9, &env, &g).is_err());
    }

    #[test]
    fn vortex_is_linear_in_amplitude() {
        let g = Grid::standard(16).unwrap();
        let a = oscillating_vortex(4, &EnvelopeSpec::centered(&g, 1.0, 1.0), &g).unwrap();
        let b = oscillating_vortex(4, &EnvelopeSpec::centered(&g, 1.0, 2.0), &g).unwrap();
        assert!(b.sub(&a.scaled(2.0)).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn modulated_scalar_concentrates_near_m() {
        let g = Grid::standard(64).unwrap();
        let env = EnvelopeSpec::centered(&g, 1.2, 1.0);
        let f = modulated_scalar(16, &env, &g).unwrap();
        let total = f.l2_norm();
        let mut near = 0.0;
        for m in g.modes() {
            let k = m.wave;
            let d2 = ((k[0] - 16).pow(2) + k[1].pow(2) + k[2].pow(2)) as f64;
            if d2 <= 36.0 {
                near += f.component(0)[m.index].norm_sqr() + f.component(1)[m.index].norm_sqr();
            }
        }
        // the pair carries only the e^{+i m x₁} side in its complex combination
        assert!(near.sqrt() > 0.7 * total);
        let parts = hybrid_parts(&f, 0.5, -0.25, 4.0, 1.0).unwrap();
        assert!(parts.low < 1e-6);
        let zero = modulated_scalar(16, &EnvelopeSpec::centered(&g, 1.2, 0.0), &g).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn random_solenoidal_is_reproducible_and_grid_independent() {
        let g16 = Grid::standard(16).unwrap();
        let g32 = Grid::standard(32).unwrap();
        let a = random_solenoidal(7, -11.0 / 6.0, (0, 1), &g16).unwrap();
        let b = random_solenoidal(7, -11.0 / 6.0, (0, 1), &g16).unwrap();
        assert_eq!(a, b);
        let c = random_solenoidal(7, -11.0 / 6.0, (0, 1), &g32).unwrap();
        for m in g16.modes() {
            for comp in 0..3 {
                assert_eq!(a.component(comp)[m.index], c.coeff(comp, m.wave));
            }
        }
        assert!(a.is_mean_free());
        assert!(divergence(&a).unwrap().max_abs() < 1e-12);
        assert!(a.hermitian_defect() == 0.0);
    }

    #[test]
    fn empty_or_unresolved_band_is_rejected() {
        let g = Grid::standard(8).unwrap();
        assert!(random_solenoidal(1, 0.0, (2, 1), &g).is_err());
        assert!(random_solenoidal(1, 0.0, (0, 9), &g).is_err());
    }
}
