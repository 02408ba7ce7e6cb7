//! Differential multipliers, the Leray projector, the dealiased convective
//! term and L^p norms.

use log::warn;
use num_complex::Complex64;

use super::fft::{self, Direction};
use super::field::{PhysicalField, SpectralField};
use super::grid::Grid;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn require_vector(u: &SpectralField) -> Result<()> {
    if u.n_components() != 3 {
        return Err(Error::ComponentMismatch {
            expected: 3,
            got: u.n_components(),
        });
    }
    Ok(())
}

/// Per-mode projection `I - k kᵀ/|k|²` onto divergence-free fields.
///
/// The zero mode is passed through unchanged; a warning is logged when it is
/// nonzero.
pub fn leray_project(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    if !u.is_finite() {
        return Err(Error::NonFinite("leray_project input"));
    }
    if !u.is_mean_free() {
        warn!("leray_project: nonzero mean passed through unchanged");
    }
    let mut out = u.clone();
    out.apply_vector_map(|m, a| {
        if m.is_zero() {
            return a;
        }
        project_mode(m.k, a)
    })?;
    Ok(out)
}

#[inline]
pub(crate) fn project_mode(k: [f64; 3], a: [Complex64; 3]) -> [Complex64; 3] {
    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    let dot = (a[0] * k[0] + a[1] * k[1] + a[2] * k[2]) / k2;
    [a[0] - dot * k[0], a[1] - dot * k[1], a[2] - dot * k[2]]
}

/// `∂/∂x_axis` for `axis` in `0..3`, applied to every component.
pub fn derivative(u: &SpectralField, axis: usize) -> SpectralField {
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let grid = *u.grid();
    let mut out = u.clone();
    let factors: Vec<f64> = grid.modes().map(|m| m.k[axis]).collect();
    for c in 0..out.n_components() {
        for (z, k) in out.component_mut(c).iter_mut().zip(&factors) {
            *z *= I * k;
        }
    }
    out
}

/// Scalar field `∇·u`.
pub fn divergence(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    let grid = *u.grid();
    let mut out = SpectralField::zeros(grid, 1);
    {
        let dst = out.component_mut(0);
        for m in grid.modes() {
            let i = m.index;
            dst[i] = I * (u.component(0)[i] * m.k[0]
                + u.component(1)[i] * m.k[1]
                + u.component(2)[i] * m.k[2]);
        }
    }
    out.time = u.time;
    Ok(out)
}

/// Zeroes every mode outside the 2/3-rule zone.
pub fn dealias(u: &SpectralField) -> SpectralField {
    let grid = *u.grid();
    let mut out = u.clone();
    out.apply_scalar_multiplier(|m| if grid.in_dealiased_zone(m.wave) { 1.0 } else { 0.0 });
    out
}

fn forward_real(vals: &[f64], grid: &Grid) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::transform(&mut buf, grid.n(), Direction::Forward);
    let inv = 1.0 / grid.len() as f64;
    for z in &mut buf {
        *z *= inv;
    }
    buf
}

fn truncate_and_symmetrize(mut out: SpectralField) -> SpectralField {
    let grid = *out.grid();
    out.apply_scalar_multiplier(|m| if grid.in_dealiased_zone(m.wave) { 1.0 } else { 0.0 });
    out.symmetrize();
    out
}

/// Alias-free pointwise product.
///
/// Both factors are truncated to the 2/3 zone, multiplied on the collocation
/// lattice, and the result truncated again. Vector fields multiply
/// componentwise; a scalar factor broadcasts over the other's components.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch("dealiased_product".into()));
    }
    let grid = *f.grid();
    let (nf, ng) = (f.n_components(), g.n_components());
    let nout = match (nf, ng) {
        (a, b) if a == b => a,
        (1, b) => b,
        (a, 1) => a,
        (a, b) => return Err(Error::ComponentMismatch { expected: a, got: b }),
    };
    let pf = dealias(f).to_physical();
    let pg = dealias(g).to_physical();
    let mut comps = Vec::with_capacity(nout);
    for c in 0..nout {
        let a = pf.component(if nf == 1 { 0 } else { c });
        let b = pg.component(if ng == 1 { 0 } else { c });
        let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        comps.push(forward_real(&prod, &grid));
    }
    let mut out = SpectralField::from_components(grid, comps)?;
    out.time = f.time;
    Ok(truncate_and_symmetrize(out))
}

/// `-P ∇·(u ⊗ v)` with `(∇·(u⊗v))_i = Σ_j ∂_j(u_j v_i)`, dealiased by the 2/3 rule.
///
/// No solenoidal check is made on the inputs; see [`nonlinear_term`] for the
/// checked quadratic form.
pub fn convective_term(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    require_vector(v)?;
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch("convective_term".into()));
    }
    let grid = *u.grid();
    let pu = dealias(u).to_physical();
    let symmetric = u == v;
    let pv = if symmetric { pu.clone() } else { dealias(v).to_physical() };
    let kvec: Vec<[f64; 3]> = grid.modes().map(|m| m.k).collect();
    let mut acc = vec![vec![ZERO; grid.len()]; 3];
    let mut prod = vec![0.0; grid.len()];
    for j in 0..3 {
        for i in 0..3 {
            if symmetric && i < j {
                continue;
            }
            for ((p, a), b) in prod.iter_mut().zip(pu.component(j)).zip(pv.component(i)) {
                *p = a * b;
            }
            let hat = forward_real(&prod, &grid);
            // -i k_j (u_j v_i)^ contributes to component i; in the symmetric
            // case the same product also feeds component j through k_i.
            for (idx, h) in hat.iter().enumerate() {
                let k = kvec[idx];
                acc[i][idx] -= I * k[j] * h;
                if symmetric && i != j {
                    acc[j][idx] -= I * k[i] * h;
                }
            }
        }
    }
    let mut out = SpectralField::from_components(grid, acc)?;
    out.time = u.time;
    out.apply_vector_map(|m, a| {
        if m.is_zero() || !grid.in_dealiased_zone(m.wave) {
            return [ZERO; 3];
        }
        project_mode(m.k, a)
    })?;
    out.symmetrize();
    Ok(out)
}

/// `N(u) = -P ∇·(u ⊗ u)`, the nonlinearity of the mild formulation.
pub fn nonlinear_term(u: &SpectralField) -> Result<SpectralField> {
    require_vector(u)?;
    let violation = u.solenoidal_violation();
    if violation > 0.0 {
        return Err(Error::NotSolenoidal(u.max_divergence()));
    }
    convective_term(u, u)
}

fn validate_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `(mean |f|^p)^{1/p}` of pointwise magnitudes, or the max for `p = ∞`.
pub fn lp_norm_of_samples(samples: &[f64], p: f64) -> Result<f64> {
    validate_exponent(p)?;
    if samples.is_empty() {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(samples.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
    }
    let n = samples.len() as f64;
    if p == 2.0 {
        return Ok((samples.iter().map(|v| v * v).sum::<f64>() / n).sqrt());
    }
    let scale = samples.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mean = samples.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>() / n;
    Ok(scale * mean.powf(1.0 / p))
}

pub fn lp_norm_physical(f: &PhysicalField, p: f64) -> Result<f64> {
    lp_norm_of_samples(&f.magnitude(), p)
}

/// L^p norm under the normalized measure; `p = 2` goes through Plancherel.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    validate_exponent(p)?;
    if p == 2.0 {
        return Ok(f.l2_norm());
    }
    lp_norm_physical(&f.to_physical(), p)
}

/// Homogeneous Sobolev norm `(Σ_k |k|^{2s} |û(k)|²)^{1/2}`.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> f64 {
    let grid = *u.grid();
    let mut acc = 0.0;
    for m in grid.modes() {
        if m.is_zero() {
            continue;
        }
        let w = m.norm_sq().powf(s);
        for c in 0..u.n_components() {
            acc += w * u.component(c)[m.index].norm_sqr();
        }
    }
    acc.sqrt()
}

/// `u ↦ 2^m u(2^m ·)`: the mode at `k` moves to `2^m k` with amplitude `2^m`.
///
/// Every active mode must land strictly inside the Nyquist band after the
/// remap.
pub fn dyadic_rescale(u: &SpectralField, m: u32) -> Result<SpectralField> {
    if m == 0 {
        return Ok(u.clone());
    }
    let grid = *u.grid();
    let factor = 1i64 << m;
    let half = (grid.n() / 2) as i64;
    let amp = factor as f64;
    let mut out = SpectralField::zeros(grid, u.n_components());
    out.time = u.time;
    for mode in grid.modes() {
        let active = (0..u.n_components()).any(|c| u.component(c)[mode.index] != ZERO);
        if !active {
            continue;
        }
        let target = mode.wave.map(|w| w * factor);
        if target.iter().any(|w| w.abs() >= half) {
            return Err(Error::SupportTooLarge(m));
        }
        let idx = grid
            .flat_of_wave(target)
            .expect("target inside lattice by the check above");
        for c in 0..u.n_components() {
            out.component_mut(c)[idx] = u.component(c)[mode.index] * amp;
        }
    }
    Ok(out)
}
