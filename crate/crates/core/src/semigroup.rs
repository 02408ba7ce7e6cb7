//! The Stokes–Coriolis semigroup `G(t)` as an exact Fourier multiplier, an
//! RK4 oracle for single modes, and decay fits.

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::littlewood_paley::{pow2, DyadicPartition, FieldSeries};
use crate::mild::{EnergyAccumulator, TimeGrid};
use crate::spectral::{leray_project, lp_norm, project_mode, FlowParams, Grid, SpectralField};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `R(k) a = a × k / |k|`.
pub fn rotation_apply(k: [f64; 3], a: [Complex64; 3]) -> [Complex64; 3] {
    let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if r == 0.0 {
        return [ZERO; 3];
    }
    let h = [k[0] / r, k[1] / r, k[2] / r];
    [
        a[1] * h[2] - a[2] * h[1],
        a[2] * h[0] - a[0] * h[2],
        a[0] * h[1] - a[1] * h[0],
    ]
}

/// Matrix of `R(k)`, rows `(0, k₃, −k₂; −k₃, 0, k₁; k₂, −k₁, 0)/|k|`.
pub fn rotation_matrix(k: [f64; 3]) -> [[f64; 3]; 3] {
    let r = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if r == 0.0 {
        return [[0.0; 3]; 3];
    }
    let h = [k[0] / r, k[1] / r, k[2] / r];
    [[0.0, h[2], -h[1]], [-h[2], 0.0, h[0]], [h[1], -h[0], 0.0]]
}

/// Per-mode factors of `G(t)` for one grid and one elapsed time.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: Grid,
    params: FlowParams,
    t: f64,
    damping: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: Grid, t: f64, params: &FlowParams) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::NegativeTime(t));
        }
        let len = grid.len();
        let (mut damping, mut cos, mut sin) = (vec![1.0; len], vec![1.0; len], vec![0.0; len]);
        for m in grid.modes() {
            if m.is_zero() {
                continue;
            }
            let r2 = m.norm_sq();
            damping[m.index] = (-params.nu * r2 * t).exp();
            let theta = params.omega * m.k[2] * t / r2.sqrt();
            let (s, c) = theta.sin_cos();
            cos[m.index] = c;
            sin[m.index] = s;
        }
        Ok(Self {
            grid,
            params: *params,
            t,
            damping,
            cos,
            sin,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    /// Applies the cached factors in place; the zero mode is left unchanged.
    pub fn apply_in_place(&self, u: &mut SpectralField) -> Result<()> {
        if *u.grid() != self.grid {
            return Err(Error::GridMismatch("propagator".into()));
        }
        let (d, c, s) = (&self.damping, &self.cos, &self.sin);
        u.apply_vector_map(|m, a| {
            if m.is_zero() {
                return a;
            }
            let i = m.index;
            let ra = rotation_apply(m.k, a);
            [
                (a[0] * c[i] + ra[0] * s[i]) * d[i],
                (a[1] * c[i] + ra[1] * s[i]) * d[i],
                (a[2] * c[i] + ra[2] * s[i]) * d[i],
            ]
        })?;
        u.time += self.t;
        Ok(())
    }

    pub fn apply(&self, u: &SpectralField) -> Result<SpectralField> {
        let mut out = u.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }
}

fn warn_if_mean(u: &SpectralField) {
    if !u.is_mean_free() {
        warn!("semigroup: nonzero mean carried through unchanged");
    }
}

/// `G(t)u₀`: per mode `e^{−ν|k|²t}[cos θ û₀ + sin θ R(k)û₀]`, `θ = Ωk₃t/|k|`.
pub fn apply_semigroup(u0: &SpectralField, t: f64, params: &FlowParams) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    warn_if_mean(u0);
    Propagator::new(*u0.grid(), t, params)?.apply(u0)
}

/// `‖G(t₁)G(t₂)u₀ − G(t₁+t₂)u₀‖₂ / ‖u₀‖₂`.
pub fn semigroup_property_check(u0: &SpectralField, t1: f64, t2: f64, params: &FlowParams) -> Result<f64> {
    let two = apply_semigroup(&apply_semigroup(u0, t2, params)?, t1, params)?;
    let one = apply_semigroup(u0, t1 + t2, params)?;
    let norm = u0.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(two.sub(&one)?.l2_norm() / norm)
}

fn vnorm(a: &[Complex64; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// RK4 integration of `â' = −ν|k|²â − Ω P(k)(e₃ × â)` for one mode.
pub fn mode_oracle(
    k: [f64; 3],
    a0: [Complex64; 3],
    t: f64,
    params: &FlowParams,
    steps: usize,
) -> Result<[Complex64; 3]> {
    let r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if r2 == 0.0 {
        return Err(Error::InvalidArgument("mode_oracle needs k != 0".into()));
    }
    if steps < 100 {
        return Err(Error::InvalidArgument(format!("steps must be >= 100 (got {steps})")));
    }
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    let kdot = (a0[0] * k[0] + a0[1] * k[1] + a0[2] * k[2]).norm() / r2.sqrt();
    if kdot > 1e-12 * vnorm(&a0).max(f64::MIN_POSITIVE) {
        return Err(Error::NotSolenoidal(kdot));
    }
    if t == 0.0 {
        return Ok(a0);
    }
    let (nu, om) = (params.nu, params.omega);
    let rhs = |a: &[Complex64; 3]| -> [Complex64; 3] {
        let cross = [-a[1], a[0], ZERO];
        let pc = project_mode(k, cross);
        std::array::from_fn(|i| -nu * r2 * a[i] - om * pc[i])
    };
    let h = t / steps as f64;
    let mut a = a0;
    for _ in 0..steps {
        let k1 = rhs(&a);
        let k2 = rhs(&std::array::from_fn(|i| a[i] + 0.5 * h * k1[i]));
        let k3 = rhs(&std::array::from_fn(|i| a[i] + 0.5 * h * k2[i]));
        let k4 = rhs(&std::array::from_fn(|i| a[i] + h * k3[i]));
        a = std::array::from_fn(|i| a[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    Ok(a)
}

/// Closed form of `G(t)` at a single mode.
pub fn mode_closed_form(k: [f64; 3], a0: [Complex64; 3], t: f64, params: &FlowParams) -> [Complex64; 3] {
    let r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if r2 == 0.0 {
        return a0;
    }
    let d = (-params.nu * r2 * t).exp();
    let (s, c) = (params.omega * k[2] * t / r2.sqrt()).sin_cos();
    let ra = rotation_apply(k, a0);
    std::array::from_fn(|i| (a0[i] * c + ra[i] * s) * d)
}

/// Result of a log-linear fit `log(‖G(t)u‖_p/‖u‖_p) ≈ log C − c λ² t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub c_big: f64,
    pub c_fit: f64,
    pub lambda: f64,
    pub times: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// 20 equispaced sample times on `[0.1/λ², 3/λ²]`.
pub fn default_fit_times(j: i32) -> Vec<f64> {
    let l2 = pow2(j) * pow2(j);
    (0..20).map(|i| (0.1 + 2.9 * i as f64 / 19.0) / l2).collect()
}

/// Whether every nonzero coefficient sits in the annulus `3/4·2^j <= |k| <= 8/3·2^j`.
pub fn is_ring_supported(u: &SpectralField, j: i32) -> bool {
    let (lo, hi) = (0.75 * pow2(j), 8.0 / 3.0 * pow2(j));
    let grid = *u.grid();
    grid.modes().all(|m| {
        let r = m.norm();
        (r >= lo && r <= hi) || u.components().iter().all(|c| c[m.index] == ZERO)
    })
}

/// Fits the exponential decay of `‖G(t)u‖_p` for a field supported in block `j`.
pub fn decay_fit(u: &SpectralField, j: i32, p: f64, params: &FlowParams, times: &[f64]) -> Result<DecayFit> {
    if times.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "decay_fit needs at least 3 times (got {})",
            times.len()
        )));
    }
    if u.is_zero() || !is_ring_supported(u, j) {
        return Err(Error::NotRingSupported(j));
    }
    let lambda = pow2(j);
    if p != 2.0 && lambda < params.omega {
        return Err(Error::InvalidArgument(format!(
            "p = {p} needs 2^j >= omega (2^{j} < {})",
            params.omega
        )));
    }
    let base = lp_norm(u, p)?;
    let mut ratios = Vec::with_capacity(times.len());
    for &t in times {
        ratios.push(lp_norm(&apply_semigroup(u, t, params)?, p)? / base);
    }
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let (intercept, slope) = least_squares(times, &ys);
    Ok(DecayFit {
        c_big: intercept.exp(),
        c_fit: -slope / (lambda * lambda),
        lambda,
        times: times.to_vec(),
        ratios,
    })
}

/// Ordinary least squares `y ≈ a + b x`, returning `(a, b)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

/// `G(t_i)u₀` at every node of the time grid.
pub fn series_propagate(u0: &SpectralField, tgrid: &TimeGrid, params: &FlowParams) -> Result<FieldSeries> {
    warn_if_mean(u0);
    let times = tgrid.nodes();
    let fields = times
        .iter()
        .map(|&t| {
            let mut f = Propagator::new(*u0.grid(), t, params)?.apply(u0)?;
            f.time = u0.time + t;
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    FieldSeries::new(times, fields)
}

/// Largest relative violation of `‖G(t)u₀‖² + 2ν∫₀ᵗ‖∇G(s)u₀‖² ds = ‖u₀‖²`
/// at the nodes of `tgrid`, with trapezoidal quadrature.
pub fn linear_energy_identity(u0: &SpectralField, tgrid: &TimeGrid, params: &FlowParams) -> Result<f64> {
    let step = Propagator::new(*u0.grid(), tgrid.step(), params)?;
    let mut u = u0.clone();
    let mut acc = EnergyAccumulator::new(params);
    acc.push(0.0, &u);
    for i in 1..=tgrid.steps() {
        step.apply_in_place(&mut u)?;
        acc.push(tgrid.node(i), &u);
    }
    let e0 = acc.initial_energy();
    if e0 == 0.0 {
        return Ok(0.0);
    }
    Ok(acc.budgets().iter().fold(0.0, |m: f64, b| m.max(b.abs())) / e0)
}

/// Max of `‖GΔ_j u − Δ_j G u‖₂` over blocks and `‖GPu − PGu‖₂`, relative to `‖u‖₂`.
pub fn commutator_defect(u: &SpectralField, t: f64, params: &FlowParams) -> Result<f64> {
    let norm = u.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let g = Propagator::new(*u.grid(), t, params)?;
    let gu = g.apply(u)?;
    let partition = DyadicPartition::for_grid(u.grid());
    let mut worst: f64 = 0.0;
    for j in partition.blocks() {
        let a = g.apply(&partition.block(u, j))?;
        let b = partition.block(&gu, j);
        worst = worst.max(a.sub(&b)?.l2_norm());
    }
    let a = g.apply(&leray_project(u)?)?;
    let b = leray_project(&gu)?;
    worst = worst.max(a.sub(&b)?.l2_norm());
    Ok(worst / norm)
}

/// Max over modes of `| |G(t)û₀(k)| − e^{−ν|k|²t}|û₀(k)| |`, relative to `max |û₀|`.
pub fn modewise_isometry_defect(u0: &SpectralField, t: f64, params: &FlowParams) -> Result<f64> {
    let gu = apply_semigroup(u0, t, params)?;
    let grid = *u0.grid();
    let scale = u0.max_abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for m in grid.modes() {
        let a: [Complex64; 3] = std::array::from_fn(|c| u0.component(c)[m.index]);
        let b: [Complex64; 3] = std::array::from_fn(|c| gu.component(c)[m.index]);
        let expect = (-params.nu * m.norm_sq() * t).exp() * vnorm(&a);
        worst = worst.max((vnorm(&b) - expect).abs());
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::random_solenoidal;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn params(nu: f64, omega: f64) -> FlowParams {
        FlowParams::new(nu, omega, 0.05).unwrap()
    }

    #[test]
    fn single_mode_closed_form() {
        let g = Grid::standard(8).unwrap();
        let mut u = SpectralField::zeros(g, 3);
        u.set_real_mode(0, [0, 0, 1], c(1.0));
        let out = apply_semigroup(&u, PI / 2.0, &params(1.0, 2.0)).unwrap();
        let v = out.coeff(0, [0, 0, 1]);
        assert!((v.re + (-PI / 2.0).exp()).abs() < 1e-15);
        assert!((v.re + 0.20788).abs() < 1e-5);
        assert!(out.coeff(1, [0, 0, 1]).norm() < 1e-15);
    }

    #[test]
    fn rotation_matrix_is_skew_and_matches_apply() {
        let k = [1.0, -2.0, 3.0];
        let r = rotation_matrix(k);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(r[i][j], -r[j][i]);
            }
        }
        let a = [c(0.3), Complex64::new(0.1, 0.7), c(-0.4)];
        let ra = rotation_apply(k, a);
        for i in 0..3 {
            let m: Complex64 = (0..3).map(|j| a[j] * r[i][j]).sum();
            assert!((m - ra[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn heat_reduction_and_identity() {
        let g = Grid::standard(16).unwrap();
        let u = random_solenoidal(3, -1.0, (0, 2), &g).unwrap();
        let p = params(0.7, 0.0);
        let out = apply_semigroup(&u, 0.3, &p).unwrap();
        let mut heat = u.clone();
        heat.apply_scalar_multiplier(|m| (-0.7 * m.norm_sq() * 0.3).exp());
        assert_eq!(out.max_abs_diff(&heat).unwrap(), 0.0);
        let id = apply_semigroup(&u, 0.0, &params(1.0, 3.0)).unwrap();
        assert_eq!(id.max_abs_diff(&u).unwrap(), 0.0);
        assert!(apply_semigroup(&u, -1.0, &p).is_err());
    }

    #[test]
    fn semigroup_law_and_divergence() {
        let g = Grid::standard(16).unwrap();
        let u = random_solenoidal(5, -1.0, (0, 2), &g).unwrap();
        let p = params(1.0, 5.0);
        assert!(semigroup_property_check(&u, 0.1, 0.1, &p).unwrap() < 1e-12);
        assert_eq!(semigroup_property_check(&u, 0.0, 0.2, &p).unwrap(), 0.0);
        let out = apply_semigroup(&u, 0.4, &p).unwrap();
        assert!(out.max_divergence() < 1e-12 * u.max_abs());
        assert!(modewise_isometry_defect(&u, 0.4, &p).unwrap() < 1e-12);
        assert!(commutator_defect(&u, 0.4, &p).unwrap() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let p = params(1.0, 2.0);
        let k = [0.0, 0.0, 1.0];
        let a0 = [c(1.0), c(0.0), c(0.0)];
        let rk = mode_oracle(k, a0, PI / 2.0, &p, 10_000).unwrap();
        let cf = mode_closed_form(k, a0, PI / 2.0, &p);
        for i in 0..3 {
            assert!((rk[i] - cf[i]).norm() < 1e-10);
        }
        assert_eq!(mode_oracle(k, a0, 0.0, &p, 100).unwrap(), a0);
        assert!(mode_oracle(k, [c(0.0), c(0.0), c(1.0)], 1.0, &p, 100).is_err());
        assert!(mode_oracle([0.0; 3], a0, 1.0, &p, 100).is_err());
    }

    #[test]
    fn single_mode_decay_rate() {
        let g = Grid::standard(16).unwrap();
        let mut u = SpectralField::zeros(g, 3);
        u.set_real_mode(0, [0, 2, 0], c(1.0));
        let p = params(0.8, 1.0);
        let fit = decay_fit(&u, 1, 2.0, &p, &default_fit_times(1)).unwrap();
        assert!((fit.c_fit - 0.8).abs() < 1e-6);
        assert!((fit.c_big - 1.0).abs() < 1e-6);
        assert!(decay_fit(&u, 3, 2.0, &p, &default_fit_times(3)).is_err());
        assert!(decay_fit(&u, 1, 2.0, &p, &[0.1, 0.2]).is_err());
    }
}
