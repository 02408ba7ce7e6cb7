//! Picard iteration for `u = G(t)u₀ + B(u,u)`, the smallness gate and the
//! `F_p` norm.

use log::{info, warn};
use serde::Serialize;

use super::{duhamel_bilinear, TimeGrid};
use crate::error::{Error, Result};
use crate::littlewood_paley::{hybrid_norm, BlockTable, FieldSeries};
use crate::semigroup::series_propagate;
use crate::spectral::{FlowParams, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PicardReport {
    pub p: f64,
    pub tol: f64,
    /// `‖G(t)u₀‖_{E_{p,T}}`
    pub linear_norm: f64,
    /// `‖u^n‖_{E_{p,T}}`, starting with `u⁰ = G(t)u₀`
    pub iterate_norms: Vec<f64>,
    /// `d_n = ‖u^{n+1} − u^n‖_{E_{p,T}}`
    pub differences: Vec<f64>,
    /// `d_{n+1}/d_n`, only where `d_n > 1e-14`
    pub ratios: Vec<f64>,
    /// largest observed `‖B(u^n,u^n)‖ / ‖u^n‖²`
    pub eta_observed: f64,
    /// `‖u − G(t)u₀ − B(u,u)‖_{E_{p,T}}` at the returned iterate
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl PicardReport {
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

fn ep(series: &FieldSeries, p: f64, omega: f64) -> Result<f64> {
    if series.is_empty() {
        return Ok(0.0);
    }
    Ok(BlockTable::compute(series, p)?.ep(p, omega))
}

fn check_initial(u0: &SpectralField) -> Result<()> {
    if u0.n_components() != 3 {
        return Err(Error::ComponentMismatch {
            expected: 3,
            got: u0.n_components(),
        });
    }
    if !u0.is_solenoidal() {
        return Err(Error::NotSolenoidal(u0.max_divergence()));
    }
    if !u0.is_mean_free() {
        return Err(Error::InvalidArgument("initial data must be mean free".into()));
    }
    Ok(())
}

/// Iterates `u^{n+1} = G(t)u₀ + B(u^n, u^n)` from `u⁰ = G(t)u₀` until
/// `d_n < tol`, `max_iter` is reached, or the differences double twice.
pub fn picard_solve(
    u0: &SpectralField,
    tgrid: &TimeGrid,
    params: &FlowParams,
    p: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(FieldSeries, PicardReport)> {
    check_initial(u0)?;
    let omega = params.omega;
    let y = series_propagate(u0, tgrid, params)?;
    let linear_norm = ep(&y, p, omega)?;
    let mut u = y.clone();
    let mut report = PicardReport {
        p,
        tol,
        linear_norm,
        iterate_norms: vec![linear_norm],
        differences: Vec::new(),
        ratios: Vec::new(),
        eta_observed: 0.0,
        residual: f64::NAN,
        iterations: 0,
        converged: false,
    };
    let mut growth = 0;
    while report.iterations < max_iter {
        let b = duhamel_bilinear(&u, &u, tgrid, params)?;
        let norm_u = *report.iterate_norms.last().unwrap();
        if norm_u > 0.0 {
            report.eta_observed = report.eta_observed.max(ep(&b, p, omega)? / (norm_u * norm_u));
        }
        let next = y.combine(1.0, &b, 1.0)?;
        let d = ep(&next.sub(&u)?, p, omega)?;
        report.iterations += 1;
        if let Some(&prev) = report.differences.last() {
            if prev > 1e-14 {
                report.ratios.push(d / prev);
            }
            if d > 2.0 * prev {
                growth += 1;
            }
        }
        report.differences.push(d);
        info!("picard iteration {}: d = {d:e}", report.iterations);
        if !d.is_finite() || growth >= 2 {
            warn!("picard iteration diverging after {} iterations", report.iterations);
            report.iterate_norms.push(ep(&next, p, omega).unwrap_or(f64::INFINITY));
            return Ok((next, report));
        }
        report.iterate_norms.push(ep(&next, p, omega)?);
        u = next;
        if d < tol {
            report.converged = true;
            break;
        }
    }
    let b = duhamel_bilinear(&u, &u, tgrid, params)?;
    let r = u.sub(&y)?.sub(&b)?;
    report.residual = ep(&r, p, omega)?;
    Ok((u, report))
}

/// `(‖u₀‖_{Ḃ^{1/2, 3/p−1}_{2,p}}, norm <= smallness_c)`.
pub fn smallness_gate(u0: &SpectralField, p: f64, params: &FlowParams) -> Result<(f64, bool)> {
    if !(2.0..=4.0).contains(&p) {
        warn!("smallness_gate: p = {p} outside [2, 4]");
    }
    let v = hybrid_norm(u0, 0.5, 3.0 / p - 1.0, p, params.omega)?;
    Ok((v, v <= params.smallness_c))
}

/// `‖u‖_{L̃^∞(Ḣ^{1/2})} + ‖u‖_{E_p}`.
pub fn fp_norm(u: &FieldSeries, p: f64, omega: f64) -> Result<f64> {
    if u.is_empty() {
        return Ok(0.0);
    }
    let table = BlockTable::compute(u, p)?;
    Ok(table.tilde_sup_h_half() + table.ep(p, omega))
}

/// The `L̃^∞_T(Ḣ^{1/2})` part of [`fp_norm`].
pub fn tilde_sup_h_half(u: &FieldSeries) -> Result<f64> {
    if u.is_empty() {
        return Ok(0.0);
    }
    Ok(BlockTable::compute(u, 2.0)?.tilde_sup_h_half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::random_solenoidal;
    use crate::littlewood_paley::ep_norm;
    use crate::spectral::{Grid, PhysicalField};

    #[test]
    fn zero_data_converges_at_once() {
        let g = Grid::standard(8).unwrap();
        let tg = TimeGrid::new(0.5, 8).unwrap();
        let (s, r) = picard_solve(&SpectralField::zeros(g, 3), &tg, &FlowParams::default(), 2.0, 1e-8, 10).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(s.fields().iter().all(|f| f.is_zero()));
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn small_data_contracts() {
        let g = Grid::standard(16).unwrap();
        let tg = TimeGrid::new(0.25, 8).unwrap();
        let a = random_solenoidal(4, -11.0 / 6.0, (0, 1), &g).unwrap();
        let a = a.scaled(0.05 / a.max_abs());
        let (_, r) = picard_solve(&a, &tg, &FlowParams::default(), 2.0, 1e-10, 30).unwrap();
        assert!(r.converged);
        assert!(r.max_ratio() < 0.5);
        assert!(r.residual < 2e-10);
    }

    #[test]
    fn rejects_non_solenoidal_data() {
        let g = Grid::standard(8).unwrap();
        let tg = TimeGrid::new(0.5, 8).unwrap();
        let mut u = SpectralField::zeros(g, 3);
        u.set_real_mode(2, [1, 0, 0], num_complex::Complex64::new(1.0, 0.0));
        u.set_real_mode(0, [1, 0, 0], num_complex::Complex64::new(1.0, 0.0));
        assert!(picard_solve(&u, &tg, &FlowParams::default(), 2.0, 1e-8, 5).is_err());
    }

    #[test]
    fn gate_and_fp_norm() {
        let g = Grid::standard(16).unwrap();
        let p = FlowParams::default();
        let z = SpectralField::zeros(g, 3);
        assert_eq!(smallness_gate(&z, 3.0, &p).unwrap(), (0.0, true));

        let f = PhysicalField::from_fn(g, 3, |c, x| if c == 1 { (3.0 * x[0]).cos() } else { 0.0 })
            .to_spectral()
            .unwrap();
        let (v, pass) = smallness_gate(&f, 2.0, &p).unwrap();
        assert!(!pass && v > 0.0);
        let s = FieldSeries::constant(&f, vec![0.0, 0.5, 1.0]).unwrap();
        // one block, ‖Δ₁f‖₂ = 2^{-1/2}
        assert!((tilde_sup_h_half(&s).unwrap() - 1.0).abs() < 1e-14);
        assert!(fp_norm(&s, 3.0, 1.0).unwrap() >= ep_norm(&s, 3.0, 1.0).unwrap());
        let zs = FieldSeries::constant(&z, vec![0.0, 1.0]).unwrap();
        assert_eq!(fp_norm(&zs, 3.0, 1.0).unwrap(), 0.0);
    }
}
