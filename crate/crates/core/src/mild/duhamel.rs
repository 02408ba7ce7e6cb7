//! The Duhamel bilinear operator `B(u,v)(t) = ∫₀ᵗ G(t−τ) N(u,v)(τ) dτ` with
//! `N(u,v) = −P∇·(u⊗v)`, and a random probe of its `E_p` bound.

use log::debug;
use serde::Serialize;

use super::TimeGrid;
use crate::error::{Error, Result};
use crate::initial_data::random_solenoidal;
use crate::littlewood_paley::{ep_norm, FieldSeries};
use crate::semigroup::{series_propagate, Propagator};
use crate::spectral::{convective_term, FlowParams, Grid, SpectralField};

fn check_series(s: &FieldSeries, tgrid: &TimeGrid) -> Result<()> {
    if !tgrid.matches(s.times()) {
        return Err(Error::InvalidArgument(format!(
            "series of {} nodes does not match a time grid of {} steps on [0, {}]",
            s.len(),
            tgrid.steps(),
            tgrid.horizon()
        )));
    }
    Ok(())
}

/// Trapezoidal Duhamel integral, computed by the exact recursion
/// `B_i = G(h)(B_{i−1} + h/2 N_{i−1}) + h/2 N_i`, `B_0 = 0`.
pub fn duhamel_bilinear(
    u: &FieldSeries,
    v: &FieldSeries,
    tgrid: &TimeGrid,
    params: &FlowParams,
) -> Result<FieldSeries> {
    check_series(u, tgrid)?;
    check_series(v, tgrid)?;
    let grid = *u.grid().ok_or(Error::EmptySeries)?;
    if v.grid() != Some(&grid) {
        return Err(Error::GridMismatch("duhamel_bilinear".into()));
    }
    let h = tgrid.step();
    let step = Propagator::new(grid, h, params)?;
    let times = tgrid.nodes();
    let mut out = Vec::with_capacity(times.len());
    let mut b = SpectralField::zeros(grid, 3).with_time(times[0]);
    let mut n_prev = convective_term(&u.fields()[0], &v.fields()[0])?;
    out.push(b.clone());
    for i in 1..times.len() {
        let n_i = convective_term(&u.fields()[i], &v.fields()[i])?;
        b.axpy(0.5 * h, &n_prev)?;
        step.apply_in_place(&mut b)?;
        b.axpy(0.5 * h, &n_i)?;
        b.time = times[i];
        out.push(b.clone());
        n_prev = n_i;
    }
    FieldSeries::new(times, out)
}

/// Outcome of a random probe of `‖B(u,v)‖_{E_p} / (‖u‖_{E_p}‖v‖_{E_p})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BilinearProbe {
    pub eta: f64,
    pub ratios: Vec<f64>,
    pub skipped: usize,
}

/// Shells of the random probe data and its spectral slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeData {
    pub band: (i32, i32),
    pub slope: f64,
}

impl Default for ProbeData {
    fn default() -> Self {
        Self {
            band: (0, 1),
            slope: -11.0 / 6.0,
        }
    }
}

/// Max over random linear-flow pairs `u = G(t)a`, `v = G(t)b` of the `E_p`
/// bilinear ratio. Zero-norm samples are skipped.
#[allow(clippy::too_many_arguments)]
pub fn bilinear_bound_probe(
    grid: &Grid,
    ensemble_size: usize,
    p: f64,
    omega: f64,
    tgrid: &TimeGrid,
    params: &FlowParams,
    seed: u64,
    data: ProbeData,
) -> Result<BilinearProbe> {
    if ensemble_size < 10 {
        return Err(Error::InvalidArgument(format!(
            "ensemble_size must be >= 10 (got {ensemble_size})"
        )));
    }
    let mut ratios = Vec::with_capacity(ensemble_size);
    let mut skipped = 0;
    for s in 0..ensemble_size as u64 {
        let a = random_solenoidal(seed.wrapping_add(2 * s), data.slope, data.band, grid)?;
        let b = random_solenoidal(seed.wrapping_add(2 * s + 1), data.slope, data.band, grid)?;
        let u = series_propagate(&a, tgrid, params)?;
        let v = series_propagate(&b, tgrid, params)?;
        let (nu, nv) = (ep_norm(&u, p, omega)?, ep_norm(&v, p, omega)?);
        if nu == 0.0 || nv == 0.0 {
            skipped += 1;
            continue;
        }
        let bb = duhamel_bilinear(&u, &v, tgrid, params)?;
        let r = ep_norm(&bb, p, omega)? / (nu * nv);
        debug!("bilinear probe sample {s}: ratio {r:e}");
        ratios.push(r);
    }
    let eta = ratios.iter().copied().fold(0.0, f64::max);
    Ok(BilinearProbe {
        eta,
        ratios,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::apply_semigroup;

    fn setup() -> (Grid, TimeGrid, FlowParams, FieldSeries) {
        let g = Grid::standard(16).unwrap();
        let tg = TimeGrid::new(0.25, 8).unwrap();
        let p = FlowParams::default();
        let a = random_solenoidal(11, -11.0 / 6.0, (0, 1), &g).unwrap();
        let u = series_propagate(&a, &tg, &p).unwrap();
        (g, tg, p, u)
    }

    #[test]
    fn zero_factor_and_initial_node() {
        let (g, tg, p, u) = setup();
        let z = FieldSeries::constant(&SpectralField::zeros(g, 3), tg.nodes()).unwrap();
        assert!(duhamel_bilinear(&z, &u, &tg, &p).unwrap().fields().iter().all(|f| f.is_zero()));
        let b = duhamel_bilinear(&u, &u, &tg, &p).unwrap();
        assert!(b.fields()[0].is_zero());
        assert!(b.fields().iter().all(|f| f.max_divergence() < 1e-12 * f.max_abs().max(1e-300)));
    }

    #[test]
    fn bilinearity_is_exact() {
        let (_, tg, p, u) = setup();
        let b1 = duhamel_bilinear(&u, &u, &tg, &p).unwrap();
        let b2 = duhamel_bilinear(&u.scaled(2.0), &u.scaled(2.0), &tg, &p).unwrap();
        for (x, y) in b1.fields().iter().zip(b2.fields()) {
            assert!(y.sub(&x.scaled(4.0)).unwrap().max_abs() <= 1e-12 * y.max_abs());
        }
    }

    #[test]
    fn recursion_matches_direct_trapezoid() {
        let (_, tg, p, u) = setup();
        let b = duhamel_bilinear(&u, &u, &tg, &p).unwrap();
        let h = tg.step();
        let m = tg.steps();
        let mut direct = SpectralField::zeros(*u.grid().unwrap(), 3);
        for l in 0..=m {
            let w = if l == 0 || l == m { 0.5 * h } else { h };
            let n = convective_term(&u.fields()[l], &u.fields()[l]).unwrap();
            direct.axpy(w, &apply_semigroup(&n, tg.node(m) - tg.node(l), &p).unwrap()).unwrap();
        }
        let last = b.last().unwrap();
        assert!(last.sub(&direct).unwrap().max_abs() < 1e-13 * direct.max_abs());
    }

    #[test]
    fn rejects_mismatched_time_grid() {
        let (_, tg, p, u) = setup();
        let other = TimeGrid::new(0.5, 8).unwrap();
        assert!(duhamel_bilinear(&u, &u, &other, &p).is_err());
        assert!(duhamel_bilinear(&u, &u, &tg, &p).is_ok());
    }
}
