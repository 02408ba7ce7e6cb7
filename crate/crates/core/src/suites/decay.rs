use num_complex::Complex64;

use super::{Check, SuiteOutcome};
use crate::error::{Error, Result};
use crate::initial_data::random_solenoidal;
use crate::io::{ReportTable, RunConfig};
use crate::littlewood_paley::DyadicPartition;
use crate::row;
use crate::semigroup::{decay_fit, default_fit_times};
use crate::spectral::SpectralField;

/// Exponential decay of `G(t)` on single modes and ring-supported fields.
pub fn run_decay(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let grid = cfg.grid()?;
    let params = cfg.flow_params()?;
    let nu = params.nu;
    let partition = DyadicPartition::for_grid(&grid);
    let base = grid.base_wavenumber();
    let mut out = SuiteOutcome::new("decay");
    let mut fits = ReportTable::new(&["case", "j", "lambda_over_omega", "p", "C_fit", "c_fit"]);

    // single modes k = 2^j e₃ need 2^j to be a lattice wavenumber
    let mut single_err: f64 = 0.0;
    for j in 0..=2 {
        let w = (f64::powi(2.0, j) / base).round() as i64;
        if w == 0 || (w as f64 * base - f64::powi(2.0, j)).abs() > 1e-12 || w >= grid.n() as i64 / 2 {
            continue;
        }
        let mut u = SpectralField::zeros(grid, 3);
        u.set_real_mode(0, [0, 0, w], Complex64::new(1.0, 0.0));
        let fit = decay_fit(&u, j, 2.0, &params, &default_fit_times(j))?;
        single_err = single_err.max((fit.c_fit - nu).abs() / nu);
        fits.push(row!["single_mode", j, f64::powi(2.0, j) / params.omega, 2.0, fit.c_big, fit.c_fit]);
    }
    out.check(Check::below("single_mode_c_rel_error", single_err, 1e-6));

    let (lo, hi) = (nu * 0.75f64.powi(2) * 0.95, nu * (8.0f64 / 3.0).powi(2) * 1.05);
    let (mut ring_min, mut ring_max) = (f64::INFINITY, 0.0f64);
    for j in 0..=2.min(partition.j_max - 1) {
        let u = random_solenoidal(cfg.seed.wrapping_add(j as u64), -1.0, (j, j), &grid)?;
        let fit = decay_fit(&u, j, 2.0, &params, &default_fit_times(j))?;
        ring_min = ring_min.min(fit.c_fit);
        ring_max = ring_max.max(fit.c_fit);
        fits.push(row!["ring_p2", j, f64::powi(2.0, j) / params.omega, 2.0, fit.c_big, fit.c_fit]);
    }
    out.check(Check::at_least("ring_p2_c_min", ring_min, lo));
    out.check(Check::at_most("ring_p2_c_max", ring_max, hi));

    if params.omega > 0.0 {
        let mut lp_min = f64::INFINITY;
        for factor in [1.0, 2.0, 4.0] {
            let lambda: f64 = factor * params.omega;
            let j = lambda.log2().ceil() as i32;
            if j + 1 > partition.j_max {
                return Err(Error::InvalidArgument(format!(
                    "decay: block {j} for lambda = {lambda} not resolved on n = {}",
                    grid.n()
                )));
            }
            let u = random_solenoidal(cfg.seed.wrapping_add(50 + j as u64), -1.0, (j, j), &grid)?;
            let fit = decay_fit(&u, j, 4.0, &params, &default_fit_times(j))?;
            lp_min = lp_min.min(fit.c_fit);
            fits.push(row!["ring_p4", j, f64::powi(2.0, j) / params.omega, 4.0, fit.c_big, fit.c_fit]);
        }
        out.check(Check::at_least("ring_p4_c_min", lp_min, f64::MIN_POSITIVE));
    }
    out.table("fits", fits);
    Ok(out)
}
