use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::{oscillating_vortex, random_solenoidal, EnvelopeSpec};
use crate::io::{ReportTable, RunConfig};
use crate::littlewood_paley::{ep_norm, hybrid_norm};
use crate::mild::{
    bilinear_bound_probe, if_step_integrate, picard_solve, smallness_gate, tilde_sup_h_half, ProbeData, TimeGrid,
};
use crate::row;
use crate::semigroup::series_propagate;
use crate::spectral::{sobolev_norm, Grid};

pub const PICARD_HORIZON: f64 = 0.5;
pub const PICARD_STEPS: usize = 64;
pub const PROBE_STEPS: usize = 16;
pub const PICARD_TOL: f64 = 1e-8;
pub const PICARD_MAX_ITER: usize = 50;
pub const OSCILLATING_N: usize = 128;

/// Contraction of the Picard map on small data, agreement with the stepper,
/// and the gate on oscillating data.
pub fn run_picard(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let grid = cfg.grid()?;
    let base = cfg.flow_params()?;
    let tg = TimeGrid::new(PICARD_HORIZON, PICARD_STEPS)?;
    let probe_tg = TimeGrid::new(PICARD_HORIZON, PROBE_STEPS)?;
    let data = ProbeData::default();
    let mut out = SuiteOutcome::new("picard");
    let mut table = ReportTable::new(&["case", "iteration", "difference", "ratio"]);

    // random data with ‖y‖_E = 0.01/η
    let eta = bilinear_bound_probe(&grid, 10, 2.0, base.omega, &probe_tg, &base, cfg.seed, data)?.eta;
    let a = random_solenoidal(cfg.seed, data.slope, data.band, &grid)?;
    let y_norm = ep_norm(&series_propagate(&a, &tg, &base)?, 2.0, base.omega)?;
    let u0 = a.scaled(0.01 / (eta * y_norm));
    let (sol, rep) = picard_solve(&u0, &tg, &base, 2.0, PICARD_TOL, PICARD_MAX_ITER)?;
    push_history(&mut table, "random_p2", &rep.differences);
    out.check(Check::below("contraction_factor", 4.0 * eta * rep.linear_norm, 0.75));
    out.check(Check::flag("random_converged", rep.converged));
    out.check(Check::at_most("random_max_ratio", rep.max_ratio(), 0.5));
    out.check(Check::below("random_residual", rep.residual, 2.0 * PICARD_TOL));
    let stepped = if_step_integrate(&u0, &tg, &base)?;
    out.check(Check::below("picard_vs_stepper", tilde_sup_h_half(&stepped.sub(&sol)?)?, 1e-7));

    // oscillating vortex scaled under the p = 4 gate
    let c = match cfg.params.smallness_c {
        Some(c) => c,
        None => 0.05 / bilinear_bound_probe(&grid, 10, 4.0, base.omega, &probe_tg, &base, cfg.seed, data)?.eta,
    };
    let params = cfg.flow_params_with(|| Ok(c))?;
    let env = EnvelopeSpec::centered(&grid, grid.length() / 4.0, 1.0);
    let v = oscillating_vortex((grid.n() / 4) as u32, &env, &grid)?;
    let h = hybrid_norm(&v, 0.5, -0.25, 4.0, params.omega)?;
    let v = v.scaled(0.9 * c / h);
    let (_, gate) = smallness_gate(&v, 4.0, &params)?;
    out.check(Check::flag("vortex_gate", gate));
    let (_, rep) = picard_solve(&v, &tg, &params, 4.0, PICARD_TOL, PICARD_MAX_ITER)?;
    push_history(&mut table, "vortex_p4", &rep.differences);
    out.check(Check::flag("vortex_converged", rep.converged));

    // Ḣ^{1/2} size of highly oscillating data against the hybrid norm
    let big = Grid::new(OSCILLATING_N, grid.length())?;
    let env = EnvelopeSpec::centered(&big, big.length() / 4.0, 1.0);
    let v = oscillating_vortex((OSCILLATING_N / 4) as u32, &env, &big)?;
    let ratio = sobolev_norm(&v, 0.5) / hybrid_norm(&v, 0.5, -0.25, 4.0, params.omega)?;
    out.check(Check::at_least("h12_over_hybrid_m32", ratio, 10.0));
    out.table("iterations", table);
    Ok(out)
}

fn push_history(table: &mut ReportTable, case: &str, diffs: &[f64]) {
    for (i, d) in diffs.iter().enumerate() {
        let r = if i > 0 && diffs[i - 1] > 0.0 { d / diffs[i - 1] } else { f64::NAN };
        table.push(row![case, i + 1, *d, r]);
    }
}
