use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::io::{ReportTable, RunConfig};
use crate::mild::{if_step_stream, EnergyAccumulator, TimeGrid};
use crate::row;
use crate::spectral::{nonlinear_term, sobolev_norm, SpectralField};

pub const ENERGY_STEPS: usize = 1024;

fn neutrality(u: &SpectralField) -> Result<f64> {
    let n = nonlinear_term(u)?;
    let scale = n.l2_norm() * u.l2_norm();
    Ok(if scale == 0.0 { 0.0 } else { n.inner(u)?.abs() / scale })
}

/// Energy inequality along a fine-step nonlinear run and `⟨N(u), u⟩ = 0`.
pub fn run_energy(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let params = cfg.flow_params()?;
    let u0 = cfg.initial_field()?;
    let tg = TimeGrid::new(cfg.time.horizon, ENERGY_STEPS)?;
    let mut out = SuiteOutcome::new("energy");
    let mut acc = EnergyAccumulator::new(&params);
    let mut table = ReportTable::new(&["t", "l2", "h12", "energy_budget"]);
    let last = if_step_stream(&u0, &tg, &params, |_, t, u| {
        acc.push(t, u);
        let b = *acc.budgets().last().unwrap();
        table.push(row![t, u.l2_norm(), sobolev_norm(u, 0.5), b]);
        Ok(())
    })?;
    let report = acc.report();
    out.check(Check::below("budget_violation_rel", report.relative_violation(), 1e-4));
    let neutral = neutrality(&u0)?.max(neutrality(&last)?);
    out.check(Check::below("nonlinear_neutrality_rel", neutral, 1e-10));
    out.table("budget", table);
    Ok(out)
}
