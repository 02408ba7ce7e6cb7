//! Integrating-factor Heun stepper: `G(h)` exact for the linear part, explicit
//! trapezoid for `N(u)`.

use log::warn;

use super::TimeGrid;
use crate::error::{Error, Result};
use crate::littlewood_paley::FieldSeries;
use crate::semigroup::Propagator;
use crate::spectral::{convective_term, FlowParams, SpectralField};

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

fn cfl_check(u0: &SpectralField, tgrid: &TimeGrid) {
    let grid = u0.grid();
    let umax = u0.to_physical().magnitude().into_iter().fold(0.0, f64::max);
    let need = tgrid.horizon() * grid.n() as f64 * umax / grid.length();
    if (tgrid.steps() as f64) < need {
        warn!("M = {} below the recommended {need:.1} for this data", tgrid.steps());
    }
}

/// One step `u ↦ G(h)(u + h/2 N(u)) + h/2 N(u*)`, `u* = G(h)(u + h N(u))`.
fn heun_step(u: &SpectralField, step: &Propagator, h: f64) -> Result<SpectralField> {
    let n0 = convective_term(u, u)?;
    let mut pred = u.clone();
    pred.axpy(h, &n0)?;
    step.apply_in_place(&mut pred)?;
    let n1 = convective_term(&pred, &pred)?;
    let mut next = u.clone();
    next.axpy(0.5 * h, &n0)?;
    step.apply_in_place(&mut next)?;
    next.axpy(0.5 * h, &n1)?;
    Ok(next)
}

/// Runs the stepper over `tgrid`, handing each node `(i, t_i, u_i)` to
/// `observe`; returns the final state.
pub fn if_step_stream(
    u0: &SpectralField,
    tgrid: &TimeGrid,
    params: &FlowParams,
    mut observe: impl FnMut(usize, f64, &SpectralField) -> Result<()>,
) -> Result<SpectralField> {
    check_initial(u0)?;
    cfl_check(u0, tgrid);
    let h = tgrid.step();
    let step = Propagator::new(*u0.grid(), h, params)?;
    let mut u = u0.clone().with_time(0.0);
    observe(0, 0.0, &u)?;
    for i in 1..=tgrid.steps() {
        u = heun_step(&u, &step, h)?;
        if !u.is_finite() {
            return Err(Error::NonFiniteState(i));
        }
        u.time = tgrid.node(i);
        observe(i, u.time, &u)?;
    }
    Ok(u)
}

/// The stepper's solution at every node of `tgrid`.
pub fn if_step_integrate(u0: &SpectralField, tgrid: &TimeGrid, params: &FlowParams) -> Result<FieldSeries> {
    let mut fields = Vec::with_capacity(tgrid.steps() + 1);
    if_step_stream(u0, tgrid, params, |_, _, u| {
        fields.push(u.clone());
        Ok(())
    })?;
    FieldSeries::new(tgrid.nodes(), fields)
}
