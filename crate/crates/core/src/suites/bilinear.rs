use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::random_solenoidal;
use crate::io::{ReportTable, RunConfig};
use crate::mild::{bilinear_bound_probe, duhamel_bilinear, ProbeData, TimeGrid};
use crate::row;
use crate::semigroup::series_propagate;
use crate::spectral::Grid;

pub const PROBE_GRIDS: [usize; 2] = [16, 32];
pub const PROBE_ENSEMBLE: usize = 10;
pub const PROBE_HORIZON: f64 = 0.5;
pub const PROBE_STEPS: usize = 16;

/// Exact bilinearity of `B` and grid stability of the probed constant `η`.
pub fn run_bilinear(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let params = cfg.flow_params()?;
    let p = cfg.norms.p;
    let tg = TimeGrid::new(PROBE_HORIZON, PROBE_STEPS)?;
    let mut out = SuiteOutcome::new("bilinear");

    let g16 = Grid::new(PROBE_GRIDS[0], cfg.grid.length)?;
    let data = ProbeData::default();
    let a = series_propagate(&random_solenoidal(cfg.seed, data.slope, data.band, &g16)?, &tg, &params)?;
    let b = series_propagate(&random_solenoidal(cfg.seed + 1, data.slope, data.band, &g16)?, &tg, &params)?;
    let (alpha, beta) = (1.7, -0.6);
    let lhs = duhamel_bilinear(&a.combine(alpha, &b, beta)?, &a, &tg, &params)?;
    let rhs = duhamel_bilinear(&a, &a, &tg, &params)?.combine(alpha, &duhamel_bilinear(&b, &a, &tg, &params)?, beta)?;
    let mut defect: f64 = 0.0;
    for (x, y) in lhs.fields().iter().zip(rhs.fields()) {
        let scale = y.max_abs().max(f64::MIN_POSITIVE);
        defect = defect.max(x.max_abs_diff(y)? / scale);
    }
    out.check(Check::below("bilinearity_defect", defect, 1e-12));

    let mut table = ReportTable::new(&["n", "p", "sample", "ratio"]);
    let mut etas = Vec::new();
    for n in PROBE_GRIDS {
        let grid = Grid::new(n, cfg.grid.length)?;
        let probe = bilinear_bound_probe(&grid, PROBE_ENSEMBLE, p, params.omega, &tg, &params, cfg.seed, data)?;
        for (i, r) in probe.ratios.iter().enumerate() {
            table.push(row![n, p, i, *r]);
        }
        out.check(Check::flag(&format!("eta_finite_n{n}"), probe.eta.is_finite() && probe.eta > 0.0));
        etas.push(probe.eta);
    }
    out.check(Check::at_most("eta_relative_change", (etas[1] / etas[0] - 1.0).abs(), 0.5));
    out.table("probe", table);
    Ok(out)
}
