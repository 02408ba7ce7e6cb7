use super::{loglog_slope, Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::{check_oscillation_regime, modulated_scalar, oscillating_vortex, EnvelopeSpec};
use crate::io::{ReportTable, RunConfig};
use crate::littlewood_paley::{hybrid_norm, hybrid_parts};
use crate::row;
use crate::spectral::Grid;

pub const OSCILLATION_N: usize = 128;
pub const FREQUENCIES: [u32; 3] = [8, 16, 32];

/// Hybrid norm of `e^{i m x₁}φ` against `ε = 1/m` on a dyadic sweep.
pub fn run_oscillation(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let grid = Grid::new(OSCILLATION_N, cfg.grid.length)?;
    let omega = cfg.params.omega;
    let env = EnvelopeSpec::centered(&grid, grid.length() / 4.0, 1.0);
    let mut out = SuiteOutcome::new("oscillation");
    let mut sweep = ReportTable::new(&["p", "m", "epsilon", "hybrid_norm", "fitted_slope"]);

    for (p, target) in [(4.0, 0.25), (3.0, 0.0)] {
        let mut eps = Vec::new();
        let mut norms = Vec::new();
        for m in FREQUENCIES {
            check_oscillation_regime(m, omega);
            let f = modulated_scalar(m, &env, &grid)?;
            let parts = hybrid_parts(&f, 0.5, 3.0 / p - 1.0, p, omega)?;
            if p == 4.0 && m == *FREQUENCIES.last().unwrap() {
                out.check(Check::at_most("low_part_at_m32", parts.low, 1e-6));
            }
            eps.push(1.0 / m as f64);
            norms.push(parts.total());
        }
        let slope = loglog_slope(&eps, &norms);
        for ((m, e), h) in FREQUENCIES.iter().zip(&eps).zip(&norms) {
            sweep.push(row![p, *m as i64, *e, *h, slope]);
        }
        out.check(Check::within(&format!("slope_p{p}"), slope, target - 0.1, target + 0.1));
    }
    out.table("sweep", sweep);

    let v8 = hybrid_norm(&oscillating_vortex(8, &env, &grid)?, 0.5, -0.25, 4.0, omega)?;
    let v16 = hybrid_norm(&oscillating_vortex(16, &env, &grid)?, 0.5, -0.25, 4.0, omega)?;
    let expect = 0.5f64.powf(0.25);
    out.check(Check::within("vortex_ratio_m16_m8", v16 / v8, 0.85 * expect, 1.15 * expect));
    Ok(out)
}
