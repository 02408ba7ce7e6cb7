use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::random_solenoidal;
use crate::io::{ReportTable, RunConfig};
use crate::mild::{
    omega_weights, weight_inequality_violation, weighted_bilinear_probe, weighted_seminorm, ProbeData, TimeGrid,
    WeightSpec,
};
use crate::row;
use crate::semigroup::series_propagate;
use crate::spectral::Grid;

pub const WEIGHT_PAIRS: u64 = 20;

/// Time weights `e_{j,T}`, `ω_{j,T}` and the weighted bilinear estimate.
pub fn run_weights(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let params = cfg.flow_params()?;
    let c = params.nu;
    let mut out = SuiteOutcome::new("weights");

    let horizons: Vec<f64> = (-24..=8).map(|i| 10f64.powf(0.5 * i as f64)).collect();
    let worst = weight_inequality_violation((-20, 40), &horizons, c)?;
    out.check(Check::at_most("inequality_violation", worst, 0.0));

    let (_, w) = omega_weights(0, &WeightSpec::new(1.0, std::f64::consts::LN_2)?);
    out.check(Check::below("reference_omega_error", (w - 0.66291).abs(), 1e-5));

    let mut table = ReportTable::new(&["horizon", "j", "e", "omega"]);
    for &t in &[1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0] {
        let spec = WeightSpec::new(c, t)?;
        for j in -4..=8 {
            let (e, o) = omega_weights(j, &spec);
            table.push(row![t, j, e, o]);
        }
    }
    out.table("weights", table);

    let grid = Grid::new(16, cfg.grid.length)?;
    let data = ProbeData::default();
    let tg = TimeGrid::new(1.0, 16)?;
    let v = series_propagate(&random_solenoidal(cfg.seed, data.slope, data.band, &grid)?, &tg, &params)?;
    let semis: Vec<f64> = [1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0]
        .iter()
        .map(|&t| weighted_seminorm(&v, &WeightSpec::new(c, t)?))
        .collect::<Result<_>>()?;
    let decreasing = semis.windows(2).all(|w| w[1] < w[0]);
    out.check(Check::flag("seminorm_strictly_decreasing", decreasing));

    let tg = TimeGrid::new(0.5, 16)?;
    let spec = WeightSpec::new(c, tg.horizon())?;
    let mut worst: f64 = 0.0;
    let mut finite = true;
    for s in 0..WEIGHT_PAIRS {
        let a = random_solenoidal(cfg.seed.wrapping_add(2 * s), data.slope, data.band, &grid)?;
        let b = random_solenoidal(cfg.seed.wrapping_add(2 * s + 1), data.slope, data.band, &grid)?;
        let u = series_propagate(&a, &tg, &params)?;
        let w = series_propagate(&b, &tg, &params)?;
        let r = weighted_bilinear_probe(&u, &w, &spec, &tg, &params)?;
        finite &= r.is_finite();
        worst = worst.max(r);
    }
    out.check(Check::flag("weighted_probe_finite", finite));
    out.check(Check::at_least("weighted_probe_max", worst, f64::MIN_POSITIVE));
    Ok(out)
}
