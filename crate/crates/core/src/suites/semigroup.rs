use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::random_solenoidal;
use crate::io::{ReportTable, RunConfig};
use crate::mild::TimeGrid;
use crate::row;
use crate::semigroup::{
    apply_semigroup, commutator_defect, linear_energy_identity, mode_closed_form, mode_oracle,
    modewise_isometry_defect, semigroup_property_check,
};
use crate::spectral::{project_mode, FlowParams};

const ORACLE_SAMPLES: usize = 100;
const ORACLE_STEPS: usize = 10_000;

fn vnorm(a: &[Complex64; 3]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Closed form against the RK4 oracle, semigroup law, heat reduction,
/// modewise isometry, commutation and the linear energy identity.
pub fn run_semigroup(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let grid = cfg.grid()?;
    let params = cfg.flow_params()?;
    let mut out = SuiteOutcome::new("semigroup");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let kmax = (grid.n() / 2 - 1) as i64;
    let base = grid.base_wavenumber();

    let mut oracle = ReportTable::new(&["k1", "k2", "k3", "t", "rel_error"]);
    let mut worst: f64 = 0.0;
    for _ in 0..ORACLE_SAMPLES {
        let wave = loop {
            let w = [
                rng.random_range(-kmax..=kmax),
                rng.random_range(-kmax..=kmax),
                rng.random_range(-kmax..=kmax),
            ];
            if w != [0, 0, 0] {
                break w;
            }
        };
        let k = wave.map(|w| w as f64 * base);
        let r2: f64 = k.iter().map(|x| x * x).sum();
        let raw: [Complex64; 3] =
            std::array::from_fn(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let a0 = project_mode(k, raw);
        let t = rng.random::<f64>() * 2.0 / (params.nu * r2);
        let rk = mode_oracle(k, a0, t, &params, ORACLE_STEPS)?;
        let cf = mode_closed_form(k, a0, t, &params);
        let diff: [Complex64; 3] = std::array::from_fn(|i| rk[i] - cf[i]);
        let rel = vnorm(&diff) / vnorm(&cf);
        worst = worst.max(rel);
        oracle.push(row![wave[0], wave[1], wave[2], t, rel]);
    }
    out.table("oracle", oracle);
    out.check(Check::below("oracle_rel_error_max", worst, 1e-6));

    let mut law: f64 = 0.0;
    for i in 0..50u64 {
        let u = random_solenoidal(cfg.seed.wrapping_add(100 + i), -1.0, (0, 2), &grid)?;
        let t1 = rng.random::<f64>();
        let t2 = rng.random::<f64>();
        law = law.max(semigroup_property_check(&u, t1, t2, &params)?);
    }
    out.check(Check::below("semigroup_law_max", law, 1e-11));

    let u = random_solenoidal(cfg.seed.wrapping_add(7), -1.0, (0, 3), &grid)?;
    let heat_params = FlowParams::new(params.nu, 0.0, params.smallness_c)?;
    let t = 0.3;
    let heat = apply_semigroup(&u, t, &heat_params)?;
    let mut direct = u.clone();
    direct.apply_scalar_multiplier(|m| (-params.nu * m.norm_sq() * t).exp());
    out.check(Check::below(
        "heat_reduction_rel",
        heat.max_abs_diff(&direct)? / u.max_abs(),
        1e-12,
    ));
    out.check(Check::below("isometry_defect", modewise_isometry_defect(&u, t, &params)?, 1e-12));
    let gu = apply_semigroup(&u, t, &params)?;
    out.check(Check::below("divergence_after", gu.max_divergence() / u.max_abs(), 1e-12));
    out.check(Check::below("commutator_defect", commutator_defect(&u, t, &params)?, 1e-12));

    let u = random_solenoidal(cfg.seed.wrapping_add(8), -11.0 / 6.0, (0, 1), &grid)?;
    let tg = TimeGrid::new(1.0, 1024)?;
    let energy = linear_energy_identity(&u, &tg, &params)?;
    out.check(Check::below("linear_energy_identity_rel", energy, 1e-4));
    Ok(out)
}
