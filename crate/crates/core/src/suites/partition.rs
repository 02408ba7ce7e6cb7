use super::{Check, SuiteOutcome};
use crate::error::Result;
use crate::initial_data::random_band_limited_scalar;
use crate::io::{ReportTable, RunConfig};
use crate::littlewood_paley::{bernstein_ratio, besov_norm, bony_parts, check_identities, DyadicPartition};
use crate::row;
use crate::spectral::{dealiased_product, sobolev_norm, Grid};

/// Partition of unity, block orthogonality, paraproduct supports, Bony
/// reconstruction and Bernstein ratios.
pub fn run_partition(cfg: &RunConfig) -> Result<SuiteOutcome> {
    let grid = cfg.grid()?;
    let partition = DyadicPartition::for_grid(&grid);
    let mut out = SuiteOutcome::new("partition");

    let mut shells = ReportTable::new(&["k_squared", "radius", "unity_residual"]);
    let mut radii: Vec<i64> = grid
        .modes()
        .filter(|m| !m.is_zero())
        .map(|m| m.wave.iter().map(|w| w * w).sum())
        .collect();
    radii.sort_unstable();
    radii.dedup();
    let base = grid.base_wavenumber();
    for k2 in &radii {
        let r = (*k2 as f64).sqrt() * base;
        shells.push(row![*k2, r, partition.unity_residual(r)]);
    }
    out.table("shells", shells);

    let report = check_identities(&partition, &grid, cfg.seed)?;
    out.check(Check::below("unity_residual", report.unity_residual, 1e-8));
    out.check(Check::below("orthogonality_rel", report.orthogonality / report.field_norm, 1e-10));
    out.check(Check::below(
        "paraproduct_support_rel",
        report.paraproduct_support / report.field_norm,
        1e-10,
    ));

    let f = random_band_limited_scalar(cfg.seed.wrapping_add(10), -1.0, &grid)?;
    let g = random_band_limited_scalar(cfg.seed.wrapping_add(11), -1.5, &grid)?;
    let parts = bony_parts(&f, &g)?;
    let prod = dealiased_product(&f, &g)?;
    let bony_err = parts.sum()?.sub(&prod)?.l2_norm() / prod.l2_norm();
    out.check(Check::below("bony_reconstruction_rel", bony_err, 1e-10));

    let mut blocks = ReportTable::new(&["j", "l2", "bernstein_2_inf", "bernstein_2_2_grad"]);
    let mut worst_bern: f64 = 0.0;
    let mut energy_sum = 0.0;
    for j in partition.blocks() {
        let b = partition.block(&f, j);
        let l2 = b.l2_norm();
        energy_sum += l2 * l2;
        if l2 == 0.0 {
            blocks.push(row![j, 0.0, 0.0, 0.0]);
            continue;
        }
        let r_inf = bernstein_ratio(&f, j, 2.0, f64::INFINITY, [0, 0, 0])?;
        let r_grad = bernstein_ratio(&f, j, 2.0, 2.0, [1, 0, 0])?;
        worst_bern = worst_bern.max(r_inf).max(r_grad);
        blocks.push(row![j, l2, r_inf, r_grad]);
    }
    out.table("blocks", blocks);
    out.check(Check::at_most("bernstein_ratio_max", worst_bern, 50.0));
    let f2 = f.l2_norm().powi(2);
    out.check(Check::within("block_energy_ratio", energy_sum / f2, 0.5, 2.0));

    let mut besov = ReportTable::new(&["n", "besov_2_2", "sobolev", "ratio"]);
    let mut ratios = Vec::new();
    for n in [16usize, 32, 64] {
        let gn = Grid::new(n, grid.length())?;
        let h = random_band_limited_scalar(cfg.seed.wrapping_add(12), -2.0, &gn)?;
        let b = besov_norm(&h, 0.5, 2.0, 2.0)?;
        let s = sobolev_norm(&h, 0.5);
        ratios.push(b / s);
        besov.push(row![n, b, s, b / s]);
    }
    out.table("besov_vs_sobolev", besov);
    for (n, r) in [16, 32, 64].iter().zip(&ratios) {
        out.check(Check::within(&format!("besov_sobolev_ratio_n{n}"), *r, 0.5, 2.0));
    }
    let spread = ratios.iter().fold(0.0f64, |m, r| m.max((r / ratios[0] - 1.0).abs()));
    out.check(Check::at_most("besov_sobolev_ratio_drift", spread, 0.1));
    Ok(out)
}
