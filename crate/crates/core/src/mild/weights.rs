//! Time weights `e_{j,T} = 1 − e^{−c 4^j T}`, `ω_{j,T} = sup_{k≥j} e_{k,T} 2^{(j−k)/2}`
//! and the weighted estimate for `B`.

use serde::{Deserialize, Serialize};

use super::{duhamel_bilinear, TimeGrid};
use crate::error::{Error, Result};
use crate::littlewood_paley::{pow2, BlockTable, FieldSeries};
use crate::spectral::FlowParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub c_weight: f64,
    pub horizon: f64,
}

impl WeightSpec {
    pub fn new(c_weight: f64, horizon: f64) -> Result<Self> {
        if !(c_weight > 0.0) || !c_weight.is_finite() {
            return Err(Error::InvalidArgument(format!("c_weight must be > 0 (got {c_weight})")));
        }
        if !(horizon >= 0.0) {
            return Err(Error::NegativeTime(horizon));
        }
        Ok(Self { c_weight, horizon })
    }
}

fn e_weight(k: i32, spec: &WeightSpec) -> f64 {
    -(-spec.c_weight * pow2(2 * k) * spec.horizon).exp_m1()
}

/// `(e_{j,T}, ω_{j,T})`. The sup scans `k` up to 64 levels past the point
/// where `e_{k,T}` saturates at 1, so the omitted tail is below `2^{-32}` of it.
pub fn omega_weights(j: i32, spec: &WeightSpec) -> (f64, f64) {
    if spec.horizon == 0.0 {
        return (0.0, 0.0);
    }
    if spec.horizon.is_infinite() {
        return (1.0, 1.0);
    }
    let e = e_weight(j, spec);
    // c 4^k T >= 40 makes e_k = 1 in double precision
    let sat = (0.5 * (40.0 / (spec.c_weight * spec.horizon)).log2()).ceil();
    let k_hi = j.max(sat.clamp(-1e4, 1e4) as i32) + 64;
    let mut omega = e;
    for k in j + 1..=k_hi {
        omega = omega.max(e_weight(k, spec) * pow2(j - k).sqrt());
    }
    (e, omega)
}

/// Largest violation of `e <= ω <= 1`, `ω_j <= 2^{(j−j')/2} ω_{j'}` (`j' <= j`)
/// and `ω_j <= 2 ω_{j'}` (`j <= j'`) over the given range, measured relative
/// to the right-hand side. Positive values are violations.
pub fn weight_inequality_violation(j_range: (i32, i32), horizons: &[f64], c_weight: f64) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &t in horizons {
        let spec = WeightSpec::new(c_weight, t)?;
        let w: Vec<(i32, f64, f64)> = (j_range.0..=j_range.1)
            .map(|j| {
                let (e, o) = omega_weights(j, &spec);
                (j, e, o)
            })
            .collect();
        for &(j, e, o) in &w {
            worst = worst.max(e - o).max(o - 1.0);
            for &(jp, _, op) in &w {
                let rhs = if jp <= j { pow2(j - jp).sqrt() * op } else { 2.0 * op };
                worst = worst.max(o - rhs);
            }
        }
    }
    Ok(worst)
}

/// `sup_j ω_{j,T} 2^{j/2} sup_t ‖Δ_j v(t)‖₂`, with `T = spec.horizon`.
pub fn weighted_seminorm(v: &FieldSeries, spec: &WeightSpec) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptySeries);
    }
    let table = BlockTable::compute(v, 2.0)?;
    Ok(table
        .partition
        .blocks()
        .enumerate()
        .map(|(b, j)| {
            let sup = table.rows.iter().fold(0.0, |m: f64, row| m.max(row[b].l2));
            omega_weights(j, spec).1 * pow2(j).sqrt() * sup
        })
        .fold(0.0, f64::max))
}

/// `‖u‖_{L^∞_T Ḃ^{1/2}_{2,∞}} = sup_j sup_t 2^{j/2}‖Δ_j u(t)‖₂`.
pub fn sup_besov_half(u: &FieldSeries) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(BlockTable::compute(u, 2.0)?.tilde(f64::INFINITY, 0.5, 0.5, f64::INFINITY))
}

/// `‖B(u,v)‖_{L^∞_T Ḃ^{1/2}_{2,∞}} / (‖u‖_{L^∞_T Ḃ^{1/2}_{2,∞}} · weighted_seminorm(v))`.
pub fn weighted_bilinear_probe(
    u: &FieldSeries,
    v: &FieldSeries,
    spec: &WeightSpec,
    tgrid: &TimeGrid,
    params: &FlowParams,
) -> Result<f64> {
    let rhs = sup_besov_half(u)? * weighted_seminorm(v, spec)?;
    if rhs == 0.0 {
        return Err(Error::ZeroRightSide);
    }
    let b = duhamel_bilinear(u, v, tgrid, params)?;
    Ok(sup_besov_half(&b)? / rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let spec = WeightSpec::new(1.0, std::f64::consts::LN_2).unwrap();
        let (e, o) = omega_weights(0, &spec);
        assert!((e - 0.5).abs() < 1e-15);
        assert!((o - (1.0 - 1.0 / 16.0) * 0.5f64.sqrt()).abs() < 1e-15);
        assert!((o - 0.66291).abs() < 1e-5);
        assert_eq!(omega_weights(3, &WeightSpec::new(1.0, 0.0).unwrap()), (0.0, 0.0));
        assert_eq!(omega_weights(3, &WeightSpec::new(1.0, f64::INFINITY).unwrap()), (1.0, 1.0));
        let (e, o) = omega_weights(2, &WeightSpec::new(1.0, 1e6).unwrap());
        assert_eq!((e, o), (1.0, 1.0));
    }

    #[test]
    fn tiny_horizon_keeps_the_far_sup() {
        let spec = WeightSpec::new(1.0, 1e-30).unwrap();
        let (e, o) = omega_weights(0, &spec);
        assert!(e < 1e-29);
        // sup sits near 4^k T ≈ 1, i.e. 2^{-k/2} ≈ T^{1/4}
        assert!(o > 1e-8 && o < 1e-7, "{o}");
    }

    #[test]
    fn inequalities_hold() {
        let horizons: Vec<f64> = (-12..=4).map(|i| 10f64.powi(i)).collect();
        let v = weight_inequality_violation((-20, 40), &horizons, 1.0).unwrap();
        assert!(v <= 0.0, "violation {v}");
    }

    #[test]
    fn invalid_spec() {
        assert!(WeightSpec::new(0.0, 1.0).is_err());
        assert!(WeightSpec::new(1.0, -1.0).is_err());
    }
}
