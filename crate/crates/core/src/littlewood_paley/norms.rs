//! Block norms and the Besov / hybrid-Besov norms built from them.

use log::warn;

use super::partition::{pow2, BlockKind, DyadicPartition};
use crate::error::{Error, Result};
use crate::spectral::{derivative, lp_norm, SpectralField};

/// L² and L^p norms of one dyadic block `Δ_j f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockNorm {
    pub j: i32,
    pub l2: f64,
    pub lp: f64,
}

/// Norms of every resolved block of `f`. `lp` equals `l2` when `p = 2`.
pub fn block_norms(f: &SpectralField, partition: &DyadicPartition, p: f64) -> Result<Vec<BlockNorm>> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let grid = *f.grid();
    let radii: Vec<f64> = grid.modes().map(|m| m.norm()).collect();
    let power: Vec<f64> = (0..grid.len())
        .map(|i| (0..f.n_components()).map(|c| f.component(c)[i].norm_sqr()).sum())
        .collect();
    let mut out = Vec::with_capacity(partition.n_blocks());
    for j in partition.blocks() {
        let mut l2sq = 0.0;
        for (r, e) in radii.iter().zip(&power) {
            if *e == 0.0 || *r == 0.0 {
                continue;
            }
            let w = partition.weight(BlockKind::Block, j, *r);
            l2sq += w * w * e;
        }
        let l2 = l2sq.sqrt();
        let lp = if p == 2.0 || l2 == 0.0 {
            l2
        } else {
            lp_norm(&partition.block(f, j), p)?
        };
        out.push(BlockNorm { j, l2, lp });
    }
    Ok(out)
}

/// `(Σ x^q)^{1/q}`, or the max for `q = ∞`.
pub fn lq_sum(values: impl IntoIterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        values.into_iter().fold(0.0, f64::max)
    } else {
        values.into_iter().map(|v| v.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// `‖2^{js} ‖Δ_j f‖_{L^p}‖_{ℓ^q}` over the resolved blocks.
pub fn besov_norm(f: &SpectralField, s: f64, p: f64, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent(q));
    }
    if !f.is_mean_free() {
        warn!("besov_norm: field has a nonzero mean, which no block sees");
    }
    let partition = DyadicPartition::for_grid(f.grid());
    let blocks = block_norms(f, &partition, p)?;
    Ok(lq_sum(blocks.iter().map(|b| pow2(b.j).powf(s) * b.lp), q))
}

/// The two suprema of the hybrid norm, from disjoint block sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParts {
    /// `sup_{2^k <= Ω} 2^{ks} ‖Δ_k f‖_{L²}`
    pub low: f64,
    /// `sup_{2^k > Ω} 2^{kσ} ‖Δ_k f‖_{L^p}`
    pub high: f64,
}

impl HybridParts {
    pub fn total(&self) -> f64 {
        self.low + self.high
    }
}

/// A block sits on the low (L²) side iff `2^j <= Ω`.
pub fn is_low_block(j: i32, omega: f64) -> bool {
    pow2(j) <= omega
}

pub fn hybrid_parts_from_blocks(blocks: &[BlockNorm], s: f64, sigma: f64, omega: f64) -> HybridParts {
    let mut low: f64 = 0.0;
    let mut high: f64 = 0.0;
    for b in blocks {
        let scale = pow2(b.j);
        if is_low_block(b.j, omega) {
            low = low.max(scale.powf(s) * b.l2);
        } else {
            high = high.max(scale.powf(sigma) * b.lp);
        }
    }
    HybridParts { low, high }
}

pub fn hybrid_parts(f: &SpectralField, s: f64, sigma: f64, p: f64, omega: f64) -> Result<HybridParts> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::InvalidArgument(format!("omega must be >= 0 (got {omega})")));
    }
    if !f.is_mean_free() {
        warn!("hybrid_norm: field has a nonzero mean, which no block sees");
    }
    let partition = DyadicPartition::for_grid(f.grid());
    // p-norms are only needed on the high side
    let any_high = partition.blocks().any(|j| !is_low_block(j, omega));
    let blocks = block_norms(f, &partition, if any_high { p } else { 2.0 })?;
    Ok(hybrid_parts_from_blocks(&blocks, s, sigma, omega))
}

/// `sup_{2^k <= Ω} 2^{ks}‖Δ_k f‖_{L²} + sup_{2^k > Ω} 2^{kσ}‖Δ_k f‖_{L^p}`
pub fn hybrid_norm(f: &SpectralField, s: f64, sigma: f64, p: f64, omega: f64) -> Result<f64> {
    Ok(hybrid_parts(f, s, sigma, p, omega)?.total())
}

/// `‖∂^γ Δ_j f‖_{L^q} / (2^{j|γ| + 3j(1/p - 1/q)} ‖Δ_j f‖_{L^p})`
pub fn bernstein_ratio(f: &SpectralField, j: i32, p: f64, q: f64, gamma: [u32; 3]) -> Result<f64> {
    if p > q {
        return Err(Error::InvalidArgument(format!("need p <= q (got p = {p}, q = {q})")));
    }
    let partition = DyadicPartition::for_grid(f.grid());
    let block = partition.block(f, j);
    let base = lp_norm(&block, p)?;
    if base == 0.0 {
        return Err(Error::ZeroBlock(j));
    }
    let mut d = block;
    for (axis, &order) in gamma.iter().enumerate() {
        for _ in 0..order {
            d = derivative(&d, axis);
        }
    }
    let top = lp_norm(&d, q)?;
    let order: u32 = gamma.iter().sum();
    let inv_q = if q.is_infinite() { 0.0 } else { 1.0 / q };
    let exponent = j as f64 * order as f64 + 3.0 * j as f64 * (1.0 / p - inv_q);
    Ok(top / (2f64.powf(exponent) * base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, PhysicalField};

    fn cos3(n: usize) -> SpectralField {
        let g = Grid::standard(n).unwrap();
        PhysicalField::from_fn(g, 1, |_, x| (3.0 * x[0]).cos()).to_spectral().unwrap()
    }

    #[test]
    fn cosine_is_a_single_block() {
        let f = cos3(16);
        let p = DyadicPartition::for_grid(f.grid());
        assert!(p.block(&f, 1).max_abs_diff(&f).unwrap() < 1e-15);
        assert!(p.block(&f, 5).is_zero());
        assert!(p.low_pass(&f, p.j_max + 1).max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn besov_of_cosine_is_one() {
        let f = cos3(16);
        for q in [1.0, 2.0, f64::INFINITY] {
            assert!((besov_norm(&f, 0.5, 2.0, q).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!((besov_norm(&f.scaled(2.0), 0.5, 2.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        let z = SpectralField::zeros(*f.grid(), 1);
        assert_eq!(besov_norm(&z, 0.5, 2.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn hybrid_of_cosine_on_the_high_side() {
        let f = cos3(32);
        let v = hybrid_norm(&f, 0.5, -0.25, 4.0, 1.0).unwrap();
        let expect = 2f64.powf(-0.25) * (3.0f64 / 8.0).powf(0.25);
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        assert!((expect - 0.65804).abs() < 1e-5);
    }

    #[test]
    fn hybrid_limits_reduce_to_besov() {
        let f = cos3(32);
        let inf = hybrid_norm(&f, 0.5, -0.25, 4.0, f64::INFINITY).unwrap();
        assert!((inf - besov_norm(&f, 0.5, 2.0, f64::INFINITY).unwrap()).abs() < 1e-14);
        let zero = hybrid_norm(&f, 0.5, -0.25, 4.0, 0.0).unwrap();
        assert!((zero - besov_norm(&f, -0.25, 4.0, f64::INFINITY).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn bernstein_single_mode_cases() {
        let g = Grid::standard(16).unwrap();
        let f = PhysicalField::from_fn(g, 1, |_, x| (3.0 * x[2]).cos()).to_spectral().unwrap();
        let r0 = bernstein_ratio(&f, 1, 2.0, 2.0, [0, 0, 0]).unwrap();
        assert!((r0 - 1.0).abs() < 1e-14);
        let r1 = bernstein_ratio(&f, 1, 2.0, 2.0, [0, 0, 1]).unwrap();
        assert!((r1 - 1.5).abs() < 1e-14);
        assert!(matches!(
            bernstein_ratio(&f, 3, 2.0, 2.0, [0, 0, 0]),
            Err(Error::ZeroBlock(3))
        ));
    }
}
