//! Paraproduct splitting and the support identities of the dyadic blocks.

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::initial_data::random_band_limited_scalar;
use crate::spectral::{dealiased_product, Grid, SpectralField};

/// `f g = T_f g + T_g f + R(f, g)`.
#[derive(Debug, Clone)]
pub struct BonyParts {
    /// `T_f g = Σ_j S_{j-1} f Δ_j g`
    pub t_fg: SpectralField,
    /// `T_g f = Σ_j S_{j-1} g Δ_j f`
    pub t_gf: SpectralField,
    /// `R(f, g) = Σ_j Δ_j f Δ̃_j g`, with `Δ̃_j = Δ_{j-1} + Δ_j + Δ_{j+1}`
    pub remainder: SpectralField,
}

impl BonyParts {
    pub fn sum(&self) -> Result<SpectralField> {
        let mut out = self.t_fg.add(&self.t_gf)?;
        out.axpy(1.0, &self.remainder)?;
        Ok(out)
    }
}

fn paraproduct(p: &DyadicPartition, low: &SpectralField, high: &SpectralField) -> Result<SpectralField> {
    let mut acc: Option<SpectralField> = None;
    for j in p.blocks() {
        let term = dealiased_product(&p.low_pass(low, j - 1), &p.block(high, j))?;
        match acc.as_mut() {
            Some(a) => a.axpy(1.0, &term)?,
            None => acc = Some(term),
        }
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty block range".into()))
}

/// Bony decomposition of the dealiased product of two band-limited fields.
pub fn bony_parts(f: &SpectralField, g: &SpectralField) -> Result<BonyParts> {
    if !f.is_band_limited() || !g.is_band_limited() {
        return Err(Error::NotBandLimited);
    }
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch("bony_parts".into()));
    }
    let p = DyadicPartition::for_grid(f.grid());
    let t_fg = paraproduct(&p, f, g)?;
    let t_gf = paraproduct(&p, g, f)?;
    let mut remainder: Option<SpectralField> = None;
    for j in p.blocks() {
        let mut wide = p.block(g, j - 1);
        wide.axpy(1.0, &p.block(g, j))?;
        wide.axpy(1.0, &p.block(g, j + 1))?;
        let term = dealiased_product(&p.block(f, j), &wide)?;
        match remainder.as_mut() {
            Some(r) => r.axpy(1.0, &term)?,
            None => remainder = Some(term),
        }
    }
    Ok(BonyParts {
        t_fg,
        t_gf,
        remainder: remainder.expect("partition has at least one block"),
    })
}

/// Largest violations of the block support identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// `max |Σ_j φ(2^{-j}|k|) - 1|` over nonzero lattice modes
    pub unity_residual: f64,
    /// `max ‖Δ_j Δ_k f‖₂` over `|j - k| >= 2`
    pub orthogonality: f64,
    /// `max ‖Δ_j(S_{k-1} f Δ_k g)‖₂` over `|j - k| >= 5`
    pub paraproduct_support: f64,
    /// `max ‖Δ_j Δ_j f‖₂`, nonzero in general (reported only)
    pub same_block: f64,
    /// `‖f‖₂` of the random test field, for scale
    pub field_norm: f64,
}

/// Checks the partition of unity, `Δ_jΔ_k = 0` for `|j-k| >= 2`, and the
/// paraproduct support rule on random band-limited scalars.
pub fn check_identities(partition: &DyadicPartition, grid: &Grid, seed: u64) -> Result<IdentityReport> {
    let mut unity: f64 = 0.0;
    for m in grid.modes().filter(|m| !m.is_zero()) {
        unity = unity.max(partition.unity_residual(m.norm()).abs());
    }

    let f = random_band_limited_scalar(seed, -1.0, grid)?;
    let g = random_band_limited_scalar(seed.wrapping_add(1), -1.0, grid)?;
    let blocks: Vec<i32> = partition.blocks().collect();
    let f_blocks: Vec<SpectralField> = blocks.iter().map(|&j| partition.block(&f, j)).collect();

    let mut orthogonality: f64 = 0.0;
    let mut same_block: f64 = 0.0;
    for (a, &j) in blocks.iter().enumerate() {
        for (b, &k) in blocks.iter().enumerate() {
            let dd = partition.block(&f_blocks[b], j);
            if (j - k).abs() >= 2 {
                orthogonality = orthogonality.max(dd.l2_norm());
            } else if a == b {
                same_block = same_block.max(dd.l2_norm());
            }
        }
    }

    let mut support: f64 = 0.0;
    for &k in &blocks {
        let prod = dealiased_product(&partition.low_pass(&f, k - 1), &partition.block(&g, k))?;
        for &j in blocks.iter().filter(|&&j| (j - k).abs() >= 5) {
            support = support.max(partition.block(&prod, j).l2_norm());
        }
    }

    Ok(IdentityReport {
        unity_residual: unity,
        orthogonality,
        paraproduct_support: support,
        same_block,
        field_norm: f.l2_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn zero_factor_gives_zero_parts() {
        let g = Grid::standard(16).unwrap();
        let f = random_band_limited_scalar(3, -1.0, &g).unwrap();
        let z = SpectralField::zeros(g, 1);
        let parts = bony_parts(&f, &z).unwrap();
        assert!(parts.t_fg.is_zero() && parts.t_gf.is_zero() && parts.remainder.is_zero());
    }

    #[test]
    fn rejects_fields_outside_the_dealiased_zone() {
        let g = Grid::standard(16).unwrap();
        let mut f = SpectralField::zeros(g, 1);
        f.set_real_mode(0, [7, 0, 0], Complex64::new(1.0, 0.0));
        assert!(matches!(bony_parts(&f, &f), Err(Error::NotBandLimited)));
    }

    #[test]
    fn single_mode_square_reconstructs() {
        let g = Grid::standard(16).unwrap();
        let mut f = SpectralField::zeros(g, 1);
        f.set_real_mode(0, [2, 1, 0], Complex64::new(0.5, 0.2));
        let parts = bony_parts(&f, &f).unwrap();
        let prod = dealiased_product(&f, &f).unwrap();
        let err = parts.sum().unwrap().sub(&prod).unwrap().l2_norm();
        assert!(err < 1e-14 * prod.l2_norm().max(1.0));
    }
}
