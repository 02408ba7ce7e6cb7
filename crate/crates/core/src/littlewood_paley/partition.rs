use log::warn;

use crate::spectral::{Grid, SpectralField};

/// Inner radius of the low-pass transition: `χ = 1` for `r <= 1`.
pub const CHI_INNER: f64 = 1.0;
/// Outer radius of the low-pass support: `χ = 0` for `r >= 4/3`.
pub const CHI_OUTER: f64 = 4.0 / 3.0;

fn smooth_step_core(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// `C^∞` step rising from 0 at `s <= 0` to 1 at `s >= 1`.
pub fn smooth_step(s: f64) -> f64 {
    let a = smooth_step_core(s);
    let b = smooth_step_core(1.0 - s);
    if a + b == 0.0 {
        return 0.0;
    }
    a / (a + b)
}

/// Radial low-pass profile: 1 on `[0, 1]`, 0 beyond `4/3`, smooth in between.
pub fn chi(r: f64) -> f64 {
    if r <= CHI_INNER {
        1.0
    } else if r >= CHI_OUTER {
        0.0
    } else {
        smooth_step((CHI_OUTER - r) / (CHI_OUTER - CHI_INNER))
    }
}

/// Annulus profile `φ(r) = χ(r/2) - χ(r)`, supported in `[1, 8/3]` and equal
/// to 1 on `[4/3, 2]`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// `2^j` for any integer `j`, exact in binary floating point.
pub fn pow2(j: i32) -> f64 {
    2f64.powi(j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// `Δ_j = φ(2^{-j} D)`
    Block,
    /// `S_j = χ(2^{-j} D)`
    LowPass,
}

/// Block range resolved by a grid.
///
/// `j_min` is the largest integer with `2^{j_min} <= (3/4) k_min` and `j_max`
/// the smallest with `2^{j_max + 1} >= k_max`, so the blocks
/// `j_min..=j_max` sum to one on every nonzero lattice mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicPartition {
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicPartition {
    pub fn for_grid(grid: &Grid) -> Self {
        let kmin = grid.min_wavenumber();
        let kmax = grid.max_wavenumber();
        let mut j_min = (0.75 * kmin).log2().floor() as i32;
        while pow2(j_min) > 0.75 * kmin {
            j_min -= 1;
        }
        let mut j_max = kmax.log2().ceil() as i32 - 1;
        while pow2(j_max + 1) < kmax {
            j_max += 1;
        }
        while j_max > j_min && pow2(j_max) >= kmax {
            j_max -= 1;
        }
        Self { j_min, j_max }
    }

    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn n_blocks(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    /// Multiplier of `Δ_j` or `S_j` at radius `r`.
    pub fn weight(&self, kind: BlockKind, j: i32, r: f64) -> f64 {
        let x = r * pow2(-j);
        match kind {
            BlockKind::Block => phi(x),
            BlockKind::LowPass => chi(x),
        }
    }

    pub fn in_range(&self, j: i32) -> bool {
        j >= self.j_min - 1 && j <= self.j_max + 1
    }

    /// Applies `Δ_j` or `S_j`. Out-of-range `j` yields the zero field.
    pub fn apply(&self, f: &SpectralField, j: i32, kind: BlockKind) -> SpectralField {
        if !self.in_range(j) {
            warn!(
                "block index {j} outside [{}, {}]; returning zero field",
                self.j_min - 1,
                self.j_max + 1
            );
            let mut z = SpectralField::zeros(*f.grid(), f.n_components());
            z.time = f.time;
            return z;
        }
        let mut out = f.clone();
        out.apply_scalar_multiplier(|m| {
            if m.is_zero() {
                // the zero mode is outside every annulus; S_j keeps it
                return match kind {
                    BlockKind::Block => 0.0,
                    BlockKind::LowPass => 1.0,
                };
            }
            self.weight(kind, j, m.norm())
        });
        out
    }

    /// `Δ_j f`
    pub fn block(&self, f: &SpectralField, j: i32) -> SpectralField {
        self.apply(f, j, BlockKind::Block)
    }

    /// `S_j f`
    pub fn low_pass(&self, f: &SpectralField, j: i32) -> SpectralField {
        self.apply(f, j, BlockKind::LowPass)
    }

    /// `Σ_j φ(2^{-j} r) - 1` over the resolved range.
    pub fn unity_residual(&self, r: f64) -> f64 {
        self.blocks().map(|j| self.weight(BlockKind::Block, j, r)).sum::<f64>() - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_values() {
        assert_eq!(chi(0.5), 1.0);
        assert_eq!(chi(1.0), 1.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(phi(1.5), 1.0);
        assert_eq!(phi(4.0 / 3.0), 1.0);
        assert_eq!(phi(2.0), 1.0);
        assert_eq!(phi(1.0), 0.0);
        assert_eq!(phi(8.0 / 3.0), 0.0);
        assert!(phi(1.1) > 0.0 && phi(1.1) < 1.0);
        assert!(phi(2.5) > 0.0 && phi(2.5) < 1.0);
    }

    #[test]
    fn smooth_step_is_symmetric() {
        for s in [0.1, 0.25, 0.4, 0.5, 0.77] {
            assert!((smooth_step(s) + smooth_step(1.0 - s) - 1.0).abs() < 1e-15);
        }
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
    }

    #[test]
    fn unit_radius_sums_to_one() {
        // direct summation over j in [-3, 3]
        let s: f64 = (-3..=3).map(|j| phi(pow2(-j) * 1.0)).sum();
        assert!((s - 1.0).abs() < 1e-8);
    }

    #[test]
    fn phi_supported_in_ring() {
        for i in 0..4000 {
            let r = i as f64 * 0.001;
            if phi(r) != 0.0 {
                assert!((1.0..=8.0 / 3.0).contains(&r), "r = {r}");
            }
        }
    }

    #[test]
    fn resolved_range_for_standard_grids() {
        let g = Grid::standard(32).unwrap();
        let p = DyadicPartition::for_grid(&g);
        assert_eq!(p.j_min, -1);
        assert!(pow2(p.j_max + 1) >= g.max_wavenumber());
        assert!(pow2(p.j_max) < g.max_wavenumber());
        for m in g.modes().filter(|m| !m.is_zero()) {
            assert!(p.unity_residual(m.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_block_is_zero() {
        let g = Grid::standard(8).unwrap();
        let p = DyadicPartition::for_grid(&g);
        let mut f = SpectralField::zeros(g, 1);
        f.set_real_mode(0, [1, 0, 0], num_complex::Complex64::new(1.0, 0.0));
        assert!(p.block(&f, p.j_max + 5).is_zero());
    }
}
