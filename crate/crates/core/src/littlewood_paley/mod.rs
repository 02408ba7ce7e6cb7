//! Dyadic frequency decomposition, Besov and hybrid-Besov norms, time-space
//! norms and Bony paraproducts.

mod bony;
mod norms;
mod partition;
mod series;

pub use bony::{bony_parts, check_identities, BonyParts, IdentityReport};
pub use norms::{
    bernstein_ratio, besov_norm, block_norms, hybrid_norm, hybrid_parts, hybrid_parts_from_blocks,
    is_low_block, lq_sum, BlockNorm, HybridParts,
};
pub use partition::{chi, phi, pow2, smooth_step, BlockKind, DyadicPartition};
pub use series::{ep_norm, tilde_norm, time_lr_norm, BlockTable, FieldSeries};

/// `build_partition`: the dyadic partition resolved by `grid`.
pub fn build_partition(grid: &crate::spectral::Grid) -> DyadicPartition {
    DyadicPartition::for_grid(grid)
}
