//! Discrete periodic function spaces: lattice, transforms, multipliers and norms.

mod fft;
mod field;
mod grid;
mod ops;

pub use field::{PhysicalField, SpectralField};
pub use grid::{FlowParams, Grid, Mode};
pub use ops::{
    convective_term, dealias, dealiased_product, derivative, divergence, dyadic_rescale,
    leray_project, lp_norm, lp_norm_of_samples, lp_norm_physical, nonlinear_term, sobolev_norm,
};
pub(crate) use ops::project_mode;
