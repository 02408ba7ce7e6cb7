//! Mild solutions: the Duhamel bilinear operator, Picard iteration, an
//! integrating-factor stepper, energy budgets and time weights.

mod duhamel;
mod energy;
mod picard;
mod stepper;
mod time_grid;
mod weights;

pub use duhamel::{bilinear_bound_probe, duhamel_bilinear, BilinearProbe, ProbeData};
pub use energy::{energy_and_enstrophy, energy_report, EnergyAccumulator, EnergyReport};
pub use picard::{fp_norm, picard_solve, smallness_gate, tilde_sup_h_half, PicardReport};
pub use stepper::{if_step_integrate, if_step_stream};
pub use time_grid::TimeGrid;
pub use weights::{
    omega_weights, sup_besov_half, weight_inequality_violation, weighted_bilinear_probe,
    weighted_seminorm, WeightSpec,
};
