//! Spectral toolkit for the rotating incompressible Navier–Stokes equations
//! on a periodic box: hybrid Besov norms, the Coriolis–Stokes semigroup and
//! mild solutions by Picard iteration.

pub mod error;
pub mod initial_data;
pub mod io;
pub mod littlewood_paley;
pub mod mild;
pub mod semigroup;
pub mod spectral;
pub mod suites;

pub use error::{Error, Result};
