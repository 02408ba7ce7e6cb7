//! Energy budget `‖u(t)‖₂² + 2ν∫₀ᵗ‖∇u‖₂² − ‖u₀‖₂²` with trapezoidal quadrature.

use serde::Serialize;

use crate::littlewood_paley::FieldSeries;
use crate::spectral::{FlowParams, SpectralField};

/// `(‖u‖₂², ‖∇u‖₂²)` by Plancherel.
pub fn energy_and_enstrophy(u: &SpectralField) -> (f64, f64) {
    let grid = *u.grid();
    let mut e = 0.0;
    let mut d = 0.0;
    for m in grid.modes() {
        let a: f64 = u.components().iter().map(|c| c[m.index].norm_sqr()).sum();
        e += a;
        d += m.norm_sq() * a;
    }
    (e, d)
}

/// Streaming accumulator of the energy budget.
#[derive(Debug, Clone)]
pub struct EnergyAccumulator {
    nu: f64,
    times: Vec<f64>,
    energies: Vec<f64>,
    budgets: Vec<f64>,
    integral: f64,
    last: Option<(f64, f64)>,
}

impl EnergyAccumulator {
    pub fn new(params: &FlowParams) -> Self {
        Self {
            nu: params.nu,
            times: Vec::new(),
            energies: Vec::new(),
            budgets: Vec::new(),
            integral: 0.0,
            last: None,
        }
    }

    pub fn push(&mut self, t: f64, u: &SpectralField) {
        let (e, d) = energy_and_enstrophy(u);
        if let Some((t0, d0)) = self.last {
            self.integral += 0.5 * (t - t0) * (d0 + d);
        }
        self.last = Some((t, d));
        let e0 = self.energies.first().copied().unwrap_or(e);
        self.times.push(t);
        self.energies.push(e);
        self.budgets.push(e + 2.0 * self.nu * self.integral - e0);
    }

    pub fn initial_energy(&self) -> f64 {
        self.energies.first().copied().unwrap_or(0.0)
    }

    pub fn budgets(&self) -> &[f64] {
        &self.budgets
    }

    pub fn report(self) -> EnergyReport {
        let initial_energy = self.initial_energy();
        let max_budget = self.budgets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let max_budget = if self.budgets.is_empty() { 0.0 } else { max_budget };
        EnergyReport {
            pass: max_budget <= 1e-4 * initial_energy,
            times: self.times,
            energies: self.energies,
            budgets: self.budgets,
            max_budget,
            initial_energy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub budgets: Vec<f64>,
    pub max_budget: f64,
    pub initial_energy: f64,
    /// `max b <= 1e-4 ‖u₀‖₂²`
    pub pass: bool,
}

impl EnergyReport {
    pub fn relative_violation(&self) -> f64 {
        if self.initial_energy == 0.0 {
            self.max_budget.max(0.0)
        } else {
            self.max_budget.max(0.0) / self.initial_energy
        }
    }
}

pub fn energy_report(series: &FieldSeries, params: &FlowParams) -> EnergyReport {
    let mut acc = EnergyAccumulator::new(params);
    for (t, u) in series.times().iter().zip(series.fields()) {
        acc.push(*t, u);
    }
    acc.report()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn zero_series_passes() {
        let g = Grid::standard(8).unwrap();
        let z = SpectralField::zeros(g, 3);
        let s = FieldSeries::constant(&z, vec![0.0, 0.5, 1.0]).unwrap();
        let r = energy_report(&s, &FlowParams::default());
        assert!(r.pass);
        assert_eq!(r.max_budget, 0.0);
    }
}
