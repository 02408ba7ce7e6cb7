use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform nodes `t_i = iT/M`, `i = 0..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    horizon: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidArgument(format!("T must be > 0 (got {horizon})")));
        }
        if steps < 4 {
            return Err(Error::InvalidArgument(format!("M must be >= 4 (got {steps})")));
        }
        Ok(Self { horizon, steps })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.steps {
            self.horizon
        } else {
            self.horizon * i as f64 / self.steps as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.node(i)).collect()
    }

    /// Same horizon with `factor` times as many steps.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.horizon, self.steps * factor)
    }

    /// Whether `times` are this grid's nodes.
    pub fn matches(&self, times: &[f64]) -> bool {
        times.len() == self.steps + 1
            && times
                .iter()
                .enumerate()
                .all(|(i, t)| (t - self.node(i)).abs() <= 1e-12 * self.horizon)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_uniform() {
        let g = TimeGrid::new(0.5, 4).unwrap();
        assert_eq!(g.nodes(), vec![0.0, 0.125, 0.25, 0.375, 0.5]);
        assert!(g.matches(&g.nodes()));
        assert!(!g.matches(&g.nodes()[..4]));
        assert!(TimeGrid::new(0.0, 8).is_err());
        assert!(TimeGrid::new(1.0, 3).is_err());
    }
}
