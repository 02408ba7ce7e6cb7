//! Time series of fields and the time-space ("tilde") norms that take the
//! time norm block by block before the sup over blocks.

use log::warn;

use super::norms::{block_norms, is_low_block, BlockNorm};
use super::partition::{pow2, DyadicPartition};
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Fields sampled at strictly increasing times on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSeries {
    times: Vec<f64>,
    fields: Vec<SpectralField>,
}

impl FieldSeries {
    pub fn new(times: Vec<f64>, fields: Vec<SpectralField>) -> Result<Self> {
        if times.len() != fields.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times for {} fields",
                times.len(),
                fields.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("times must be strictly increasing".into()));
        }
        if let Some(first) = fields.first() {
            if fields.iter().any(|f| f.grid() != first.grid()) {
                return Err(Error::GridMismatch("series fields on different grids".into()));
            }
        }
        Ok(Self { times, fields })
    }

    /// The same field at every node.
    pub fn constant(field: &SpectralField, times: Vec<f64>) -> Result<Self> {
        let fields = times
            .iter()
            .map(|&t| field.clone().with_time(t))
            .collect();
        Self::new(times, fields)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    pub fn into_fields(self) -> Vec<SpectralField> {
        self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.fields.first().map(|f| f.grid())
    }

    pub fn horizon(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.fields.last()
    }

    /// Node-wise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.times != other.times {
            return Err(Error::InvalidArgument("series on different time grids".into()));
        }
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(x, y)| {
                let mut out = x.scaled(a);
                out.axpy(b, y)?;
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: self.times.clone(),
            fields,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(1.0, other, -1.0)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self {
            times: self.times.clone(),
            fields: self.fields.iter().map(|f| f.scaled(a)).collect(),
        }
    }

    /// Nodes with `t <= horizon`.
    pub fn truncated(&self, horizon: f64) -> Self {
        let keep = self.times.iter().take_while(|&&t| t <= horizon).count();
        Self {
            times: self.times[..keep].to_vec(),
            fields: self.fields[..keep].to_vec(),
        }
    }
}

/// Block norms at every node of a series, reusable across tilde norms.
#[derive(Debug, Clone)]
pub struct BlockTable {
    pub times: Vec<f64>,
    pub partition: DyadicPartition,
    /// `rows[node][block]`
    pub rows: Vec<Vec<BlockNorm>>,
}

impl BlockTable {
    pub fn compute(series: &FieldSeries, p: f64) -> Result<Self> {
        let grid = series.grid().ok_or(Error::EmptySeries)?;
        let partition = DyadicPartition::for_grid(grid);
        let rows = series
            .fields()
            .iter()
            .map(|f| block_norms(f, &partition, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: series.times().to_vec(),
            partition,
            rows,
        })
    }

    fn time_norm(&self, values: impl Iterator<Item = f64>, r: f64) -> f64 {
        let v: Vec<f64> = values.collect();
        time_lr_norm(&self.times, &v, r)
    }

    /// `‖Δ_j u‖_{L^r_T L²}` and `‖Δ_j u‖_{L^r_T L^p}` for block position `b`.
    pub fn block_time_norms(&self, b: usize, r: f64) -> (f64, f64) {
        (
            self.time_norm(self.rows.iter().map(|row| row[b].l2), r),
            self.time_norm(self.rows.iter().map(|row| row[b].lp), r),
        )
    }

    /// Tilde hybrid norm `L̃^r_T(Ḃ^{s,σ}_{2,p})`.
    pub fn tilde(&self, r: f64, s: f64, sigma: f64, omega: f64) -> f64 {
        let mut low: f64 = 0.0;
        let mut high: f64 = 0.0;
        for (b, j) in self.partition.blocks().enumerate() {
            let (l2, lp) = self.block_time_norms(b, r);
            if is_low_block(j, omega) {
                low = low.max(pow2(j).powf(s) * l2);
            } else {
                high = high.max(pow2(j).powf(sigma) * lp);
            }
        }
        low + high
    }

    /// `‖u‖_{L̃^∞(Ḃ^{1/2, 3/p-1})} + ‖u‖_{L̃^1(Ḃ^{5/2, 3/p+1})}`
    pub fn ep(&self, p: f64, omega: f64) -> f64 {
        self.tilde(f64::INFINITY, 0.5, 3.0 / p - 1.0, omega)
            + self.tilde(1.0, 2.5, 3.0 / p + 1.0, omega)
    }

    /// `(Σ_j 2^j (sup_t ‖Δ_j u‖_{L²})²)^{1/2}`, the `L̃^∞_T(Ḣ^{1/2})` norm.
    pub fn tilde_sup_h_half(&self) -> f64 {
        self.partition
            .blocks()
            .enumerate()
            .map(|(b, j)| {
                let sup = self.rows.iter().fold(0.0, |m: f64, row| m.max(row[b].l2));
                pow2(j) * sup * sup
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Trapezoidal `(∫ |a|^r dt)^{1/r}` on the given nodes; `r = ∞` is the max.
pub fn time_lr_norm(times: &[f64], values: &[f64], r: f64) -> f64 {
    if r.is_infinite() {
        return values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    }
    let integral: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].abs().powf(r) + v[1].abs().powf(r)))
        .sum();
    integral.powf(1.0 / r)
}

fn check_time_exponent(r: f64) -> Result<()> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::InvalidExponent(r));
    }
    Ok(())
}

/// `sup_{2^k <= Ω} 2^{ks}‖Δ_k u‖_{L^r_T L²} + sup_{2^k > Ω} 2^{kσ}‖Δ_k u‖_{L^r_T L^p}`
pub fn tilde_norm(series: &FieldSeries, r: f64, s: f64, sigma: f64, p: f64, omega: f64) -> Result<f64> {
    check_time_exponent(r)?;
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(BlockTable::compute(series, p)?.tilde(r, s, sigma, omega))
}

/// Norm of the critical solution space `E_p` on the series' time interval.
pub fn ep_norm(series: &FieldSeries, p: f64, omega: f64) -> Result<f64> {
    if !(2.0..=4.0).contains(&p) {
        warn!("ep_norm: p = {p} outside [2, 4]");
    }
    if series.is_empty() {
        return Ok(0.0);
    }
    Ok(BlockTable::compute(series, p)?.ep(p, omega))
}
