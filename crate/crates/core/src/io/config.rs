//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::{oscillating_vortex, random_solenoidal, EnvelopeSpec};
use crate::littlewood_paley::DyadicPartition;
use crate::mild::TimeGrid;
use crate::spectral::{FlowParams, Grid, SpectralField};

fn default_n() -> usize {
    32
}
fn default_length() -> f64 {
    2.0 * std::f64::consts::PI
}
fn one() -> f64 {
    1.0
}
fn default_steps() -> usize {
    64
}
fn default_p() -> f64 {
    2.0
}
fn default_s() -> f64 {
    0.5
}
fn default_slope() -> f64 {
    -11.0 / 6.0
}
fn default_band() -> (i32, i32) {
    (0, 1)
}
fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(rename = "L", default = "default_length")]
    pub length: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            n: default_n(),
            length: default_length(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default = "one")]
    pub nu: f64,
    #[serde(default = "one")]
    pub omega: f64,
    /// Unset means `0.05 / η` with `η` probed on the run grid.
    #[serde(default)]
    pub smallness_c: Option<f64>,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            nu: 1.0,
            omega: 1.0,
            smallness_c: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(rename = "T", default = "one")]
    pub horizon: f64,
    #[serde(rename = "M", default = "default_steps")]
    pub steps: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            horizon: 1.0,
            steps: default_steps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormsConfig {
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_s")]
    pub s: f64,
    /// Unset means `3/p − 1`.
    #[serde(default)]
    pub sigma: Option<f64>,
}

impl Default for NormsConfig {
    fn default() -> Self {
        Self {
            p: 2.0,
            s: 0.5,
            sigma: None,
        }
    }
}

impl NormsConfig {
    pub fn sigma(&self) -> f64 {
        self.sigma.unwrap_or(3.0 / self.p - 1.0)
    }
}

/// Where the initial field comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSource {
    /// Scaled so that `‖u₀‖₂ = amplitude`.
    RandomSolenoidal {
        #[serde(default = "default_slope")]
        slope: f64,
        #[serde(default = "default_band")]
        band: (i32, i32),
        #[serde(default = "one")]
        amplitude: f64,
    },
    OscillatingVortex {
        m: u32,
        /// Defaults to `L/4`.
        #[serde(default)]
        width: Option<f64>,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Snapshot { path: PathBuf },
}

impl Default for DataSource {
    fn default() -> Self {
        DataSource::RandomSolenoidal {
            slope: default_slope(),
            band: default_band(),
            amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub data: DataSource,
    #[serde(default)]
    pub norms: NormsConfig,
    #[serde(default)]
    pub suite: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            params: ParamsConfig::default(),
            time: TimeConfig::default(),
            data: DataSource::default(),
            norms: NormsConfig::default(),
            suite: None,
            seed: 0,
            output_dir: default_out(),
        }
    }
}

fn invalid(field: &str, msg: impl Into<String>) -> Error {
    Error::ConfigValidation {
        field: field.into(),
        msg: msg.into(),
    }
}

fn finite_positive(field: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(field, format!("must be a positive number (got {v})")));
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.grid.n;
        if n == 0 || !n.is_power_of_two() {
            return Err(invalid("grid.n", "must be a power of two"));
        }
        if n < 8 {
            return Err(invalid("grid.n", "must be at least 8"));
        }
        finite_positive("grid.L", self.grid.length)?;
        finite_positive("params.nu", self.params.nu)?;
        if !(self.params.omega >= 0.0) || !self.params.omega.is_finite() {
            return Err(invalid("params.omega", "must be >= 0"));
        }
        if let Some(c) = self.params.smallness_c {
            finite_positive("params.smallness_c", c)?;
        }
        finite_positive("time.T", self.time.horizon)?;
        if self.time.steps < 4 {
            return Err(invalid("time.M", "must be >= 4"));
        }
        if !(self.norms.p >= 1.0) {
            return Err(invalid("norms.p", "must be >= 1"));
        }
        if !self.norms.s.is_finite() || !self.norms.sigma().is_finite() {
            return Err(invalid("norms", "s and sigma must be finite"));
        }
        match &self.data {
            DataSource::RandomSolenoidal { band, amplitude, .. } => {
                let partition = DyadicPartition::for_grid(&self.grid()?);
                if band.0 > band.1 || band.0 < partition.j_min || band.1 > partition.j_max {
                    return Err(invalid(
                        "data.band",
                        format!(
                            "must lie within the resolved blocks [{}, {}]",
                            partition.j_min, partition.j_max
                        ),
                    ));
                }
                if !(*amplitude >= 0.0) || !amplitude.is_finite() {
                    return Err(invalid("data.amplitude", "must be >= 0"));
                }
            }
            DataSource::OscillatingVortex { m, width, amplitude } => {
                if *m == 0 || (*m as usize) * 4 > n {
                    return Err(invalid("data.m", format!("must lie in [1, n/4] (got {m})")));
                }
                if let Some(w) = width {
                    if !(*w > 0.0) || *w > self.grid.length / 4.0 {
                        return Err(invalid("data.width", "must lie in (0, L/4]"));
                    }
                }
                if !amplitude.is_finite() {
                    return Err(invalid("data.amplitude", "must be finite"));
                }
            }
            DataSource::Snapshot { .. } => {}
        }
        if let Some(s) = &self.suite {
            if !crate::suites::SUITE_NAMES.contains(&s.as_str()) {
                return Err(invalid("suite", format!("unknown suite {s:?}")));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.length)
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.time.horizon, self.time.steps)
    }

    /// Flow parameters; an unset smallness threshold is filled by `fill`.
    pub fn flow_params_with(&self, fill: impl FnOnce() -> Result<f64>) -> Result<FlowParams> {
        let c = match self.params.smallness_c {
            Some(c) => c,
            None => fill()?,
        };
        FlowParams::new(self.params.nu, self.params.omega, c)
    }

    /// Flow parameters with the default threshold placeholder `0.05` when unset.
    pub fn flow_params(&self) -> Result<FlowParams> {
        self.flow_params_with(|| Ok(0.05))
    }

    /// Builds the initial field described by `data`.
    pub fn initial_field(&self) -> Result<SpectralField> {
        let grid = self.grid()?;
        match &self.data {
            DataSource::RandomSolenoidal {
                slope,
                band,
                amplitude,
            } => {
                let u = random_solenoidal(self.seed, *slope, *band, &grid)?;
                Ok(u.scaled(amplitude / u.l2_norm()))
            }
            DataSource::OscillatingVortex { m, width, amplitude } => {
                let w = width.unwrap_or(grid.length() / 4.0);
                oscillating_vortex(*m, &EnvelopeSpec::centered(&grid, w, *amplitude), &grid)
            }
            DataSource::Snapshot { path } => {
                let snap = super::read_snapshot(path)?;
                if *snap.field.grid() != grid {
                    return Err(Error::GridMismatch(format!(
                        "snapshot {} does not match the configured grid",
                        path.display()
                    )));
                }
                Ok(snap.field)
            }
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::ConfigParse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config("{}").unwrap();
        assert_eq!(cfg.grid.n, 32);
        assert!((cfg.grid.length - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!((cfg.params.nu, cfg.params.omega), (1.0, 1.0));
        assert_eq!((cfg.time.horizon, cfg.time.steps), (1.0, 64));
        assert_eq!(cfg.norms.p, 2.0);
        assert_eq!(cfg.norms.sigma(), 0.5);
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn bad_grid_size_names_the_field() {
        let err = parse_config(r#"{"grid": {"n": 12}}"#).unwrap_err();
        assert_eq!(err.to_string(), "grid.n must be a power of two");
    }

    #[test]
    fn unknown_key_is_rejected_with_position() {
        let err = parse_config("{\n  \"params\": {\"viscocity\": 2.0}\n}").unwrap_err();
        match err {
            Error::ConfigParse { line, msg, .. } => {
                assert_eq!(line, 2);
                assert!(msg.contains("viscocity"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn data_sources_parse() {
        let cfg = parse_config(r#"{"data": {"kind": "oscillating_vortex", "m": 8}}"#).unwrap();
        let u = cfg.initial_field().unwrap();
        assert!(u.is_solenoidal());
        assert!(parse_config(r#"{"data": {"kind": "oscillating_vortex", "m": 9}}"#).is_err());
        let cfg = parse_config(r#"{"seed": 3, "data": {"kind": "random_solenoidal", "amplitude": 2.0}}"#).unwrap();
        assert!((cfg.initial_field().unwrap().l2_norm() - 2.0).abs() < 1e-14);
        assert!(parse_config(r#"{"suite": "nope"}"#).is_err());
    }
}
