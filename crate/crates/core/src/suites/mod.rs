//! Verification suites. Each returns named checks and CSV tables; a suite
//! passes iff every check passes.

mod bilinear;
mod decay;
mod energy;
mod oscillation;
mod partition;
mod picard;
mod semigroup;
mod weights;

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::{write_report, ReportTable, RunConfig};
use crate::row;

pub use bilinear::run_bilinear;
pub use decay::run_decay;
pub use energy::run_energy;
pub use oscillation::run_oscillation;
pub use partition::run_partition;
pub use picard::run_picard;
pub use semigroup::run_semigroup;
pub use weights::run_weights;

pub const SUITE_NAMES: &[&str] = &[
    "partition",
    "semigroup",
    "decay",
    "oscillation",
    "bilinear",
    "picard",
    "energy",
    "weights",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition on `value`.
    pub condition: String,
    pub pass: bool,
}

impl Check {
    pub fn below(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            condition: format!("< {limit:.6e}"),
            pass: value < limit,
        }
    }

    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            condition: format!("<= {limit:.6e}"),
            pass: value <= limit,
        }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            condition: format!(">= {limit:.6e}"),
            pass: value >= limit,
        }
    }

    pub fn within(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value,
            condition: format!("in [{lo:.6e}, {hi:.6e}]"),
            pass: value >= lo && value <= hi,
        }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            condition: "true".into(),
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checks: Vec<Check>,
    /// `(file stem, table)`
    pub tables: Vec<(String, ReportTable)>,
}

impl SuiteOutcome {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        info!(
            "[{}] {} = {:e} ({}) {}",
            self.name,
            c.name,
            c.value,
            c.condition,
            if c.pass { "ok" } else { "FAIL" }
        );
        self.checks.push(c);
    }

    pub fn table(&mut self, stem: &str, t: ReportTable) {
        self.tables.push((stem.into(), t));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn checks_table(&self) -> ReportTable {
        let mut t = ReportTable::new(&["check", "value", "condition", "pass"]);
        for c in &self.checks {
            t.push(row![c.name.clone(), c.value, c.condition.clone(), c.pass]);
        }
        t
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{:4} {:<44} {:>12.5e}  {}\n",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.value,
                c.condition
            ));
        }
        s.push_str(&format!(
            "suite {}: {}\n",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        s
    }

    /// Writes `<suite>_checks.csv` and one `<suite>_<stem>.csv` per table.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        let path = dir.join(format!("{}_checks.csv", self.name));
        write_report(&self.checks_table(), &path)?;
        written.push(path);
        for (stem, t) in &self.tables {
            let path = dir.join(format!("{}_{stem}.csv", self.name));
            write_report(t, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let out = match name {
        "partition" => run_partition(cfg),
        "semigroup" => run_semigroup(cfg),
        "decay" => run_decay(cfg),
        "oscillation" => run_oscillation(cfg),
        "bilinear" => run_bilinear(cfg),
        "picard" => run_picard(cfg),
        "energy" => run_energy(cfg),
        "weights" => run_weights(cfg),
        other => Err(Error::ConfigValidation {
            field: "suite".into(),
            msg: format!("unknown suite {other:?}"),
        }),
    }?;
    info!("suite {name} finished in {:.1?}", start.elapsed());
    Ok(out)
}

/// Least-squares slope of `log y` against `log x`.
pub(crate) fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    crate::semigroup::least_squares(&lx, &ly).1
}
