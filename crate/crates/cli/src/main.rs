//! `cbsv` command line: analyze, propagate, simulate, picard and verify.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use cbsv::io::{load_config, parse_config, read_snapshot, write_report, write_snapshot, ReportTable, RunConfig};
use cbsv::littlewood_paley::{block_norms, hybrid_norm, besov_norm, DyadicPartition, FieldSeries};
use cbsv::mild::{if_step_stream, picard_solve, smallness_gate, EnergyAccumulator};
use cbsv::row;
use cbsv::semigroup::series_propagate;
use cbsv::spectral::{lp_norm, sobolev_norm, FlowParams, SpectralField};
use cbsv::suites::run_suite;
use cbsv::Error;

#[derive(Parser)]
#[command(name = "cbsv", version, about = "Rotating Navier-Stokes on a periodic box: norms, semigroup, mild solutions")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; defaults are used when absent
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory, overriding `output_dir`
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed, overriding `seed`
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Block and hybrid norms of the initial field or a snapshot
    Analyze {
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Linear evolution G(t)u₀ on the configured time grid
    Propagate,
    /// Nonlinear integrating-factor run with an energy budget
    Simulate,
    /// Picard iteration for the mild solution
    Picard,
    /// Run a verification suite
    Verify { suite: String },
}

enum Failure {
    Config(Error),
    Runtime(Error),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConfigParse { .. } | Error::ConfigValidation { .. } => Failure::Config(e),
            e => Failure::Runtime(e),
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p).map_err(Failure::Config)?,
        None => parse_config("{}")?,
    };
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(cfg: &RunConfig) -> Result<&Path, Error> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Io {
        path: cfg.output_dir.clone(),
        source: e,
    })?;
    Ok(&cfg.output_dir)
}

fn norms_row(t: f64, u: &SpectralField, cfg: &RunConfig, omega: f64) -> Result<Vec<cbsv::io::Cell>, Error> {
    let n = &cfg.norms;
    Ok(row![
        t,
        u.l2_norm(),
        sobolev_norm(u, 0.5),
        hybrid_norm(u, n.s, n.sigma(), n.p, omega)?
    ])
}

fn analyze(cfg: &RunConfig, snapshot: Option<&Path>) -> Result<(), Failure> {
    let (u, omega) = match snapshot {
        Some(p) => {
            let s = read_snapshot(p)?;
            (s.field, s.omega)
        }
        None => (cfg.initial_field()?, cfg.params.omega),
    };
    let n = &cfg.norms;
    let partition = DyadicPartition::for_grid(u.grid());
    let mut blocks = ReportTable::new(&["j", "l2", "lp"]);
    for b in block_norms(&u, &partition, n.p)? {
        blocks.push(row![b.j, b.l2, b.lp]);
    }
    let hybrid = hybrid_norm(&u, n.s, n.sigma(), n.p, omega)?;
    let mut norms = ReportTable::new(&["quantity", "value"]);
    norms.push(row!["l2", u.l2_norm()]);
    norms.push(row!["lp", lp_norm(&u, n.p)?]);
    norms.push(row!["h12", sobolev_norm(&u, 0.5)]);
    norms.push(row!["besov_half_2_2", besov_norm(&u, 0.5, 2.0, 2.0)?]);
    norms.push(row!["hybrid", hybrid]);
    norms.push(row!["max_divergence", u.max_divergence()]);
    let dir = out_dir(cfg)?;
    write_report(&blocks, dir.join("analyze_blocks.csv"))?;
    write_report(&norms, dir.join("analyze_norms.csv"))?;
    println!("hybrid norm (s={}, sigma={}, p={}) = {hybrid:.10e}", n.s, n.sigma(), n.p);
    println!("l2 = {:.10e}, h12 = {:.10e}", u.l2_norm(), sobolev_norm(&u, 0.5));
    Ok(())
}

fn header() -> ReportTable {
    ReportTable::new(&["t", "l2", "h12", "hybrid"])
}

fn propagate(cfg: &RunConfig) -> Result<(), Failure> {
    let params = cfg.flow_params()?;
    let u0 = cfg.initial_field()?;
    let series = series_propagate(&u0, &cfg.time_grid()?, &params)?;
    let mut table = header();
    for u in series.fields() {
        table.push(norms_row(u.time, u, cfg, params.omega)?);
    }
    let dir = out_dir(cfg)?;
    write_report(&table, dir.join("propagate.csv"))?;
    write_snapshot(series.last().unwrap(), &params, dir.join("propagate_final.cbsv"))?;
    println!("propagated {} steps to T = {}", cfg.time.steps, cfg.time.horizon);
    Ok(())
}

fn simulate(cfg: &RunConfig) -> Result<(), Failure> {
    let params = cfg.flow_params()?;
    let u0 = cfg.initial_field()?;
    let mut table = ReportTable::new(&["t", "l2", "h12", "hybrid", "energy_budget"]);
    let mut acc = EnergyAccumulator::new(&params);
    let last = if_step_stream(&u0, &cfg.time_grid()?, &params, |_, t, u| {
        acc.push(t, u);
        let mut r = norms_row(t, u, cfg, params.omega)?;
        r.push((*acc.budgets().last().unwrap()).into());
        table.push(r);
        Ok(())
    })?;
    let report = acc.report();
    let dir = out_dir(cfg)?;
    write_report(&table, dir.join("simulate.csv"))?;
    write_snapshot(&last, &params, dir.join("simulate_final.cbsv"))?;
    println!(
        "simulated {} steps to T = {}; max energy budget {:.3e} (relative {:.3e})",
        cfg.time.steps,
        cfg.time.horizon,
        report.max_budget,
        report.relative_violation()
    );
    Ok(())
}

fn picard(cfg: &RunConfig) -> Result<(), Failure> {
    let params: FlowParams = cfg.flow_params()?;
    let u0 = cfg.initial_field()?;
    let p = cfg.norms.p;
    let (gate_norm, gate) = smallness_gate(&u0, p, &params)?;
    info!("smallness gate: {gate_norm:e} <= {} is {gate}", params.smallness_c);
    let tg = cfg.time_grid()?;
    let (sol, rep) = picard_solve(&u0, &tg, &params, p, 1e-8, 50)?;
    let mut table = ReportTable::new(&["iteration", "difference", "iterate_norm"]);
    for (i, d) in rep.differences.iter().enumerate() {
        table.push(row![i + 1, *d, rep.iterate_norms[i + 1]]);
    }
    let dir = out_dir(cfg)?;
    write_report(&table, dir.join("picard.csv"))?;
    let series: &FieldSeries = &sol;
    write_snapshot(series.last().unwrap(), &params, dir.join("picard_final.cbsv"))?;
    println!(
        "picard: {} iterations, converged = {}, max ratio {:.3e}, residual {:.3e}, gate {gate_norm:.3e} ({})",
        rep.iterations,
        rep.converged,
        rep.max_ratio(),
        rep.residual,
        if gate { "small" } else { "not small" }
    );
    if rep.converged {
        Ok(())
    } else {
        Err(Failure::Assertion("picard iteration did not converge".into()))
    }
}

fn verify(cfg: &RunConfig, suite: &str) -> Result<(), Failure> {
    let out = run_suite(suite, cfg)?;
    out.write(out_dir(cfg)?)?;
    print!("{}", out.summary());
    if out.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = out.failures().iter().map(|c| c.name.as_str()).collect();
        Err(Failure::Assertion(format!("failed checks: {}", names.join(", "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = load(&cli.common)?;
    match &cli.command {
        Command::Analyze { snapshot } => analyze(&cfg, snapshot.as_deref()),
        Command::Propagate => propagate(&cfg),
        Command::Simulate => simulate(&cfg),
        Command::Picard => picard(&cfg),
        Command::Verify { suite } => verify(&cfg, suite),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
