//! Command-line front end: parameter resolution, command dispatch and
//! CSV / plot-script / manifest emission.
//!
//! Parameters resolve as command-line flag, then `--config` file, then the
//! built-in defaults. All SNR and residual-interference values on the
//! command line are in dB.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use args::{AxisArg, Cli, Command, CommonArgs, QuantityArg};
use noma_core::experiments::{
    figure, linear_grid, run_sweep, validate, Axis, Quantity, SweepError, SweepResult, SweepSpec, ValidationError,
    DEFAULT_TRIALS,
};
use noma_core::{Config, ConfigOverrides, EvalMode, RawConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

const DEFAULT_SNR_GRID: &str = "0:40:5";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmittedFile {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config_path: Option<PathBuf>,
    pub config: RawConfig<f64>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub trials: u64,
    pub modes: Vec<String>,
    pub grid: Vec<f64>,
    pub axis: String,
    pub tool_version: String,
    pub emitted: Vec<EmittedFile>,
}

/// `start:stop:step`, or a single number.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("malformed grid {text:?}; expected start:stop:step"));
    let parts: Vec<&str> = text.split(':').collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match nums.as_slice() {
        [x] if x.is_finite() => Ok(vec![*x]),
        [a, b, s] => linear_grid(*a, *b, *s).map_err(|e| CliError::Usage(format!("{text:?}: {e}"))),
        _ => Err(bad()),
    }
}

pub fn parse_modes(text: Option<&str>, default: &[EvalMode]) -> Result<Vec<EvalMode>, CliError> {
    let Some(text) = text else {
        return Ok(default.to_vec());
    };
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(EvalMode::all());
    }
    let mut modes = Vec::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let mode: EvalMode = part.parse().map_err(|e: noma_core::config::ParseModeError| CliError::Usage(e.to_string()))?;
        if !modes.contains(&mode.canonical()) {
            modes.push(mode.canonical());
        }
    }
    if modes.is_empty() {
        return Err(CliError::Usage("no modes given".into()));
    }
    Ok(modes)
}

fn flag_overrides(a: &CommonArgs) -> ConfigOverrides<f64> {
    ConfigOverrides {
        num_users: a.users,
        num_subcarriers: a.k,
        rank_m: a.rank_m,
        rank_n: a.rank_n,
        a_m: a.a_m,
        a_n: a.a_n,
        r_m: a.r_m,
        r_n: a.r_n,
        alpha: a.alpha,
        eta: a.eta,
        r_d: a.r_d,
        omega_i_total: None,
        omega_i_total_db: a.ri_db,
        cheb_nodes: a.cheb_nodes,
        semi_nodes: a.semi_nodes,
        throughput_pairing: a.throughput_pairing.map(Into::into),
    }
}

/// Merges defaults, config file and flags, then validates.
pub fn resolve_config(a: &CommonArgs) -> Result<Config, CliError> {
    let file = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            ConfigOverrides::from_json(&text)
                .map_err(|e| CliError::Config(format!("{}: malformed config: {e}", path.display())))?
        }
        None => ConfigOverrides::default(),
    };
    let merged = file.merge(flag_overrides(a));
    merged
        .apply(RawConfig::baseline())
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

struct Writer {
    dir: PathBuf,
    emitted: Vec<EmittedFile>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            emitted: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
        self.emitted.push(EmittedFile {
            path: name.to_string(),
            bytes: contents.len(),
            sha256: digest(contents.as_bytes()),
        });
        Ok(())
    }

    fn finish(mut self, stem: &str, mut manifest: RunManifest) -> Result<RunManifest, CliError> {
        manifest.emitted = std::mem::take(&mut self.emitted);
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let path = self.dir.join(format!("{stem}.manifest.json"));
        fs::write(&path, text + "\n").map_err(|source| CliError::Io { path, source })?;
        Ok(manifest)
    }
}

fn manifest(command: &str, argv: &[String], a: &CommonArgs, cfg: &Config) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        argv: argv.to_vec(),
        config_path: a.config.clone(),
        config: cfg.to_raw(),
        output_dir: a.out.clone(),
        seed: a.seed,
        trials: 0,
        modes: Vec::new(),
        grid: Vec::new(),
        axis: Axis::SnrDb.name().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        emitted: Vec::new(),
    }
}

fn emit_sweep(
    stem: &str,
    title: &str,
    results: &[SweepResult<f64>],
    a: &CommonArgs,
    mut m: RunManifest,
) -> Result<RunManifest, CliError> {
    let mut w = Writer::new(&a.out)?;
    let csv = format!("{stem}.csv");
    w.write(&csv, &output::sweep_csv(results))?;
    w.write(&format!("{stem}.plot"), &output::plot_script(&csv, title, results))?;
    if let Some(first) = results.first() {
        m.axis = first.axis.name().to_string();
    }
    w.finish(stem, m)
}

fn snr_sweep(a: &CommonArgs, cfg: &Config, trials: u64) -> Result<(SweepSpec<f64>, Vec<SweepResult<f64>>), CliError> {
    let grid = parse_grid(a.snr_db.as_deref().unwrap_or(DEFAULT_SNR_GRID))?;
    let modes = parse_modes(a.mode.as_deref(), &EvalMode::all())?;
    let spec = SweepSpec::snr(grid, modes).with_trials(trials, a.seed);
    let res = run_sweep(cfg, &spec)?;
    Ok((spec, vec![res]))
}

fn fill(m: &mut RunManifest, spec: &SweepSpec<f64>) {
    m.trials = spec.trials;
    m.grid = spec.grid.clone();
    m.modes = spec.modes.iter().map(ToString::to_string).collect();
}

/// Runs a parsed command, returning the exit code.
pub fn run_command(cli: Cli, argv: &[String]) -> Result<i32, CliError> {
    match cli.command {
        Command::Analytic(a) => {
            let cfg = resolve_config(&a)?;
            if a.trials.is_some_and(|t| t > 0) {
                return Err(CliError::Usage("analytic takes no trials; use simulate".into()));
            }
            let (spec, res) = snr_sweep(&a, &cfg, 0)?;
            let mut m = manifest("analytic", argv, &a, &cfg);
            fill(&mut m, &spec);
            emit_sweep("analytic", "Connection outage probability (analytic)", &res, &a, m)?;
            Ok(EXIT_OK)
        }
        Command::Simulate(a) => {
            let cfg = resolve_config(&a)?;
            let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
            if trials == 0 {
                return Err(CliError::Usage("simulate needs at least one trial".into()));
            }
            let (spec, res) = snr_sweep(&a, &cfg, trials)?;
            let mut m = manifest("simulate", argv, &a, &cfg);
            fill(&mut m, &spec);
            emit_sweep("simulate", "Connection outage probability (analytic and simulated)", &res, &a, m)?;
            Ok(EXIT_OK)
        }
        Command::Validate { common: a, rel_tol } => {
            let cfg = resolve_config(&a)?;
            let grid = parse_grid(a.snr_db.as_deref().unwrap_or(DEFAULT_SNR_GRID))?;
            let modes = parse_modes(a.mode.as_deref(), &EvalMode::all())?;
            let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
            if !(rel_tol >= 0.0 && rel_tol.is_finite()) {
                return Err(CliError::Usage("--rel-tol must be non-negative".into()));
            }
            let report = validate(&cfg, &modes, &grid, trials, a.seed, rel_tol).map_err(|e| match e {
                ValidationError::TooFewTrials(_) => CliError::Usage(e.to_string()),
                ValidationError::Grid(g) => g.into(),
            })?;
            let mut m = manifest("validate", argv, &a, &cfg);
            m.trials = trials;
            m.grid = grid;
            m.modes = modes.iter().map(ToString::to_string).collect();
            let mut w = Writer::new(&a.out)?;
            w.write("validate.csv", &output::validation_csv(&report))?;
            w.write(
                "validate.json",
                &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"),
            )?;
            w.finish("validate", m)?;
            for p in report.points.iter().filter(|p| p.considered) {
                println!(
                    "{:>6} dB {:<16} analytic={} mc={} tol={} {}",
                    output::fmt_sig(p.snr_db),
                    p.mode.to_string(),
                    output::fmt_sig(p.analytic),
                    output::fmt_sig(p.mc),
                    output::fmt_sig(p.tolerance),
                    if p.pass { "PASS" } else { "FAIL" }
                );
            }
            println!(
                "validation {}: {} of {} decisive points failed",
                if report.pass { "PASS" } else { "FAIL" },
                report.failed,
                report.considered
            );
            Ok(if report.pass { EXIT_OK } else { EXIT_VALIDATION })
        }
        Command::Sweep {
            common: a,
            axis,
            grid,
            at_snr_db,
            quantity,
        } => {
            let cfg = resolve_config(&a)?;
            let trials = a.trials.unwrap_or(0);
            let modes = parse_modes(a.mode.as_deref(), &EvalMode::all())?;
            let (axis, grid) = match axis {
                AxisArg::SnrDb => {
                    if grid.is_some() {
                        return Err(CliError::Usage("use --snr-db for the SNR axis".into()));
                    }
                    (Axis::SnrDb, parse_grid(a.snr_db.as_deref().unwrap_or(DEFAULT_SNR_GRID))?)
                }
                AxisArg::Theta | AxisArg::Rate => {
                    let text = grid.ok_or_else(|| CliError::Usage("--grid is required for this axis".into()))?;
                    let axis = if axis == AxisArg::Theta { Axis::Theta } else { Axis::Rate };
                    (axis, parse_grid(&text)?)
                }
            };
            let spec = SweepSpec {
                axis,
                grid,
                snr_db: at_snr_db,
                quantity: match quantity {
                    QuantityArg::Cop => Quantity::Cop,
                    QuantityArg::Throughput => Quantity::Throughput,
                },
                ..SweepSpec::snr(Vec::new(), modes)
            }
            .with_trials(trials, a.seed);
            let res = run_sweep(&cfg, &spec)?;
            let mut m = manifest("sweep", argv, &a, &cfg);
            fill(&mut m, &spec);
            emit_sweep("sweep", "Parameter sweep", &[res], &a, m)?;
            Ok(EXIT_OK)
        }
        Command::Figure {
            number,
            figure: flag,
            common: a,
        } => {
            let n = match (number, flag) {
                (Some(x), Some(y)) if x != y => {
                    return Err(CliError::Usage(format!("conflicting figure numbers {x} and {y}")))
                }
                (Some(x), _) | (None, Some(x)) => x,
                (None, None) => return Err(CliError::Usage("figure number required (2 to 9)".into())),
            };
            let mut fig = figure::<f64>(n).ok_or_else(|| CliError::Usage(format!("no preset for figure {n}; use 2 to 9")))?;
            let trials = a.trials.unwrap_or(DEFAULT_TRIALS);
            fig = fig.with_trials(trials, a.seed);
            if let Some(text) = &a.snr_db {
                fig = fig.with_snr_grid(&parse_grid(text)?);
            }
            let res = fig.run()?;
            let cfg = fig.series.first().map(|s| s.cfg.clone()).unwrap_or_else(Config::baseline);
            let mut m = manifest(&format!("figure {n}"), argv, &a, &cfg);
            m.trials = trials;
            m.grid = fig.series.first().map(|s| s.spec.grid.clone()).unwrap_or_default();
            m.modes = res.iter().flat_map(|r| &r.rows).fold(Vec::new(), |mut acc, p| {
                if !acc.contains(&p.label) {
                    acc.push(p.label.clone());
                }
                acc
            });
            emit_sweep(&format!("figure{n}"), fig.title, &res, &a, m)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv` (including the program name) and runs it.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let text: Vec<String> = argv.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match run_command(cli, &text) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
