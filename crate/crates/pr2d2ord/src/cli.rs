//! Command-line interface.
//!
//! Every subcommand accepts `--config <file>`, a TOML file of `key = value`
//! pairs named like the long flags. Its entries are applied before the
//! command line, so explicit flags win.

use std::ffi::OsString;
use std::fs::{self, File};
use std::hash::{BuildHasher, Hasher};
use std::io::{BufReader, BufWriter, Read};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pr2d2ord_core::cutpoint::DirichletConc;
use pr2d2ord_core::draws::{diagnose, predict, summarize, FitConfig, PosteriorDraws};
use pr2d2ord_core::elicit::{r2m_histogram, reference_calibration, ElicitationResult, ElicitationSpec, R2Objective};
use pr2d2ord_core::gig::GigParams;
use pr2d2ord_core::harness::{evaluate_prediction, CoefScheme, CutScheme, SimDesign};
use pr2d2ord_core::posterior::{ModelSpec, Prior};
use pr2d2ord_core::rng::derive_seed;
use serde::{Deserialize, Serialize};

use crate::formats::{read_draws_bin, read_draws_csv, write_draws_bin, write_draws_csv, MAGIC};
use crate::ingest::{ingest_csv, prepare_csv, Schema};
use crate::report::{fit_summary, write_diagnostics_csv, write_histogram_csv, write_study_csv};
use crate::runner::{elicit_parallel, fit_parallel, run_study, PriorChoice};

/// R-hat above which `fit` fails unless `--no-strict` is given.
pub const RHAT_THRESHOLD: f64 = 1.05;
/// Exit status of a strict fit that did not converge.
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pr2d2ord", version, about = "Bayesian ordinal probit regression with an R²-calibrated shrinkage prior")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose GIG hyperparameters so the prior R² follows Beta(a, b).
    Elicit(ElicitArgs),
    /// Sample the posterior for a CSV dataset.
    Fit(FitArgs),
    /// Predict labels for new rows from a fit directory.
    Predict(PredictArgs),
    /// Run a simulation study described by a grid file.
    Simulate(SimulateArgs),
    /// Convergence diagnostics for a draws file.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file of default flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random seed; drawn at random and recorded when absent.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ElicitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Sample size of the simulated datasets.
    #[arg(long)]
    pub n: usize,
    /// Number of categories.
    #[arg(long)]
    pub k: usize,
    /// Dirichlet concentration of the category probabilities, comma separated.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub num_sims: usize,
    #[arg(long, default_value_t = 5)]
    pub starts: usize,
    #[arg(long, default_value_t = 300)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value = "elicit_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorKind {
    Pr2d2ord,
    Horseshoe,
    R2d2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DrawFormat {
    Csv,
    Bin,
    Both,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the response column.
    #[arg(long, default_value = "y")]
    pub response: String,
    /// Number of categories; labels must then already be 1..=K.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = PriorKind::Pr2d2ord)]
    pub prior: PriorKind,
    /// Explicit GIG hyperparameters `lambda,rho,chi`.
    #[arg(long)]
    pub gig: Option<String>,
    /// An elicitation.json written by `elicit`.
    #[arg(long)]
    pub elicitation: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, default_value_t = pr2d2ord_core::posterior::DEFAULT_XI0)]
    pub xi0: f64,
    #[arg(long, default_value_t = pr2d2ord_core::posterior::DEFAULT_TAU0_SQ)]
    pub tau0_sq: f64,
    /// Simulations used when the GIG hyperparameters have to be elicited.
    #[arg(long, default_value_t = 10_000)]
    pub num_sims: usize,
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    #[arg(long, default_value_t = 1000)]
    pub warmup: usize,
    #[arg(long, default_value_t = 2000)]
    pub draws: usize,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    #[arg(long, default_value_t = 10)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 0.8)]
    pub target_accept: f64,
    /// Center and scale covariates (the default).
    #[arg(long, overrides_with = "no_standardize")]
    pub standardize: bool,
    #[arg(long)]
    pub no_standardize: bool,
    /// Do not fail when R-hat exceeds 1.05.
    #[arg(long)]
    pub no_strict: bool,
    #[arg(long, value_enum, default_value_t = DrawFormat::Both)]
    pub format: DrawFormat,
    #[arg(long, default_value = "fit_out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory of `fit`.
    #[arg(long)]
    pub fit: PathBuf,
    /// CSV with the same covariate columns as the training data; the response column is optional.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "predictions.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// TOML grid with `[[design]]` and `[[prior]]` tables.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long, default_value = "study_out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Draws file, text or binary.
    #[arg(long)]
    pub draws: PathBuf,
    /// Where to write the per-parameter table.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Turns config-file entries into flags placed before the user's flags.
fn config_flags(path: &Path) -> Result<Vec<OsString>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table = text.parse().with_context(|| format!("parsing config {}", path.display()))?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = key.replace('_', "-");
        match value {
            toml::Value::Boolean(true) => out.push(format!("--{flag}").into()),
            toml::Value::Boolean(false) => out.push(format!("--no-{flag}").into()),
            toml::Value::String(s) => {
                out.push(format!("--{flag}").into());
                out.push(s.into());
            }
            toml::Value::Integer(i) => {
                out.push(format!("--{flag}").into());
                out.push(i.to_string().into());
            }
            toml::Value::Float(f) => {
                out.push(format!("--{flag}").into());
                out.push(f.to_string().into());
            }
            toml::Value::Array(items) => {
                let parts: Vec<String> = items
                    .iter()
                    .map(|v| match v {
                        toml::Value::Integer(i) => Ok(i.to_string()),
                        toml::Value::Float(f) => Ok(f.to_string()),
                        _ => Err(anyhow!("config key '{key}': arrays may only hold numbers")),
                    })
                    .collect::<Result<_>>()?;
                out.push(format!("--{flag}").into());
                out.push(parts.join(",").into());
            }
            _ => bail!("config key '{key}' has an unsupported value type"),
        }
    }
    Ok(out)
}

/// Splices config-file flags in right after the subcommand name.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else { return Ok(args) };
    let sub = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|i| i + 1);
    let Some(sub) = sub else { return Ok(args) };
    let mut out: Vec<OsString> = args[..=sub].to_vec();
    out.extend(config_flags(&path)?);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}

fn random_seed() -> u64 {
    std::collections::hash_map::RandomState::new().build_hasher().finish()
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = random_seed();
        eprintln!("seed: {s}");
        s
    })
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("'{t}' is not a number")))
        .collect()
}

fn alpha_for(arg: Option<&str>, k: usize) -> Result<DirichletConc> {
    match arg {
        Some(s) => {
            let v = parse_list(s)?;
            if v.len() != k {
                bail!("--alpha has {} entries but there are {k} categories", v.len());
            }
            Ok(DirichletConc::new(v)?)
        }
        None => Ok(DirichletConc::uniform(k)?),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut f, value)?;
    std::io::Write::write_all(&mut f, b"\n")?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ElicitationFile {
    pub seed: u64,
    pub spec: ElicitationSpec,
    pub result: ElicitationResult,
    /// Objective of the reference calibration for `(a, b, n, K)`, if any,
    /// on the bank of the winning start.
    pub reference: Option<ReferenceComparison>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub params: GigParams,
    pub objective: f64,
}

pub fn cmd_elicit(args: &ElicitArgs) -> Result<i32> {
    let seed = resolve_seed(args.common.seed);
    let alpha = alpha_for(args.alpha.as_deref(), args.k)?;
    let mut spec = ElicitationSpec::new(args.n, args.k, alpha, args.a, args.b, seed)?;
    spec.num_sims = args.num_sims;
    spec.num_starts = args.starts;
    spec.max_evals = args.max_evals;
    spec.validate()?;
    let result = elicit_parallel(&spec)?;
    let best = result.starts.iter().find(|s| s.params == result.params).map_or(0, |s| s.start);
    let bank = R2Objective::new(&spec, &[best as u64])?;
    let samples = bank.r2_values(&result.params)?;
    let reference = match reference_calibration(spec.a, spec.b, spec.n, spec.k) {
        Some(p) => Some(ReferenceComparison { params: p, objective: bank.evaluate(&p)? }),
        None => None,
    };
    fs::create_dir_all(&args.out)?;
    write_histogram_csv(&r2m_histogram(&samples, args.bins, spec.a, spec.b)?, create(&args.out.join("r2m_histogram.csv"))?)?;
    let g = result.params;
    eprintln!("lambda = {}, rho = {}, chi = {}, objective = {}", g.lambda, g.rho, g.chi, result.objective);
    write_json(&args.out.join("elicitation.json"), &ElicitationFile { seed, spec, result, reference })?;
    Ok(0)
}

/// Everything needed to reuse a fit for prediction.
#[derive(Debug, Serialize, Deserialize)]
pub struct FitRecord {
    pub seed: u64,
    pub schema: Schema,
    pub spec: ModelSpec,
    pub config: FitConfig,
    pub warnings: Vec<String>,
}

fn model_for(args: &FitArgs, n: usize, k: usize, seed: u64) -> Result<ModelSpec> {
    let alpha = alpha_for(args.alpha.as_deref(), k)?;
    let prior = match args.prior {
        PriorKind::Horseshoe => Prior::Horseshoe { tau0_sq: args.tau0_sq },
        PriorKind::R2d2 => Prior::R2d2BetaPrime { a: args.a, b: args.b, xi0: args.xi0, alpha },
        PriorKind::Pr2d2ord => {
            let gig = if let Some(s) = &args.gig {
                let v = parse_list(s)?;
                if v.len() != 3 {
                    bail!("--gig expects lambda,rho,chi");
                }
                GigParams::new(v[0], v[1], v[2])?
            } else if let Some(path) = &args.elicitation {
                let f: ElicitationFile = serde_json::from_reader(BufReader::new(
                    File::open(path).with_context(|| format!("opening {}", path.display()))?,
                ))?;
                if f.spec.k != k {
                    bail!("elicitation was run for K = {} but the data have K = {k}", f.spec.k);
                }
                f.result.params
            } else {
                let uniform = alpha.as_slice().iter().all(|&v| v == 1.0);
                match reference_calibration(args.a, args.b, n, k) {
                    Some(g) if uniform && (n == 100 || n == 1000) => g,
                    _ => {
                        let mut spec = ElicitationSpec::new(n, k, alpha.clone(), args.a, args.b, derive_seed(seed, &[0xe1]))?;
                        spec.num_sims = args.num_sims;
                        let r = elicit_parallel(&spec)?;
                        eprintln!("elicited lambda = {}, rho = {}, chi = {}", r.params.lambda, r.params.rho, r.params.chi);
                        r.params
                    }
                }
            };
            Prior::Pr2d2ord { gig, alpha, xi0: args.xi0 }
        }
    };
    Ok(ModelSpec::new(prior, k)?)
}

pub fn cmd_fit(args: &FitArgs) -> Result<i32> {
    let seed = resolve_seed(args.common.seed);
    let standardize = !args.no_standardize;
    let ing = ingest_csv(&args.data, &args.response, standardize, args.k)?;
    for w in &ing.warnings {
        eprintln!("warning: {w}");
    }
    let levels = &ing.schema.levels;
    if levels.iter().enumerate().any(|(i, &l)| l != i as i64 + 1) {
        let map: Vec<String> = levels.iter().enumerate().map(|(i, l)| format!("{l}->{}", i + 1)).collect();
        eprintln!("response labels remapped: {}", map.join(", "));
    }
    if ing.data.n() == 0 {
        bail!("the data file has no rows");
    }
    let spec = model_for(args, ing.data.n(), ing.data.k(), seed)?;
    let config = FitConfig {
        chains: args.chains,
        warmup: args.warmup,
        draws: args.draws,
        thin: args.thin,
        seed,
        max_depth: args.max_depth,
        target_accept: args.target_accept,
    };
    if config.chains == 0 || config.draws == 0 {
        bail!("need at least one chain and one draw");
    }
    let mut draws = fit_parallel(&ing.data, &spec, &config)?;
    draws.prior = spec.prior.name().into();
    fs::create_dir_all(&args.out)?;
    if matches!(args.format, DrawFormat::Csv | DrawFormat::Both) {
        write_draws_csv(&draws, create(&args.out.join("draws.csv"))?)?;
    }
    if matches!(args.format, DrawFormat::Bin | DrawFormat::Both) {
        write_draws_bin(&draws, create(&args.out.join("draws.bin"))?)?;
    }
    let mut rows = summarize(&draws);
    // report coefficients under their column names
    for (r, name) in rows.iter_mut().zip(ing.schema.covariates.iter()) {
        r.name = format!("beta[{name}]");
    }
    let summary = fit_summary(&draws, rows);
    write_json(&args.out.join("summary.json"), &summary)?;
    let record = FitRecord { seed, schema: ing.schema.clone(), spec, config, warnings: ing.warnings.clone() };
    write_json(&args.out.join("schema.json"), &record)?;
    if draws.high_divergence() {
        eprintln!(
            "WARNING: {:.1}% of transitions diverged; estimates are unreliable",
            100.0 * draws.divergence_rate()
        );
    }
    match diagnose(&draws) {
        Ok(d) => {
            write_diagnostics_csv(&d, create(&args.out.join("diagnostics.csv"))?)?;
            let worst = d.max_rhat();
            eprintln!("max R-hat = {worst:.4}, min bulk ESS = {:.0}", d.min_ess());
            if !(worst <= RHAT_THRESHOLD) && !args.no_strict {
                eprintln!("error: R-hat {worst:.4} exceeds {RHAT_THRESHOLD}; rerun with more draws or pass --no-strict");
                return Ok(EXIT_NOT_CONVERGED);
            }
        }
        Err(e) => eprintln!("warning: no convergence diagnostics ({e})"),
    }
    Ok(0)
}

/// Reads a draws file in either format, telling them apart by the magic
/// bytes.
pub fn read_draws(path: &Path) -> Result<PosteriorDraws> {
    let mut bytes = Vec::new();
    File::open(path).with_context(|| format!("opening {}", path.display()))?.read_to_end(&mut bytes)?;
    if bytes.starts_with(MAGIC) {
        Ok(read_draws_bin(bytes.as_slice())?)
    } else {
        Ok(read_draws_csv(bytes.as_slice())?)
    }
}

pub fn cmd_predict(args: &PredictArgs) -> Result<i32> {
    let record: FitRecord = serde_json::from_reader(BufReader::new(
        File::open(args.fit.join("schema.json")).with_context(|| format!("no schema.json in {}", args.fit.display()))?,
    ))?;
    let bin = args.fit.join("draws.bin");
    let path = if bin.exists() { bin } else { args.fit.join("draws.csv") };
    let draws = read_draws(&path)?;
    let prepared = prepare_csv(&args.data, &record.schema)?;
    let labels = predict(&draws, &prepared.x)?;
    let mut w = csv::Writer::from_writer(create(&args.out)?);
    let has_truth = prepared.y.is_some();
    if has_truth {
        w.write_record(["row", "predicted", "observed"])?;
    } else {
        w.write_record(["row", "predicted"])?;
    }
    let levels = &record.schema.levels;
    for (i, &l) in labels.iter().enumerate() {
        let mut rec = vec![(i + 1).to_string(), levels[l - 1].to_string()];
        if let Some(y) = &prepared.y {
            rec.push(levels[y[i] - 1].to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    if let Some(y) = &prepared.y {
        let (accuracy, rmse) = evaluate_prediction(&labels, y)?;
        eprintln!("accuracy = {accuracy:.4}, rmse = {rmse:.4}");
        let path = args.out.with_extension("metrics.json");
        write_json(&path, &serde_json::json!({ "accuracy": accuracy, "rmse": rmse, "n": y.len() }))?;
    }
    Ok(0)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDesign {
    n: usize,
    p: usize,
    k: usize,
    coef: CoefScheme,
    cut: CutScheme,
    #[serde(default)]
    ar_rho: Option<f64>,
    #[serde(default)]
    n_nonnull: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFit {
    chains: Option<usize>,
    warmup: Option<usize>,
    draws: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Grid {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    replications: Option<usize>,
    #[serde(default)]
    fit: GridFit,
    design: Vec<GridDesign>,
    prior: Vec<PriorChoice>,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.grid).with_context(|| format!("reading {}", args.grid.display()))?;
    let grid: Grid = toml::from_str(&text).with_context(|| format!("parsing {}", args.grid.display()))?;
    let seed = resolve_seed(args.common.seed.or(grid.seed));
    let replications = args.replications.or(grid.replications).unwrap_or(20);
    let designs: Vec<SimDesign> = grid
        .design
        .iter()
        .map(|d| {
            let mut s = SimDesign::new(d.n, d.p, d.k, d.coef, d.cut);
            s.ar_rho = d.ar_rho.unwrap_or(s.ar_rho);
            s.n_nonnull = d.n_nonnull.unwrap_or(s.n_nonnull);
            s.replications = replications;
            s.seed = seed;
            s.validate().map(|_| s)
        })
        .collect::<pr2d2ord_core::Result<_>>()?;
    let defaults = FitConfig::default();
    let config = FitConfig {
        chains: args.chains.or(grid.fit.chains).unwrap_or(defaults.chains),
        warmup: args.warmup.or(grid.fit.warmup).unwrap_or(defaults.warmup),
        draws: args.draws.or(grid.fit.draws).unwrap_or(defaults.draws),
        ..defaults
    };
    let cells = run_study(&designs, &grid.prior, &config)?;
    fs::create_dir_all(&args.out)?;
    write_study_csv(&cells, create(&args.out.join("study.csv"))?)?;
    write_json(&args.out.join("study.json"), &serde_json::json!({ "seed": seed, "config": config, "cells": cells }))?;
    for c in &cells {
        let f = |m: Option<pr2d2ord_core::harness::MeanSe>| m.map_or("-".to_string(), |m| format!("{:.3}", m.mean));
        eprintln!(
            "n={} p={} K={} {:?}/{:?} {:<9} mse {} auc {} cov {} width {} ({} failed, {:.1}s per fit)",
            c.design.n,
            c.design.p,
            c.design.k,
            c.design.coef_scheme,
            c.design.cut_scheme,
            c.prior.label(),
            f(c.report.mse),
            f(c.report.auc),
            f(c.report.coverage),
            f(c.report.width),
            c.report.failed,
            c.runtime_seconds
        );
    }
    Ok(0)
}

pub fn cmd_diagnose(args: &DiagnoseArgs) -> Result<i32> {
    let draws = read_draws(&args.draws)?;
    let d = diagnose(&draws)?;
    println!("{:<16} {:>10} {:>10}", "parameter", "rhat", "ess_bulk");
    for (name, p) in d.names.iter().zip(&d.params) {
        println!("{name:<16} {:>10.4} {:>10.0}", p.rhat, p.ess_bulk);
    }
    if let Some(out) = &args.out {
        write_diagnostics_csv(&d, create(out)?)?;
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args = expand_config(args.into_iter().map(Into::into).collect())?;
    let cli = Cli::try_parse_from(args)?;
    match &cli.command {
        Command::Elicit(a) => cmd_elicit(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Diagnose(a) => cmd_diagnose(a),
    }
}
