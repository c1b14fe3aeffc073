//! Parallel drivers. Every unit of work owns a keyed random stream, so
//! results do not depend on the number of threads.

use std::time::Instant;

use pr2d2ord_core::cutpoint::DirichletConc;
use pr2d2ord_core::draws::{run_fit_chain, FitConfig, PosteriorDraws};
use pr2d2ord_core::elicit::{merge_starts, reference_calibration, run_start, start_points, ElicitationResult, ElicitationSpec};
use pr2d2ord_core::gig::GigParams;
use pr2d2ord_core::harness::{aggregate, run_replicate, Metrics, MetricsReport, ReplicateOutcome, SimDesign};
use pr2d2ord_core::model::OrdinalDataset;
use pr2d2ord_core::posterior::{ModelSpec, Prior, DEFAULT_TAU0_SQ, DEFAULT_XI0};
use pr2d2ord_core::rng::derive_seed;
use pr2d2ord_core::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Runs the chains of a fit in parallel.
pub fn fit_parallel(data: &OrdinalDataset, spec: &ModelSpec, config: &FitConfig) -> Result<PosteriorDraws> {
    let chains = (0..config.chains)
        .into_par_iter()
        .map(|c| run_fit_chain(data, spec, config, c))
        .collect::<Result<Vec<_>>>()?;
    PosteriorDraws::new(data.p(), spec.k, spec.prior.name(), config.seed, config.warmup, chains)
}

/// Runs the optimizer starts in parallel.
pub fn elicit_parallel(spec: &ElicitationSpec) -> Result<ElicitationResult> {
    spec.validate()?;
    let starts = start_points(spec);
    let results = starts
        .par_iter()
        .enumerate()
        .map(|(i, p)| run_start(spec, i, p))
        .collect::<Result<Vec<_>>>()?;
    merge_starts(results)
}

/// A prior family whose hyperparameters are completed per design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PriorChoice {
    /// GIG hyperparameters are taken from `gig` when given, otherwise from
    /// the reference calibrations, otherwise elicited.
    Pr2d2ord {
        a: f64,
        b: f64,
        #[serde(default = "default_xi0")]
        xi0: f64,
        #[serde(default)]
        gig: Option<[f64; 3]>,
    },
    Horseshoe {
        #[serde(default = "default_tau0_sq")]
        tau0_sq: f64,
    },
    R2d2 {
        a: f64,
        b: f64,
        #[serde(default = "default_xi0")]
        xi0: f64,
    },
}

fn default_xi0() -> f64 {
    DEFAULT_XI0
}

fn default_tau0_sq() -> f64 {
    DEFAULT_TAU0_SQ
}

impl PriorChoice {
    pub fn label(&self) -> &'static str {
        match self {
            PriorChoice::Pr2d2ord { .. } => "pr2d2ord",
            PriorChoice::Horseshoe { .. } => "horseshoe",
            PriorChoice::R2d2 { .. } => "r2d2",
        }
    }

    /// The model for `k` categories and sample size `n`, with a uniform
    /// Dirichlet on the category probabilities.
    pub fn spec_for(&self, n: usize, k: usize, seed: u64) -> Result<ModelSpec> {
        let alpha = DirichletConc::uniform(k)?;
        let prior = match *self {
            PriorChoice::Pr2d2ord { a, b, xi0, gig } => {
                let gig = match gig {
                    Some([l, r, c]) => GigParams::new(l, r, c)?,
                    None => match reference_calibration(a, b, n, k) {
                        Some(g) if [100, 1000].contains(&n) => g,
                        _ => elicit_parallel(&ElicitationSpec::new(n, k, alpha.clone(), a, b, seed)?)?.params,
                    },
                };
                Prior::Pr2d2ord { gig, alpha, xi0 }
            }
            PriorChoice::Horseshoe { tau0_sq } => Prior::Horseshoe { tau0_sq },
            PriorChoice::R2d2 { a, b, xi0 } => Prior::R2d2BetaPrime { a, b, xi0, alpha },
        };
        ModelSpec::new(prior, k)
    }
}

/// One replicate of a study cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub outcome: Option<ReplicateOutcome>,
    pub error: Option<String>,
    pub runtime_seconds: f64,
}

/// Results of one (design, prior) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub design: SimDesign,
    pub prior: PriorChoice,
    pub spec: Option<ModelSpec>,
    pub report: MetricsReport,
    /// Mean fit time per successful replicate.
    pub runtime_seconds: f64,
    pub max_rhat: f64,
    pub min_ess: f64,
    pub divergences: usize,
    pub replicates: Vec<ReplicateRecord>,
}

/// Runs every design under every prior. Datasets depend only on the
/// design's seed and position in `designs`, so all priors see the same
/// replicates.
pub fn run_study(designs: &[SimDesign], priors: &[PriorChoice], config: &FitConfig) -> Result<Vec<CellResult>> {
    if designs.is_empty() || priors.is_empty() {
        return Err(pr2d2ord_core::Error::Empty("study grid"));
    }
    let mut out = Vec::with_capacity(designs.len() * priors.len());
    for (di, design) in designs.iter().enumerate() {
        design.validate()?;
        for prior in priors {
            let spec = match prior.spec_for(design.n, design.k, derive_seed(design.seed, &[di as u64])) {
                Ok(s) => s,
                Err(e) => {
                    let failed = (0..design.replications)
                        .map(|r| ReplicateRecord { replicate: r, outcome: None, error: Some(e.to_string()), runtime_seconds: 0.0 })
                        .collect();
                    out.push(cell_result(*design, prior.clone(), None, failed));
                    continue;
                }
            };
            let records: Vec<ReplicateRecord> = (0..design.replications)
                .into_par_iter()
                .map(|r| {
                    let t = Instant::now();
                    let res = run_replicate(design, &spec, config, di as u64, r as u64);
                    let runtime_seconds = t.elapsed().as_secs_f64();
                    match res {
                        Ok(o) => ReplicateRecord { replicate: r, outcome: Some(o), error: None, runtime_seconds },
                        Err(e) => ReplicateRecord { replicate: r, outcome: None, error: Some(e.to_string()), runtime_seconds },
                    }
                })
                .collect();
            out.push(cell_result(*design, prior.clone(), Some(spec), records));
        }
    }
    Ok(out)
}

fn cell_result(design: SimDesign, prior: PriorChoice, spec: Option<ModelSpec>, replicates: Vec<ReplicateRecord>) -> CellResult {
    let ok: Vec<&ReplicateOutcome> = replicates.iter().filter_map(|r| r.outcome.as_ref()).collect();
    let metrics: Vec<Metrics> = ok.iter().map(|o| o.metrics).collect();
    let report = aggregate(&metrics, replicates.len() - ok.len());
    let times: Vec<f64> = replicates.iter().filter(|r| r.outcome.is_some()).map(|r| r.runtime_seconds).collect();
    CellResult {
        design,
        prior,
        spec,
        report,
        runtime_seconds: if times.is_empty() { f64::NAN } else { times.iter().sum::<f64>() / times.len() as f64 },
        max_rhat: ok.iter().map(|o| o.max_rhat).fold(f64::NAN, f64::max),
        min_ess: ok.iter().map(|o| o.min_ess).fold(f64::NAN, f64::min),
        divergences: ok.iter().map(|o| o.divergences).sum(),
        replicates,
    }
}
