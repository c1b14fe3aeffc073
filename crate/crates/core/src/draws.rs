//! Running the sampler on a dataset and working with the resulting draws.

use alloc::format;
use alloc::string::String;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use alloc::vec::Vec;

use rand::Rng;

use crate::diagnostics::{diagnose_param, ParamDiagnostics};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{bin_latent, OrdinalDataset};
use crate::nuts::{run_chain, NutsConfig};
use crate::posterior::{ModelSpec, Posterior};
use crate::rng::stream;
use crate::stats::{mean, quantile_sorted, sorted_copy, variance};

/// Re-initialization attempts when a chain cannot start.
pub const MAX_REINIT: usize = 50;
/// Divergence rate above which a fit is flagged.
pub const DIVERGENCE_WARNING_RATE: f64 = 0.2;

const KEY_CHAIN: u64 = 0x6368_6169_6e00_0000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitConfig {
    pub chains: usize,
    pub warmup: usize,
    pub draws: usize,
    pub thin: usize,
    pub seed: u64,
    pub max_depth: usize,
    pub target_accept: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { chains: 4, warmup: 1000, draws: 2000, thin: 1, seed: 0, max_depth: 10, target_accept: 0.8 }
    }
}

impl FitConfig {
    fn nuts(&self) -> NutsConfig {
        NutsConfig {
            warmup: self.warmup,
            draws: self.draws,
            thin: self.thin,
            max_depth: self.max_depth,
            target_accept: self.target_accept,
            ..NutsConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainStats {
    pub step_size: f64,
    pub mean_accept_stat: f64,
    pub divergences: usize,
    pub warmup_divergences: usize,
    pub max_depth_hits: usize,
    pub leapfrog_steps: usize,
    pub reinits: usize,
}

/// Constrained draws of one chain, `width` values per draw in the order
/// `β (p), φ (p), W, τ (K − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDraws {
    pub values: Vec<f64>,
    pub stats: ChainStats,
}

/// Runs chain `chain` of a fit. Chains use independent streams so they can
/// be run in any order or in parallel.
pub fn run_fit_chain(data: &OrdinalDataset, spec: &ModelSpec, config: &FitConfig, chain: usize) -> Result<ChainDraws> {
    let post = Posterior::new(data, spec)?;
    let init = post.initial_point()?;
    let mut rng = stream(config.seed, &[KEY_CHAIN, chain as u64]);
    let nuts = config.nuts();
    for attempt in 0..=MAX_REINIT {
        let theta0: Vec<f64> = if attempt == 0 {
            init.clone()
        } else {
            init.iter().map(|v| v + rng.random_range(-1.0..1.0)).collect()
        };
        match run_chain(&post, &theta0, &nuts, &mut rng) {
            Ok(out) => {
                let p = data.p();
                let width = 2 * p + spec.k;
                let mut values = Vec::with_capacity(out.num_draws() * width);
                for i in 0..out.num_draws() {
                    let d = post.constrain(out.draw(i));
                    values.extend_from_slice(&d.coef.beta);
                    values.extend_from_slice(&d.coef.phi);
                    values.push(d.coef.w);
                    values.extend_from_slice(&d.tau);
                }
                let stats = ChainStats {
                    step_size: out.step_size,
                    mean_accept_stat: out.mean_accept_stat,
                    divergences: out.divergences,
                    warmup_divergences: out.warmup_divergences,
                    max_depth_hits: out.max_depth_hits,
                    leapfrog_steps: out.leapfrog_steps,
                    reinits: attempt,
                };
                return Ok(ChainDraws { values, stats });
            }
            Err(Error::Initialization(_)) | Err(Error::StepSize(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Initialization(MAX_REINIT))
}

/// Post-warmup draws of all chains with run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub p: usize,
    pub k: usize,
    pub prior: String,
    pub seed: u64,
    pub warmup: usize,
    pub stats: Vec<ChainStats>,
    chains: Vec<Vec<f64>>,
}

impl PosteriorDraws {
    /// Builds the container from per-chain value arrays (see [`ChainDraws`]).
    pub fn new(p: usize, k: usize, prior: &str, seed: u64, warmup: usize, chains: Vec<ChainDraws>) -> Result<Self> {
        if chains.is_empty() {
            return Err(Error::Empty("chains"));
        }
        let width = 2 * p + k;
        let len = chains[0].values.len();
        for c in &chains {
            if c.values.len() != len || len % width != 0 {
                return Err(Error::DimensionMismatch { expected: len, found: c.values.len() });
            }
        }
        let (stats, chains) = chains.into_iter().map(|c| (c.stats, c.values)).unzip();
        Ok(Self { p, k, prior: prior.into(), seed, warmup, stats, chains })
    }

    pub fn width(&self) -> usize {
        2 * self.p + self.k
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    pub fn draws_per_chain(&self) -> usize {
        self.chains[0].len() / self.width()
    }

    pub fn chain_values(&self, c: usize) -> &[f64] {
        &self.chains[c]
    }

    /// The full parameter vector of one draw.
    pub fn draw(&self, chain: usize, i: usize) -> &[f64] {
        let w = self.width();
        &self.chains[chain][i * w..(i + 1) * w]
    }

    /// Column names in storage order.
    pub fn names(&self) -> Vec<String> {
        let mut v = Vec::with_capacity(self.width());
        v.extend((1..=self.p).map(|j| format!("beta[{j}]")));
        v.extend((1..=self.p).map(|j| format!("phi[{j}]")));
        v.push("W".into());
        v.extend((1..self.k).map(|j| format!("tau[{j}]")));
        v
    }

    pub fn beta_index(&self, j: usize) -> usize {
        j
    }

    pub fn phi_index(&self, j: usize) -> usize {
        self.p + j
    }

    pub fn w_index(&self) -> usize {
        2 * self.p
    }

    pub fn tau_index(&self, j: usize) -> usize {
        2 * self.p + 1 + j
    }

    /// Columns reported in summaries: every parameter except the last `φ`,
    /// which is determined by the others.
    pub fn summary_columns(&self) -> Vec<usize> {
        (0..self.width()).filter(|&c| c != self.phi_index(self.p - 1)).collect()
    }

    /// Draws of one column, per chain.
    pub fn column_by_chain(&self, col: usize) -> Vec<Vec<f64>> {
        let w = self.width();
        self.chains.iter().map(|c| c.iter().skip(col).step_by(w).copied().collect()).collect()
    }

    /// Draws of one column pooled over chains.
    pub fn column(&self, col: usize) -> Vec<f64> {
        self.column_by_chain(col).into_iter().flatten().collect()
    }

    pub fn mean(&self, col: usize) -> f64 {
        mean(&self.column(col))
    }

    pub fn median(&self, col: usize) -> f64 {
        quantile_sorted(&sorted_copy(&self.column(col)), 0.5)
    }

    /// Equal-tailed credible interval with the given mass.
    pub fn interval(&self, col: usize, mass: f64) -> (f64, f64) {
        let s = sorted_copy(&self.column(col));
        let t = 0.5 * (1.0 - mass);
        (quantile_sorted(&s, t), quantile_sorted(&s, 1.0 - t))
    }

    pub fn beta_median(&self) -> Vec<f64> {
        (0..self.p).map(|j| self.median(self.beta_index(j))).collect()
    }

    pub fn beta_mean(&self) -> Vec<f64> {
        (0..self.p).map(|j| self.mean(self.beta_index(j))).collect()
    }

    pub fn tau_mean(&self) -> Vec<f64> {
        (0..self.k - 1).map(|j| self.mean(self.tau_index(j))).collect()
    }

    pub fn total_draws(&self) -> usize {
        self.num_chains() * self.draws_per_chain()
    }

    pub fn divergences(&self) -> usize {
        self.stats.iter().map(|s| s.divergences).sum()
    }

    pub fn divergence_rate(&self) -> f64 {
        self.divergences() as f64 / self.total_draws().max(1) as f64
    }

    /// Whether more than a fifth of the transitions diverged.
    pub fn high_divergence(&self) -> bool {
        self.divergence_rate() > DIVERGENCE_WARNING_RATE
    }
}

/// Per-parameter convergence diagnostics over the summary columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub names: Vec<String>,
    pub params: Vec<ParamDiagnostics>,
}

impl Diagnostics {
    pub fn max_rhat(&self) -> f64 {
        self.params.iter().map(|d| d.rhat).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_ess(&self) -> f64 {
        self.params.iter().map(|d| d.ess_bulk).fold(f64::INFINITY, f64::min)
    }
}

/// Rank-normalized split R-hat and bulk ESS; needs at least two chains.
pub fn diagnose(draws: &PosteriorDraws) -> Result<Diagnostics> {
    let names = draws.names();
    let cols = draws.summary_columns();
    let mut out = Diagnostics { names: Vec::with_capacity(cols.len()), params: Vec::with_capacity(cols.len()) };
    for c in cols {
        let by_chain = draws.column_by_chain(c);
        let refs: Vec<&[f64]> = by_chain.iter().map(|v| v.as_slice()).collect();
        out.params.push(diagnose_param(&refs)?);
        out.names.push(names[c].clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub q025: f64,
    pub q975: f64,
    pub rhat: Option<f64>,
    pub ess_bulk: Option<f64>,
}

/// One row per summary column. Diagnostics are filled in when the draws
/// have at least two chains.
pub fn summarize(draws: &PosteriorDraws) -> Vec<ParamSummary> {
    let names = draws.names();
    draws
        .summary_columns()
        .into_iter()
        .map(|c| {
            let by_chain = draws.column_by_chain(c);
            let refs: Vec<&[f64]> = by_chain.iter().map(|v| v.as_slice()).collect();
            let diag = diagnose_param(&refs).ok();
            let all: Vec<f64> = by_chain.concat();
            let s = sorted_copy(&all);
            ParamSummary {
                name: names[c].clone(),
                mean: mean(&all),
                sd: variance(&all).sqrt(),
                median: quantile_sorted(&s, 0.5),
                q025: quantile_sorted(&s, 0.025),
                q975: quantile_sorted(&s, 0.975),
                rhat: diag.map(|d| d.rhat),
                ess_bulk: diag.map(|d| d.ess_bulk),
            }
        })
        .collect()
}

/// Labels for new rows: `η̂ = X β̂` binned by `τ̂`, both posterior means.
pub fn predict(draws: &PosteriorDraws, x_new: &Matrix) -> Result<Vec<usize>> {
    predict_with(&draws.beta_mean(), &draws.tau_mean(), x_new)
}

/// The binning rule of [`predict`] with explicit point estimates.
pub fn predict_with(beta: &[f64], tau: &[f64], x_new: &Matrix) -> Result<Vec<usize>> {
    if x_new.cols() != beta.len() {
        return Err(Error::DimensionMismatch { expected: beta.len(), found: x_new.cols() });
    }
    let eta = x_new.mul_vec(beta)?;
    Ok(eta.into_iter().map(|e| bin_latent(e, tau)).collect())
}

/// Runs all chains one after another.
pub fn fit(data: &OrdinalDataset, spec: &ModelSpec, config: &FitConfig) -> Result<PosteriorDraws> {
    let chains = (0..config.chains).map(|c| run_fit_chain(data, spec, config, c)).collect::<Result<Vec<_>>>()?;
    PosteriorDraws::new(data.p(), spec.k, spec.prior.name(), config.seed, config.warmup, chains)
}
