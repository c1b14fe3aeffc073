//! Simulation study: synthetic ordinal data with a sparse truth and the
//! estimation metrics used to compare priors.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::seq::index::sample as sample_indices;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::draws::{diagnose, fit, FitConfig, PosteriorDraws};
use crate::error::{domain, Error, Result};
use crate::linalg::{ar1_covariance, cholesky, Matrix};
use crate::model::{bin_latent, OrdinalDataset};
use crate::posterior::ModelSpec;
use crate::rng::{derive_seed, stream};
use crate::stats::{quantile_sorted, sorted_copy};

const KEY_DATA: u64 = 0x6461_7461;
const KEY_FIT: u64 = 0x0066_6974;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CoefScheme {
    /// Non-null coefficients are `±1` with random signs.
    Fixed,
    /// Non-null coefficients are Student-t with 3 degrees of freedom.
    T3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CutScheme {
    /// `τ_k` is the `k/K` sample quantile of the latent response.
    Even,
    /// `τ_1 = 0` and `τ_k = k/K + 1` for `k ≥ 2`.
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimDesign {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub coef_scheme: CoefScheme,
    pub cut_scheme: CutScheme,
    pub ar_rho: f64,
    pub n_nonnull: usize,
    pub replications: usize,
    pub seed: u64,
}

impl SimDesign {
    pub fn new(n: usize, p: usize, k: usize, coef_scheme: CoefScheme, cut_scheme: CutScheme) -> Self {
        Self { n, p, k, coef_scheme, cut_scheme, ar_rho: 0.8, n_nonnull: 6, replications: 1, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(domain("n and p must be positive"));
        }
        if self.k < 2 {
            return Err(domain("need at least two categories"));
        }
        if self.n_nonnull > self.p {
            return Err(domain("more non-null coefficients than covariates"));
        }
        if !(self.ar_rho.abs() < 1.0) {
            return Err(domain("AR(1) correlation must lie in (-1, 1)"));
        }
        Ok(())
    }
}

/// A simulated dataset with the truth that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimData {
    pub data: OrdinalDataset,
    pub beta: Vec<f64>,
    pub tau: Vec<f64>,
}

fn even_cut_points(latent: &[f64], k: usize) -> Vec<f64> {
    let s = sorted_copy(latent);
    (1..k).map(|j| quantile_sorted(&s, j as f64 / k as f64)).collect()
}

fn low_cut_points(k: usize) -> Vec<f64> {
    (1..k).map(|j| if j == 1 { 0.0 } else { j as f64 / k as f64 + 1.0 }).collect()
}

pub fn gen_dataset<R: Rng + ?Sized>(design: &SimDesign, rng: &mut R) -> Result<SimData> {
    design.validate()?;
    let (n, p) = (design.n, design.p);
    let l = cholesky(&ar1_covariance(p, design.ar_rho))?;
    let mut beta = vec![0.0; p];
    let t3 = StudentT::new(3.0).map_err(|_| domain("invalid t distribution"))?;
    for j in sample_indices(rng, p, design.n_nonnull).into_iter() {
        beta[j] = match design.coef_scheme {
            CoefScheme::Fixed => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            CoefScheme::T3 => t3.sample(rng),
        };
    }
    let mut x = Vec::with_capacity(n * p);
    let mut latent = Vec::with_capacity(n);
    let mut z = vec![0.0; p];
    for _ in 0..n {
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let row = l.mul_vec(&z)?;
        let eta: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
        latent.push(eta + rng.sample::<f64, _>(StandardNormal));
        x.extend(row);
    }
    let tau = match design.cut_scheme {
        CutScheme::Even => even_cut_points(&latent, design.k),
        CutScheme::Low => low_cut_points(design.k),
    };
    let y: Vec<usize> = latent.iter().map(|&v| bin_latent(v, &tau)).collect();
    let data = OrdinalDataset::new(Matrix::from_row_major(n, p, x)?, y, design.k)?;
    Ok(SimData { data, beta, tau })
}

/// Area under the ROC curve of `scores` for the positives in `labels`, by
/// the rank-sum identity with ties counted as one half. `None` when either
/// class is empty.
pub fn auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let n = scores.len();
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = n - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let avg = 0.5 * ((i + 1) + j) as f64;
        rank_sum += avg * order[i..j].iter().filter(|&&o| labels[o]).count() as f64;
        i = j;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos * n_neg) as f64)
}

/// Pairwise definition of [`auc`], for testing.
pub fn auc_brute_force(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let mut wins = 0.0;
    let mut pairs = 0usize;
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] && !labels[j] {
                pairs += 1;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    if pairs == 0 {
        None
    } else {
        Some(wins / pairs as f64)
    }
}

/// Estimation metrics of one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Metrics {
    pub mse: f64,
    pub auc: Option<f64>,
    pub coverage: f64,
    pub width: f64,
}

/// Metrics from explicit posterior medians and 95% interval bounds.
pub fn metrics_from_summaries(median: &[f64], lower: &[f64], upper: &[f64], truth: &[f64]) -> Result<Metrics> {
    let p = truth.len();
    if median.len() != p || lower.len() != p || upper.len() != p {
        return Err(Error::DimensionMismatch { expected: p, found: median.len() });
    }
    if p == 0 {
        return Err(Error::Empty("coefficients"));
    }
    let pf = p as f64;
    let mse = median.iter().zip(truth).map(|(m, b)| (m - b) * (m - b)).sum::<f64>() / pf;
    let coverage = (0..p).filter(|&j| lower[j] <= truth[j] && truth[j] <= upper[j]).count() as f64 / pf;
    let width = (0..p).map(|j| upper[j] - lower[j]).sum::<f64>() / pf;
    let scores: Vec<f64> = median.iter().map(|m| m.abs()).collect();
    let labels: Vec<bool> = truth.iter().map(|&b| b != 0.0).collect();
    Ok(Metrics { mse, auc: auc(&scores, &labels), coverage, width })
}

/// Metrics of a fit against the true coefficients, using posterior medians
/// and equal-tailed 95% intervals.
pub fn evaluate(draws: &PosteriorDraws, truth: &[f64]) -> Result<Metrics> {
    if truth.len() != draws.p {
        return Err(Error::DimensionMismatch { expected: draws.p, found: truth.len() });
    }
    let mut med = Vec::with_capacity(draws.p);
    let mut lo = Vec::with_capacity(draws.p);
    let mut hi = Vec::with_capacity(draws.p);
    for j in 0..draws.p {
        let s = sorted_copy(&draws.column(draws.beta_index(j)));
        med.push(quantile_sorted(&s, 0.5));
        lo.push(quantile_sorted(&s, 0.025));
        hi.push(quantile_sorted(&s, 0.975));
    }
    metrics_from_summaries(&med, &lo, &hi, truth)
}

/// Accuracy and root mean squared label difference.
pub fn evaluate_prediction(y_hat: &[usize], y_test: &[usize]) -> Result<(f64, f64)> {
    if y_hat.len() != y_test.len() {
        return Err(Error::DimensionMismatch { expected: y_test.len(), found: y_hat.len() });
    }
    if y_test.is_empty() {
        return Err(Error::Empty("labels"));
    }
    let n = y_test.len() as f64;
    let acc = y_hat.iter().zip(y_test).filter(|(a, b)| a == b).count() as f64 / n;
    let mse = y_hat.iter().zip(y_test).map(|(&a, &b)| (a as f64 - b as f64).powi(2)).sum::<f64>() / n;
    Ok((acc, mse.sqrt()))
}

/// Mean and standard error over replicates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanSe {
    pub mean: f64,
    pub se: f64,
}

impl MeanSe {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let r = values.len() as f64;
        let mean = values.iter().sum::<f64>() / r;
        let se = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1.0)).sqrt() / r.sqrt()
        } else {
            f64::NAN
        };
        Some(Self { mean, se })
    }
}

/// Replicate-averaged metrics of one study cell.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub mse: Option<MeanSe>,
    pub auc: Option<MeanSe>,
    pub coverage: Option<MeanSe>,
    pub width: Option<MeanSe>,
    pub replicates: usize,
    pub failed: usize,
}

pub fn aggregate(metrics: &[Metrics], failed: usize) -> MetricsReport {
    let col = |f: &dyn Fn(&Metrics) -> Option<f64>| -> Vec<f64> { metrics.iter().filter_map(f).collect() };
    MetricsReport {
        mse: MeanSe::of(&col(&|m| Some(m.mse))),
        auc: MeanSe::of(&col(&|m| m.auc)),
        coverage: MeanSe::of(&col(&|m| Some(m.coverage))),
        width: MeanSe::of(&col(&|m| Some(m.width))),
        replicates: metrics.len(),
        failed,
    }
}

/// Everything recorded about one fitted replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReplicateOutcome {
    pub metrics: Metrics,
    pub max_rhat: f64,
    pub min_ess: f64,
    pub divergences: usize,
}

/// Simulates replicate `rep` of study cell `cell` and fits it. The data and
/// the sampler use streams keyed by `(design.seed, cell, rep)`.
pub fn run_replicate(
    design: &SimDesign,
    spec: &ModelSpec,
    config: &FitConfig,
    cell: u64,
    rep: u64,
) -> Result<ReplicateOutcome> {
    let sim = gen_dataset(design, &mut stream(design.seed, &[KEY_DATA, cell, rep]))?;
    let cfg = FitConfig { seed: derive_seed(design.seed, &[KEY_FIT, cell, rep]), ..*config };
    let draws = fit(&sim.data, spec, &cfg)?;
    let metrics = evaluate(&draws, &sim.beta)?;
    let (max_rhat, min_ess) = match diagnose(&draws) {
        Ok(d) => (d.max_rhat(), d.min_ess()),
        Err(_) => (f64::NAN, f64::NAN),
    };
    Ok(ReplicateOutcome { metrics, max_rhat, min_ess, divergences: draws.divergences() })
}

/// The dataset of replicate `rep` of cell `cell`, as used by
/// [`run_replicate`].
pub fn replicate_dataset(design: &SimDesign, cell: u64, rep: u64) -> Result<SimData> {
    gen_dataset(design, &mut stream(design.seed, &[KEY_DATA, cell, rep]))
}
