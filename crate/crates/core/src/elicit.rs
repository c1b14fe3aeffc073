//! Calibration of the GIG prior on `W` so that the induced prior law of
//! McFadden's R² matches a target Beta(a, b).
//!
//! The literal simulation ([`simulate_r2m`]) draws `W`, cut-points, latent
//! responses and labels, then scores R². For optimization the same law is
//! generated from a fixed bank of random numbers ([`R2Objective`]): with
//! `π ~ Dirichlet(α)` and `τ = √(1+W) Φ⁻¹(cumsum π)`, the binned labels do
//! not depend on `W` at all (binning `√(1+W) Z` by `τ` is binning `Z` by
//! `Φ⁻¹(cumsum π)`), and the full-model likelihood is `Σ n_k ln π_k`. Only
//! the null likelihood moves with `W`. Drawing `W` by inverting a tabulated
//! GIG CDF at fixed uniforms then makes the objective a deterministic,
//! piecewise-smooth function of `(λ, ρ, χ)`.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::cutpoint::{sample_dirichlet_positive, sample_tau, tau_from_pi, DirichletConc};
use crate::error::{domain, Error, Result};
use crate::gig::{GigParams, GigQuantileTable};
use crate::model::{bin_latent, category_counts, mcfadden_r2, r2_from_log_likelihoods};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::rng::stream;
use crate::special::{beta_pdf, beta_quantile, log_norm_interval};

/// Smallest offset of `λ` above `−1/2` reachable by the optimizer.
pub const LAMBDA_EPS: f64 = 1e-3;
/// Retries for a replicate whose null likelihood is exactly one.
pub const MAX_REPLICATE_RETRIES: usize = 100;

const KEY_BANK: u64 = 0x42;
const KEY_STARTS: u64 = 0x53;
const KEY_RETRY: u64 = 0x52;

/// Reference GIG calibrations for `α = 1`, as `(a, b, n, K, λ, ρ, χ)`.
pub const REFERENCE_CALIBRATIONS: [(f64, f64, usize, usize, f64, f64, f64); 12] = [
    (1.0, 1.0, 100, 3, 1.10, 1.41, 0.15),
    (1.0, 1.0, 100, 5, 0.67, 3.76, 0.14),
    (1.0, 1.0, 1000, 3, 1.23, 2.64, 0.19),
    (1.0, 1.0, 1000, 5, 0.85, 1.80, 0.14),
    (1.0, 5.0, 100, 3, 0.67, 1.19, 0.77),
    (1.0, 5.0, 100, 5, 0.51, 1.56, 0.70),
    (1.0, 5.0, 1000, 3, 0.36, 1.5, 0.65),
    (1.0, 5.0, 1000, 5, 0.38, 1.39, 0.66),
    (1.0, 10.0, 100, 3, 0.01, 1.00, 1.04),
    (1.0, 10.0, 100, 5, 0.05, 1.08, 1.03),
    (1.0, 10.0, 1000, 3, 0.00, 1.00, 1.00),
    (1.0, 10.0, 1000, 5, 0.06, 0.97, 0.99),
];

/// Reference calibration for `(a, b, K)` at the closest tabulated `n`.
pub fn reference_calibration(a: f64, b: f64, n: usize, k: usize) -> Option<GigParams> {
    REFERENCE_CALIBRATIONS
        .iter()
        .filter(|r| r.0 == a && r.1 == b && r.3 == k)
        .min_by_key(|r| r.2.abs_diff(n))
        .map(|r| GigParams::new(r.4, r.5, r.6).expect("valid table row"))
}

/// The R²-matching problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElicitationSpec {
    pub n: usize,
    pub k: usize,
    pub alpha: DirichletConc,
    pub a: f64,
    pub b: f64,
    pub num_sims: usize,
    pub num_starts: usize,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
    pub seed: u64,
}

impl ElicitationSpec {
    /// A spec with the default budget: 10,000 simulations, 5 starts.
    pub fn new(n: usize, k: usize, alpha: DirichletConc, a: f64, b: f64, seed: u64) -> Result<Self> {
        let s = Self { n, k, alpha, a, b, num_sims: 10_000, num_starts: 5, max_evals: 300, seed };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(domain("simulated sample size must be at least 1"));
        }
        if self.k < 2 {
            return Err(domain("at least two categories are required"));
        }
        if self.alpha.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: self.alpha.len() });
        }
        if !(self.a > 0.0 && self.b > 0.0) || !self.a.is_finite() || !self.b.is_finite() {
            return Err(domain("target Beta shapes must be positive"));
        }
        if self.num_sims < 100 {
            return Err(domain("at least 100 simulations are required"));
        }
        if self.num_starts < 1 || self.max_evals < 1 {
            return Err(domain("at least one start and one evaluation are required"));
        }
        Ok(())
    }
}

/// Simulated prior draws of R²_M, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct R2Samples(Vec<f64>);

impl R2Samples {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(domain("R² samples must lie in [0, 1]"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Finite-sample R²_M can be negative (labels that happen to fit the null
/// better); the prior law is supported on `[0, 1]`, so values are clipped.
#[inline]
fn clip_r2(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Literal simulation of the prior law of R²_M: draw `W`, then
/// `τ ~ f(τ | W, α)`, then `n` latent responses from `Normal(0, 1 + W)`,
/// bin them and score R²_M. Replicates with a degenerate null likelihood
/// are redrawn.
pub fn simulate_r2m<R, F>(spec: &ElicitationSpec, mut w_sampler: F, rng: &mut R) -> Result<R2Samples>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> f64,
{
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.num_sims);
    let mut y = vec![0usize; spec.n];
    for _ in 0..spec.num_sims {
        let mut done = false;
        for _ in 0..MAX_REPLICATE_RETRIES {
            let w = w_sampler(rng);
            if !(w >= 0.0) || !w.is_finite() {
                return Err(domain("W sampler produced an invalid value"));
            }
            let tau = sample_tau(&spec.alpha, w, rng)?;
            let s = (1.0 + w).sqrt();
            for yi in y.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                *yi = bin_latent(s * z, tau.as_slice());
            }
            match mcfadden_r2(&y, &tau, w) {
                Ok(v) => {
                    out.push(clip_r2(v));
                    done = true;
                    break;
                }
                Err(Error::DegenerateNullLikelihood) => continue,
                Err(e) => return Err(e),
            }
        }
        if !done {
            return Err(Error::SamplingFailed { what: "non-degenerate R² replicate", attempts: MAX_REPLICATE_RETRIES });
        }
    }
    R2Samples::new(out)
}

/// Target Beta quantiles at the midpoints `(i − 1/2)/m`.
pub fn beta_midpoint_quantiles(m: usize, a: f64, b: f64) -> Vec<f64> {
    (0..m).map(|i| beta_quantile((i as f64 + 0.5) / m as f64, a, b)).collect()
}

/// Squared 2-Wasserstein distance between the empirical law of `samples`
/// and Beta(a, b), discretized at the sample-count midpoints.
pub fn wasserstein2_sq_to_beta(samples: &[f64], a: f64, b: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Empty("R² samples"));
    }
    let q = beta_midpoint_quantiles(samples.len(), a, b);
    Ok(w2_sq_against(samples.to_vec(), &q))
}

fn w2_sq_against(mut v: Vec<f64>, q: &[f64]) -> f64 {
    v.sort_by(|x, y| x.total_cmp(y));
    v.iter().zip(q).map(|(x, t)| (x - t) * (x - t)).sum::<f64>() / v.len() as f64
}

// One simulated dataset reduced to what R² needs: standardized cut-points
// Φ⁻¹(cumsum π), label counts and the full-model log-likelihood.
#[derive(Debug, Clone)]
struct Replicate {
    q: Vec<f64>,
    counts: Vec<usize>,
    log_lm: f64,
}

impl Replicate {
    fn draw<R: Rng + ?Sized>(alpha: &DirichletConc, n: usize, rng: &mut R) -> Result<Self> {
        for _ in 0..MAX_REPLICATE_RETRIES {
            let pi = sample_dirichlet_positive(alpha, rng)?;
            let Ok(q) = tau_from_pi(&pi, 0.0) else { continue };
            let q = q.into_vec();
            let labels: Vec<usize> = (0..n).map(|_| bin_latent(rng.sample(StandardNormal), &q)).collect();
            let counts = category_counts(&labels, alpha.len());
            let log_lm = counts.iter().zip(pi.as_slice()).map(|(&c, p)| c as f64 * p.ln()).sum();
            return Ok(Self { q, counts, log_lm });
        }
        Err(Error::SamplingFailed { what: "cut-point replicate", attempts: MAX_REPLICATE_RETRIES })
    }

    /// Null log-likelihood when the cut-points sit on the `√(1+W)` scale.
    fn log_l0(&self, s: f64) -> f64 {
        let k = self.counts.len();
        let mut acc = 0.0;
        for (c, &n) in self.counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let lo = if c == 0 { f64::NEG_INFINITY } else { s * self.q[c - 1] };
            let hi = if c == k - 1 { f64::INFINITY } else { s * self.q[c] };
            acc += n as f64 * log_norm_interval(lo, hi);
        }
        acc
    }

    fn r2(&self, w: f64) -> Option<f64> {
        let l0 = self.log_l0((1.0 + w).sqrt());
        r2_from_log_likelihoods(self.log_lm, l0).ok().map(clip_r2)
    }
}

/// The elicitation objective on a fixed bank of random numbers.
#[derive(Debug, Clone)]
pub struct R2Objective {
    alpha: DirichletConc,
    n: usize,
    seed: u64,
    keys: Vec<u64>,
    reps: Vec<Replicate>,
    uniforms: Vec<f64>,
    targets: Vec<f64>,
}

impl R2Objective {
    /// Builds the bank for `spec` on the stream identified by `keys`.
    pub fn new(spec: &ElicitationSpec, keys: &[u64]) -> Result<Self> {
        spec.validate()?;
        let mut bank_keys = vec![KEY_BANK];
        bank_keys.extend_from_slice(keys);
        let mut rng = stream(spec.seed, &bank_keys);
        let mut reps = Vec::with_capacity(spec.num_sims);
        let mut uniforms = Vec::with_capacity(spec.num_sims);
        for _ in 0..spec.num_sims {
            reps.push(Replicate::draw(&spec.alpha, spec.n, &mut rng)?);
            uniforms.push(rng.random::<f64>());
        }
        Ok(Self {
            alpha: spec.alpha.clone(),
            n: spec.n,
            seed: spec.seed,
            keys: bank_keys,
            reps,
            uniforms,
            targets: beta_midpoint_quantiles(spec.num_sims, spec.a, spec.b),
        })
    }

    /// R²_M draws under GIG(λ, ρ, χ) with this bank.
    pub fn r2_values(&self, p: &GigParams) -> Result<Vec<f64>> {
        let table = GigQuantileTable::new(p);
        let mut out = Vec::with_capacity(self.reps.len());
        for (s, (rep, &u)) in self.reps.iter().zip(&self.uniforms).enumerate() {
            let w = table.quantile(u);
            match rep.r2(w) {
                Some(v) => out.push(v),
                None => out.push(self.retry(s, w)?),
            }
        }
        Ok(out)
    }

    // Deterministic replacement replicate for a degenerate draw at this W.
    fn retry(&self, sim: usize, w: f64) -> Result<f64> {
        for attempt in 1..=MAX_REPLICATE_RETRIES as u64 {
            let mut keys = self.keys.clone();
            keys.extend_from_slice(&[KEY_RETRY, sim as u64, attempt]);
            let mut rng = stream(self.seed, &keys);
            let rep = Replicate::draw(&self.alpha, self.n, &mut rng)?;
            if let Some(v) = rep.r2(w) {
                return Ok(v);
            }
        }
        Err(Error::SamplingFailed { what: "non-degenerate R² replicate", attempts: MAX_REPLICATE_RETRIES })
    }

    /// Squared 2-Wasserstein distance to the target Beta.
    pub fn evaluate(&self, p: &GigParams) -> Result<f64> {
        Ok(w2_sq_against(self.r2_values(p)?, &self.targets))
    }
}

/// Unconstrained search coordinates for `(λ, ρ, χ)`.
pub fn params_to_search(p: &GigParams) -> Result<[f64; 3]> {
    let off = p.lambda + 0.5 - LAMBDA_EPS;
    if !(off > 0.0) {
        return Err(domain("lambda must exceed -1/2 + 1e-3"));
    }
    Ok([off.ln(), p.rho.ln(), p.chi.ln()])
}

pub fn search_to_params(u: &[f64]) -> Option<GigParams> {
    GigParams::new(-0.5 + LAMBDA_EPS + u[0].exp(), u[1].exp(), u[2].exp()).ok()
}

/// Outcome of one optimizer start.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StartResult {
    pub start: usize,
    pub initial: GigParams,
    pub initial_objective: f64,
    pub params: GigParams,
    pub objective: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Best parameters over all starts.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ElicitationResult {
    pub params: GigParams,
    pub objective: f64,
    pub starts_tried: usize,
    pub per_start_objectives: Vec<f64>,
    pub starts: Vec<StartResult>,
    /// False when no start moved away from its initial point; the best
    /// initial point is then returned as is.
    pub improved: bool,
}

/// Initial points: the reference calibration for `(a, b, K)` when one
/// exists, then log-uniform draws with `λ + 1/2 ∈ (0.1, 3.5)`,
/// `ρ ∈ (0.1, 10)`, `χ ∈ (0.01, 5)`.
pub fn start_points(spec: &ElicitationSpec) -> Vec<GigParams> {
    let mut rng = stream(spec.seed, &[KEY_STARTS]);
    let mut out = Vec::with_capacity(spec.num_starts);
    if let Some(p) = reference_calibration(spec.a, spec.b, spec.n, spec.k) {
        out.push(p);
    }
    let log_uniform = |rng: &mut crate::rng::StreamRng, lo: f64, hi: f64| (rng.random_range(lo.ln()..hi.ln())).exp();
    while out.len() < spec.num_starts {
        let lam = log_uniform(&mut rng, 0.1, 3.5) - 0.5;
        let rho = log_uniform(&mut rng, 0.1, 10.0);
        let chi = log_uniform(&mut rng, 0.01, 5.0);
        out.push(GigParams::new(lam, rho, chi).expect("positive draws"));
    }
    out.truncate(spec.num_starts);
    out
}

/// Runs start `index` from `x0` on its own random-number bank.
pub fn run_start(spec: &ElicitationSpec, index: usize, x0: &GigParams) -> Result<StartResult> {
    let obj = R2Objective::new(spec, &[index as u64])?;
    let u0 = params_to_search(x0)?;
    let mut failure: Option<Error> = None;
    let f = |u: &[f64]| -> f64 {
        match search_to_params(u) {
            Some(p) => match obj.evaluate(&p) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            None => f64::INFINITY,
        }
    };
    let opts = NelderMeadOptions { initial_step: 0.5, max_evals: spec.max_evals, f_tol: 1e-9, x_tol: 1e-4 };
    let m = nelder_mead(f, &u0, &opts);
    if !m.initial_value.is_finite() {
        if let Some(e) = failure {
            return Err(e);
        }
    }
    let params = search_to_params(&m.x).unwrap_or(*x0);
    Ok(StartResult {
        start: index,
        initial: *x0,
        initial_objective: m.initial_value,
        params,
        objective: m.value,
        evaluations: m.evaluations,
        converged: m.converged,
    })
}

/// Reduces per-start outcomes to the overall result.
pub fn merge_starts(mut starts: Vec<StartResult>) -> Result<ElicitationResult> {
    starts.sort_by_key(|s| s.start);
    let best = starts
        .iter()
        .min_by(|a, b| a.objective.total_cmp(&b.objective).then(a.start.cmp(&b.start)))
        .ok_or(Error::Empty("optimizer starts"))?;
    let improved = starts.iter().any(|s| s.objective < s.initial_objective);
    Ok(ElicitationResult {
        params: best.params,
        objective: best.objective,
        starts_tried: starts.len(),
        per_start_objectives: starts.iter().map(|s| s.objective).collect(),
        improved,
        starts,
    })
}

/// Multi-start Nelder–Mead over `(λ, ρ, χ)`, run sequentially.
pub fn optimize_gig(spec: &ElicitationSpec) -> Result<ElicitationResult> {
    spec.validate()?;
    let starts = start_points(spec)
        .iter()
        .enumerate()
        .map(|(i, p)| run_start(spec, i, p))
        .collect::<Result<Vec<_>>>()?;
    merge_starts(starts)
}

/// Histogram data for a set of R² draws plus the target density at the
/// bin centers.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub target_pdf: Vec<f64>,
}

/// Equal-width bins over `[0, 1]`; the value 1 falls in the last bin.
pub fn r2m_histogram(samples: &[f64], bins: usize, a: f64, b: f64) -> Result<Histogram> {
    if bins < 2 {
        return Err(domain("at least two bins are required"));
    }
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 / bins as f64).collect();
    let mut counts = vec![0usize; bins];
    for &v in samples {
        let i = ((v * bins as f64).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    let target_pdf = (0..bins).map(|i| beta_pdf((i as f64 + 0.5) / bins as f64, a, b)).collect();
    Ok(Histogram { edges, counts, target_pdf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gig::sample_gig;
    use crate::stats::mean;

    fn spec(n: usize, k: usize, a: f64, b: f64, sims: usize) -> ElicitationSpec {
        let mut s = ElicitationSpec::new(n, k, DirichletConc::uniform(k).unwrap(), a, b, 17).unwrap();
        s.num_sims = sims;
        s
    }

    #[test]
    fn zero_w_gives_zero_r2() {
        let s = spec(50, 3, 1.0, 1.0, 500);
        let mut rng = stream(1, &[]);
        let r = simulate_r2m(&s, |_| 0.0, &mut rng).unwrap();
        assert!(r.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn larger_w_gives_larger_r2() {
        let s = spec(100, 3, 1.0, 1.0, 2000);
        let mut rng = stream(2, &[]);
        let lo = simulate_r2m(&s, |_| 0.1, &mut rng).unwrap();
        let hi = simulate_r2m(&s, |_| 10.0, &mut rng).unwrap();
        assert!(mean(hi.values()) > mean(lo.values()) + 0.2);
    }

    #[test]
    fn wasserstein_examples() {
        let q = beta_midpoint_quantiles(1000, 2.0, 3.0);
        assert!(wasserstein2_sq_to_beta(&q, 2.0, 3.0).unwrap() < 1e-20);
        // midpoint sum of t² over m cells: 1/3 − 1/(12 m²)
        let z = vec![0.0; 1000];
        let v = wasserstein2_sq_to_beta(&z, 1.0, 1.0).unwrap();
        assert!((v - (1.0 / 3.0 - 1.0 / 12e6)).abs() < 1e-15);
        assert!(wasserstein2_sq_to_beta(&[], 1.0, 1.0).is_err());
    }

    #[test]
    fn crn_objective_matches_literal_simulation() {
        // the reduced representation must reproduce the literal law of R²
        let s = spec(100, 3, 1.0, 1.0, 4000);
        let p = GigParams::new(1.10, 1.41, 0.15).unwrap();
        let obj = R2Objective::new(&s, &[0]).unwrap();
        let crn = obj.r2_values(&p).unwrap();
        let mut rng = stream(3, &[]);
        let lit = simulate_r2m(&s, |r| sample_gig(&p, r), &mut rng).unwrap();
        let ks = crate::stats::ks_two_sample(&crn, lit.values());
        assert!(ks.p_value > 0.01, "{}", ks.p_value);
    }

    #[test]
    fn objective_is_deterministic_and_stable() {
        let s = spec(100, 5, 1.0, 1.0, 2000);
        let p = GigParams::new(0.67, 3.76, 0.14).unwrap();
        let a = R2Objective::new(&s, &[1]).unwrap().evaluate(&p).unwrap();
        let b = R2Objective::new(&s, &[1]).unwrap().evaluate(&p).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let mut s2 = s.clone();
        s2.num_sims = 4000;
        let c = R2Objective::new(&s2, &[1]).unwrap().evaluate(&p).unwrap();
        assert!((a - c).abs() < 3.0 / (2000f64).sqrt() * a.sqrt().max(0.01));
    }

    #[test]
    fn search_map_round_trips() {
        let p = GigParams::new(0.0, 1.0, 1.0).unwrap();
        let q = search_to_params(&params_to_search(&p).unwrap()).unwrap();
        assert!((p.lambda - q.lambda).abs() < 1e-12 && (p.rho - q.rho).abs() < 1e-12);
        assert!(search_to_params(&[-50.0, 0.0, 0.0]).unwrap().lambda > -0.5);
    }

    #[test]
    fn starts_use_reference_row() {
        let s = spec(100, 3, 1.0, 10.0, 100);
        let st = start_points(&s);
        assert_eq!(st.len(), 5);
        assert_eq!(st[0], GigParams::new(0.01, 1.00, 1.04).unwrap());
        assert!(st.iter().all(|p| p.lambda > -0.5));
        assert_eq!(reference_calibration(2.0, 2.0, 100, 3), None);
    }

    #[test]
    fn optimizer_is_deterministic_and_not_worse_than_start() {
        let mut s = spec(100, 3, 1.0, 1.0, 500);
        s.num_starts = 2;
        s.max_evals = 60;
        let a = optimize_gig(&s).unwrap();
        let b = optimize_gig(&s).unwrap();
        assert_eq!(a, b);
        for st in &a.starts {
            assert!(st.objective <= st.initial_objective);
        }
        assert!(a.params.lambda > -0.5);
        assert_eq!(a.objective, a.per_start_objectives.iter().cloned().fold(f64::INFINITY, f64::min));
    }

    #[test]
    fn histogram_counts() {
        let v: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let h = r2m_histogram(&v, 10, 2.0, 3.0).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 100);
        let h = r2m_histogram(&[0.0; 20], 4, 1.0, 1.0).unwrap();
        assert_eq!(h.counts, vec![20, 0, 0, 0]);
        let h = r2m_histogram(&v, 5, 2.0, 3.0).unwrap();
        for (i, &d) in h.target_pdf.iter().enumerate() {
            let x = (i as f64 + 0.5) / 5.0;
            assert!((d - 12.0 * x * (1.0 - x) * (1.0 - x)).abs() < 1e-12);
        }
        assert!(r2m_histogram(&v, 1, 1.0, 1.0).is_err());
    }
}
