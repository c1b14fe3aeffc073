//! Dirichlet-induced prior on ordered cut-points.
//!
//! Given `W`, the cut-points determine marginal category probabilities
//! `π_k = Φ_W(τ_k) − Φ_W(τ_{k−1})`. Placing `π ~ Dirichlet(α)` and changing
//! variables gives a density on `τ`. The Jacobian of `τ ↦ (π_1..π_{K−1})`
//! is lower bidiagonal with diagonal `φ_W(τ_j)`, so its log-determinant is
//! a plain sum.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{domain, Error, Result};
use crate::model::CutPoints;
use crate::special::{ln_gamma, log_norm_interval, norm_log_pdf, norm_quantile, LN_SQRT_2PI};

/// Lower clamp for cumulative probabilities before the normal quantile.
const CUM_CLAMP: f64 = 1e-15;
const MAX_DIRICHLET_ATTEMPTS: usize = 100;

/// Category probabilities, strictly positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CategoryProbs(Vec<f64>);

impl CategoryProbs {
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.len() < 2 {
            return Err(domain("at least two category probabilities are required"));
        }
        if pi.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(domain("category probabilities must be strictly positive"));
        }
        let s: f64 = pi.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(domain("category probabilities must sum to one"));
        }
        Ok(Self(pi))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Dirichlet concentration vector.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DirichletConc(Vec<f64>);

impl DirichletConc {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.len() < 2 {
            return Err(domain("a Dirichlet needs at least two components"));
        }
        if alpha.iter().any(|&a| !(a > 0.0) || !a.is_finite()) {
            return Err(domain("Dirichlet concentrations must be positive and finite"));
        }
        Ok(Self(alpha))
    }

    /// All-ones concentration over `k` categories.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ln Γ(Σα) − Σ ln Γ(α_k)`
    pub fn log_normalizer(&self) -> f64 {
        let total: f64 = self.0.iter().sum();
        ln_gamma(total) - self.0.iter().map(|&a| ln_gamma(a)).sum::<f64>()
    }

    /// One draw from the Dirichlet by normalizing independent Gamma
    /// variates. May contain exact zeros when some `α_k` is tiny.
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut g: Vec<f64> = self
            .0
            .iter()
            .map(|&a| Gamma::new(a, 1.0).expect("validated shape").sample(rng))
            .collect();
        let s: f64 = g.iter().sum();
        for v in &mut g {
            *v /= s;
        }
        g
    }
}

fn check_w(w: f64) -> Result<f64> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(domain("W must be finite and non-negative"));
    }
    Ok((1.0 + w).sqrt())
}

/// Marginal category probabilities implied by `τ` at global variance `W`.
pub fn pi_from_tau(tau: &CutPoints, w: f64) -> Result<CategoryProbs> {
    let p = crate::model::category_pmf_given_w(tau, w)?;
    // built directly: extreme cut-points may legitimately give zero mass
    Ok(CategoryProbs(p))
}

/// Inverse of [`pi_from_tau`]: `τ_k = √(1+W) Φ⁻¹(π_1 + … + π_k)`.
///
/// Cumulative sums above one half are taken from the upper tail so that
/// both tails keep full relative precision.
pub fn tau_from_pi(pi: &CategoryProbs, w: f64) -> Result<CutPoints> {
    let s = check_w(w)?;
    let p = pi.as_slice();
    let k = p.len();
    let mut lower = 0.0;
    let mut tau = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        lower += p[j];
        let upper: f64 = p[j + 1..].iter().sum();
        if lower <= 0.0 || upper <= 0.0 {
            return Err(domain("cumulative probability reached 0 or 1"));
        }
        let z = if lower <= 0.5 {
            norm_quantile(lower.clamp(CUM_CLAMP, 1.0 - CUM_CLAMP))
        } else {
            -norm_quantile(upper.clamp(CUM_CLAMP, 1.0 - CUM_CLAMP))
        };
        tau.push(s * z);
    }
    CutPoints::new(tau)
}

fn check_alpha(alpha: &DirichletConc, tau: &[f64]) -> Result<()> {
    if alpha.len() != tau.len() + 1 {
        return Err(Error::DimensionMismatch { expected: tau.len() + 1, found: alpha.len() });
    }
    Ok(())
}

/// `ln f(τ | W, α)`: Dirichlet log-density at `π(τ)` plus `Σ ln φ_W(τ_j)`.
///
/// Takes a raw slice so that unordered input can be scored as `-∞`.
pub fn log_density_tau(tau: &[f64], alpha: &DirichletConc, w: f64) -> Result<f64> {
    let s = check_w(w)?;
    check_alpha(alpha, tau)?;
    if tau.is_empty() || tau.iter().any(|t| !t.is_finite()) || tau.windows(2).any(|p| !(p[0] < p[1])) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(eval_log_density(tau, alpha, s, None))
}

/// `ln |det ∂(π_1..π_{K−1})/∂τ| = Σ_j ln φ_W(τ_j)`, where `φ_W` is the
/// N(0, 1+W) density.
pub fn log_jacobian_tau(tau: &CutPoints, w: f64) -> Result<f64> {
    let s = check_w(w)?;
    Ok(tau.as_slice().iter().map(|&t| norm_log_pdf(t / s) - s.ln()).sum())
}

/// Gradient of [`log_density_tau`] with respect to `τ` and `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauDensityGrad {
    pub value: f64,
    pub d_tau: Vec<f64>,
    pub d_w: f64,
}

/// [`log_density_tau`] together with its gradient; `tau` must be ordered.
pub fn log_density_tau_grad(tau: &CutPoints, alpha: &DirichletConc, w: f64) -> Result<TauDensityGrad> {
    let s = check_w(w)?;
    let t = tau.as_slice();
    check_alpha(alpha, t)?;
    let mut d_a = alloc::vec![0.0; t.len()];
    let value = eval_log_density(t, alpha, s, Some(&mut d_a));
    // a_j = τ_j / s, so ∂a_j/∂τ_j = 1/s and ∂a_j/∂W = −a_j / (2 s²)
    let s2 = s * s;
    let mut d_w = -(t.len() as f64) / (2.0 * s2);
    let mut d_tau = Vec::with_capacity(t.len());
    for (j, &g) in d_a.iter().enumerate() {
        let a = t[j] / s;
        d_tau.push(g / s);
        d_w -= g * a / (2.0 * s2);
    }
    Ok(TauDensityGrad { value, d_tau, d_w })
}

// Evaluates the density on the standardized scale a = τ / s, optionally
// accumulating ∂/∂a_j (excluding the −ln s Jacobian constant, whose W
// derivative the caller adds).
fn eval_log_density(t: &[f64], alpha: &DirichletConc, s: f64, mut d_a: Option<&mut [f64]>) -> f64 {
    let k = t.len() + 1;
    let al = alpha.as_slice();
    let a = |j: usize| -> f64 {
        // bound j in 0..=K on the standardized scale
        if j == 0 {
            f64::NEG_INFINITY
        } else if j == k {
            f64::INFINITY
        } else {
            t[j - 1] / s
        }
    };
    let mut value = alpha.log_normalizer();
    for c in 0..k {
        let (lo, hi) = (a(c), a(c + 1));
        let lp = log_norm_interval(lo, hi);
        if lp == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let coef = al[c] - 1.0;
        value += coef * lp;
        if let Some(g) = d_a.as_deref_mut() {
            if coef != 0.0 {
                if c + 1 < k {
                    g[c] += coef * (norm_log_pdf(hi) - lp).exp();
                }
                if c > 0 {
                    g[c - 1] -= coef * (norm_log_pdf(lo) - lp).exp();
                }
            }
        }
    }
    let ln_s = s.ln();
    for j in 0..k - 1 {
        let aj = t[j] / s;
        value += -0.5 * aj * aj - LN_SQRT_2PI - ln_s;
        if let Some(g) = d_a.as_deref_mut() {
            g[j] -= aj;
        }
    }
    value
}

/// Draws `τ ~ f(τ | W, α)` by drawing `π ~ Dirichlet(α)` and mapping it
/// through [`tau_from_pi`]. Degenerate Dirichlet draws are redrawn.
pub fn sample_tau<R: Rng + ?Sized>(alpha: &DirichletConc, w: f64, rng: &mut R) -> Result<CutPoints> {
    check_w(w)?;
    for _ in 0..MAX_DIRICHLET_ATTEMPTS {
        let pi = alpha.sample_raw(rng);
        if pi.iter().any(|&v| !(v > 0.0)) {
            continue;
        }
        if let Ok(tau) = tau_from_pi(&CategoryProbs(pi), w) {
            return Ok(tau);
        }
    }
    Err(Error::SamplingFailed { what: "Dirichlet cut-point draw", attempts: MAX_DIRICHLET_ATTEMPTS })
}

/// Draws a strictly positive Dirichlet vector, redrawing degenerate ones.
pub fn sample_dirichlet_positive<R: Rng + ?Sized>(alpha: &DirichletConc, rng: &mut R) -> Result<CategoryProbs> {
    for _ in 0..MAX_DIRICHLET_ATTEMPTS {
        let pi = alpha.sample_raw(rng);
        if pi.iter().all(|&v| v > 0.0) {
            return Ok(CategoryProbs(pi));
        }
    }
    Err(Error::SamplingFailed { what: "Dirichlet draw", attempts: MAX_DIRICHLET_ATTEMPTS })
}
