//! Joint log posterior of the ordinal probit model on an unconstrained
//! parameter vector, for the GIG-calibrated prior and two baselines.
//!
//! Layout of `θ` for the R²-type priors (p coefficients, K categories):
//!
//! | block | length | meaning |
//! |-------|--------|---------|
//! | `z`   | p      | standardized coefficients, `β_j = z_j √(φ_j W)` |
//! | `y`   | p − 1  | stick-breaking logits of `φ` |
//! | `ω`   | 1      | `ln W` |
//! | `v`   | K − 1  | `τ_1`, then `ln(τ_k − τ_{k−1})` |
//!
//! The horseshoe uses `[z, ln λ², ln ν, ln τ², ln ζ, v]` with the
//! inverse-gamma decomposition of the half-Cauchy scales.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::cutpoint::{log_density_tau_grad, tau_from_pi, CategoryProbs, DirichletConc};
use crate::error::{domain, Error, Result};
use crate::gig::{gig_median, GigParams};
use crate::model::{CutPoints, OrdinalDataset};
use crate::special::{beta_quantile, ln_beta, ln_gamma, log_norm_interval, norm_log_pdf, LN_SQRT_2PI};
use crate::transform::{
    ordered_from_unconstrained, ordered_grad, ordered_to_unconstrained, simplex_from_unconstrained, simplex_grad,
    simplex_to_unconstrained,
};

/// Default Dirichlet concentration of the local weights.
pub const DEFAULT_XI0: f64 = 0.5;
/// Default variance of the sorted-normal cut-point prior (horseshoe).
pub const DEFAULT_TAU0_SQ: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Prior {
    /// `W ~ GIG(λ, ρ, χ)`, `φ ~ Dirichlet(ξ₀)`, `τ | W ~ f(τ; α)`.
    Pr2d2ord { gig: GigParams, alpha: DirichletConc, xi0: f64 },
    /// Horseshoe on `β`, sorted normal on `τ`.
    Horseshoe { tau0_sq: f64 },
    /// `W ~ BetaPrime(a, b)` with the same `φ` and `τ` blocks as `Pr2d2ord`.
    R2d2BetaPrime { a: f64, b: f64, xi0: f64, alpha: DirichletConc },
}

impl Prior {
    pub fn name(&self) -> &'static str {
        match self {
            Prior::Pr2d2ord { .. } => "pr2d2ord",
            Prior::Horseshoe { .. } => "horseshoe",
            Prior::R2d2BetaPrime { .. } => "r2d2",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSpec {
    pub prior: Prior,
    pub k: usize,
}

impl ModelSpec {
    pub fn new(prior: Prior, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain("need at least two categories"));
        }
        let pos = |v: f64, what: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(domain(&alloc::format!("{what} must be positive and finite")))
            }
        };
        match &prior {
            Prior::Pr2d2ord { gig, alpha, xi0 } => {
                GigParams::new(gig.lambda, gig.rho, gig.chi)?;
                pos(*xi0, "xi0")?;
                check_alpha_len(alpha, k)?;
            }
            Prior::Horseshoe { tau0_sq } => pos(*tau0_sq, "tau0_sq")?,
            Prior::R2d2BetaPrime { a, b, xi0, alpha } => {
                pos(*a, "a")?;
                pos(*b, "b")?;
                pos(*xi0, "xi0")?;
                check_alpha_len(alpha, k)?;
            }
        }
        Ok(Self { prior, k })
    }
}

fn check_alpha_len(alpha: &DirichletConc, k: usize) -> Result<()> {
    if alpha.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: alpha.len() });
    }
    Ok(())
}

/// Positions of each block inside `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub p: usize,
    pub k: usize,
    pub horseshoe: bool,
}

impl Layout {
    pub fn new(p: usize, spec: &ModelSpec) -> Self {
        Self { p, k: spec.k, horseshoe: matches!(spec.prior, Prior::Horseshoe { .. }) }
    }

    pub fn dim(&self) -> usize {
        self.tau_offset() + self.k - 1
    }

    pub fn tau_offset(&self) -> usize {
        if self.horseshoe {
            3 * self.p + 2
        } else {
            2 * self.p
        }
    }
}

/// Regression coefficients with their variance decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients {
    pub beta: Vec<f64>,
    pub phi: Vec<f64>,
    pub w: f64,
}

/// One draw on the natural scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedDraw {
    pub coef: Coefficients,
    pub tau: Vec<f64>,
}

/// The posterior of one dataset under one model.
#[derive(Debug, Clone)]
pub struct Posterior<'a> {
    data: &'a OrdinalDataset,
    spec: &'a ModelSpec,
    layout: Layout,
    // additive constant of the prior, so values are normalized log joints
    prior_const: f64,
}

#[inline]
fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl<'a> Posterior<'a> {
    pub fn new(data: &'a OrdinalDataset, spec: &'a ModelSpec) -> Result<Self> {
        if data.k() != spec.k {
            return Err(Error::DimensionMismatch { expected: spec.k, found: data.k() });
        }
        if data.p() == 0 {
            return Err(Error::Empty("covariates"));
        }
        let layout = Layout::new(data.p(), spec);
        let p = data.p() as f64;
        let z_const = -p * LN_SQRT_2PI;
        let dir_const = |xi0: f64| ln_gamma(p * xi0) - p * ln_gamma(xi0);
        let prior_const = match &spec.prior {
            Prior::Pr2d2ord { gig, xi0, .. } => z_const + dir_const(*xi0) + gig.log_normalizer(),
            Prior::R2d2BetaPrime { a, b, xi0, .. } => z_const + dir_const(*xi0) - ln_beta(*a, *b),
            Prior::Horseshoe { tau0_sq } => {
                let m = (spec.k - 1) as f64;
                // 2p + 2 inverse-gamma(1/2) factors, each with 1/Γ(1/2)
                let ig = -(2.0 * p + 2.0) * 0.5 * core::f64::consts::PI.ln();
                z_const + ig + ln_gamma(m + 1.0) - m * (LN_SQRT_2PI + 0.5 * tau0_sq.ln())
            }
        };
        Ok(Self { data, spec, layout, prior_const })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn data(&self) -> &OrdinalDataset {
        self.data
    }

    pub fn spec(&self) -> &ModelSpec {
        self.spec
    }

    /// Log-likelihood and its gradient with respect to `β` and `τ`
    /// (accumulated into the output slices).
    fn likelihood(&self, beta: &[f64], tau: &[f64], g_beta: &mut [f64], g_tau: &mut [f64]) -> f64 {
        let x = self.data.x();
        let k = self.data.k();
        let mut total = 0.0;
        for (i, &yi) in self.data.y().iter().enumerate() {
            let row = x.row(i);
            let eta: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
            let lo = if yi == 1 { f64::NEG_INFINITY } else { tau[yi - 2] - eta };
            let hi = if yi == k { f64::INFINITY } else { tau[yi - 1] - eta };
            let lp = log_norm_interval(lo, hi);
            if !(lp > f64::NEG_INFINITY) {
                return f64::NEG_INFINITY;
            }
            total += lp;
            let d_hi = if yi < k { (norm_log_pdf(hi) - lp).exp() } else { 0.0 };
            let d_lo = if yi > 1 { (norm_log_pdf(lo) - lp).exp() } else { 0.0 };
            if yi < k {
                g_tau[yi - 1] += d_hi;
            }
            if yi > 1 {
                g_tau[yi - 2] -= d_lo;
            }
            let g_eta = d_lo - d_hi;
            for (g, xv) in g_beta.iter_mut().zip(row) {
                *g += g_eta * xv;
            }
        }
        total
    }

    /// Log joint density at `θ`, writing the gradient into `grad`.
    /// Returns `-∞` (and a zero gradient) outside the support or for
    /// non-finite input.
    pub fn log_density(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        if theta.len() != self.layout.dim() || theta.iter().any(|v| !v.is_finite()) {
            return f64::NEG_INFINITY;
        }
        let lp = match &self.spec.prior {
            Prior::Horseshoe { tau0_sq } => self.horseshoe(theta, *tau0_sq, grad),
            _ => self.r2_family(theta, grad),
        };
        if lp.is_finite() && grad.iter().all(|g| g.is_finite()) {
            lp + self.prior_const
        } else {
            grad.iter_mut().for_each(|g| *g = 0.0);
            f64::NEG_INFINITY
        }
    }

    fn r2_family(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let p = self.layout.p;
        let (alpha, xi0) = match &self.spec.prior {
            Prior::Pr2d2ord { alpha, xi0, .. } | Prior::R2d2BetaPrime { alpha, xi0, .. } => (alpha, *xi0),
            Prior::Horseshoe { .. } => unreachable!(),
        };
        let z = &theta[..p];
        let yl = &theta[p..2 * p - 1];
        let omega = theta[2 * p - 1];
        let v = &theta[2 * p..];
        let w = omega.exp();
        if !(w > 0.0) || !w.is_finite() {
            return f64::NEG_INFINITY;
        }
        let s = simplex_from_unconstrained(yl);
        let scale: Vec<f64> = s.log_phi.iter().map(|lp| (0.5 * (lp + omega)).exp()).collect();
        let beta: Vec<f64> = z.iter().zip(&scale).map(|(a, b)| a * b).collect();
        let (tau, jac_tau) = ordered_from_unconstrained(v);
        let Ok(cuts) = CutPoints::new(tau) else {
            return f64::NEG_INFINITY;
        };
        let Ok(tg) = log_density_tau_grad(&cuts, alpha, w) else {
            return f64::NEG_INFINITY;
        };
        if !tg.value.is_finite() {
            return f64::NEG_INFINITY;
        }
        let mut g_beta = vec![0.0; p];
        let mut g_tau = tg.d_tau.clone();
        let ll = self.likelihood(&beta, cuts.as_slice(), &mut g_beta, &mut g_tau);
        if !ll.is_finite() {
            return f64::NEG_INFINITY;
        }
        let (w_lp, w_grad) = match &self.spec.prior {
            Prior::Pr2d2ord { gig, .. } => {
                (gig.lambda * omega - 0.5 * (gig.rho * w + gig.chi / w), gig.lambda - 0.5 * gig.rho * w + 0.5 * gig.chi / w)
            }
            Prior::R2d2BetaPrime { a, b, .. } => {
                // W / (1 + W) without overflow
                let frac = 1.0 / (1.0 + (-omega).exp());
                (a * omega - (a + b) * softplus(omega), a - (a + b) * frac)
            }
            Prior::Horseshoe { .. } => unreachable!(),
        };
        let mut lp = -0.5 * z.iter().map(|v| v * v).sum::<f64>();
        lp += (xi0 - 1.0) * s.log_phi.iter().sum::<f64>() + s.log_jacobian;
        lp += w_lp + tg.value + jac_tau + ll;

        let mut h = vec![0.0; p];
        let mut d_omega = w_grad + tg.d_w * w;
        for j in 0..p {
            grad[j] = -z[j] + g_beta[j] * scale[j];
            let half = 0.5 * g_beta[j] * beta[j];
            h[j] = half + (xi0 - 1.0);
            d_omega += half;
        }
        simplex_grad(&s, &h, &mut grad[p..2 * p - 1]);
        grad[2 * p - 1] = d_omega;
        ordered_grad(v, &g_tau, &mut grad[2 * p..]);
        lp
    }

    fn horseshoe(&self, theta: &[f64], tau0_sq: f64, grad: &mut [f64]) -> f64 {
        let p = self.layout.p;
        let z = &theta[..p];
        let l = &theta[p..2 * p];
        let m = &theta[2 * p..3 * p];
        let g = theta[3 * p];
        let h = theta[3 * p + 1];
        let v = &theta[3 * p + 2..];
        let scale: Vec<f64> = l.iter().map(|lj| (0.5 * (lj + g)).exp()).collect();
        let beta: Vec<f64> = z.iter().zip(&scale).map(|(a, b)| a * b).collect();
        let (tau, jac_tau) = ordered_from_unconstrained(v);
        let Ok(cuts) = CutPoints::new(tau) else {
            return f64::NEG_INFINITY;
        };
        let mut g_beta = vec![0.0; p];
        let mut g_tau: Vec<f64> = cuts.as_slice().iter().map(|t| -t / tau0_sq).collect();
        let ll = self.likelihood(&beta, cuts.as_slice(), &mut g_beta, &mut g_tau);
        if !ll.is_finite() {
            return f64::NEG_INFINITY;
        }
        let mut lp = ll + jac_tau - 0.5 * cuts.as_slice().iter().map(|t| t * t).sum::<f64>() / tau0_sq;
        lp -= 0.5 * z.iter().map(|v| v * v).sum::<f64>();
        let mut d_g = 0.0;
        for j in 0..p {
            // λ² | ν ~ IG(1/2, 1/ν), ν ~ IG(1/2, 1), both on the log scale
            let e_lm = (-l[j] - m[j]).exp();
            let e_m = (-m[j]).exp();
            lp += -0.5 * m[j] - 0.5 * l[j] - e_lm - 0.5 * m[j] - e_m;
            grad[j] = -z[j] + g_beta[j] * scale[j];
            let half = 0.5 * g_beta[j] * beta[j];
            grad[p + j] = half - 0.5 + e_lm;
            grad[2 * p + j] = -1.0 + e_lm + e_m;
            d_g += half;
        }
        let e_gh = (-g - h).exp();
        let e_h = (-h).exp();
        lp += -0.5 * h - 0.5 * g - e_gh - 0.5 * h - e_h;
        grad[3 * p] = d_g - 0.5 + e_gh;
        grad[3 * p + 1] = -1.0 + e_gh + e_h;
        ordered_grad(v, &g_tau, &mut grad[3 * p + 2..]);
        lp
    }

    /// Maps `θ` to `(β, φ, W, τ)`. For the horseshoe `W = τ² Σ λ_j²` and
    /// `φ_j = λ_j² / Σ λ²`.
    pub fn constrain(&self, theta: &[f64]) -> ConstrainedDraw {
        let p = self.layout.p;
        if self.layout.horseshoe {
            let l = &theta[p..2 * p];
            let g = theta[3 * p];
            let beta: Vec<f64> = (0..p).map(|j| theta[j] * (0.5 * (l[j] + g)).exp()).collect();
            let lse = log_sum_exp(l);
            let phi: Vec<f64> = l.iter().map(|lj| (lj - lse).exp()).collect();
            let w = (g + lse).exp();
            let (tau, _) = ordered_from_unconstrained(&theta[3 * p + 2..]);
            ConstrainedDraw { coef: Coefficients { beta, phi, w }, tau }
        } else {
            let s = simplex_from_unconstrained(&theta[p..2 * p - 1]);
            let omega = theta[2 * p - 1];
            let beta: Vec<f64> = (0..p).map(|j| theta[j] * (0.5 * (s.log_phi[j] + omega)).exp()).collect();
            let (tau, _) = ordered_from_unconstrained(&theta[2 * p..]);
            ConstrainedDraw { coef: Coefficients { beta, phi: s.phi(), w: omega.exp() }, tau }
        }
    }

    /// Inverse of [`Posterior::constrain`] for the R²-type priors. The
    /// horseshoe map is many-to-one, so it has no inverse.
    pub fn unconstrain(&self, draw: &ConstrainedDraw) -> Result<Vec<f64>> {
        if self.layout.horseshoe {
            return Err(domain("the horseshoe parameterization is not invertible"));
        }
        let c = &draw.coef;
        let p = self.layout.p;
        if c.beta.len() != p || c.phi.len() != p {
            return Err(Error::DimensionMismatch { expected: p, found: c.beta.len() });
        }
        if !(c.w > 0.0) {
            return Err(domain("W must be positive"));
        }
        let mut theta: Vec<f64> = (0..p).map(|j| c.beta[j] / (c.phi[j] * c.w).sqrt()).collect();
        theta.extend(simplex_to_unconstrained(&c.phi)?);
        theta.push(c.w.ln());
        theta.extend(ordered_to_unconstrained(&draw.tau)?);
        Ok(theta)
    }

    /// Prior median of `W` (zero-dimensional for the horseshoe).
    pub fn prior_median_w(&self) -> Result<f64> {
        match &self.spec.prior {
            Prior::Pr2d2ord { gig, .. } => Ok(gig_median(gig)),
            Prior::R2d2BetaPrime { a, b, .. } => {
                let q = beta_quantile(0.5, *a, *b);
                Ok(q / (1.0 - q))
            }
            Prior::Horseshoe { .. } => Ok(1.0),
        }
    }

    /// Deterministic starting point: `β = 0`, uniform `φ`, `W` at its prior
    /// median and cut-points matching the smoothed empirical category
    /// frequencies.
    pub fn initial_point(&self) -> Result<Vec<f64>> {
        let (p, k) = (self.layout.p, self.layout.k);
        let counts = self.data.category_counts();
        let n = self.data.n() as f64;
        let freq: Vec<f64> = counts.iter().map(|&c| (c as f64 + 0.5) / (n + 0.5 * k as f64)).collect();
        let pi = CategoryProbs::new(freq)?;
        let mut theta = vec![0.0; self.layout.dim()];
        let w0 = self.prior_median_w()?;
        if self.layout.horseshoe {
            let tau = tau_from_pi(&pi, 0.0)?;
            let v = ordered_to_unconstrained(tau.as_slice())?;
            theta[3 * p + 2..].copy_from_slice(&v);
        } else {
            if !(w0 > 0.0) || !w0.is_finite() {
                return Err(domain("prior median of W is not positive"));
            }
            theta[2 * p - 1] = w0.ln();
            let tau = tau_from_pi(&pi, w0)?;
            let v = ordered_to_unconstrained(tau.as_slice())?;
            theta[2 * p..].copy_from_slice(&v);
        }
        Ok(theta)
    }
}

impl crate::nuts::LogDensity for Posterior<'_> {
    fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn log_density_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        self.log_density(theta, grad)
    }
}

/// Convenience wrapper returning the log density and a fresh gradient.
pub fn log_posterior(theta: &[f64], data: &OrdinalDataset, spec: &ModelSpec) -> Result<(f64, Vec<f64>)> {
    let post = Posterior::new(data, spec)?;
    if theta.len() != post.layout.dim() {
        return Err(Error::DimensionMismatch { expected: post.layout.dim(), found: theta.len() });
    }
    let mut g = vec![0.0; theta.len()];
    let lp = post.log_density(theta, &mut g);
    Ok((lp, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::rng::stream;
    use crate::testutil::richardson;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn toy(n: usize, p: usize, k: usize, seed: u64) -> OrdinalDataset {
        let mut rng = stream(seed, &[]);
        let x: Vec<f64> = (0..n * p).map(|_| rng.sample(StandardNormal)).collect();
        let y: Vec<usize> = (0..n).map(|_| rng.random_range(1..=k)).collect();
        OrdinalDataset::new(Matrix::from_row_major(n, p, x).unwrap(), y, k).unwrap()
    }

    fn specs(k: usize) -> Vec<ModelSpec> {
        let alpha = DirichletConc::uniform(k).unwrap();
        vec![
            ModelSpec::new(
                Prior::Pr2d2ord { gig: GigParams::new(1.1, 1.41, 0.15).unwrap(), alpha: alpha.clone(), xi0: 0.5 },
                k,
            )
            .unwrap(),
            ModelSpec::new(Prior::Horseshoe { tau0_sq: 10.0 }, k).unwrap(),
            ModelSpec::new(Prior::R2d2BetaPrime { a: 1.0, b: 2.0, xi0: 0.7, alpha }, k).unwrap(),
        ]
    }

    fn random_theta<R: Rng>(post: &Posterior, rng: &mut R) -> Vec<f64> {
        let l = post.layout();
        let mut t: Vec<f64> = (0..l.dim()).map(|_| rng.random_range(-1.5..1.5)).collect();
        // sensible cut-point spacing
        let off = l.tau_offset();
        for v in &mut t[off + 1..] {
            *v = rng.random_range(-0.7..0.7);
        }
        t
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let data = toy(20, 5, 3, 1);
        let mut rng = stream(2, &[]);
        for spec in specs(3) {
            let post = Posterior::new(&data, &spec).unwrap();
            let d = post.layout().dim();
            let mut worst: f64 = 0.0;
            for _ in 0..100 {
                let theta = random_theta(&post, &mut rng);
                let mut g = vec![0.0; d];
                let lp = post.log_density(&theta, &mut g);
                assert!(lp.is_finite());
                for i in 0..d {
                    let f = |x: f64| {
                        let mut t = theta.clone();
                        t[i] = x;
                        post.log_density(&t, &mut vec![0.0; d])
                    };
                    let fd = richardson(f, theta[i], 1e-3);
                    let rel = (fd - g[i]).abs() / g[i].abs().max(fd.abs()).max(1.0);
                    worst = worst.max(rel);
                }
            }
            assert!(worst < 1e-5, "{}: {worst}", spec.prior.name());
        }
    }

    #[test]
    fn permuting_observations_is_invariant() {
        let data = toy(25, 4, 4, 3);
        let n = data.n();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
        let rows: Vec<Vec<f64>> = perm.iter().map(|&i| data.x().row(i).to_vec()).collect();
        let y: Vec<usize> = perm.iter().map(|&i| data.y()[i]).collect();
        let shuffled = OrdinalDataset::new(Matrix::from_rows(&rows).unwrap(), y, 4).unwrap();
        let mut rng = stream(4, &[]);
        for spec in specs(4) {
            let a = Posterior::new(&data, &spec).unwrap();
            let b = Posterior::new(&shuffled, &spec).unwrap();
            let theta = random_theta(&a, &mut rng);
            let d = theta.len();
            let (la, lb) = (a.log_density(&theta, &mut vec![0.0; d]), b.log_density(&theta, &mut vec![0.0; d]));
            assert!((la - lb).abs() < 1e-10 * la.abs().max(1.0));
        }
    }

    #[test]
    fn non_finite_theta_is_rejected() {
        let data = toy(5, 2, 3, 5);
        for spec in specs(3) {
            let post = Posterior::new(&data, &spec).unwrap();
            let d = post.layout().dim();
            let mut theta = vec![0.0; d];
            theta[0] = f64::NAN;
            let mut g = vec![1.0; d];
            assert_eq!(post.log_density(&theta, &mut g), f64::NEG_INFINITY);
            assert!(g.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constrain_round_trip() {
        let data = toy(10, 4, 3, 6);
        let mut rng = stream(7, &[]);
        for spec in specs(3).into_iter().filter(|s| s.prior.name() != "horseshoe") {
            let post = Posterior::new(&data, &spec).unwrap();
            for _ in 0..50 {
                let theta = random_theta(&post, &mut rng);
                let c = post.constrain(&theta);
                assert!((c.coef.phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                let back = post.unconstrain(&c).unwrap();
                for (a, b) in back.iter().zip(&theta) {
                    assert!((a - b).abs() < 1e-12, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn initial_point_is_feasible() {
        let data = toy(30, 3, 5, 8);
        for spec in specs(5) {
            let post = Posterior::new(&data, &spec).unwrap();
            let theta = post.initial_point().unwrap();
            let c = post.constrain(&theta);
            assert!(c.coef.beta.iter().all(|&b| b == 0.0));
            assert!(post.log_density(&theta, &mut vec![0.0; theta.len()]).is_finite());
        }
        let empty = OrdinalDataset::empty(3, 3).unwrap();
        for spec in specs(3) {
            let post = Posterior::new(&empty, &spec).unwrap();
            let theta = post.initial_point().unwrap();
            assert!(post.log_density(&theta, &mut vec![0.0; theta.len()]).is_finite());
        }
    }

    // with a single coefficient and no data the z, y and τ blocks
    // integrate out, leaving the normalized W prior
    #[test]
    fn prior_constant_normalizes_w_margin() {
        let empty = OrdinalDataset::empty(1, 2).unwrap();
        for spec in specs(2).into_iter().filter(|s| s.prior.name() != "horseshoe") {
            let post = Posterior::new(&empty, &spec).unwrap();
            let tau = CutPoints::new(vec![0.0]).unwrap();
            let alpha = DirichletConc::uniform(2).unwrap();
            let f = |omega: f64| {
                if !(omega.abs() < 700.0) {
                    return 0.0;
                }
                let lp = post.log_density(&[0.0, omega, 0.0], &mut [0.0; 3]);
                // remove the z density at 0 and the τ density
                let cut = log_density_tau_grad(&tau, &alpha, omega.exp()).unwrap().value;
                (lp + LN_SQRT_2PI - cut).exp()
            };
            let (v, _) = crate::quad::integrate_real_line(f, 1e-12, 1e-10);
            assert!((v - 1.0).abs() < 1e-7, "{} {v}", spec.prior.name());
        }
    }
}
