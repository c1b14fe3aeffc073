//! Cumulative probit model primitives.
//!
//! A latent `Ỹ ~ Normal(η, 1)` is binned by ordered cut-points into labels
//! `1..=K`. Integrating `η ~ Normal(0, W)` out gives the marginal
//! `Ỹ ~ Normal(0, 1 + W)`, whose CDF is [`phi_w_cdf`]. McFadden's
//! pseudo-R² compares the marginal likelihood at `W` with the null model
//! `W = 0`.
//!
//! Labels are 1-based everywhere in the public API; internal arrays are
//! 0-based.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::special::{log_norm_interval, norm_cdf};

/// Observed covariates and ordinal responses.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrdinalDataset {
    x: Matrix,
    y: Vec<usize>,
    k: usize,
}

impl OrdinalDataset {
    pub fn new(x: Matrix, y: Vec<usize>, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain("at least two response categories are required"));
        }
        if x.rows() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.rows(), found: y.len() });
        }
        validate_labels(&y, k)?;
        Ok(Self { x, y, k })
    }

    /// A dataset with no observations; the posterior then equals the prior.
    pub fn empty(p: usize, k: usize) -> Result<Self> {
        Self::new(Matrix::zeros(0, p), Vec::new(), k)
    }

    #[inline]
    pub fn x(&self) -> &Matrix {
        &self.x
    }

    #[inline]
    pub fn y(&self) -> &[usize] {
        &self.y
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.y.len()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.x.cols()
    }

    /// Number of observations per category, index 0 holding label 1.
    pub fn category_counts(&self) -> Vec<usize> {
        category_counts(&self.y, self.k)
    }
}

pub(crate) fn validate_labels(y: &[usize], k: usize) -> Result<()> {
    match y.iter().find(|&&l| l == 0 || l > k) {
        Some(&label) => Err(Error::LabelOutOfRange { label, k }),
        None => Ok(()),
    }
}

pub fn category_counts(y: &[usize], k: usize) -> Vec<usize> {
    let mut c = vec![0usize; k];
    for &l in y {
        if (1..=k).contains(&l) {
            c[l - 1] += 1;
        }
    }
    c
}

/// Strictly increasing cut-points `τ_1 < … < τ_{K-1}`; the sentinels
/// `τ_0 = -∞` and `τ_K = +∞` are implicit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CutPoints(Vec<f64>);

impl CutPoints {
    pub fn new(tau: Vec<f64>) -> Result<Self> {
        if tau.is_empty() {
            return Err(Error::Empty("cut-points"));
        }
        if tau.iter().any(|t| !t.is_finite()) || tau.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::UnorderedCutPoints);
        }
        Ok(Self(tau))
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Number of categories `K`.
    #[inline]
    pub fn categories(&self) -> usize {
        self.0.len() + 1
    }

    /// `τ_k` for `k = 0..=K` including the infinite sentinels.
    #[inline]
    pub fn bound(&self, k: usize) -> f64 {
        if k == 0 {
            f64::NEG_INFINITY
        } else if k > self.0.len() {
            f64::INFINITY
        } else {
            self.0[k - 1]
        }
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// Linear predictor `η = Xβ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPredictor(Vec<f64>);

impl LinearPredictor {
    pub fn new(eta: Vec<f64>) -> Result<Self> {
        if eta.iter().any(|e| !e.is_finite()) {
            return Err(domain("linear predictor entries must be finite"));
        }
        Ok(Self(eta))
    }

    pub fn from_coefficients(x: &Matrix, beta: &[f64]) -> Result<Self> {
        Self::new(x.mul_vec(beta)?)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn check_w(w: f64) -> Result<()> {
    if !(w >= 0.0) || !w.is_finite() {
        return Err(domain("W must be finite and non-negative"));
    }
    Ok(())
}

/// CDF of `Normal(0, 1 + W)` at `t`.
pub fn phi_w_cdf(t: f64, w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(norm_cdf(t / (1.0 + w).sqrt()))
}

fn pmf_from_cdf<F: Fn(f64) -> f64>(tau: &CutPoints, cdf: F, sf: impl Fn(f64) -> f64) -> Vec<f64> {
    let k = tau.categories();
    let t = tau.as_slice();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let lo = if j == 0 { f64::NEG_INFINITY } else { t[j - 1] };
        let hi = if j == k - 1 { f64::INFINITY } else { t[j] };
        // difference taken in whichever tail avoids cancellation
        let v = if lo >= 0.0 { sf(lo) - sf(hi) } else { cdf(hi) - cdf(lo) };
        out.push(v.max(0.0));
    }
    out
}

/// `P(Y = k | η) = Φ(τ_k − η) − Φ(τ_{k−1} − η)` for `k = 1..=K`.
pub fn category_pmf_given_eta(tau: &CutPoints, eta: f64) -> Vec<f64> {
    pmf_from_cdf(tau, |t| norm_cdf(t - eta), |t| norm_cdf(eta - t))
}

/// `P(Y = k | W) = Φ_W(τ_k) − Φ_W(τ_{k−1})`, the law of `Y` with `η`
/// integrated out.
pub fn category_pmf_given_w(tau: &CutPoints, w: f64) -> Result<Vec<f64>> {
    check_w(w)?;
    let s = (1.0 + w).sqrt();
    Ok(pmf_from_cdf(tau, |t| norm_cdf(t / s), |t| norm_cdf(-t / s)))
}

/// Log of each category probability under `Normal(0, 1 + W)`, computed in
/// log space so deep-tail categories stay finite.
pub fn log_category_probs_given_w(tau: &CutPoints, w: f64) -> Result<Vec<f64>> {
    check_w(w)?;
    let s = (1.0 + w).sqrt();
    Ok((1..=tau.categories()).map(|k| log_norm_interval(tau.bound(k - 1) / s, tau.bound(k) / s)).collect())
}

fn check_labels_against(y: &[usize], tau: &CutPoints) -> Result<()> {
    validate_labels(y, tau.categories())
}

/// `Σ_i ln P(Y_i | W)`; `-∞` when an observed category has zero mass.
pub fn log_likelihood_full(y: &[usize], tau: &CutPoints, w: f64) -> Result<f64> {
    check_labels_against(y, tau)?;
    let logp = log_category_probs_given_w(tau, w)?;
    let counts = category_counts(y, tau.categories());
    Ok(weighted_log_lik(&counts, &logp))
}

/// Null-model log-likelihood, the full likelihood at `W = 0`.
pub fn log_likelihood_null(y: &[usize], tau: &CutPoints) -> Result<f64> {
    log_likelihood_full(y, tau, 0.0)
}

pub(crate) fn weighted_log_lik(counts: &[usize], logp: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&c, &lp) in counts.iter().zip(logp) {
        if c > 0 {
            if lp == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            acc += c as f64 * lp;
        }
    }
    acc
}

/// McFadden's pseudo-R², `1 − ln L_M / ln L_0`.
pub fn mcfadden_r2(y: &[usize], tau: &CutPoints, w: f64) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::Empty("responses"));
    }
    let l0 = log_likelihood_null(y, tau)?;
    let lm = log_likelihood_full(y, tau, w)?;
    r2_from_log_likelihoods(lm, l0)
}

pub(crate) fn r2_from_log_likelihoods(lm: f64, l0: f64) -> Result<f64> {
    if l0 == 0.0 || l0.is_nan() {
        return Err(Error::DegenerateNullLikelihood);
    }
    if lm == l0 {
        return Ok(0.0);
    }
    Ok(1.0 - lm / l0)
}

/// Label of a latent value under the binning rule
/// `Y = k ⇔ τ_{k−1} ≤ Ỹ < τ_k`.
#[inline]
pub fn bin_latent(latent: f64, tau: &[f64]) -> usize {
    // number of cut-points <= latent, plus one
    tau.partition_point(|&t| t <= latent) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use crate::testutil::oracle_phi;

    fn tau(v: &[f64]) -> CutPoints {
        CutPoints::new(v.to_vec()).unwrap()
    }

    #[test]
    fn phi_w_examples() {
        assert_eq!(phi_w_cdf(0.0, 0.0).unwrap(), 0.5);
        assert_relative_eq!(phi_w_cdf(1.0, 3.0).unwrap(), 0.69146, epsilon = 1e-5);
        assert_relative_eq!(phi_w_cdf(-1.0, 0.0).unwrap(), 0.15866, epsilon = 1e-5);
        assert!(phi_w_cdf(0.0, -0.1).is_err());
    }

    #[test]
    fn pmf_given_eta_examples() {
        assert_eq!(category_pmf_given_eta(&tau(&[0.0]), 0.0), vec![0.5, 0.5]);
        let p = category_pmf_given_eta(&tau(&[-1.0, 1.0]), 0.0);
        assert_relative_eq!(p[0], 0.15866, epsilon = 1e-5);
        assert_relative_eq!(p[1], 0.68269, epsilon = 1e-5);
        assert_relative_eq!(p[2], 0.15866, epsilon = 1e-5);
        let p = category_pmf_given_eta(&tau(&[-1.0, 1.0]), 10.0);
        assert!(p[0] < 1e-20 && p[1] < 1e-18 && (p[2] - 1.0).abs() < 1e-15);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pmf_given_w_examples() {
        let p = category_pmf_given_w(&tau(&[1.0]), 3.0).unwrap();
        assert_relative_eq!(p[0], 0.69146, epsilon = 1e-5);
        assert_relative_eq!(p[1], 0.30854, epsilon = 1e-5);
        let p = category_pmf_given_w(&tau(&[1.0]), 0.0).unwrap();
        assert_relative_eq!(p[0], 0.84134, epsilon = 1e-5);
        assert_relative_eq!(p[1], 0.15866, epsilon = 1e-5);
        let t = tau(&[-0.7, 0.1, 2.2]);
        assert_eq!(category_pmf_given_w(&t, 0.0).unwrap(), category_pmf_given_eta(&t, 0.0));
    }

    #[test]
    fn cut_points_reject_disorder() {
        assert!(CutPoints::new(vec![0.0, 0.0]).is_err());
        assert!(CutPoints::new(vec![1.0, 0.0]).is_err());
        assert!(CutPoints::new(vec![f64::NAN]).is_err());
        assert!(CutPoints::new(vec![]).is_err());
    }

    #[test]
    fn likelihood_examples() {
        let t = tau(&[1.0]);
        let lm = log_likelihood_full(&[1, 2], &t, 3.0).unwrap();
        let hand = oracle_phi(0.5).ln() + oracle_phi(-0.5).ln();
        assert_relative_eq!(lm, hand, epsilon = 1e-12);
        assert_relative_eq!(lm, -1.54487, epsilon = 1e-4);
        let l0 = log_likelihood_null(&[1, 2], &t).unwrap();
        assert_relative_eq!(l0, -2.0138, epsilon = 1e-4);
        assert_eq!(log_likelihood_full(&[], &t, 3.0).unwrap(), 0.0);
        assert_eq!(log_likelihood_null(&[], &t).unwrap(), 0.0);
        assert_eq!(log_likelihood_full(&[2, 1, 1], &t, 0.0).unwrap(), log_likelihood_null(&[2, 1, 1], &t).unwrap());
        // probability of category 1 tends to one
        assert!(log_likelihood_null(&[1, 1, 1], &tau(&[40.0])).unwrap() > -1e-300);
        assert!(log_likelihood_null(&[3], &tau(&[0.0, 1.0])).is_ok());
        assert!(log_likelihood_null(&[4], &tau(&[0.0, 1.0])).is_err());
    }

    #[test]
    fn zero_probability_category_gives_neg_infinity() {
        let t = tau(&[-1e6, 1e6]);
        assert!(log_likelihood_null(&[1], &t).unwrap().is_finite());
        let t = tau(&[-1e200, 1e200]);
        assert_eq!(log_likelihood_null(&[1], &t).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn mcfadden_examples() {
        let t = tau(&[1.0]);
        assert_eq!(mcfadden_r2(&[1, 2], &t, 0.0).unwrap(), 0.0);
        let hand = 1.0 - (oracle_phi(0.5).ln() + oracle_phi(-0.5).ln()) / (oracle_phi(1.0).ln() + oracle_phi(-1.0).ln());
        assert_relative_eq!(mcfadden_r2(&[1, 2], &t, 3.0).unwrap(), hand, epsilon = 1e-12);
        assert_relative_eq!(hand, 0.23285, epsilon = 1e-4);
        let t0 = tau(&[0.0]);
        for &w in &[0.0, 0.5, 3.0, 100.0] {
            assert!(mcfadden_r2(&[1, 2, 2, 1], &t0, w).unwrap().abs() < 1e-15);
        }
        assert_eq!(mcfadden_r2(&[], &t, 1.0), Err(Error::Empty("responses")));
        assert_eq!(mcfadden_r2(&[1], &tau(&[40.0]), 1.0), Err(Error::DegenerateNullLikelihood));
    }

    #[test]
    fn binning_rule() {
        let t = [0.0, 1.0];
        assert_eq!(bin_latent(-0.2, &t), 1);
        assert_eq!(bin_latent(0.0, &t), 2);
        assert_eq!(bin_latent(0.5, &t), 2);
        assert_eq!(bin_latent(1.0, &t), 3);
        assert_eq!(bin_latent(1.5, &t), 3);
    }

    // brute force: moving a cut-point so that an observed category shrinks
    // never increases the likelihood
    #[test]
    fn likelihood_monotone_under_mass_removal() {
        let mut rng = stream(3, &[]);
        for _ in 0..200 {
            let n = rng.random_range(1..=4);
            let y: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
            let a = rng.random_range(-2.0..0.0);
            let b = rng.random_range(0.0..2.0);
            let base = log_likelihood_null(&y, &tau(&[a, b])).unwrap();
            let c = category_counts(&y, 3);
            // raising τ_2 moves mass out of category 3 into category 2
            let up = log_likelihood_null(&y, &tau(&[a, b + 0.3])).unwrap();
            if c[1] == 0 && c[2] > 0 {
                assert!(up <= base);
            }
            // lowering τ_1 moves mass from category 1 into category 2
            let down = log_likelihood_null(&y, &tau(&[a - 0.3, b])).unwrap();
            if c[1] == 0 && c[0] > 0 {
                assert!(down <= base);
            }
        }
    }

    proptest! {
        #[test]
        fn pmfs_are_distributions(raw in proptest::collection::vec(-6.0f64..6.0, 1..7), eta in -12.0f64..12.0, w in 0.0f64..50.0) {
            let mut v = raw.clone();
            v.sort_by(|a, b| a.total_cmp(b));
            v.dedup();
            prop_assume!(v.windows(2).all(|p| p[1] - p[0] > 1e-9));
            let t = CutPoints::new(v).unwrap();
            for p in [category_pmf_given_eta(&t, eta), category_pmf_given_w(&t, w).unwrap()] {
                prop_assert!(p.iter().all(|&x| (0.0..=1.0).contains(&x)));
                prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn phi_w_matches_erf_oracle(t in -30.0f64..30.0, w in 0.0f64..100.0) {
            let v = phi_w_cdf(t, w).unwrap();
            prop_assert!((v - oracle_phi(t / (1.0 + w).sqrt())).abs() < 1e-14);
        }

        #[test]
        fn r2_is_zero_at_null(y in proptest::collection::vec(1usize..=4, 1..30), a in -3.0f64..-0.1, d1 in 0.05f64..2.0, d2 in 0.05f64..2.0) {
            let t = CutPoints::new(vec![a, a + d1, a + d1 + d2]).unwrap();
            prop_assert_eq!(mcfadden_r2(&y, &t, 0.0).unwrap(), 0.0);
        }
    }
}
