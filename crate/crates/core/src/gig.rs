//! Generalized inverse Gaussian distribution.
//!
//! Density
//! `f(x) = (ρ/χ)^{λ/2} / (2 K_λ(√(ρχ))) · x^{λ−1} · exp(−(ρx + χ/x)/2)`
//! for `x > 0`. Sampling is either direct (Hörmann–Leydold
//! ratio-of-uniforms) or through a two-block Gibbs chain on `(W, ξ)` that
//! alternates a Gamma and an inverse Gaussian update.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::special::ln_bessel_k;

/// Below this `√(ρχ)` the sampler switches to the Gamma / inverse-Gamma
/// limit, where the ratio-of-uniforms envelopes lose precision.
const OMEGA_LIMIT: f64 = 1e-10;

/// GIG hyperparameters `(λ, ρ, χ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GigParams {
    pub lambda: f64,
    pub rho: f64,
    pub chi: f64,
}

impl GigParams {
    pub fn new(lambda: f64, rho: f64, chi: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(domain("GIG lambda must be finite"));
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(domain("GIG rho must be positive and finite"));
        }
        if !(chi > 0.0) || !chi.is_finite() {
            return Err(domain("GIG chi must be positive and finite"));
        }
        Ok(Self { lambda, rho, chi })
    }

    #[inline]
    pub fn omega(&self) -> f64 {
        (self.rho * self.chi).sqrt()
    }

    /// Log of the normalizing constant `(ρ/χ)^{λ/2} / (2 K_λ(√(ρχ)))`.
    pub fn log_normalizer(&self) -> f64 {
        let lk = ln_bessel_k(self.lambda, self.omega()).expect("omega is positive");
        0.5 * self.lambda * (self.rho / self.chi).ln() - core::f64::consts::LN_2 - lk
    }

    /// `(λ−1) ln x − (ρx + χ/x)/2`
    #[inline]
    pub fn log_kernel(&self, x: f64) -> f64 {
        (self.lambda - 1.0) * x.ln() - 0.5 * (self.rho * x + self.chi / x)
    }

    /// `E[X] = √(χ/ρ) K_{λ+1}(ω) / K_λ(ω)`
    pub fn mean(&self) -> f64 {
        let w = self.omega();
        let r = ln_bessel_k(self.lambda + 1.0, w).expect("positive") - ln_bessel_k(self.lambda, w).expect("positive");
        (self.chi / self.rho).sqrt() * r.exp()
    }

    /// `E[X²] = (χ/ρ) K_{λ+2}(ω) / K_λ(ω)`
    pub fn second_moment(&self) -> f64 {
        let w = self.omega();
        let r = ln_bessel_k(self.lambda + 2.0, w).expect("positive") - ln_bessel_k(self.lambda, w).expect("positive");
        (self.chi / self.rho) * r.exp()
    }

    /// `((λ−1) + √((λ−1)² + ρχ)) / ρ`
    pub fn mode(&self) -> f64 {
        let l = self.lambda - 1.0;
        let d = (l * l + self.rho * self.chi).sqrt();
        if l >= 0.0 {
            (l + d) / self.rho
        } else {
            // rationalized to avoid cancellation
            self.chi / (d - l)
        }
    }
}

/// `ln f(x)`; `-∞` off the support.
pub fn gig_log_pdf(x: f64, p: &GigParams) -> f64 {
    if !(x > 0.0) {
        return f64::NEG_INFINITY;
    }
    if x == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    p.log_normalizer() + p.log_kernel(x)
}

/// `ln K_λ(z)`.
pub fn bessel_k_log(lambda: f64, z: f64) -> Result<f64> {
    ln_bessel_k(lambda, z)
}

/// Mode of the standardized density `x^{λ−1} exp(−ω(x + 1/x)/2)`.
fn std_mode(lambda: f64, omega: f64) -> f64 {
    if lambda >= 1.0 {
        ((lambda - 1.0) * (lambda - 1.0) + omega * omega).sqrt() / omega + (lambda - 1.0) / omega
    } else {
        omega / (((1.0 - lambda) * (1.0 - lambda) + omega * omega).sqrt() + (1.0 - lambda))
    }
}

// Ratio-of-uniforms without mode shift.
fn rou_noshift<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> f64 {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = std_mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    let ym = ((lambda + 1.0) + ((lambda + 1.0) * (lambda + 1.0) + omega * omega).sqrt()) / omega;
    let um = (0.5 * (lambda + 1.0) * ym.ln() - s * (ym + 1.0 / ym) - nc).exp();
    loop {
        let u = um * rng.random::<f64>();
        let v: f64 = rng.random();
        let x = u / v;
        if x > 0.0 && x.is_finite() && v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return x;
        }
    }
}

// Ratio-of-uniforms with the mode shifted to the origin; the bounding
// rectangle comes from the roots of a cubic.
fn rou_shift<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> f64 {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = std_mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    let a = -(2.0 * (lambda + 1.0) / omega + xm);
    let b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
    let c = xm;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let fi = (-q / (2.0 * (-(p * p * p) / 27.0).sqrt())).clamp(-1.0, 1.0).acos();
    let fak = 2.0 * (-p / 3.0).sqrt();
    let y1 = fak * (fi / 3.0).cos() - a / 3.0;
    let y2 = fak * (fi / 3.0 + 4.0 / 3.0 * PI).cos() - a / 3.0;
    let uplus = (y1 - xm) * (t * y1.ln() - s * (y1 + 1.0 / y1) - nc).exp();
    let uminus = (y2 - xm) * (t * y2.ln() - s * (y2 + 1.0 / y2) - nc).exp();
    loop {
        let u = uminus + rng.random::<f64>() * (uplus - uminus);
        let v: f64 = rng.random();
        let x = u / v + xm;
        if x > 0.0 && x.is_finite() && v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return x;
        }
    }
}

// Three-region hat (constant, power, exponential) for 0 <= λ < 1 and small ω.
fn three_region<R: Rng + ?Sized>(lambda: f64, omega: f64, rng: &mut R) -> f64 {
    let xm = std_mode(lambda, omega);
    let x0 = omega / (1.0 - lambda);
    let k0 = ((lambda - 1.0) * xm.ln() - 0.5 * omega * (xm + 1.0 / xm)).exp();
    let a0 = k0 * x0;
    let (k1, a1, k2, a2);
    if x0 >= 2.0 / omega {
        k1 = 0.0;
        a1 = 0.0;
        k2 = x0.powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-omega * x0 / 2.0).exp() / omega;
    } else {
        k1 = (-omega).exp();
        a1 = if lambda == 0.0 {
            k1 * (2.0 / (omega * omega)).ln()
        } else {
            k1 / lambda * ((2.0 / omega).powf(lambda) - x0.powf(lambda))
        };
        k2 = (2.0 / omega).powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-1.0f64).exp() / omega;
    }
    let total = a0 + a1 + a2;
    loop {
        let mut v = total * rng.random::<f64>();
        let (x, hx);
        if v <= a0 {
            x = x0 * v / a0;
            hx = k0;
        } else {
            v -= a0;
            if v <= a1 {
                if lambda == 0.0 {
                    x = omega * (omega.exp() * v).exp();
                    hx = k1 / x;
                } else {
                    x = (x0.powf(lambda) + lambda / k1 * v).powf(1.0 / lambda);
                    hx = k1 * x.powf(lambda - 1.0);
                }
            } else {
                v -= a1;
                let a = if x0 > 2.0 / omega { x0 } else { 2.0 / omega };
                x = -2.0 / omega * ((-omega / 2.0 * a).exp() - omega / (2.0 * k2) * v).ln();
                hx = k2 * (-omega / 2.0 * x).exp();
            }
        }
        let u = rng.random::<f64>() * hx;
        if x > 0.0 && x.is_finite() && u.ln() <= (lambda - 1.0) * x.ln() - omega / 2.0 * (x + 1.0 / x) {
            return x;
        }
    }
}

/// One exact draw from GIG(λ, ρ, χ).
pub fn sample_gig<R: Rng + ?Sized>(p: &GigParams, rng: &mut R) -> f64 {
    let omega = p.omega();
    let alpha = (p.chi / p.rho).sqrt();
    let lam = p.lambda.abs();
    if omega < OMEGA_LIMIT {
        // χ → 0 gives Gamma(λ, rate ρ/2); ρ → 0 gives InvGamma(−λ, scale χ/2)
        if p.lambda > 0.0 {
            return Gamma::new(p.lambda, 2.0 / p.rho).expect("positive").sample(rng);
        }
        if p.lambda < 0.0 {
            let g: f64 = Gamma::new(-p.lambda, 1.0).expect("positive").sample(rng);
            return 0.5 * p.chi / g;
        }
    }
    let x = if lam > 2.0 || omega > 3.0 {
        rou_shift(lam, omega, rng)
    } else if lam >= 1.0 - 2.25 * omega * omega || omega > 0.2 {
        rou_noshift(lam, omega, rng)
    } else {
        three_region(lam, omega, rng)
    };
    if p.lambda < 0.0 {
        alpha / x
    } else {
        alpha * x
    }
}

/// Inverse Gaussian draw with mean `mu` and shape `shape`
/// (Michael–Schucany–Haas).
pub fn sample_inverse_gaussian<R: Rng + ?Sized>(mu: f64, shape: f64, rng: &mut R) -> Result<f64> {
    if !(mu > 0.0) || !(shape > 0.0) || !mu.is_finite() || !shape.is_finite() {
        return Err(domain("inverse Gaussian parameters must be positive and finite"));
    }
    let nu: f64 = rng.sample(StandardNormal);
    let r = mu * nu * nu / (2.0 * shape);
    // smaller root of the quadratic, written without cancellation
    let x = mu / (1.0 + r + (r * (2.0 + r)).sqrt());
    let u: f64 = rng.random();
    Ok(if u <= mu / (mu + x) { x } else { mu * mu / x })
}

/// State of the auxiliary chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxState {
    pub w: f64,
    pub xi: f64,
}

impl AuxState {
    pub fn new(w: f64, xi: f64) -> Result<Self> {
        if !(w > 0.0) || !(xi > 0.0) || !w.is_finite() || !xi.is_finite() {
            return Err(domain("auxiliary state must be positive"));
        }
        Ok(Self { w, xi })
    }
}

/// One sweep of the two-block Gibbs chain whose `W` marginal is
/// GIG(λ, ρ, χ): `ξ | W ~ Gamma(λ + 1/2, rate 1/W)`, then
/// `W | ξ ~ InvGauss(√((χ + 2ξ)/ρ), χ + 2ξ)`.
pub fn gibbs_step_aux<R: Rng + ?Sized>(state: AuxState, p: &GigParams, rng: &mut R) -> Result<AuxState> {
    if !(p.lambda > -0.5) {
        return Err(Error::AuxiliaryLambda(p.lambda));
    }
    let mut xi: f64 = Gamma::new(p.lambda + 0.5, state.w).map_err(|_| domain("bad Gamma parameters"))?.sample(rng);
    if !(xi > 0.0) {
        // a Gamma draw can underflow for shapes near zero
        xi = f64::MIN_POSITIVE;
    }
    let shape = p.chi + 2.0 * xi;
    let w = sample_inverse_gaussian((shape / p.rho).sqrt(), shape, rng)?;
    Ok(AuxState { w: w.max(f64::MIN_POSITIVE), xi })
}

/// Tabulated GIG CDF on a log-spaced grid, inverted by linear
/// interpolation. Cheap to rebuild, deterministic, and smooth in the
/// parameters, which is what a simplex search over `(λ, ρ, χ)` needs.
#[derive(Debug, Clone)]
pub struct GigQuantileTable {
    u0: f64,
    du: f64,
    cdf: Vec<f64>,
}

const TABLE_POINTS: usize = 4096;
const TABLE_DROP: f64 = 40.0;
const LOG_X_MIN: f64 = -69.077_552_789_821_37; // ln 1e-30
const LOG_X_MAX: f64 = 69.077_552_789_821_37;

impl GigQuantileTable {
    pub fn new(p: &GigParams) -> Self {
        // density of u = ln x, log-concave in u
        let g = |u: f64| p.lambda * u - 0.5 * (p.rho * u.exp() + p.chi * (-u).exp());
        let y = (p.lambda + (p.lambda * p.lambda + p.rho * p.chi).sqrt()) / p.rho;
        let um = y.ln().clamp(LOG_X_MIN, LOG_X_MAX);
        let gm = g(um);
        let edge = |dir: f64| -> f64 {
            let mut step = 0.5;
            loop {
                let u = um + dir * step;
                if !(u > LOG_X_MIN && u < LOG_X_MAX) {
                    return u.clamp(LOG_X_MIN, LOG_X_MAX);
                }
                if g(u) < gm - TABLE_DROP {
                    return u;
                }
                step *= 2.0;
            }
        };
        let lo = edge(-1.0);
        let hi = edge(1.0);
        let du = (hi - lo) / (TABLE_POINTS - 1) as f64;
        let dens: Vec<f64> = (0..TABLE_POINTS).map(|i| (g(lo + i as f64 * du) - gm).exp()).collect();
        let mut cdf = Vec::with_capacity(TABLE_POINTS);
        cdf.push(0.0);
        for i in 1..TABLE_POINTS {
            let prev = cdf[i - 1];
            cdf.push(prev + 0.5 * (dens[i - 1] + dens[i]) * du);
        }
        let total = cdf[TABLE_POINTS - 1];
        for c in &mut cdf {
            *c /= total;
        }
        Self { u0: lo, du, cdf }
    }

    /// Approximate quantile at probability `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let i = self.cdf.partition_point(|&c| c < q);
        if i == 0 {
            return self.u0.exp();
        }
        if i >= self.cdf.len() {
            return (self.u0 + (self.cdf.len() - 1) as f64 * self.du).exp();
        }
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let frac = if c1 > c0 { (q - c0) / (c1 - c0) } else { 0.0 };
        (self.u0 + (i as f64 - 1.0 + frac) * self.du).exp()
    }
}

/// Median of GIG(λ, ρ, χ) from the tabulated CDF.
pub fn gig_median(p: &GigParams) -> f64 {
    GigQuantileTable::new(p).quantile(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_to_inf};
    use crate::rng::stream;
    use crate::stats::{ks_one_sample, ks_two_sample, mean, variance};
    use approx::assert_relative_eq;
    use statrs::distribution::{Continuous, ContinuousCDF, Gamma as SGamma, InverseGamma};

    fn integral(p: &GigParams) -> f64 {
        let m = p.mode();
        let (a, _) = integrate(|x| gig_log_pdf(x, p).exp(), 0.0, m, 1e-13, 1e-12);
        let (b, _) = integrate_to_inf(|x| gig_log_pdf(x, p).exp(), m, 1e-13, 1e-12);
        a + b
    }

    #[test]
    fn density_normalizes() {
        for &(l, r, c) in &[(1.10, 1.41, 0.15), (0.0, 1.0, 1.0), (-0.3, 2.0, 0.5), (3.5, 0.2, 4.0), (0.05, 1.08, 1.03), (-2.0, 0.7, 3.0)] {
            let p = GigParams::new(l, r, c).unwrap();
            assert!((integral(&p) - 1.0).abs() < 1e-6, "{l} {r} {c}");
        }
    }

    #[test]
    fn gamma_limit() {
        let p = GigParams::new(2.0, 3.0, 1e-10).unwrap();
        let g = SGamma::new(2.0, 1.5).unwrap();
        for &x in &[0.05, 0.3, 1.0, 2.5, 6.0] {
            assert!((gig_log_pdf(x, &p) - g.ln_pdf(x)).abs() < 1e-4);
        }
    }

    #[test]
    fn mode_closed_form() {
        let p = GigParams::new(1.1, 1.41, 0.15).unwrap();
        let m = p.mode();
        let (mut lo, mut hi) = (1e-6, 20.0);
        // golden-section on the log density as a numeric oracle
        let gr = 0.5 * (5.0f64.sqrt() - 1.0);
        for _ in 0..200 {
            let a = hi - gr * (hi - lo);
            let b = lo + gr * (hi - lo);
            if gig_log_pdf(a, &p) > gig_log_pdf(b, &p) {
                hi = b;
            } else {
                lo = a;
            }
        }
        assert!((0.5 * (lo + hi) - m).abs() < 1e-8);
        assert!(gig_log_pdf(0.0, &p) == f64::NEG_INFINITY);
        assert!(GigParams::new(1.0, 0.0, 1.0).is_err());
        assert!(GigParams::new(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn bessel_examples() {
        let k = (core::f64::consts::PI / 4.0).sqrt() * (-2.0f64).exp();
        assert_relative_eq!(bessel_k_log(0.5, 2.0).unwrap(), k.ln(), epsilon = 1e-13);
        // K_0(1) from its integral representation
        let (v, _) = integrate_to_inf(|t| (-(t.cosh())).exp(), 0.0, 1e-15, 1e-14);
        assert_relative_eq!(bessel_k_log(0.0, 1.0).unwrap(), v.ln(), epsilon = 1e-12);
        assert_relative_eq!(v, 0.42102, epsilon = 1e-5);
        assert_eq!(bessel_k_log(-1.3, 0.7).unwrap(), bessel_k_log(1.3, 0.7).unwrap());
    }

    #[test]
    fn bessel_against_integral_oracle() {
        let mut rng = stream(21, &[]);
        for _ in 0..60 {
            let nu: f64 = rng.random_range(-5.0..30.0);
            let z: f64 = 10f64.powf(rng.random_range(-1.0..2.0));
            // scaled integrand keeps the oracle finite
            let lncosh = |x: f64| x.abs() + (-2.0 * x.abs()).exp().ln_1p() - core::f64::consts::LN_2;
            let peak = (nu.abs() / z).asinh();
            let top = -z * peak.cosh() + lncosh(nu * peak);
            let f = |t: f64| (-z * t.cosh() + lncosh(nu * t) - top).exp();
            let (v, _) = integrate_to_inf(f, 0.0, 1e-300, 1e-13);
            let oracle = v.ln() + top;
            let got = bessel_k_log(nu, z).unwrap();
            assert!((got - oracle).abs() < 1e-10 * (1.0 + oracle.abs()), "nu={nu} z={z} {got} {oracle}");
        }
    }

    #[test]
    fn inverse_gaussian_moments() {
        let mut rng = stream(4, &[]);
        let x: Vec<f64> = (0..100_000).map(|_| sample_inverse_gaussian(2.0, 3.0, &mut rng).unwrap()).collect();
        assert!(x.iter().all(|&v| v > 0.0));
        assert!((mean(&x) - 2.0).abs() < 0.05 * 2.0);
        assert!((variance(&x) - 8.0 / 3.0).abs() < 0.05 * 8.0 / 3.0);
        let y: Vec<f64> = (0..10_000).map(|_| sample_inverse_gaussian(1.0, 1e6, &mut rng).unwrap()).collect();
        assert!(variance(&y).sqrt() < 0.01);
        assert!(sample_inverse_gaussian(0.0, 1.0, &mut rng).is_err());
        assert!(sample_inverse_gaussian(1.0, -1.0, &mut rng).is_err());
    }

    fn gig_cdf(p: &GigParams) -> impl Fn(f64) -> f64 + '_ {
        move |x: f64| if x <= 0.0 { 0.0 } else { integrate(|t| gig_log_pdf(t, p).exp(), 0.0, x, 1e-12, 1e-10).0 }
    }

    #[test]
    fn direct_sampler_matches_density() {
        let mut rng = stream(8, &[]);
        for &(l, r, c) in &[(1.10, 1.41, 0.15), (0.3, 0.02, 0.05), (4.0, 2.0, 2.0), (-1.5, 5.0, 4.0), (0.0, 1.0, 1.0)] {
            let p = GigParams::new(l, r, c).unwrap();
            let x: Vec<f64> = (0..20_000).map(|_| sample_gig(&p, &mut rng)).collect();
            let ks = ks_one_sample(&x, gig_cdf(&p));
            assert!(ks.p_value > 0.01, "{l} {r} {c} p={}", ks.p_value);
        }
    }

    #[test]
    fn direct_sampler_mean() {
        let p = GigParams::new(1.10, 1.41, 0.15).unwrap();
        let mut rng = stream(12, &[]);
        let x: Vec<f64> = (0..100_000).map(|_| sample_gig(&p, &mut rng)).collect();
        assert!((mean(&x) / p.mean() - 1.0).abs() < 0.02);
    }

    #[test]
    fn half_order_reciprocal_is_gig() {
        // X ~ GIG(1/2, ρ, χ) implies 1/X ~ GIG(−1/2, χ, ρ), an inverse
        // Gaussian with mean √(ρ/χ) and shape ρ
        let p = GigParams::new(0.5, 2.0, 3.0).unwrap();
        let mut rng = stream(13, &[]);
        let inv: Vec<f64> = (0..20_000).map(|_| 1.0 / sample_gig(&p, &mut rng)).collect();
        let mu = (2.0f64 / 3.0).sqrt();
        let lam = 2.0;
        let ig_cdf = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let a = (lam / x).sqrt();
            crate::special::norm_cdf(a * (x / mu - 1.0)) + (2.0 * lam / mu).exp() * crate::special::norm_cdf(-a * (x / mu + 1.0))
        };
        assert!(ks_one_sample(&inv, ig_cdf).p_value > 0.01);
    }

    #[test]
    fn small_chi_matches_gamma() {
        let p = GigParams::new(1.7, 0.8, 1e-14).unwrap();
        let g = SGamma::new(1.7, 0.4).unwrap();
        let mut rng = stream(14, &[]);
        let x: Vec<f64> = (0..20_000).map(|_| sample_gig(&p, &mut rng)).collect();
        assert!(ks_one_sample(&x, |v| g.cdf(v)).p_value > 0.01);
        let p = GigParams::new(-1.3, 1e-14, 2.0).unwrap();
        let ig = InverseGamma::new(1.3, 1.0).unwrap();
        let x: Vec<f64> = (0..20_000).map(|_| sample_gig(&p, &mut rng)).collect();
        assert!(ks_one_sample(&x, |v| ig.cdf(v)).p_value > 0.01);
    }

    #[test]
    fn auxiliary_chain_matches_direct_sampler() {
        let p = GigParams::new(0.67, 3.76, 0.14).unwrap();
        let mut rng = stream(15, &[]);
        let mut s = AuxState::new(1.0, 1.0).unwrap();
        let mut aux = Vec::with_capacity(20_000);
        for _ in 0..200 {
            s = gibbs_step_aux(s, &p, &mut rng).unwrap();
        }
        for _ in 0..20_000 {
            for _ in 0..10 {
                s = gibbs_step_aux(s, &p, &mut rng).unwrap();
            }
            aux.push(s.w);
        }
        let direct: Vec<f64> = (0..20_000).map(|_| sample_gig(&p, &mut rng)).collect();
        assert!(ks_two_sample(&aux, &direct).p_value > 0.01);
        assert!((mean(&aux) / p.mean() - 1.0).abs() < 0.03);
        let bad = GigParams::new(-0.6, 1.0, 1.0).unwrap();
        assert_eq!(gibbs_step_aux(s, &bad, &mut rng), Err(Error::AuxiliaryLambda(-0.6)));
    }

    #[test]
    fn quantile_table_matches_sampler() {
        let mut rng = stream(16, &[]);
        for &(l, r, c) in &[(1.10, 1.41, 0.15), (0.0, 1.0, 1.0), (-0.45, 30.0, 0.001), (3.0, 0.01, 5.0)] {
            let p = GigParams::new(l, r, c).unwrap();
            let t = GigQuantileTable::new(&p);
            let u: Vec<f64> = (0..20_000).map(|_| t.quantile(rng.random())).collect();
            let direct: Vec<f64> = (0..20_000).map(|_| sample_gig(&p, &mut rng)).collect();
            assert!(ks_two_sample(&u, &direct).p_value > 0.01, "{l} {r} {c}");
        }
        let p = GigParams::new(1.10, 1.41, 0.15).unwrap();
        let m = gig_median(&p);
        assert!((gig_cdf(&p)(m) - 0.5).abs() < 1e-4);
    }
}
