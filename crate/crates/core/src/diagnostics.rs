//! Rank-normalized split R-hat and bulk effective sample size.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::special::norm_quantile;
use crate::stats::median;

/// Convergence summary for one scalar quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamDiagnostics {
    pub rhat: f64,
    pub ess_bulk: f64,
}

fn check(chains: &[&[f64]]) -> Result<usize> {
    if chains.len() < 2 {
        return Err(domain("diagnostics need at least two chains"));
    }
    let n = chains[0].len();
    if n < 4 {
        return Err(domain("diagnostics need at least four draws per chain"));
    }
    if let Some(c) = chains.iter().find(|c| c.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: c.len() });
    }
    Ok(n)
}

/// Splits each chain into halves, dropping the middle draw of odd chains.
fn split(chains: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * chains.len());
    for c in chains {
        let h = c.len() / 2;
        out.push(c[..h].to_vec());
        out.push(c[c.len() - h..].to_vec());
    }
    out
}

/// Replaces every value by `Φ⁻¹((r − 3/8) / (S + 1/4))` where `r` is its
/// average rank among all `S` values.
fn rank_normalize(chains: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let all: Vec<(f64, usize, usize)> = chains
        .iter()
        .enumerate()
        .flat_map(|(c, v)| v.iter().enumerate().map(move |(i, &x)| (x, c, i)))
        .collect();
    let s = all.len();
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by(|&a, &b| all[a].0.total_cmp(&all[b].0));
    let mut out: Vec<Vec<f64>> = chains.iter().map(|v| vec![0.0; v.len()]).collect();
    let mut i = 0;
    while i < s {
        let mut j = i + 1;
        while j < s && all[order[j]].0 == all[order[i]].0 {
            j += 1;
        }
        // ranks i+1..=j share their average
        let r = 0.5 * ((i + 1) + j) as f64;
        let z = norm_quantile((r - 0.375) / (s as f64 + 0.25));
        for &o in &order[i..j] {
            let (_, c, k) = all[o];
            out[c][k] = z;
        }
        i = j;
    }
    out
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn var(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Classic potential scale reduction over equally long chains.
fn rhat_basic(chains: &[Vec<f64>]) -> f64 {
    let n = chains[0].len() as f64;
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let b = n * var(&means);
    let w = mean(&chains.iter().map(|c| var(c)).collect::<Vec<_>>());
    if w == 0.0 {
        return if b > 0.0 { f64::INFINITY } else { f64::NAN };
    }
    let var_plus = (n - 1.0) / n * w + b / n;
    (var_plus / w).sqrt()
}

fn autocov(c: &[f64], m: f64, lag: usize) -> f64 {
    let n = c.len();
    let mut s = 0.0;
    for i in 0..n - lag {
        s += (c[i] - m) * (c[i + lag] - m);
    }
    s / n as f64
}

/// Effective sample size with Geyer's initial positive and monotone
/// sequence truncation. Autocovariances are computed on demand.
fn ess_basic(chains: &[Vec<f64>]) -> f64 {
    let m = chains.len();
    let n = chains[0].len();
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let mean_acov = |lag: usize| -> f64 { chains.iter().zip(&means).map(|(c, &mu)| autocov(c, mu, lag)).sum::<f64>() / m as f64 };
    let mean_var = mean_acov(0) * n as f64 / (n as f64 - 1.0);
    let mut var_plus = mean_var * (n as f64 - 1.0) / n as f64;
    if m > 1 {
        var_plus += var(&means);
    }
    if !(var_plus > 0.0) {
        return f64::NAN;
    }
    let rho = |lag: usize| 1.0 - (mean_var - mean_acov(lag)) / var_plus;
    let mut rho_hat = vec![0.0; n];
    rho_hat[0] = 1.0;
    let mut even = 1.0;
    let mut odd = rho(1);
    rho_hat[1] = odd;
    let mut t = 0;
    while t + 5 < n && even + odd > 0.0 {
        t += 2;
        even = rho(t);
        odd = rho(t + 1);
        if even + odd >= 0.0 {
            rho_hat[t] = even;
            rho_hat[t + 1] = odd;
        }
    }
    let max_t = t;
    if even > 0.0 {
        rho_hat[max_t] = even;
    }
    // monotone sequence
    let mut t = 0;
    while t + 4 <= max_t {
        t += 2;
        if rho_hat[t] + rho_hat[t + 1] > rho_hat[t - 2] + rho_hat[t - 1] {
            let avg = 0.5 * (rho_hat[t - 2] + rho_hat[t - 1]);
            rho_hat[t] = avg;
            rho_hat[t + 1] = avg;
        }
    }
    let total = (m * n) as f64;
    let tau = -1.0 + 2.0 * rho_hat[..max_t].iter().sum::<f64>() + rho_hat[max_t];
    let tau = tau.max(1.0 / total.log10());
    total / tau
}

/// Rank-normalized split R-hat: the larger of the bulk value and the value
/// for the folded draws `|θ − median|`.
pub fn rhat(chains: &[&[f64]]) -> Result<f64> {
    check(chains)?;
    let sp = split(chains);
    let bulk = rhat_basic(&rank_normalize(&sp));
    let all: Vec<f64> = sp.iter().flatten().copied().collect();
    let med = median(&all);
    let folded: Vec<Vec<f64>> = sp.iter().map(|c| c.iter().map(|x| (x - med).abs()).collect()).collect();
    let tail = rhat_basic(&rank_normalize(&folded));
    Ok(if bulk.is_nan() {
        tail
    } else if tail.is_nan() {
        bulk
    } else {
        bulk.max(tail)
    })
}

/// Bulk effective sample size of the rank-normalized split chains.
pub fn ess_bulk(chains: &[&[f64]]) -> Result<f64> {
    check(chains)?;
    Ok(ess_basic(&rank_normalize(&split(chains))))
}

pub fn diagnose_param(chains: &[&[f64]]) -> Result<ParamDiagnostics> {
    Ok(ParamDiagnostics { rhat: rhat(chains)?, ess_bulk: ess_bulk(chains)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn iid(seed: u64, n: usize) -> Vec<f64> {
        let mut rng = stream(seed, &[]);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn identical_iid_chains_have_unit_rhat() {
        let c = iid(1, 10_000);
        let r = rhat(&[&c, &c]).unwrap();
        assert!((0.999..=1.01).contains(&r), "{r}");
    }

    #[test]
    fn separated_constant_chains_do_not_mix() {
        let a = vec![0.0; 100];
        let b = vec![1.0; 100];
        assert!(rhat(&[&a, &b]).unwrap() > 1.05);
        let mut rng = stream(2, &[]);
        let a: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..500).map(|_| 3.0 + rng.random::<f64>()).collect();
        assert!(rhat(&[&a, &b]).unwrap() > 1.05);
    }

    #[test]
    fn iid_ess_is_nominal() {
        let chains: Vec<Vec<f64>> = (0..4).map(|s| iid(10 + s, 2500)).collect();
        let refs: Vec<&[f64]> = chains.iter().map(|c| c.as_slice()).collect();
        let e = ess_bulk(&refs).unwrap();
        assert!((e / 10_000.0 - 1.0).abs() < 0.1, "{e}");
    }

    // AR(1) with coefficient a has integrated autocorrelation (1 + a)/(1 − a)
    #[test]
    fn ar1_ess_matches_theory() {
        let a: f64 = 0.6;
        let mut chains = Vec::new();
        for s in 0..4 {
            let e = iid(20 + s, 20_000);
            let mut x = e[0] / (1.0 - a * a).sqrt();
            let mut c = Vec::with_capacity(e.len());
            for v in e {
                x = a * x + v;
                c.push(x);
            }
            chains.push(c);
        }
        let refs: Vec<&[f64]> = chains.iter().map(|c| c.as_slice()).collect();
        let expected = 80_000.0 * (1.0 - a) / (1.0 + a);
        let e = ess_bulk(&refs).unwrap();
        assert!((e / expected - 1.0).abs() < 0.1, "{e} vs {expected}");
    }

    #[test]
    fn single_chain_is_an_error() {
        let c = iid(3, 100);
        assert!(rhat(&[&c]).is_err());
        assert!(ess_bulk(&[&c[..3], &c[..3]]).is_err());
        assert!(rhat(&[&c[..10], &c[..11]]).is_err());
    }

    #[test]
    fn ties_get_average_ranks() {
        let z = rank_normalize(&[vec![1.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(z[0][0], z[0][1]);
        assert!((z[0][0] - 0.0).abs() < 1e-15);
        assert!((z[1][0] + z[1][1]).abs() < 1e-15);
    }
}
