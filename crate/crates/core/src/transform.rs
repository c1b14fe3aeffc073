//! Bijections from unconstrained reals to the constrained parameter spaces
//! (simplex, ordered vector, positive scalar), with log-Jacobians.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{domain, Result};

#[inline]
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[inline]
fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Stick-breaking image of `p − 1` logits on the `p`-simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// `ln φ_j`, kept separately so tiny weights keep full precision.
    pub log_phi: Vec<f64>,
    /// Break fractions `z_k`.
    pub z: Vec<f64>,
    pub log_jacobian: f64,
}

impl Simplex {
    pub fn phi(&self) -> Vec<f64> {
        self.log_phi.iter().map(|v| v.exp()).collect()
    }
}

/// `z_k = logistic(y_k − ln(p − 1 − k))`, `φ_k = z_k Π_{i<k}(1 − z_i)`. The
/// offset makes `y = 0` the uniform simplex point.
pub fn simplex_from_unconstrained(y: &[f64]) -> Simplex {
    let p = y.len() + 1;
    let mut log_phi = Vec::with_capacity(p);
    let mut z = Vec::with_capacity(p - 1);
    let mut log_rest = 0.0;
    let mut log_jacobian = 0.0;
    for (k, &yk) in y.iter().enumerate() {
        let t = yk - ((p - 1 - k) as f64).ln();
        let ln_z = -softplus(-t);
        let ln_1mz = -softplus(t);
        z.push(logistic(t));
        log_phi.push(log_rest + ln_z);
        log_jacobian += ln_z + ln_1mz + log_rest;
        log_rest += ln_1mz;
    }
    log_phi.push(log_rest);
    Simplex { log_phi, z, log_jacobian }
}

/// Inverse of [`simplex_from_unconstrained`].
pub fn simplex_to_unconstrained(phi: &[f64]) -> Result<Vec<f64>> {
    let p = phi.len();
    if p == 0 || phi.iter().any(|&v| !(v > 0.0)) {
        return Err(domain("simplex entries must be positive"));
    }
    let mut y = Vec::with_capacity(p.saturating_sub(1));
    let mut tail: f64 = phi.iter().sum();
    for (k, &v) in phi[..p - 1].iter().enumerate() {
        // break fraction relative to the mass not yet allocated
        let zk = v / tail;
        y.push((zk / (1.0 - zk)).ln() + ((p - 1 - k) as f64).ln());
        tail -= v;
    }
    Ok(y)
}

/// Gradient of `L(ln φ(y)) + log|J|(y)` with respect to the logits, given
/// `h_j = ∂L/∂ ln φ_j`.
pub fn simplex_grad(s: &Simplex, h: &[f64], out: &mut [f64]) {
    let p = s.log_phi.len();
    let mut tail = h[p - 1];
    for k in (0..p - 1).rev() {
        let zk = s.z[k];
        // ln φ_k depends on y_k through ln z_k, every later ln φ_j through ln(1 − z_k)
        out[k] = h[k] * (1.0 - zk) - zk * tail + 1.0 - 2.0 * zk - (p - 2 - k) as f64 * zk;
        tail += h[k];
    }
}

/// `τ_1 = c`, `τ_k = τ_{k−1} + e^{d_k}`; log-Jacobian `Σ d_k`.
pub fn ordered_from_unconstrained(v: &[f64]) -> (Vec<f64>, f64) {
    let mut out = Vec::with_capacity(v.len());
    let mut jac = 0.0;
    let mut cur = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if i == 0 {
            cur = x;
        } else {
            cur += x.exp();
            jac += x;
        }
        out.push(cur);
    }
    (out, jac)
}

pub fn ordered_to_unconstrained(tau: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(tau.len());
    for (i, &t) in tau.iter().enumerate() {
        if i == 0 {
            out.push(t);
        } else {
            let d = t - tau[i - 1];
            if !(d > 0.0) {
                return Err(domain("ordered vector must be strictly increasing"));
            }
            out.push(d.ln());
        }
    }
    Ok(out)
}

/// Chains `∂L/∂τ` back to the unconstrained coordinates, including the
/// Jacobian term.
pub fn ordered_grad(v: &[f64], d_tau: &[f64], out: &mut [f64]) {
    let m = v.len();
    let mut tail = 0.0;
    for i in (0..m).rev() {
        tail += d_tau[i];
        out[i] = if i == 0 { tail } else { tail * v[i].exp() + 1.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use alloc::vec;
    use rand::Rng;

    #[test]
    fn zero_logits_give_uniform_simplex() {
        let s = simplex_from_unconstrained(&[0.0; 4]);
        for v in s.phi() {
            assert!((v - 0.2).abs() < 1e-15);
        }
        assert_eq!(simplex_from_unconstrained(&[]).phi(), vec![1.0]);
    }

    #[test]
    fn round_trips() {
        let mut rng = stream(2, &[]);
        for _ in 0..200 {
            let p = rng.random_range(1..9);
            let y: Vec<f64> = (0..p - 1).map(|_| rng.random_range(-5.0..5.0)).collect();
            let s = simplex_from_unconstrained(&y);
            let phi = s.phi();
            assert!((phi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let back = simplex_from_unconstrained(&simplex_to_unconstrained(&phi).unwrap()).phi();
            for (a, b) in back.iter().zip(&phi) {
                assert!((a - b).abs() < 1e-12);
            }
            let k = rng.random_range(1..7);
            let mut tau: Vec<f64> = (0..k).map(|_| rng.random_range(-4.0..4.0)).collect();
            tau.sort_by(|a, b| a.total_cmp(b));
            if tau.windows(2).any(|w| w[1] - w[0] < 1e-6) {
                continue;
            }
            let (t2, _) = ordered_from_unconstrained(&ordered_to_unconstrained(&tau).unwrap());
            for (a, b) in t2.iter().zip(&tau) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        let w: f64 = 3.7;
        assert!((w.ln().exp() - w).abs() < 1e-12);
    }

    // log|J| of the stick-breaking map against a finite-difference
    // determinant of y -> (φ_1..φ_{p-1})
    #[test]
    fn simplex_jacobian_matches_determinant() {
        let mut rng = stream(3, &[]);
        for _ in 0..50 {
            let p = rng.random_range(2..6);
            let y: Vec<f64> = (0..p - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
            let m = p - 1;
            let h = 1e-6;
            let mut jm = vec![vec![0.0; m]; m];
            for c in 0..m {
                let mut up = y.clone();
                let mut dn = y.clone();
                up[c] += h;
                dn[c] -= h;
                let (a, b) = (simplex_from_unconstrained(&up).phi(), simplex_from_unconstrained(&dn).phi());
                for r in 0..m {
                    jm[r][c] = (a[r] - b[r]) / (2.0 * h);
                }
            }
            let det = det(jm);
            let s = simplex_from_unconstrained(&y);
            assert!((det.abs().ln() - s.log_jacobian).abs() < 1e-6);
        }
    }

    fn det(mut a: Vec<Vec<f64>>) -> f64 {
        let n = a.len();
        let mut d = 1.0;
        for c in 0..n {
            let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
            if piv != c {
                a.swap(piv, c);
                d = -d;
            }
            d *= a[c][c];
            for r in c + 1..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        d
    }

    #[test]
    fn simplex_gradient_matches_finite_differences() {
        let mut rng = stream(4, &[]);
        for _ in 0..50 {
            let p = rng.random_range(2..7);
            let y: Vec<f64> = (0..p - 1).map(|_| rng.random_range(-2.0..2.0)).collect();
            let wts: Vec<f64> = (0..p).map(|_| rng.random_range(-1.0..1.0)).collect();
            let f = |y: &[f64]| {
                let s = simplex_from_unconstrained(y);
                s.log_phi.iter().zip(&wts).map(|(a, b)| a * b).sum::<f64>() + s.log_jacobian
            };
            let s = simplex_from_unconstrained(&y);
            let mut g = vec![0.0; p - 1];
            simplex_grad(&s, &wts, &mut g);
            for k in 0..p - 1 {
                let mut up = y.clone();
                let mut dn = y.clone();
                up[k] += 1e-6;
                dn[k] -= 1e-6;
                let fd = (f(&up) - f(&dn)) / 2e-6;
                assert!((fd - g[k]).abs() < 1e-6, "{fd} {}", g[k]);
            }
        }
    }
}
