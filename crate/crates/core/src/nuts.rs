//! Multinomial No-U-Turn sampler with a diagonal metric.
//!
//! Warmup follows the usual three-phase schedule: a fast initial buffer
//! that tunes only the step size, a sequence of doubling slow windows that
//! estimate the metric from draws, and a terminal fast buffer. Step size is
//! tuned by dual averaging towards a target mean acceptance statistic.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// An unnormalized log density with gradient on `R^d`.
pub trait LogDensity {
    fn dim(&self) -> usize;
    /// Writes the gradient into `grad` and returns the log density. May
    /// return `-inf` or NaN outside the support.
    fn log_density_grad(&self, theta: &[f64], grad: &mut [f64]) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NutsConfig {
    pub warmup: usize,
    pub draws: usize,
    /// Keep every `thin`-th post-warmup draw.
    pub thin: usize,
    pub max_depth: usize,
    pub target_accept: f64,
    /// Energy error beyond which a trajectory counts as divergent.
    pub max_delta_h: f64,
}

impl Default for NutsConfig {
    fn default() -> Self {
        Self { warmup: 1000, draws: 2000, thin: 1, max_depth: 10, target_accept: 0.8, max_delta_h: 1000.0 }
    }
}

/// Output of one chain; draws are stored row-major, `dim` values per draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub dim: usize,
    pub draws: Vec<f64>,
    pub step_size: f64,
    pub inv_metric: Vec<f64>,
    pub mean_accept_stat: f64,
    pub divergences: usize,
    pub warmup_divergences: usize,
    pub max_depth_hits: usize,
    pub leapfrog_steps: usize,
}

impl ChainOutput {
    pub fn num_draws(&self) -> usize {
        self.draws.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn draw(&self, i: usize) -> &[f64] {
        &self.draws[i * self.dim..(i + 1) * self.dim]
    }
}

#[derive(Debug, Clone)]
struct State {
    q: Vec<f64>,
    p: Vec<f64>,
    g: Vec<f64>,
    logp: f64,
}

#[inline]
fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn add_into(acc: &mut [f64], x: &[f64]) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += v;
    }
}

fn sum(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

// Both ends of the trajectory must still move apart along rho.
#[inline]
fn no_u_turn(p_sharp_minus: &[f64], p_sharp_plus: &[f64], rho: &[f64]) -> bool {
    dot(p_sharp_plus, rho) > 0.0 && dot(p_sharp_minus, rho) > 0.0
}

struct Integrator<'a, T: LogDensity> {
    target: &'a T,
    inv_metric: Vec<f64>,
    eps: f64,
    max_depth: usize,
    max_delta_h: f64,
    n_leapfrog: usize,
    sum_metro: f64,
    divergent: bool,
}

struct Transition {
    accept_stat: f64,
    divergent: bool,
    depth: usize,
}

impl<'a, T: LogDensity> Integrator<'a, T> {
    fn kinetic(&self, p: &[f64]) -> f64 {
        0.5 * p.iter().zip(&self.inv_metric).map(|(x, m)| x * x * m).sum::<f64>()
    }

    fn hamiltonian(&self, z: &State) -> f64 {
        let h = -z.logp + self.kinetic(&z.p);
        if h.is_nan() {
            f64::INFINITY
        } else {
            h
        }
    }

    fn p_sharp(&self, p: &[f64]) -> Vec<f64> {
        p.iter().zip(&self.inv_metric).map(|(x, m)| x * m).collect()
    }

    fn leapfrog(&self, z: &mut State, eps: f64) {
        for (p, g) in z.p.iter_mut().zip(&z.g) {
            *p += 0.5 * eps * g;
        }
        for ((q, p), m) in z.q.iter_mut().zip(&z.p).zip(&self.inv_metric) {
            *q += eps * m * p;
        }
        z.logp = self.target.log_density_grad(&z.q, &mut z.g);
        if !z.logp.is_finite() {
            // keep the state finite; the energy check rejects it
            z.logp = f64::NEG_INFINITY;
            return;
        }
        for (p, g) in z.p.iter_mut().zip(&z.g) {
            *p += 0.5 * eps * g;
        }
    }

    fn sample_momentum<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.inv_metric.iter().map(|m| rng.sample::<f64, _>(StandardNormal) / m.sqrt()).collect()
    }

    #[allow(clippy::too_many_arguments)]
    fn build_tree<R: Rng + ?Sized>(
        &mut self,
        depth: usize,
        z: &mut State,
        z_propose: &mut State,
        p_sharp_beg: &mut Vec<f64>,
        p_sharp_end: &mut Vec<f64>,
        rho: &mut Vec<f64>,
        p_beg: &mut Vec<f64>,
        p_end: &mut Vec<f64>,
        h0: f64,
        sign: f64,
        log_sum_weight: &mut f64,
        rng: &mut R,
    ) -> bool {
        if depth == 0 {
            self.leapfrog(z, sign * self.eps);
            self.n_leapfrog += 1;
            let h = self.hamiltonian(z);
            if h - h0 > self.max_delta_h {
                self.divergent = true;
            }
            *log_sum_weight = log_add_exp(*log_sum_weight, h0 - h);
            self.sum_metro += if h0 - h > 0.0 { 1.0 } else { (h0 - h).exp() };
            *z_propose = z.clone();
            *p_sharp_beg = self.p_sharp(&z.p);
            *p_sharp_end = p_sharp_beg.clone();
            add_into(rho, &z.p);
            *p_beg = z.p.clone();
            *p_end = z.p.clone();
            return !self.divergent;
        }
        let d = z.q.len();
        // initial subtree
        let mut lsw_init = f64::NEG_INFINITY;
        let mut p_init_end = vec![0.0; d];
        let mut p_sharp_init_end = vec![0.0; d];
        let mut rho_init = vec![0.0; d];
        let ok = self.build_tree(
            depth - 1,
            z,
            z_propose,
            p_sharp_beg,
            &mut p_sharp_init_end,
            &mut rho_init,
            p_beg,
            &mut p_init_end,
            h0,
            sign,
            &mut lsw_init,
            rng,
        );
        if !ok {
            return false;
        }
        // final subtree
        let mut z_propose_final = z.clone();
        let mut lsw_final = f64::NEG_INFINITY;
        let mut p_final_beg = vec![0.0; d];
        let mut p_sharp_final_beg = vec![0.0; d];
        let mut rho_final = vec![0.0; d];
        let ok = self.build_tree(
            depth - 1,
            z,
            &mut z_propose_final,
            &mut p_sharp_final_beg,
            p_sharp_end,
            &mut rho_final,
            &mut p_final_beg,
            p_end,
            h0,
            sign,
            &mut lsw_final,
            rng,
        );
        if !ok {
            return false;
        }
        let lsw_subtree = log_add_exp(lsw_init, lsw_final);
        *log_sum_weight = log_add_exp(*log_sum_weight, lsw_subtree);
        if lsw_final > lsw_subtree || rng.random::<f64>() < (lsw_final - lsw_subtree).exp() {
            *z_propose = z_propose_final;
        }
        let rho_subtree = sum(&rho_init, &rho_final);
        add_into(rho, &rho_subtree);
        let mut persist = no_u_turn(p_sharp_beg, p_sharp_end, &rho_subtree);
        let rho_ext = sum(&rho_init, &p_final_beg);
        persist &= no_u_turn(p_sharp_beg, &p_sharp_final_beg, &rho_ext);
        let rho_ext = sum(&rho_final, &p_init_end);
        persist &= no_u_turn(&p_sharp_init_end, p_sharp_end, &rho_ext);
        persist
    }

    fn transition<R: Rng + ?Sized>(&mut self, current: &mut State, rng: &mut R) -> Transition {
        let d = current.q.len();
        current.p = self.sample_momentum(rng);
        let h0 = self.hamiltonian(current);
        let mut z_fwd = current.clone();
        let mut z_bck = current.clone();
        let mut z_sample = current.clone();
        let mut z_propose = current.clone();
        let ps = self.p_sharp(&current.p);
        let (mut p_fwd_fwd, mut p_fwd_bck, mut p_bck_fwd, mut p_bck_bck) =
            (current.p.clone(), current.p.clone(), current.p.clone(), current.p.clone());
        let (mut ps_fwd_fwd, mut ps_fwd_bck, mut ps_bck_fwd, mut ps_bck_bck) = (ps.clone(), ps.clone(), ps.clone(), ps);
        let mut rho = current.p.clone();
        let mut log_sum_weight = 0.0;
        self.n_leapfrog = 0;
        self.sum_metro = 0.0;
        self.divergent = false;
        let mut depth = 0;
        while depth < self.max_depth {
            let mut rho_fwd = vec![0.0; d];
            let mut rho_bck = vec![0.0; d];
            let mut lsw_subtree = f64::NEG_INFINITY;
            let valid = if rng.random::<f64>() > 0.5 {
                let mut z = z_fwd.clone();
                rho_bck.clone_from(&rho);
                let ok = self.build_tree(
                    depth,
                    &mut z,
                    &mut z_propose,
                    &mut ps_fwd_bck,
                    &mut ps_fwd_fwd,
                    &mut rho_fwd,
                    &mut p_fwd_bck,
                    &mut p_fwd_fwd,
                    h0,
                    1.0,
                    &mut lsw_subtree,
                    rng,
                );
                z_fwd = z;
                ok
            } else {
                let mut z = z_bck.clone();
                rho_fwd.clone_from(&rho);
                let ok = self.build_tree(
                    depth,
                    &mut z,
                    &mut z_propose,
                    &mut ps_bck_fwd,
                    &mut ps_bck_bck,
                    &mut rho_bck,
                    &mut p_bck_fwd,
                    &mut p_bck_bck,
                    h0,
                    -1.0,
                    &mut lsw_subtree,
                    rng,
                );
                z_bck = z;
                ok
            };
            if !valid {
                break;
            }
            depth += 1;
            if lsw_subtree > log_sum_weight || rng.random::<f64>() < (lsw_subtree - log_sum_weight).exp() {
                z_sample = z_propose.clone();
            }
            log_sum_weight = log_add_exp(log_sum_weight, lsw_subtree);
            rho = sum(&rho_bck, &rho_fwd);
            if !no_u_turn(&ps_bck_bck, &ps_fwd_fwd, &rho) {
                break;
            }
        }
        let _ = (&p_fwd_bck, &p_bck_fwd);
        *current = z_sample;
        let accept_stat = if self.n_leapfrog > 0 { self.sum_metro / self.n_leapfrog as f64 } else { 0.0 };
        Transition { accept_stat, divergent: self.divergent, depth }
    }

    /// Doubles or halves the step size until a single leapfrog step's
    /// acceptance crosses 0.8.
    fn init_step_size<R: Rng + ?Sized>(&mut self, z: &State, rng: &mut R) -> Result<()> {
        let probe = |this: &Self, rng: &mut R| -> f64 {
            let mut s = z.clone();
            s.p = this.sample_momentum(rng);
            let h0 = this.hamiltonian(&s);
            this.leapfrog(&mut s, this.eps);
            h0 - this.hamiltonian(&s)
        };
        let target = 0.8f64.ln();
        let dh = probe(self, rng);
        let up = dh > target;
        for _ in 0..200 {
            let dh = probe(self, rng);
            if up && !(dh > target) {
                break;
            }
            if !up && !(dh < target) {
                break;
            }
            self.eps = if up { 2.0 * self.eps } else { 0.5 * self.eps };
            if self.eps > 1e7 {
                return Err(Error::StepSize("step size grew without bound; the target is likely improper"));
            }
            if self.eps < 1e-300 {
                return Err(Error::StepSize("step size collapsed to zero"));
            }
        }
        Ok(())
    }
}

struct DualAveraging {
    mu: f64,
    s_bar: f64,
    x_bar: f64,
    counter: f64,
    delta: f64,
}

impl DualAveraging {
    const GAMMA: f64 = 0.05;
    const T0: f64 = 10.0;
    const KAPPA: f64 = 0.75;

    fn new(eps: f64, delta: f64) -> Self {
        Self { mu: (10.0 * eps).ln(), s_bar: 0.0, x_bar: 0.0, counter: 0.0, delta }
    }

    fn learn(&mut self, accept: f64) -> f64 {
        self.counter += 1.0;
        let accept = accept.min(1.0);
        let eta = 1.0 / (self.counter + Self::T0);
        self.s_bar = (1.0 - eta) * self.s_bar + eta * (self.delta - accept);
        let x = self.mu - self.s_bar * self.counter.sqrt() / Self::GAMMA;
        let x_eta = self.counter.powf(-Self::KAPPA);
        self.x_bar = (1.0 - x_eta) * self.x_bar + x_eta * x;
        x.exp()
    }

    fn final_step(&self) -> f64 {
        self.x_bar.exp()
    }
}

// Welford accumulator for the diagonal metric.
struct VarianceEstimator {
    n: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl VarianceEstimator {
    fn new(d: usize) -> Self {
        Self { n: 0, mean: vec![0.0; d], m2: vec![0.0; d] }
    }

    fn add(&mut self, q: &[f64]) {
        self.n += 1;
        for i in 0..q.len() {
            let delta = q[i] - self.mean[i];
            self.mean[i] += delta / self.n as f64;
            self.m2[i] += delta * (q[i] - self.mean[i]);
        }
    }

    /// Sample variance shrunk towards 1e-3.
    fn regularized(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.m2
            .iter()
            .map(|m| {
                let var = if self.n > 1 { m / (n - 1.0) } else { 1.0 };
                (n / (n + 5.0)) * var + 1e-3 * (5.0 / (n + 5.0))
            })
            .collect()
    }
}

struct Windows {
    warmup: usize,
    init_buffer: usize,
    term_buffer: usize,
    window_size: usize,
    next_window_end: usize,
    counter: usize,
    enabled: bool,
}

impl Windows {
    fn new(warmup: usize) -> Self {
        let (mut init, mut term, mut base) = (75usize, 50usize, 25usize);
        let enabled = warmup >= 20;
        if init + base + term > warmup {
            init = (0.15 * warmup as f64) as usize;
            term = (0.1 * warmup as f64) as usize;
            base = warmup.saturating_sub(init + term);
        }
        Self {
            warmup,
            init_buffer: init,
            term_buffer: term,
            window_size: base,
            next_window_end: (init + base).saturating_sub(1),
            counter: 0,
            enabled,
        }
    }

    fn in_slow_window(&self) -> bool {
        self.enabled
            && self.counter >= self.init_buffer
            && self.counter < self.warmup - self.term_buffer
            && self.counter != self.warmup
    }

    fn at_window_end(&self) -> bool {
        self.enabled && self.counter == self.next_window_end && self.counter != self.warmup
    }

    fn advance_window(&mut self) {
        let last = self.warmup - self.term_buffer - 1;
        if self.next_window_end == last {
            return;
        }
        self.window_size *= 2;
        self.next_window_end = self.counter + self.window_size;
        if self.next_window_end != last {
            let boundary = self.next_window_end + 2 * self.window_size;
            if boundary >= self.warmup - self.term_buffer {
                self.next_window_end = last;
            }
        }
    }
}

/// Runs one chain from `init`. The caller is responsible for a finite
/// starting log density.
pub fn run_chain<T: LogDensity, R: Rng + ?Sized>(
    target: &T,
    init: &[f64],
    config: &NutsConfig,
    rng: &mut R,
) -> Result<ChainOutput> {
    let d = target.dim();
    let mut g = vec![0.0; d];
    let logp = target.log_density_grad(init, &mut g);
    if !logp.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Initialization(1));
    }
    let mut state = State { q: init.to_vec(), p: vec![0.0; d], g, logp };
    let mut integ = Integrator {
        target,
        inv_metric: vec![1.0; d],
        eps: 1.0,
        max_depth: config.max_depth,
        max_delta_h: config.max_delta_h,
        n_leapfrog: 0,
        sum_metro: 0.0,
        divergent: false,
    };
    integ.init_step_size(&state, rng)?;
    let mut da = DualAveraging::new(integ.eps, config.target_accept);
    let mut windows = Windows::new(config.warmup);
    let mut var = VarianceEstimator::new(d);
    let mut warmup_divergences = 0;
    let mut leapfrog_steps = 0;
    for _ in 0..config.warmup {
        let t = integ.transition(&mut state, rng);
        leapfrog_steps += integ.n_leapfrog;
        warmup_divergences += t.divergent as usize;
        integ.eps = da.learn(t.accept_stat);
        if windows.in_slow_window() {
            var.add(&state.q);
        }
        if windows.at_window_end() {
            windows.advance_window();
            integ.inv_metric = var.regularized();
            var = VarianceEstimator::new(d);
            integ.init_step_size(&state, rng)?;
            da = DualAveraging::new(integ.eps, config.target_accept);
        }
        windows.counter += 1;
    }
    if config.warmup > 0 {
        integ.eps = da.final_step();
    }
    let thin = config.thin.max(1);
    let mut draws = Vec::with_capacity(config.draws * d);
    let mut accept_sum = 0.0;
    let mut divergences = 0;
    let mut max_depth_hits = 0;
    for i in 0..config.draws * thin {
        let t = integ.transition(&mut state, rng);
        leapfrog_steps += integ.n_leapfrog;
        accept_sum += t.accept_stat;
        divergences += t.divergent as usize;
        max_depth_hits += (t.depth >= config.max_depth) as usize;
        if (i + 1) % thin == 0 {
            draws.extend_from_slice(&state.q);
        }
    }
    let iters = (config.draws * thin).max(1) as f64;
    Ok(ChainOutput {
        dim: d,
        draws,
        step_size: integ.eps,
        inv_metric: integ.inv_metric,
        mean_accept_stat: accept_sum / iters,
        divergences,
        warmup_divergences,
        max_depth_hits,
        leapfrog_steps,
    })
}
