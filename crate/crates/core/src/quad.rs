//! Adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Used as the independent numerical oracle for normalization constants,
//! Bessel integral representations and distribution moments.

use alloc::vec::Vec;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Integrates `f` over the finite interval `[a, b]` to an absolute or
/// relative tolerance. Returns `(value, error_estimate)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&mut f, a, b);
    intervals.push((a, b, v, e));
    let mut total = v;
    let mut err = e;
    let mut iters = 0;
    while err > abs_tol.max(rel_tol * total.abs()) && iters < 5000 {
        iters += 1;
        // split the interval with the largest error
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, iv)| if iv.3 > acc.1 { (i, iv.3) } else { acc });
        let (lo, hi, v0, e0) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - v0;
        err += e1 + e2 - e0;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    let total: f64 = intervals.iter().map(|iv| iv.2).sum();
    let err: f64 = intervals.iter().map(|iv| iv.3).sum();
    (total, err)
}

/// Integrates over `[a, ∞)` through the substitution `x = a + t/(1-t)`.
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Integrates over the whole real line.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(mut f: F, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    let (a, ea) = integrate_to_inf(&mut f, 0.0, abs_tol, rel_tol);
    let (b, eb) = integrate_to_inf(|x| f(-x), 0.0, abs_tol, rel_tol);
    (a + b, ea + eb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 1e-14, 1e-14);
        assert!((v - 3.75).abs() < 1e-13);
    }

    #[test]
    fn gaussian_integrates_to_root_pi() {
        let (v, _) = integrate_real_line(|x| (-x * x).exp(), 1e-13, 1e-13);
        assert!((v - core::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn integrable_singularity() {
        let (v, _) = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10, 1e-10);
        assert!((v - 2.0).abs() < 1e-8);
    }
}
