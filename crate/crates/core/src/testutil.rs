//! Test-only oracles that share no code with the library paths they check.

#[cfg(not(feature = "std"))]
use num_traits::Float;

const FRAC_2_SQRT_PI: f64 = core::f64::consts::FRAC_2_SQRT_PI;

/// `erfc(x)` for `x >= 0`: a positive-term series for `erf` near the origin
/// and the Laplace continued fraction in the tail.
fn erfc_nonneg(x: f64) -> f64 {
    if x < 2.5 {
        // erf(x) = 2/√π e^{−x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term > 1e-18 * sum {
            term *= 2.0 * x * x / (2.0 * n + 3.0);
            sum += term;
            n += 1.0;
        }
        1.0 - FRAC_2_SQRT_PI * (-x * x).exp() * sum
    } else {
        let mut acc = x;
        for k in (1..=300).rev() {
            acc = x + (k as f64 / 2.0) / acc;
        }
        (-x * x).exp() / (core::f64::consts::PI.sqrt() * acc)
    }
}

pub fn oracle_erfc(x: f64) -> f64 {
    if x >= 0.0 {
        erfc_nonneg(x)
    } else {
        2.0 - erfc_nonneg(-x)
    }
}

/// Central difference with one Richardson step, error `O(h⁴)`.
pub fn richardson<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let h2 = 0.5 * h;
    let d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    (4.0 * d2 - d1) / 3.0
}

/// Standard normal CDF.
pub fn oracle_phi(x: f64) -> f64 {
    0.5 * oracle_erfc(-x / core::f64::consts::SQRT_2)
}

#[test]
fn oracle_reference_values() {
    // high-precision reference values
    assert!((oracle_phi(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
    assert!((oracle_phi(0.5) - 0.691_462_461_274_013_1).abs() < 1e-15);
    assert!((oracle_phi(-10.0) / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-13);
}
