//! Small numeric kernels shared by the model modules.

use alloc::vec::Vec;

/// `ln Σ exp(x)` with max-subtraction. Returns `-inf` for an empty slice.
pub fn logsumexp(x: &[f64]) -> f64 {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = x.iter().map(|&v| libm::exp(v - max)).sum();
    max + libm::log(sum)
}

/// Normalized exponentials of `x`, shifted by the maximum first.
pub fn softmax(x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = x.iter().map(|&v| libm::exp(v - max)).collect();
    let sum: f64 = out.iter().sum();
    for s in &mut out {
        *s /= sum;
    }
    out
}

/// `Σ a_i b_i`.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sup-norm.
pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `|a - b| <= tol * max(1, |a|, |b|)`: absolute near zero, relative for large values.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
