//! Brute-force validators: central differences, exhaustive grid search and a
//! second route to the welfare change of a standard.
//!
//! Deliberately naive. Nothing here is used by the solvers themselves.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::policy::{self, DecompositionReport};
use crate::welfare;

/// Largest product count accepted by [`grid_search_nw`].
pub const GRID_MAX_PRODUCTS: usize = 3;

/// Settings shared by the oracle checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Central-difference half-step.
    pub fd_step: f64,
    /// Grid points per hallucination axis, endpoints included.
    pub grid_points_per_dim: usize,
    /// Agreement tolerance for callers comparing against the oracle.
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            fd_step: 1e-5,
            grid_points_per_dim: 101,
            tolerance: 1e-6,
        }
    }
}

impl OracleConfig {
    fn check(&self) -> Result<()> {
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::InvalidArgument("fd_step must be finite and > 0"));
        }
        if self.grid_points_per_dim < 2 {
            return Err(Error::InvalidArgument("grid_points_per_dim must be >= 2"));
        }
        Ok(())
    }
}

/// Central-difference gradient of net welfare in the hallucination rates.
///
/// Prices move with the rates through `c(.)`. Every rate must sit at least
/// `fd_step` inside the cost domain.
pub fn finite_diff_gradient(scenario: &Scenario, config: &OracleConfig) -> Result<Vec<f64>> {
    config.check()?;
    let step = config.fd_step;
    let model = scenario.cost();
    let h = scenario.hallucination();
    for (index, &x) in h.iter().enumerate() {
        if x - step < model.h_lo || x + step > model.h_hi {
            return Err(Error::BoundProximity { index, h: x, step });
        }
    }
    let mut grad = Vec::with_capacity(h.len());
    let mut probe = h.clone();
    for j in 0..h.len() {
        probe[j] = h[j] + step;
        let up = welfare::net_welfare(&scenario.with_hallucination(&probe)?)?.nw;
        probe[j] = h[j] - step;
        let down = welfare::net_welfare(&scenario.with_hallucination(&probe)?)?.nw;
        probe[j] = h[j];
        grad.push((up - down) / (2.0 * step));
    }
    Ok(grad)
}

/// Sup-norm relative error between an analytic and a finite-difference gradient.
///
/// Each component is measured against the size of the terms it is built
/// from, `s_j (|c'(H_j)| + theta/alpha + zeta)`, as well as against the
/// vectors themselves. Near a stationary point those terms cancel, and the
/// central-difference truncation error stays proportional to them rather
/// than to the (small) gradient.
pub fn gradient_rel_error(scenario: &Scenario, analytic: &[f64], numeric: &[f64]) -> f64 {
    let d = scenario.domain();
    let cost = scenario.cost();
    let s = crate::choice::shares(scenario);
    let term_scale = scenario
        .products()
        .iter()
        .zip(s.iter())
        .map(|(p, s)| s * (cost.cost_prime_unchecked(p.h).abs() + d.marginal_benefit()))
        .fold(0.0f64, f64::max);
    let scale = analytic
        .iter()
        .chain(numeric)
        .fold(term_scale, |m, x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    analytic
        .iter()
        .zip(numeric)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}

/// Best point of an exhaustive grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    /// Maximizing grid point.
    pub h: Vec<f64>,
    /// Net welfare there.
    pub nw: f64,
    /// Grid spacing.
    pub step: f64,
}

/// Axis values of the tensor grid over `[h_lo, h_hi]`.
pub fn grid_axis(scenario: &Scenario, points: usize) -> Vec<f64> {
    let model = scenario.cost();
    let step = (model.h_hi - model.h_lo) / (points - 1) as f64;
    (0..points)
        .map(|k| {
            if k + 1 == points {
                model.h_hi
            } else {
                model.h_lo + k as f64 * step
            }
        })
        .collect()
}

/// Evaluate net welfare on every point of the tensor grid over
/// `[h_lo, h_hi]^L` (`L <= 3`) and return the best one. Ties keep the first
/// point in lexicographic order.
pub fn grid_search_nw(scenario: &Scenario, config: &OracleConfig) -> Result<GridOptimum> {
    config.check()?;
    let n = scenario.len();
    if n > GRID_MAX_PRODUCTS {
        return Err(Error::Dimension {
            products: n,
            max: GRID_MAX_PRODUCTS,
        });
    }
    let points = config.grid_points_per_dim;
    let axis = grid_axis(scenario, points);
    let mut index = vec![0usize; n];
    let mut h = vec![axis[0]; n];
    let mut best: Option<GridOptimum> = None;
    loop {
        for (x, &i) in h.iter_mut().zip(&index) {
            *x = axis[i];
        }
        let nw = welfare::net_welfare(&scenario.with_hallucination(&h)?)?.nw;
        if best.as_ref().is_none_or(|b| nw > b.nw) {
            best = Some(GridOptimum {
                h: h.clone(),
                nw,
                step: axis[1] - axis[0],
            });
        }
        // odometer increment, last axis fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(best.expect("grid is nonempty"));
            }
            k -= 1;
            index[k] += 1;
            if index[k] < points {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Net welfare from first principles: utilities, shares, experienced-utility
/// correction and externality, written out without the welfare module.
fn naive_net_welfare(scenario: &Scenario) -> f64 {
    let d = scenario.domain();
    let cost = scenario.cost();
    let mut v = Vec::with_capacity(scenario.len());
    let mut v_tilde = Vec::with_capacity(scenario.len());
    for p in scenario.products() {
        let price = cost.cost_unchecked(p.h) + p.omega;
        v.push(p.delta - d.alpha * price - d.theta * d.rho * p.h);
        v_tilde.push(p.delta - d.alpha * price - d.theta * p.h);
    }
    let shift = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = v.iter().map(|x| libm::exp(x - shift)).collect();
    let total: f64 = weights.iter().sum();
    let mut adjustment = 0.0;
    let mut avg_h = 0.0;
    for (l, p) in scenario.products().iter().enumerate() {
        let s = weights[l] / total;
        adjustment += s * (v_tilde[l] - v[l]);
        avg_h += s * p.h;
    }
    let cs = (shift + libm::log(total) + adjustment) / d.alpha;
    cs - d.zeta * avg_h
}

/// Decomposition whose `delta_nw` comes from a direct before/after net
/// welfare evaluation instead of [`policy::decompose`]'s own value.
///
/// The components are taken from `policy::decompose`, so
/// `report.component_sum() - report.delta_nw` is the independent gap.
pub fn recompute_decomposition(scenario: &Scenario, cap: f64) -> Result<DecompositionReport> {
    let mut report = policy::decompose(scenario, cap)?;
    let h_bar: Vec<f64> = scenario.products().iter().map(|p| p.h.min(cap)).collect();
    let after = scenario.with_hallucination(&h_bar)?;
    report.delta_nw = naive_net_welfare(&after) - naive_net_welfare(scenario);
    Ok(report)
}
