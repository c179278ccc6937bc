//! Behavioral consumer surplus, net welfare, its analytic gradient in the
//! hallucination rates, and the per-product first-order-condition residual.
//!
//! Consumer surplus uses decision utilities for the choice (log-sum) and
//! corrects it with the share-weighted gap between experienced and decision
//! utility. Net welfare subtracts a misinformation externality that is linear
//! in the share-weighted hallucination rate.

use alloc::vec::Vec;

use crate::choice::{self, ShareVector};
use crate::error::{Error, Result};
use crate::math;
use crate::model::Scenario;

/// Tolerance for the two net-welfare routes (absolute, relative above 1).
pub const NW_CONSISTENCY_TOL: f64 = 1e-10;

/// Shares below this cannot be divided by in [`foc_residual`].
pub const MIN_SHARE: f64 = 1e-300;

/// Consumer surplus, externality and net welfare of one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareReport {
    /// Consumer surplus (money units).
    pub cs: f64,
    /// `zeta * avg_h`.
    pub externality: f64,
    /// `cs - externality`.
    pub nw: f64,
    /// Share-weighted hallucination rate `sum_l s_l H_l`.
    pub avg_h: f64,
}

fn cs_from_parts(alpha: f64, v: &[f64], v_tilde: &[f64], s: &[f64]) -> f64 {
    let adjustment: f64 = s
        .iter()
        .zip(v_tilde.iter().zip(v))
        .map(|(s, (t, v))| s * (t - v))
        .sum();
    (math::logsumexp(v) + adjustment) / alpha
}

/// `(1/alpha) [ ln sum exp V_l + sum_l s_l (V~_l - V_l) ]`, integration constant omitted.
pub fn consumer_surplus(scenario: &Scenario) -> f64 {
    let p = choice::utility_profile(scenario);
    let s = math::softmax(&p.v);
    cs_from_parts(scenario.domain().alpha, &p.v, &p.v_tilde, &s)
}

/// Net welfare, evaluated through the definitional form and cross-checked
/// against the explicit rewrite
/// `(1/alpha)[ln sum exp V + (rho - 1) theta Y] - zeta Y`, `Y = sum s H`.
pub fn net_welfare(scenario: &Scenario) -> Result<WelfareReport> {
    let d = scenario.domain();
    let p = choice::utility_profile(scenario);
    let s = math::softmax(&p.v);
    let h = scenario.hallucination();
    let avg_h = math::dot(&s, &h);

    let cs = cs_from_parts(d.alpha, &p.v, &p.v_tilde, &s);
    let externality = d.zeta * avg_h;
    let nw = cs - externality;

    let explicit =
        (math::logsumexp(&p.v) + (d.rho - 1.0) * d.theta * avg_h) / d.alpha - d.zeta * avg_h;
    if !math::close(nw, explicit, NW_CONSISTENCY_TOL) {
        return Err(Error::Inconsistent {
            what: "net welfare: definitional vs explicit form",
            lhs: nw,
            rhs: explicit,
        });
    }
    Ok(WelfareReport {
        cs,
        externality,
        nw,
        avg_h,
    })
}

struct GradientParts {
    shares: ShareVector,
    /// `-c'(H_j)`
    neg_cost_prime: Vec<f64>,
    /// `sum_l (ds_l / dH_j) H_l`
    jac_h: Vec<f64>,
}

fn gradient_parts(scenario: &Scenario) -> GradientParts {
    let shares = choice::shares(scenario);
    let jac_h = choice::jacobian_weighted_h(scenario, &shares);
    let cost = scenario.cost();
    let neg_cost_prime = scenario
        .products()
        .iter()
        .map(|p| -cost.cost_prime_unchecked(p.h))
        .collect();
    GradientParts {
        shares,
        neg_cost_prime,
        jac_h,
    }
}

/// `dNW / dH_j` for every product, prices moving through `c(.)`:
///
/// `-c'(H_j) s_j - (theta/alpha) s_j + (rho-1)(theta/alpha) K_j - zeta s_j - zeta K_j`
/// with `K_j = sum_l (ds_l/dH_j) H_l`.
pub fn nw_gradient(scenario: &Scenario) -> Vec<f64> {
    let d = scenario.domain();
    let wtp = d.wtp();
    let parts = gradient_parts(scenario);
    (0..scenario.len())
        .map(|j| {
            let s = parts.shares[j];
            let k = parts.jac_h[j];
            parts.neg_cost_prime[j] * s - wtp * s + (d.rho - 1.0) * wtp * k - d.zeta * s - d.zeta * k
        })
        .collect()
}

fn residual_from_parts(scenario: &Scenario, parts: &GradientParts, j: usize) -> Result<f64> {
    let d = scenario.domain();
    let s = parts.shares[j];
    if !(s >= MIN_SHARE) {
        return Err(Error::DegenerateShare { index: j, share: s });
    }
    let wtp = d.wtp();
    Ok(parts.neg_cost_prime[j] - wtp - d.zeta - parts.jac_h[j] / s * (d.zeta - (d.rho - 1.0) * wtp))
}

/// Residual of the first-order condition at product `j`:
///
/// `-c'(H_j) - theta/alpha - zeta - (1/s_j) K_j (zeta - (rho-1) theta/alpha)`.
///
/// Zero exactly when the condition holds; `residual * s_j` equals the
/// gradient component.
pub fn foc_residual(scenario: &Scenario, j: usize) -> Result<f64> {
    if j >= scenario.len() {
        return Err(Error::InvalidArgument("product index out of range"));
    }
    residual_from_parts(scenario, &gradient_parts(scenario), j)
}

/// [`foc_residual`] for every product.
pub fn foc_residuals(scenario: &Scenario) -> Result<Vec<f64>> {
    let parts = gradient_parts(scenario);
    (0..scenario.len())
        .map(|j| residual_from_parts(scenario, &parts, j))
        .collect()
}
