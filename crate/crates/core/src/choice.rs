//! Decision and experienced utilities, logit shares, and the share Jacobian
//! with respect to hallucination rates.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::math;
use crate::model::Scenario;

/// Decision (`v`) and experienced (`v_tilde`) utilities, indexed like the products.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityProfile {
    /// `V_l = delta_l - alpha P_l - theta rho H_l`
    pub v: Vec<f64>,
    /// `V~_l = delta_l - alpha P_l - theta H_l`
    pub v_tilde: Vec<f64>,
}

impl UtilityProfile {
    /// Misperception wedge `V~_l - V_l = (rho - 1) theta H_l <= 0`.
    pub fn wedge(&self) -> Vec<f64> {
        self.v_tilde.iter().zip(&self.v).map(|(t, v)| t - v).collect()
    }
}

/// Logit choice probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareVector(Vec<f64>);

impl ShareVector {
    /// Wrap raw probabilities.
    pub fn new(s: Vec<f64>) -> Self {
        ShareVector(s)
    }

    /// Underlying vector.
    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Share-weighted mean of `x`.
    pub fn weighted_mean(&self, x: &[f64]) -> f64 {
        math::dot(&self.0, x)
    }
}

impl Deref for ShareVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Dense `L x L` matrix of `ds_l / dH_j`, row `l`, column `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShareJacobian {
    n: usize,
    data: Vec<f64>,
}

impl ShareJacobian {
    /// Dimension `L`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `ds_l / dH_j`.
    pub fn get(&self, l: usize, j: usize) -> f64 {
        self.data[l * self.n + j]
    }

    /// `sum_l ds_l / dH_j`; zero up to rounding.
    pub fn column_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|l| self.get(l, j)).sum()
    }

    /// `sum_l (ds_l / dH_j) x_l` for every column `j`.
    pub fn contract_columns(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|l| self.get(l, j) * x[l]).sum())
            .collect()
    }
}

fn utilities_with_awareness(scenario: &Scenario, rho: f64) -> Vec<f64> {
    let d = scenario.domain();
    let cost = scenario.cost();
    scenario
        .products()
        .iter()
        .map(|p| {
            let price = cost.cost_unchecked(p.h) + p.omega;
            p.delta - d.alpha * price - d.theta * rho * p.h
        })
        .collect()
}

/// Decision utilities `V_l`, with hallucination disutility scaled by awareness.
pub fn decision_utilities(scenario: &Scenario) -> Vec<f64> {
    utilities_with_awareness(scenario, scenario.domain().rho)
}

/// Experienced utilities `V~_l` (awareness forced to one).
pub fn experienced_utilities(scenario: &Scenario) -> Vec<f64> {
    utilities_with_awareness(scenario, 1.0)
}

/// Both utility vectors.
pub fn utility_profile(scenario: &Scenario) -> UtilityProfile {
    UtilityProfile {
        v: decision_utilities(scenario),
        v_tilde: experienced_utilities(scenario),
    }
}

/// Logit shares over decision utilities.
pub fn shares(scenario: &Scenario) -> ShareVector {
    ShareVector(math::softmax(&decision_utilities(scenario)))
}

/// `dV_j / dH_j = -alpha c'(H_j) - theta rho`: the price moves with `H` through `c(.)`.
pub fn utility_slopes(scenario: &Scenario) -> Vec<f64> {
    let d = scenario.domain();
    let cost = scenario.cost();
    scenario
        .products()
        .iter()
        .map(|p| -d.alpha * cost.cost_prime_unchecked(p.h) - d.theta * d.rho)
        .collect()
}

/// `J[l][j] = s_l (1{l=j} - s_j) w_j` with `w_j` from [`utility_slopes`].
pub fn share_jacobian(scenario: &Scenario) -> ShareJacobian {
    let s = shares(scenario);
    let w = utility_slopes(scenario);
    let n = s.len();
    let mut data = Vec::with_capacity(n * n);
    for l in 0..n {
        for j in 0..n {
            let kron = if l == j { 1.0 } else { 0.0 };
            data.push(s[l] * (kron - s[j]) * w[j]);
        }
    }
    ShareJacobian { n, data }
}

/// `sum_l (ds_l / dH_j) H_l` for every `j`, without forming the matrix.
///
/// Equals `s_j w_j (H_j - sum_l s_l H_l)`.
pub fn jacobian_weighted_h(scenario: &Scenario, s: &[f64]) -> Vec<f64> {
    let w = utility_slopes(scenario);
    let h = scenario.hallucination();
    let avg = math::dot(s, &h);
    (0..s.len()).map(|j| s[j] * w[j] * (h[j] - avg)).collect()
}
