//! Domain types: cost curves, products, domain parameters and scenarios.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result, ValidationErrors};

/// Default admissible hallucination interval.
pub const DEFAULT_H_LO: f64 = 0.01;
/// Default admissible hallucination interval.
pub const DEFAULT_H_HI: f64 = 1.0;

/// Parametric family of the development cost curve `c(H)`.
///
/// Every family is strictly decreasing and strictly convex on a positive
/// interval, so lowering hallucinations costs more at an increasing rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CostFamily {
    /// `c(H) = a + b / H`
    #[cfg_attr(feature = "serde", serde(alias = "Inverse"))]
    Inverse,
    /// `c(H) = a - b ln H`
    #[cfg_attr(feature = "serde", serde(alias = "Log"))]
    Log,
    /// `c(H) = a exp(-b H)`, `a > 0`
    #[cfg_attr(feature = "serde", serde(alias = "Exp"))]
    Exp,
}

impl CostFamily {
    /// All families, in declaration order.
    pub const ALL: [CostFamily; 3] = [CostFamily::Inverse, CostFamily::Log, CostFamily::Exp];

    /// Lowercase name used in scenario files.
    pub fn name(self) -> &'static str {
        match self {
            CostFamily::Inverse => "inverse",
            CostFamily::Log => "log",
            CostFamily::Exp => "exp",
        }
    }
}

/// Development cost `c(H)` of shipping a product with hallucination rate `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostModel {
    /// Functional form.
    pub family: CostFamily,
    /// Level parameter (money units).
    pub a: f64,
    /// Curvature parameter, strictly positive.
    pub b: f64,
    /// Smallest admissible hallucination rate.
    #[cfg_attr(feature = "serde", serde(default = "default_h_lo"))]
    pub h_lo: f64,
    /// Largest admissible hallucination rate.
    #[cfg_attr(feature = "serde", serde(default = "default_h_hi"))]
    pub h_hi: f64,
}

#[cfg(feature = "serde")]
fn default_h_lo() -> f64 {
    DEFAULT_H_LO
}

#[cfg(feature = "serde")]
fn default_h_hi() -> f64 {
    DEFAULT_H_HI
}

impl CostModel {
    /// Cost model on the default interval `[0.01, 1.0]`.
    pub fn new(family: CostFamily, a: f64, b: f64) -> Self {
        CostModel {
            family,
            a,
            b,
            h_lo: DEFAULT_H_LO,
            h_hi: DEFAULT_H_HI,
        }
    }

    /// Shorthand for `CostModel::new(CostFamily::Inverse, a, b)`.
    pub fn inverse(a: f64, b: f64) -> Self {
        Self::new(CostFamily::Inverse, a, b)
    }

    /// Shorthand for `CostModel::new(CostFamily::Log, a, b)`.
    pub fn log(a: f64, b: f64) -> Self {
        Self::new(CostFamily::Log, a, b)
    }

    /// Shorthand for `CostModel::new(CostFamily::Exp, a, b)`.
    pub fn exp(a: f64, b: f64) -> Self {
        Self::new(CostFamily::Exp, a, b)
    }

    /// Replace the admissible interval.
    pub fn with_bounds(mut self, h_lo: f64, h_hi: f64) -> Self {
        self.h_lo = h_lo;
        self.h_hi = h_hi;
        self
    }

    /// True when `h` lies in `[h_lo, h_hi]`.
    pub fn contains(&self, h: f64) -> bool {
        h >= self.h_lo && h <= self.h_hi
    }

    /// Clamp `h` into `[h_lo, h_hi]`.
    pub fn clamp(&self, h: f64) -> f64 {
        h.clamp(self.h_lo, self.h_hi)
    }

    fn check(&self, h: f64) -> Result<()> {
        if self.contains(h) {
            Ok(())
        } else {
            Err(Error::Domain {
                h,
                lo: self.h_lo,
                hi: self.h_hi,
            })
        }
    }

    /// `c(h)`.
    pub fn cost(&self, h: f64) -> Result<f64> {
        self.check(h)?;
        Ok(self.cost_unchecked(h))
    }

    /// `c'(h)`, strictly negative.
    pub fn cost_prime(&self, h: f64) -> Result<f64> {
        self.check(h)?;
        Ok(self.cost_prime_unchecked(h))
    }

    /// `c''(h)`, strictly positive.
    pub fn cost_second(&self, h: f64) -> Result<f64> {
        self.check(h)?;
        Ok(self.cost_second_unchecked(h))
    }

    pub(crate) fn cost_unchecked(&self, h: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        match self.family {
            CostFamily::Inverse => a + b / h,
            CostFamily::Log => a - b * libm::log(h),
            CostFamily::Exp => a * libm::exp(-b * h),
        }
    }

    pub(crate) fn cost_prime_unchecked(&self, h: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        match self.family {
            CostFamily::Inverse => -b / (h * h),
            CostFamily::Log => -b / h,
            CostFamily::Exp => -a * b * libm::exp(-b * h),
        }
    }

    pub(crate) fn cost_second_unchecked(&self, h: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        match self.family {
            CostFamily::Inverse => 2.0 * b / (h * h * h),
            CostFamily::Log => b / (h * h),
            CostFamily::Exp => a * b * b * libm::exp(-b * h),
        }
    }

    /// Unclamped solution of `-c'(H) = m` for `m > 0`.
    ///
    /// Returns `+inf` for `m == 0` (marginal savings never fall to zero) and
    /// may return a non-positive value for `Exp` when `ab <= m`.
    pub fn marginal_cost_inverse(&self, m: f64) -> f64 {
        let (a, b) = (self.a, self.b);
        match self.family {
            CostFamily::Inverse => libm::sqrt(b / m),
            CostFamily::Log => b / m,
            CostFamily::Exp => libm::log(a * b / m) / b,
        }
    }

    fn collect_violations(&self, errs: &mut ValidationErrors) {
        if !self.a.is_finite() {
            errs.push("cost.a", "a must be finite");
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            errs.push("cost.b", "b must be finite and > 0");
        }
        if !(self.h_lo > 0.0 && self.h_lo.is_finite()) {
            errs.push("cost.h_lo", "h_lo must be finite and > 0");
        }
        if !(self.h_hi > self.h_lo && self.h_hi.is_finite()) {
            errs.push("cost.h_hi", "h_hi must be finite and > h_lo");
        }
        if self.family == CostFamily::Exp && !(self.a > 0.0) {
            errs.push("cost.a", "a must be > 0 for the exp family");
        }
    }
}

/// One LLM product.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Product {
    /// Identifier, unique within a scenario.
    pub id: String,
    /// Overall quality (utility units).
    pub delta: f64,
    /// Constant markup over development cost (money units).
    pub omega: f64,
    /// Hallucination tendency.
    pub h: f64,
}

impl Product {
    /// Build a product.
    pub fn new(id: impl Into<String>, delta: f64, omega: f64, h: f64) -> Self {
        Product {
            id: id.into(),
            delta,
            omega,
            h,
        }
    }

    /// `c(h) + omega`.
    pub fn price(&self, model: &CostModel) -> Result<f64> {
        Ok(model.cost(self.h)? + self.omega)
    }
}

/// Preferences and damages of one domain type.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DomainParams {
    /// Marginal utility of income, `> 0`.
    pub alpha: f64,
    /// Hallucination disutility, `>= 0`.
    pub theta: f64,
    /// Awareness of hallucinations at choice time, in `[0, 1]`.
    pub rho: f64,
    /// Constant marginal misinformation damage, `>= 0`.
    pub zeta: f64,
}

impl DomainParams {
    /// Build domain parameters (unchecked; see [`Scenario::new`]).
    pub fn new(alpha: f64, theta: f64, rho: f64, zeta: f64) -> Self {
        DomainParams {
            alpha,
            theta,
            rho,
            zeta,
        }
    }

    /// Willingness to pay for a unit reduction in hallucinations, `theta / alpha`.
    pub fn wtp(&self) -> f64 {
        self.theta / self.alpha
    }

    /// Full social marginal benefit of lowering `H`: `theta / alpha + zeta`.
    pub fn marginal_benefit(&self) -> f64 {
        self.wtp() + self.zeta
    }

    fn collect_violations(&self, errs: &mut ValidationErrors) {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            errs.push("domain.alpha", "alpha must be finite and > 0");
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            errs.push("domain.theta", "theta must be finite and >= 0");
        }
        if !(0.0..=1.0).contains(&self.rho) {
            errs.push("domain.rho", "rho must lie in [0,1]");
        }
        if !(self.zeta >= 0.0 && self.zeta.is_finite()) {
            errs.push("domain.zeta", "zeta must be finite and >= 0");
        }
    }
}

/// Unvalidated scenario as read from a file or built by hand.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioSpec {
    /// Domain type.
    pub domain: DomainParams,
    /// Shared cost curve.
    pub cost: CostModel,
    /// Products in choice-set order.
    pub products: Vec<Product>,
}

impl ScenarioSpec {
    /// Check every invariant and return all violations at once.
    pub fn validate(self) -> core::result::Result<Scenario, ValidationErrors> {
        let mut errs = ValidationErrors::default();
        self.domain.collect_violations(&mut errs);
        self.cost.collect_violations(&mut errs);
        if self.products.is_empty() {
            errs.push("products", "at least one product is required");
        }
        let bounds_ok = self.cost.h_lo.is_finite() && self.cost.h_hi.is_finite();
        for (i, p) in self.products.iter().enumerate() {
            if !p.delta.is_finite() {
                errs.push(format!("products[{i}].delta"), "delta must be finite");
            }
            if !(p.omega >= 0.0 && p.omega.is_finite()) {
                errs.push(format!("products[{i}].omega"), "omega must be finite and >= 0");
            }
            if !p.h.is_finite() || (bounds_ok && !self.cost.contains(p.h)) {
                errs.push(
                    format!("products[{i}].h"),
                    format!(
                        "h = {} must lie in [h_lo, h_hi] = [{}, {}]",
                        p.h, self.cost.h_lo, self.cost.h_hi
                    ),
                );
            }
            if let Some(j) = self.products[..i].iter().position(|q| q.id == p.id) {
                errs.push(
                    format!("products[{i}].id"),
                    format!(
                        "duplicate id: products[{j}].id and products[{i}].id are both \"{}\"",
                        p.id
                    ),
                );
            }
        }
        if errs.is_empty() {
            Ok(Scenario {
                domain: self.domain,
                cost: self.cost,
                products: self.products,
            })
        } else {
            Err(errs)
        }
    }
}

/// Validate a raw scenario, collecting every violation.
pub fn validate_scenario(raw: ScenarioSpec) -> core::result::Result<Scenario, ValidationErrors> {
    raw.validate()
}

/// A validated scenario: one domain type, one cost curve, `L >= 1` products.
///
/// All downstream operations take a `&Scenario`; holding one guarantees every
/// product rate lies inside the cost domain, so evaluation cannot fail.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    domain: DomainParams,
    cost: CostModel,
    products: Vec<Product>,
}

impl Scenario {
    /// Validate and build.
    pub fn new(
        domain: DomainParams,
        cost: CostModel,
        products: Vec<Product>,
    ) -> core::result::Result<Self, ValidationErrors> {
        ScenarioSpec {
            domain,
            cost,
            products,
        }
        .validate()
    }

    /// Domain parameters.
    pub fn domain(&self) -> &DomainParams {
        &self.domain
    }

    /// Cost curve.
    pub fn cost(&self) -> &CostModel {
        &self.cost
    }

    /// Products.
    pub fn products(&self) -> &[Product] {
        &self.products
    }

    /// Number of products `L`.
    pub fn len(&self) -> usize {
        self.products.len()
    }

    /// Always false for a validated scenario.
    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }

    /// Hallucination rates in product order.
    pub fn hallucination(&self) -> Vec<f64> {
        self.products.iter().map(|p| p.h).collect()
    }

    /// Prices `c(H_l) + omega_l`.
    pub fn prices(&self) -> Vec<f64> {
        self.products
            .iter()
            .map(|p| self.cost.cost_unchecked(p.h) + p.omega)
            .collect()
    }

    /// Same scenario with every product's rate replaced; prices follow `c(.)`.
    pub fn with_hallucination(&self, h: &[f64]) -> Result<Scenario> {
        if h.len() != self.products.len() {
            return Err(Error::InvalidArgument(
                "hallucination vector length differs from product count",
            ));
        }
        for &x in h {
            self.cost.check(x)?;
        }
        let products = self
            .products
            .iter()
            .zip(h)
            .map(|(p, &x)| Product { h: x, ..p.clone() })
            .collect();
        Ok(Scenario {
            domain: self.domain,
            cost: self.cost,
            products,
        })
    }

    /// Same scenario with every product at rate `h`.
    pub fn with_uniform_hallucination(&self, h: f64) -> Result<Scenario> {
        self.with_hallucination(&alloc::vec![h; self.len()])
    }

    /// Same products and cost curve under different domain parameters.
    pub fn with_domain(&self, domain: DomainParams) -> core::result::Result<Scenario, ValidationErrors> {
        Scenario::new(domain, self.cost, self.products.clone())
    }

    /// Back to the raw, serializable form.
    pub fn into_spec(self) -> ScenarioSpec {
        ScenarioSpec {
            domain: self.domain,
            cost: self.cost,
            products: self.products,
        }
    }
}
