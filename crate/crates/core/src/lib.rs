#![no_std]
#![warn(missing_docs)]
// `!(x > 0.0)` is how NaN gets rejected here
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Logit welfare model for maximum hallucination standards on domain-specific
//! LLM products.
//!
//! A [`Scenario`] describes one domain type (price sensitivity, hallucination
//! disutility, awareness, marginal misinformation damage), a shared
//! development cost curve `c(H)` and a nonempty set of products. On top of it
//! the crate computes:
//!
//! - decision and experienced utilities, logit shares and the share Jacobian
//!   ([`choice`]);
//! - behavioral consumer surplus, net welfare, its analytic gradient and the
//!   per-product first-order-condition residual ([`welfare`]);
//! - optimal mandates, unconstrained welfare maxima, maximum-standard
//!   counterfactuals and the three-way welfare decomposition ([`policy`]);
//! - brute-force validators for all of the above ([`oracle`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line tool live in the `halstd-cli` crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod choice;
mod error;
pub mod math;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod welfare;

pub use crate::error::{Error, Result, ValidationErrors, Violation};
pub use crate::model::{
    validate_scenario, CostFamily, CostModel, DomainParams, Product, Scenario, ScenarioSpec,
};
