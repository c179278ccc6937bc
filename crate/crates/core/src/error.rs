use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// One broken invariant found while validating a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted path of the offending field, e.g. `domain.rho` or `products[1].h`.
    pub field: String,
    /// Human readable description of the violated invariant.
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every violation found in a scenario, in field order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    /// The collected violations.
    pub fn violations(&self) -> &[Violation] {
        &self.0
    }

    /// True when no violation was recorded.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.0.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.0.len())?;
        for v in &self.0 {
            write!(f, "; {v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationErrors {}

/// Errors raised by model evaluation and the policy solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A hallucination rate fell outside the cost model's domain.
    Domain {
        /// Offending rate.
        h: f64,
        /// Lower end of the admissible interval.
        lo: f64,
        /// Upper end of the admissible interval.
        hi: f64,
    },
    /// Scenario invariants do not hold.
    Validation(ValidationErrors),
    /// A choice share is too small to divide by.
    DegenerateShare {
        /// Product index.
        index: usize,
        /// Its share.
        share: f64,
    },
    /// Two computations of the same quantity disagree; this is a bug signal.
    Inconsistent {
        /// Which identity failed.
        what: &'static str,
        /// First route.
        lhs: f64,
        /// Second route.
        rhs: f64,
    },
    /// An iterative solver ran out of iterations.
    NoConvergence {
        /// Iterations spent.
        iterations: usize,
        /// Best iterate found.
        best: Vec<f64>,
        /// Projected gradient sup-norm at `best`.
        grad_norm: f64,
    },
    /// Exhaustive search requested on too many products.
    Dimension {
        /// Number of products in the scenario.
        products: usize,
        /// Largest supported count.
        max: usize,
    },
    /// A finite-difference stencil would leave the cost domain.
    BoundProximity {
        /// Product index.
        index: usize,
        /// Its hallucination rate.
        h: f64,
        /// Stencil half-width.
        step: f64,
    },
    /// An argument broke an operation's precondition.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { h, lo, hi } => {
                write!(f, "hallucination rate {h} outside cost domain [{lo}, {hi}]")
            }
            Error::Validation(v) => write!(f, "invalid scenario: {v}"),
            Error::DegenerateShare { index, share } => {
                write!(f, "share of product {index} is degenerate ({share:e})")
            }
            Error::Inconsistent { what, lhs, rhs } => {
                write!(f, "internal consistency check failed: {what} ({lhs} vs {rhs})")
            }
            Error::NoConvergence {
                iterations,
                grad_norm,
                ..
            } => write!(
                f,
                "no convergence after {iterations} iterations (gradient norm {grad_norm:e})"
            ),
            Error::Dimension { products, max } => {
                write!(f, "{products} products exceed the supported maximum of {max}")
            }
            Error::BoundProximity { index, h, step } => write!(
                f,
                "product {index}: h = {h} is closer than {step} to the cost domain bounds"
            ),
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}

impl From<ValidationErrors> for Error {
    fn from(v: ValidationErrors) -> Self {
        Error::Validation(v)
    }
}
