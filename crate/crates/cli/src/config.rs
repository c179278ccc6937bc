use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};

use crate::error::CliError;

/// Operation to run on the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Parse and validate the scenario file.
    Validate,
    /// Prices, utilities and logit shares per product.
    Shares,
    /// Consumer surplus, externality and net welfare.
    Welfare,
    /// Perfect-information and numerically optimal uniform mandates.
    Mandate,
    /// Welfare-maximizing hallucination rates, product by product.
    Optimize,
    /// Counterfactual under a maximum standard (needs --cap).
    ApplyStandard,
    /// Welfare decomposition of a maximum standard (needs --cap).
    Decompose,
    /// Decomposition over a grid of caps (needs --grid).
    Sweep,
    /// Oracle checks on built-in randomized scenarios.
    Selfcheck,
}

/// Evenly spaced caps, `START:STOP:COUNT` on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    /// Grid points; the last one is exactly `stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.stop
                } else {
                    self.start + k as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected START:STOP:COUNT, got {s:?}"));
        };
        let start: f64 = start.trim().parse().map_err(|_| format!("bad grid start {start:?}"))?;
        let stop: f64 = stop.trim().parse().map_err(|_| format!("bad grid stop {stop:?}"))?;
        let count: usize = count.trim().parse().map_err(|_| format!("bad grid count {count:?}"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if count == 0 {
            return Err("grid count must be >= 1".into());
        }
        if count > 1 && !(stop > start) {
            return Err("grid stop must exceed start".into());
        }
        Ok(Grid { start, stop, count })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Command-line arguments.
#[derive(Debug, Parser)]
#[command(name = "halstd", version, about = "Welfare analysis of hallucination standards for LLM products")]
pub struct Args {
    /// What to compute.
    #[arg(value_enum)]
    pub command: Command,

    /// Scenario JSON file (not needed for selfcheck).
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,

    /// Maximum hallucination rate for apply-standard and decompose.
    #[arg(long, value_name = "X")]
    pub cap: Option<f64>,

    /// Caps for sweep, START:STOP:COUNT.
    #[arg(long, value_name = "START:STOP:COUNT")]
    pub grid: Option<Grid>,

    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Gradient tolerance for optimize; gradient-check tolerance for selfcheck.
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,

    /// Seed for selfcheck scenarios and optimizer restarts.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
}

/// A checked run request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub scenario_path: Option<PathBuf>,
    pub cap: Option<f64>,
    pub grid: Option<Grid>,
    pub out_path: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: u64,
}

impl RunConfig {
    /// Check that the command has what it needs.
    pub fn check(&self) -> Result<(), CliError> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.command != Command::Selfcheck && self.scenario_path.is_none() {
            return usage("--scenario is required for this command");
        }
        match self.command {
            Command::ApplyStandard | Command::Decompose if self.cap.is_none() => {
                return usage("--cap is required for apply-standard and decompose")
            }
            Command::Sweep if self.grid.is_none() => return usage("--grid is required for sweep"),
            _ => {}
        }
        if let Some(cap) = self.cap {
            if !cap.is_finite() {
                return usage("--cap must be finite");
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return usage("--tol must be finite and > 0");
            }
        }
        Ok(())
    }
}

impl TryFrom<Args> for RunConfig {
    type Error = CliError;

    fn try_from(a: Args) -> Result<Self, CliError> {
        let cfg = RunConfig {
            command: a.command,
            scenario_path: a.scenario,
            cap: a.cap,
            grid: a.grid,
            out_path: a.out,
            tol: a.tol,
            seed: a.seed,
        };
        cfg.check()?;
        Ok(cfg)
    }
}
