#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Scenario files, CSV reports and command dispatch for the `halstd` tool.
//!
//! Scenarios are JSON documents with `domain`, `cost` and `products` keys.
//! Every command writes one CSV table; floats carry 17 significant digits.

pub mod config;
mod error;
pub mod io;
pub mod report;
pub mod sampling;
pub mod selfcheck;

use std::fs::File;
use std::io::{BufWriter, Write};

use halstd_core::choice;
use halstd_core::policy::{self, AscentOptions};
use halstd_core::welfare;
use halstd_core::Scenario;

pub use crate::config::{Args, Command, Grid, RunConfig};
pub use crate::error::CliError;
pub use crate::io::load_scenario;
use crate::report::{decomposition_row, num, Table, DECOMPOSITION_HEADER};

/// Run one command and write its CSV to `--out` or stdout.
pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.check()?;
    let (table, failures) = execute(cfg)?;
    match &cfg.out_path {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            table.write_to(&mut w)?;
            w.flush().map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
        }
        None => table.write_to(std::io::stdout().lock())?,
    }
    if failures > 0 {
        return Err(CliError::SelfCheck(failures));
    }
    Ok(())
}

/// Compute the table for a command without writing it. The count is the
/// number of failed self-checks.
pub fn execute(cfg: &RunConfig) -> Result<(Table, usize), CliError> {
    if cfg.command == Command::Selfcheck {
        let results = selfcheck::run_all(cfg.seed, cfg.tol)?;
        let failures = results.iter().filter(|r| !r.passed).count();
        return Ok((selfcheck::to_table(&results), failures));
    }
    let path = cfg
        .scenario_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("--scenario is required for this command".into()))?;
    let sc = load_scenario(path)?;
    let table = match cfg.command {
        Command::Validate => validate(&sc),
        Command::Shares => shares(&sc),
        Command::Welfare => welfare_table(&sc)?,
        Command::Mandate => mandate(&sc)?,
        Command::Optimize => optimize(&sc, cfg)?,
        Command::ApplyStandard => apply_standard(&sc, required_cap(cfg)?)?,
        Command::Decompose => {
            let mut t = Table::new(&DECOMPOSITION_HEADER);
            t.push(decomposition_row(&policy::decompose(&sc, required_cap(cfg)?)?));
            t
        }
        Command::Sweep => {
            let grid = cfg
                .grid
                .ok_or_else(|| CliError::Usage("--grid is required for sweep".into()))?;
            let mut t = Table::new(&DECOMPOSITION_HEADER);
            for r in policy::sweep_standard(&sc, &grid.points())? {
                t.push(decomposition_row(&r));
            }
            t
        }
        Command::Selfcheck => unreachable!("handled above"),
    };
    Ok((table, 0))
}

fn required_cap(cfg: &RunConfig) -> Result<f64, CliError> {
    cfg.cap
        .ok_or_else(|| CliError::Usage("--cap is required for this command".into()))
}

fn validate(sc: &Scenario) -> Table {
    let mut t = Table::new(&["status", "products", "family"]);
    t.push(vec![
        "ok".into(),
        sc.len().to_string(),
        sc.cost().family.name().into(),
    ]);
    t
}

fn shares(sc: &Scenario) -> Table {
    let p = choice::utility_profile(sc);
    let s = choice::shares(sc);
    let prices = sc.prices();
    let mut t = Table::new(&["id", "h", "price", "v", "v_tilde", "share"]);
    for (l, prod) in sc.products().iter().enumerate() {
        t.push(vec![
            prod.id.clone(),
            num(prod.h),
            num(prices[l]),
            num(p.v[l]),
            num(p.v_tilde[l]),
            num(s[l]),
        ]);
    }
    t
}

fn welfare_table(sc: &Scenario) -> Result<Table, CliError> {
    let r = welfare::net_welfare(sc)?;
    let mut t = Table::new(&["cs", "externality", "nw", "avg_h"]);
    t.push(vec![num(r.cs), num(r.externality), num(r.nw), num(r.avg_h)]);
    Ok(t)
}

fn mandate(sc: &Scenario) -> Result<Table, CliError> {
    let m = sc.domain().marginal_benefit();
    let rows = [
        ("perfect_info", policy::perfect_info_mandate(sc.domain(), sc.cost())?),
        ("newton", policy::marginal_cost_newton(sc.cost(), m, 200)?),
        ("uniform_search", policy::optimal_uniform_mandate(sc)?),
    ];
    let mut t = Table::new(&["solver", "method", "h_star", "residual", "iterations", "clamped"]);
    for (name, sol) in rows {
        t.push(vec![
            name.into(),
            sol.method.name().into(),
            num(sol.h_star),
            num(sol.residual),
            sol.iterations.to_string(),
            sol.clamped.to_string(),
        ]);
    }
    Ok(t)
}

fn optimize(sc: &Scenario, cfg: &RunConfig) -> Result<Table, CliError> {
    let mut opts = AscentOptions {
        seed: cfg.seed,
        ..AscentOptions::default()
    };
    if let Some(tol) = cfg.tol {
        opts.grad_tol = tol;
    }
    let opt = policy::unconstrained_optimum(sc, &opts)?;
    let g = welfare::nw_gradient(&sc.with_hallucination(&opt.h)?);
    let mut t = Table::new(&["id", "h_start", "h_opt", "gradient", "nw_opt", "grad_norm", "limits"]);
    for (l, prod) in sc.products().iter().enumerate() {
        t.push(vec![
            prod.id.clone(),
            num(prod.h),
            num(opt.h[l]),
            num(g[l]),
            num(opt.nw),
            num(opt.grad_norm),
            opt.limits.len().to_string(),
        ]);
    }
    Ok(t)
}

fn apply_standard(sc: &Scenario, cap: f64) -> Result<Table, CliError> {
    let out = policy::apply_standard(sc, cap)?;
    let mut t = Table::new(&["id", "h", "h_bar", "price_bar", "v_bar", "s_bar", "nw_bar"]);
    for (l, prod) in sc.products().iter().enumerate() {
        t.push(vec![
            prod.id.clone(),
            num(prod.h),
            num(out.h_bar[l]),
            num(out.price_bar[l]),
            num(out.v_bar[l]),
            num(out.s_bar[l]),
            num(out.nw_bar),
        ]);
    }
    Ok(t)
}
