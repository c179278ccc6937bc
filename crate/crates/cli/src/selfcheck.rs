//! Oracle suite on seeded random scenarios. The output depends only on the
//! seed and the tolerances.

use halstd_core::choice::shares;
use halstd_core::oracle::{self, GridOptimum, OracleConfig};
use halstd_core::policy::{self, AscentOptions};
use halstd_core::welfare::{foc_residuals, net_welfare, nw_gradient};
use halstd_core::{CostFamily, Error, Product, Scenario};

use crate::report::{num, Table};
use crate::sampling::Sampler;

/// Outcome of one check over all of its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, cases: usize, max_error: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            cases,
            max_error,
            tolerance,
            // NaN fails
            passed: max_error <= tolerance,
        }
    }
}

/// Default relative tolerance of the finite-difference gradient check.
pub const GRADIENT_TOL: f64 = 1e-6;

/// Run every check. `gradient_tol` overrides [`GRADIENT_TOL`].
pub fn run_all(seed: u64, gradient_tol: Option<f64>) -> Result<Vec<CheckResult>, Error> {
    let mut s = Sampler::new(seed);
    Ok(vec![
        share_sums(&mut s, 200),
        gradient(&mut s, 100, gradient_tol.unwrap_or(GRADIENT_TOL))?,
        mandate_foc(&mut s, 50)?,
        mandate_awareness(&mut s, 50)?,
        mandate_roots(&mut s, 200)?,
        decomposition(&mut s, 200)?,
        optimizer_vs_grid(&mut s, 6)?,
    ])
}

pub fn to_table(results: &[CheckResult]) -> Table {
    let mut t = Table::new(&["check", "cases", "max_error", "tolerance", "passed"]);
    for r in results {
        t.push(vec![
            r.name.to_string(),
            r.cases.to_string(),
            num(r.max_error),
            num(r.tolerance),
            r.passed.to_string(),
        ]);
    }
    t
}

fn shifted(sc: &Scenario, shift: f64) -> Scenario {
    let products: Vec<Product> = sc
        .products()
        .iter()
        .map(|p| Product {
            delta: p.delta + shift,
            ..p.clone()
        })
        .collect();
    Scenario::new(*sc.domain(), *sc.cost(), products).expect("shift keeps validity")
}

fn share_sums(s: &mut Sampler, cases: usize) -> CheckResult {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let sc = s.scenario(50);
        let shift = s.uniform(-100.0, 100.0);
        let a = shares(&sc);
        let b = shares(&shifted(&sc, shift));
        worst = worst.max((a.iter().sum::<f64>() - 1.0).abs());
        for (x, y) in a.iter().zip(b.iter()) {
            worst = worst.max((x - y).abs());
        }
    }
    CheckResult::new("shares", cases, worst, 1e-12)
}

fn gradient(s: &mut Sampler, cases: usize, tol: f64) -> Result<CheckResult, Error> {
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    for k in 0..cases {
        let n = s.count(1, 10);
        let sc = s.scenario_with(CostFamily::ALL[k % 3], n);
        let fd = oracle::finite_diff_gradient(&sc, &cfg)?;
        worst = worst.max(oracle::gradient_rel_error(&sc, &nw_gradient(&sc), &fd));
    }
    Ok(CheckResult::new("gradient_fd", cases, worst, tol))
}

fn mandate_foc(s: &mut Sampler, cases: usize) -> Result<CheckResult, Error> {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let base = s.scenario(10);
        let (sc, _) = s.with_interior_mandate(&base);
        let h = policy::perfect_info_mandate(sc.domain(), sc.cost())?.h_star;
        for r in foc_residuals(&sc.with_uniform_hallucination(h)?)? {
            worst = worst.max(r.abs());
        }
    }
    Ok(CheckResult::new("mandate_foc", cases, worst, 1e-8))
}

fn mandate_awareness(s: &mut Sampler, cases: usize) -> Result<CheckResult, Error> {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let sc = s.scenario(6);
        let mut d = *sc.domain();
        d.rho = 0.1;
        let low = policy::optimal_uniform_mandate(&sc.with_domain(d)?)?.h_star;
        d.rho = 0.9;
        let high = policy::optimal_uniform_mandate(&sc.with_domain(d)?)?.h_star;
        let bumped: Vec<Product> = sc
            .products()
            .iter()
            .map(|p| Product {
                delta: p.delta + s.uniform(-1.0, 1.0),
                omega: p.omega + s.uniform(0.0, 0.5),
                ..p.clone()
            })
            .collect();
        let other = policy::optimal_uniform_mandate(&Scenario::new(d, *sc.cost(), bumped)?)?.h_star;
        worst = worst.max((low - high).abs()).max((low - other).abs());
    }
    Ok(CheckResult::new("mandate_awareness", cases, worst, 1e-8))
}

fn mandate_roots(s: &mut Sampler, cases: usize) -> Result<CheckResult, Error> {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let family = s.family();
        let model = s.cost(family);
        let lo = -0.5 * model.cost_prime(model.h_hi)?;
        let hi = -2.0 * model.cost_prime(model.h_lo)?;
        let m = s.uniform(lo.ln(), hi.ln()).exp();
        let closed = policy::marginal_cost_closed_form(&model, m)?;
        let bis = policy::marginal_cost_bisection(&model, m)?;
        worst = worst.max((closed.h_star - bis.h_star).abs());
    }
    Ok(CheckResult::new("mandate_roots", cases, worst, 1e-10))
}

fn decomposition(s: &mut Sampler, cases: usize) -> Result<CheckResult, Error> {
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let sc = s.scenario(10);
        let cap = s.uniform(sc.cost().h_lo, sc.cost().h_hi);
        let r = policy::decompose(&sc, cap)?;
        let o = oracle::recompute_decomposition(&sc, cap)?;
        worst = worst
            .max((r.component_sum() - r.delta_nw).abs())
            .max((o.delta_nw - r.delta_nw).abs());
    }
    Ok(CheckResult::new("decomposition", cases, worst, 1e-10))
}

/// Largest change in net welfare one grid step away from the grid argmax.
pub fn grid_step_variation(sc: &Scenario, best: &GridOptimum) -> Result<f64, Error> {
    let (lo, hi) = (sc.cost().h_lo, sc.cost().h_hi);
    let mut worst = 0.0f64;
    for j in 0..best.h.len() {
        for dir in [-1.0, 1.0] {
            let mut h = best.h.clone();
            h[j] = (h[j] + dir * best.step).clamp(lo, hi);
            let nw = net_welfare(&sc.with_hallucination(&h)?)?.nw;
            worst = worst.max((nw - best.nw).abs());
        }
    }
    Ok(worst)
}

/// Shortfall of the optimizer below `grid max - one-step variation`, and
/// the spread of interior optima, both required to be zero.
fn optimizer_vs_grid(s: &mut Sampler, cases: usize) -> Result<CheckResult, Error> {
    let cfg = OracleConfig::default();
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let n = s.count(1, 2);
        let family = s.family();
        let sc = s.scenario_with(family, n);
        let grid = oracle::grid_search_nw(&sc, &cfg)?;
        let slack = grid_step_variation(&sc, &grid)?;
        let opt = policy::unconstrained_optimum(&sc, &AscentOptions::default())?;
        worst = worst.max(grid.nw - slack - opt.nw);
        if opt.h.iter().all(|&h| h > sc.cost().h_lo && h < sc.cost().h_hi) {
            let spread = opt.h.iter().fold(0.0f64, |m, h| m.max((h - opt.h[0]).abs()));
            worst = worst.max(spread - 1e-6);
        }
    }
    Ok(CheckResult::new("optimizer_grid", cases, worst.max(0.0), 0.0))
}
