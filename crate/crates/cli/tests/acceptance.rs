//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL
//! line each and exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use halstd_cli::io::scenario_to_json;
use halstd_cli::sampling::Sampler;
use halstd_cli::selfcheck::grid_step_variation;
use halstd_core::choice::shares;
use halstd_core::oracle::{self, OracleConfig};
use halstd_core::policy::{self, AscentOptions};
use halstd_core::welfare::{foc_residuals, nw_gradient};
use halstd_core::{CostFamily, CostModel, Product, Scenario};

struct Outcome {
    passed: bool,
    detail: String,
}

type Check = fn() -> Outcome;

fn shifted(sc: &Scenario, shift: &[f64]) -> Scenario {
    let products: Vec<Product> = sc
        .products()
        .iter()
        .zip(shift)
        .map(|(p, d)| Product {
            delta: p.delta + d,
            ..p.clone()
        })
        .collect();
    Scenario::new(*sc.domain(), *sc.cost(), products).unwrap()
}

fn logit_sanity() -> Outcome {
    let mut s = Sampler::new(101);
    let (mut sum_err, mut shift_err) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let n = s.count(1, 50);
        let family = s.family();
        let narrow = s.scenario_with(family, n);
        // spread qualities over [-20, 20] on top of the sampler's range
        let spread: Vec<f64> = (0..n).map(|_| s.uniform(-18.0, 18.0)).collect();
        let sc = shifted(&narrow, &spread);
        let shift = vec![s.uniform(-100.0, 100.0); n];
        let a = shares(&sc);
        let b = shares(&shifted(&sc, &shift));
        sum_err = sum_err.max((a.iter().sum::<f64>() - 1.0).abs());
        for (x, y) in a.iter().zip(b.iter()) {
            shift_err = shift_err.max((x - y).abs());
        }
    }
    Outcome {
        passed: sum_err < 1e-12 && shift_err < 1e-12,
        detail: format!("500 scenarios, max |sum-1| = {sum_err:.2e}, max shift gap = {shift_err:.2e} (tol 1e-12)"),
    }
}

fn gradient_vs_differences() -> Outcome {
    let mut s = Sampler::new(202);
    let cfg = OracleConfig::default();
    let (mut worst, mut worst_plain) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for k in 0..200 {
        let n = s.count(1, 10);
        let sc = s.scenario_with(CostFamily::ALL[k % 3], n);
        let g = nw_gradient(&sc);
        let fd = match oracle::finite_diff_gradient(&sc, &cfg) {
            Ok(fd) => fd,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        worst = worst.max(oracle::gradient_rel_error(&sc, &g, &fd));
        let scale = g.iter().chain(&fd).fold(f64::MIN_POSITIVE, |m, x| m.max(x.abs()));
        let gap = g.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst_plain = worst_plain.max(gap / scale);
    }
    Outcome {
        passed: failures == 0 && worst < 1e-6,
        detail: format!(
            "200 scenarios over 3 families, max rel err = {worst:.2e} (tol 1e-6; vector-normalized {worst_plain:.2e}), oracle errors = {failures}"
        ),
    }
}

fn mandate_zeroes_residuals() -> Outcome {
    let mut s = Sampler::new(303);
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..100 {
        let base = s.scenario(10);
        let (sc, _) = s.with_interior_mandate(&base);
        let res = policy::perfect_info_mandate(sc.domain(), sc.cost())
            .and_then(|m| sc.with_uniform_hallucination(m.h_star))
            .and_then(|u| foc_residuals(&u));
        match res {
            Ok(r) => worst = r.iter().fold(worst, |m, x| m.max(x.abs())),
            Err(_) => errors += 1,
        }
    }
    Outcome {
        passed: errors == 0 && worst < 1e-8,
        detail: format!("100 scenarios, max |residual| = {worst:.2e} (tol 1e-8), errors = {errors}"),
    }
}

fn mandate_ignores_awareness() -> Outcome {
    let mut s = Sampler::new(404);
    let (mut rho_gap, mut prod_gap) = (0.0f64, 0.0f64);
    let mut errors = 0;
    for _ in 0..100 {
        let sc = s.scenario(6);
        let mut d = *sc.domain();
        let bumped: Vec<Product> = sc
            .products()
            .iter()
            .map(|p| Product {
                delta: p.delta + s.uniform(-1.0, 1.0),
                omega: p.omega + s.uniform(0.0, 0.5),
                ..p.clone()
            })
            .collect();
        let mut solve = |rho: f64, products: &[Product]| {
            d.rho = rho;
            Scenario::new(d, *sc.cost(), products.to_vec())
                .map_err(Into::into)
                .and_then(|x| policy::optimal_uniform_mandate(&x))
                .map(|m| m.h_star)
        };
        match (solve(0.1, sc.products()), solve(0.9, sc.products()), solve(0.1, &bumped)) {
            (Ok(lo), Ok(hi), Ok(other)) => {
                rho_gap = rho_gap.max((lo - hi).abs());
                prod_gap = prod_gap.max((lo - other).abs());
            }
            _ => errors += 1,
        }
    }
    Outcome {
        passed: errors == 0 && rho_gap < 1e-8 && prod_gap < 1e-8,
        detail: format!(
            "100 scenarios, max |h(0.1)-h(0.9)| = {rho_gap:.2e}, max delta/omega gap = {prod_gap:.2e} (tol 1e-8), errors = {errors}"
        ),
    }
}

fn log_uniform(s: &mut Sampler, lo: f64, hi: f64) -> f64 {
    s.uniform(lo.ln(), hi.ln()).exp()
}

fn closed_form_vs_bisection() -> Outcome {
    let mut s = Sampler::new(505);
    let mut worst = 0.0f64;
    let mut clamped = 0;
    let mut errors = 0;
    for _ in 0..300 {
        let family = s.family();
        let model = s.cost(family);
        // log-uniform over the attainable marginal savings, widened on both
        // sides so that some draws clamp at each bound
        let m = log_uniform(
            &mut s,
            -0.5 * model.cost_prime(model.h_hi).unwrap(),
            -2.0 * model.cost_prime(model.h_lo).unwrap(),
        );
        match (
            policy::marginal_cost_closed_form(&model, m),
            policy::marginal_cost_bisection(&model, m),
        ) {
            (Ok(c), Ok(b)) => {
                worst = worst.max((c.h_star - b.h_star).abs());
                clamped += c.clamped as usize;
            }
            _ => errors += 1,
        }
    }
    let anchor = policy::marginal_cost_closed_form(&CostModel::inverse(1.0, 1.0), 4.0)
        .map(|m| m.h_star)
        .unwrap_or(f64::NAN);
    let anchor_err = (anchor - 0.5).abs();
    Outcome {
        passed: errors == 0 && worst < 1e-10 && anchor_err < 1e-10,
        detail: format!(
            "300 draws ({clamped} clamped), max gap = {worst:.2e} (tol 1e-10); Inverse(1,1), m=4 -> {anchor}, errors = {errors}"
        ),
    }
}

fn decomposition_exact() -> Outcome {
    let mut s = Sampler::new(606);
    let (mut identity, mut independent) = (0.0f64, 0.0f64);
    let mut errors = 0;
    for _ in 0..300 {
        let sc = s.scenario(10);
        let cap = s.uniform(sc.cost().h_lo, sc.cost().h_hi);
        match (policy::decompose(&sc, cap), oracle::recompute_decomposition(&sc, cap)) {
            (Ok(r), Ok(o)) => {
                identity = identity.max((r.component_sum() - r.delta_nw).abs());
                independent = independent.max((o.delta_nw - r.delta_nw).abs());
            }
            _ => errors += 1,
        }
    }
    Outcome {
        passed: errors == 0 && identity < 1e-10 && independent < 1e-10,
        detail: format!(
            "300 (scenario, cap) pairs, max |I+II+III-dNW| = {identity:.2e}, max independent gap = {independent:.2e} (tol 1e-10), errors = {errors}"
        ),
    }
}

fn conditional_signs() -> Outcome {
    let mut s = Sampler::new(707);
    let (mut checked, mut sign_failures, mut avg_rose, mut errors) = (0, 0, 0, 0);
    for _ in 0..300 {
        let sc = s.scenario(10);
        let cap = s.uniform(sc.cost().h_lo, sc.cost().h_hi);
        let Ok(r) = policy::decompose(&sc, cap) else {
            errors += 1;
            continue;
        };
        if r.avg_h_after <= r.avg_h_before {
            checked += 1;
            let zeta = sc.domain().zeta;
            if r.comp_ii < 0.0 || (zeta > 0.0 && r.comp_iii < 0.0) {
                sign_failures += 1;
            }
        } else {
            avg_rose += 1;
        }
    }
    Outcome {
        passed: errors == 0 && sign_failures == 0,
        detail: format!(
            "300 pairs, {checked} with avg H not rising, sign violations = {sign_failures}; diagnostic: avg H rose in {avg_rose} cases; errors = {errors}"
        ),
    }
}

fn optimizer_vs_grid() -> Outcome {
    let mut s = Sampler::new(808);
    let cfg = OracleConfig::default();
    let (mut shortfall, mut spread, mut interior) = (f64::NEG_INFINITY, 0.0f64, 0);
    let mut errors = 0;
    for _ in 0..50 {
        let n = s.count(1, 2);
        let family = s.family();
        let sc = s.scenario_with(family, n);
        let run = || -> Result<_, halstd_core::Error> {
            let grid = oracle::grid_search_nw(&sc, &cfg)?;
            let slack = grid_step_variation(&sc, &grid)?;
            let opt = policy::unconstrained_optimum(&sc, &AscentOptions::default())?;
            Ok((grid, slack, opt))
        };
        let Ok((grid, slack, opt)) = run() else {
            errors += 1;
            continue;
        };
        shortfall = shortfall.max(grid.nw - slack - opt.nw);
        let (lo, hi) = (sc.cost().h_lo, sc.cost().h_hi);
        if opt.h.iter().all(|&h| h > lo && h < hi) {
            interior += 1;
            spread = opt.h.iter().fold(spread, |m, h| m.max((h - opt.h[0]).abs()));
        }
    }
    Outcome {
        passed: errors == 0 && shortfall <= 0.0 && spread < 1e-6,
        detail: format!(
            "50 scenarios (L <= 2), max (grid max - step variation - optimum NW) = {shortfall:.2e} (must be <= 0); {interior} interior optima, max spread = {spread:.2e} (tol 1e-6); errors = {errors}"
        ),
    }
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let mut s = Sampler::new(909);
    let sc = s.scenario(8);
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, scenario_to_json(&sc)).unwrap();
    let path = path.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_halstd");
    let runs: [&[&str]; 2] = [
        &["sweep", "--scenario", path, "--grid", "0.05:1.0:40"],
        &["selfcheck", "--seed", "17"],
    ];
    let mut same = true;
    let mut notes = Vec::new();
    for args in runs {
        let once = || Command::new(bin).args(args).output().expect("binary runs");
        let (a, b) = (once(), once());
        let ok = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
        same &= ok;
        notes.push(format!("{} {} bytes {}", args[0], a.stdout.len(), if ok { "identical" } else { "DIFFER" }));
    }
    Outcome {
        passed: same,
        detail: notes.join(", "),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 9] = [
        ("logit sanity", logit_sanity, 5),
        ("analytic gradient vs central differences", gradient_vs_differences, 10),
        ("uniform mandate zeroes every first-order residual", mandate_zeroes_residuals, 5),
        ("mandate invariant to awareness, quality and markup", mandate_ignores_awareness, 5),
        ("closed-form mandate vs bisection", closed_form_vs_bisection, 2),
        ("decomposition exactness", decomposition_exact, 5),
        ("conditional sign properties", conditional_signs, 5),
        ("optimizer vs grid oracle", optimizer_vs_grid, 60),
        ("CLI determinism", cli_determinism, 10),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let pass = out.passed && in_time;
        failed += !pass as usize;
        println!(
            "{} [{}] {name}: {} [{:.2}s, limit {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
