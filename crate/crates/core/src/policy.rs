//! Mandates, welfare maximization over hallucination rates, maximum
//! standards and the decomposition of their welfare effect.
//!
//! The mandate condition `-c'(H) = theta/alpha + zeta` does not involve the
//! awareness parameter, the qualities or the markups: a common rate at that
//! level zeroes every product's first-order condition at once because the
//! share Jacobian's columns sum to zero.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choice::{self, ShareVector};
use crate::error::{Error, Result};
use crate::math;
use crate::model::{CostModel, DomainParams, Scenario};
use crate::welfare;

/// Closed form and bisection must agree to this absolute tolerance.
pub const ROOT_AGREEMENT_TOL: f64 = 1e-10;

/// Tolerance of the decomposition identity (absolute, relative above 1).
pub const DECOMPOSITION_TOL: f64 = 1e-10;

/// How a mandate was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MandateMethod {
    /// Family-specific closed form.
    ClosedForm,
    /// Safeguarded Newton iteration.
    Newton,
    /// Bisection on the cost domain.
    Bisection,
}

impl MandateMethod {
    /// Lowercase label used in reports.
    pub fn name(self) -> &'static str {
        match self {
            MandateMethod::ClosedForm => "closed_form",
            MandateMethod::Newton => "newton",
            MandateMethod::Bisection => "bisection",
        }
    }
}

/// A uniform hallucination mandate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandateSolution {
    /// Mandated rate, inside `[h_lo, h_hi]`.
    pub h_star: f64,
    /// `-c'(h_star) - theta/alpha - zeta`.
    pub residual: f64,
    /// Solver used.
    pub method: MandateMethod,
    /// Iterations spent (zero for the closed form).
    pub iterations: usize,
    /// True when the condition has no interior root and a bound was returned.
    pub clamped: bool,
}

/// Where `-c'(H) - m` changes sign on the cost domain, if it does.
enum Bracket {
    Interior,
    /// Marginal savings already below `m` at `h_lo`.
    Low,
    /// Marginal savings still above `m` at `h_hi`.
    High,
}

fn bracket(model: &CostModel, m: f64) -> Bracket {
    let f = |h: f64| -model.cost_prime_unchecked(h) - m;
    if f(model.h_lo) <= 0.0 {
        Bracket::Low
    } else if f(model.h_hi) >= 0.0 {
        Bracket::High
    } else {
        Bracket::Interior
    }
}

fn corner(model: &CostModel, m: f64, method: MandateMethod, side: Bracket) -> MandateSolution {
    let h = match side {
        Bracket::Low => model.h_lo,
        _ => model.h_hi,
    };
    MandateSolution {
        h_star: h,
        residual: -model.cost_prime_unchecked(h) - m,
        method,
        iterations: 0,
        // an exact zero at the bound is still an interior-type solution
        clamped: -model.cost_prime_unchecked(h) != m,
    }
}

fn check_m(m: f64) -> Result<()> {
    if m >= 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("marginal benefit must be finite and >= 0"))
    }
}

/// Solve `-c'(H) = m` with the family's closed form, clamped to the domain.
pub fn marginal_cost_closed_form(model: &CostModel, m: f64) -> Result<MandateSolution> {
    check_m(m)?;
    match bracket(model, m) {
        Bracket::Interior => {}
        side => return Ok(corner(model, m, MandateMethod::ClosedForm, side)),
    }
    let h = model.clamp(model.marginal_cost_inverse(m));
    Ok(MandateSolution {
        h_star: h,
        residual: -model.cost_prime_unchecked(h) - m,
        method: MandateMethod::ClosedForm,
        iterations: 0,
        clamped: false,
    })
}

/// Solve `-c'(H) = m` by bisection on `[h_lo, h_hi]`.
///
/// `-c'(H) - m` is strictly decreasing for every family, so a sign change at
/// the bounds brackets a unique root.
pub fn marginal_cost_bisection(model: &CostModel, m: f64) -> Result<MandateSolution> {
    check_m(m)?;
    match bracket(model, m) {
        Bracket::Interior => {}
        side => return Ok(corner(model, m, MandateMethod::Bisection, side)),
    }
    let f = |h: f64| -model.cost_prime_unchecked(h) - m;
    let (mut lo, mut hi) = (model.h_lo, model.h_hi);
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let fm = f(mid);
        if fm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        } else if fm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    Ok(MandateSolution {
        h_star: h,
        residual: f(h),
        method: MandateMethod::Bisection,
        iterations,
        clamped: false,
    })
}

/// Solve `-c'(H) = m` by Newton's method using `c''`, falling back to a
/// bisection step whenever Newton leaves the current bracket.
pub fn marginal_cost_newton(model: &CostModel, m: f64, max_iterations: usize) -> Result<MandateSolution> {
    check_m(m)?;
    match bracket(model, m) {
        Bracket::Interior => {}
        side => return Ok(corner(model, m, MandateMethod::Newton, side)),
    }
    let f = |h: f64| -model.cost_prime_unchecked(h) - m;
    let (mut lo, mut hi) = (model.h_lo, model.h_hi);
    let mut h = 0.5 * (lo + hi);
    for it in 1..=max_iterations {
        let fh = f(h);
        if fh == 0.0 {
            return Ok(newton_solution(h, fh, it));
        }
        if fh > 0.0 {
            lo = h;
        } else {
            hi = h;
        }
        // f' = -c'' < 0
        let mut next = h + fh / model.cost_second_unchecked(h);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 4.0 * f64::EPSILON * h.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(newton_solution(next, f(next), it));
        }
        h = next;
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        best: vec![h],
        grad_norm: f(h).abs(),
    })
}

fn newton_solution(h: f64, residual: f64, iterations: usize) -> MandateSolution {
    MandateSolution {
        h_star: h,
        residual,
        method: MandateMethod::Newton,
        iterations,
        clamped: false,
    }
}

/// Mandate under perfect information: `-c'(H*) = theta/alpha + zeta`.
///
/// Uses the closed form and verifies it against bisection. When the
/// condition has no interior root the nearer bound is returned with
/// `clamped = true` (`h_hi` when `theta/alpha + zeta = 0`).
pub fn perfect_info_mandate(domain: &DomainParams, model: &CostModel) -> Result<MandateSolution> {
    let m = domain.marginal_benefit();
    let closed = marginal_cost_closed_form(model, m)?;
    let bisected = marginal_cost_bisection(model, m)?;
    if (closed.h_star - bisected.h_star).abs() > ROOT_AGREEMENT_TOL {
        return Err(Error::Inconsistent {
            what: "mandate: closed form vs bisection",
            lhs: closed.h_star,
            rhs: bisected.h_star,
        });
    }
    Ok(closed)
}

/// Default iteration cap of [`optimal_uniform_mandate`].
pub const UNIFORM_MAX_ITERATIONS: usize = 200;

/// Net welfare when every product sits at the common rate `h`.
fn uniform_nw(scenario: &Scenario, h: f64) -> Result<f64> {
    Ok(welfare::net_welfare(&scenario.with_uniform_hallucination(h)?)?.nw)
}

/// Directional derivative of net welfare along the all-ones direction.
fn uniform_slope(scenario: &Scenario, h: f64) -> Result<f64> {
    Ok(welfare::nw_gradient(&scenario.with_uniform_hallucination(h)?)
        .iter()
        .sum())
}

/// Best common hallucination rate for all products, found numerically.
///
/// Golden-section search on the net welfare of the uniform profile, then a
/// Newton polish on the summed analytic gradient. Along the diagonal that
/// sum reduces to `-c'(H) - theta/alpha - zeta`, whose derivative is `-c''`.
pub fn optimal_uniform_mandate(scenario: &Scenario) -> Result<MandateSolution> {
    optimal_uniform_mandate_with(scenario, UNIFORM_MAX_ITERATIONS)
}

/// [`optimal_uniform_mandate`] with an explicit iteration cap.
pub fn optimal_uniform_mandate_with(scenario: &Scenario, max_iterations: usize) -> Result<MandateSolution> {
    let model = scenario.cost();
    let m = scenario.domain().marginal_benefit();
    let (mut a, mut b) = (model.h_lo, model.h_hi);
    let ratio = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = uniform_nw(scenario, x1)?;
    let mut f2 = uniform_nw(scenario, x2)?;
    let mut iterations = 0;
    while b - a > 1e-6 * (model.h_hi - model.h_lo) {
        if iterations >= max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                best: vec![0.5 * (a + b)],
                grad_norm: uniform_slope(scenario, 0.5 * (a + b))?.abs(),
            });
        }
        iterations += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = uniform_nw(scenario, x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = uniform_nw(scenario, x1)?;
        }
    }

    let mut h = 0.5 * (a + b);
    loop {
        let slope = uniform_slope(scenario, h)?;
        let at_lo = h <= model.h_lo && slope <= 0.0;
        let at_hi = h >= model.h_hi && slope >= 0.0;
        if at_lo || at_hi {
            return Ok(MandateSolution {
                h_star: h,
                residual: -model.cost_prime_unchecked(h) - m,
                method: MandateMethod::Newton,
                iterations,
                clamped: slope != 0.0,
            });
        }
        if iterations >= max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                best: vec![h],
                grad_norm: slope.abs(),
            });
        }
        iterations += 1;
        let next = model.clamp(h + slope / model.cost_second_unchecked(h));
        // the slope cannot be resolved below rounding of -c'(h) - m
        let noise = 16.0 * f64::EPSILON * m.max(-model.cost_prime_unchecked(h)).max(1.0);
        if slope.abs() <= noise || (next - h).abs() <= 4.0 * f64::EPSILON * h {
            return Ok(MandateSolution {
                h_star: next,
                residual: -model.cost_prime_unchecked(next) - m,
                method: MandateMethod::Newton,
                iterations,
                clamped: false,
            });
        }
        h = next;
    }
}

/// Options of [`unconstrained_optimum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    /// Iteration cap per start.
    pub max_iterations: usize,
    /// Projected-gradient sup-norm at which a start is converged.
    pub grad_tol: f64,
    /// Scaled-step sup-norm at which a start is converged.
    pub step_tol: f64,
    /// Number of starts, the first being the scenario's own rates.
    pub starts: usize,
    /// Seed of the extra random starts.
    pub seed: u64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            max_iterations: 10_000,
            grad_tol: 1e-8,
            step_tol: 1e-10,
            starts: 5,
            seed: 0,
        }
    }
}

/// Result of [`unconstrained_optimum`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    /// Best maximizer found across starts.
    pub h: Vec<f64>,
    /// Net welfare at `h`.
    pub nw: f64,
    /// Projected-gradient sup-norm at `h`.
    pub grad_norm: f64,
    /// Iterations of the run started from the scenario's own rates.
    pub iterations: usize,
    /// Distinct limit points reached from the different starts.
    pub limits: Vec<Vec<f64>>,
}

struct AscentRun {
    h: Vec<f64>,
    nw: f64,
    grad_norm: f64,
    iterations: usize,
}

/// Gradient with components that point out of the box at an active bound zeroed.
fn projected_gradient(g: &[f64], h: &[f64], model: &CostModel) -> Vec<f64> {
    g.iter()
        .zip(h)
        .map(|(&g, &x)| {
            if x <= model.h_lo {
                g.max(0.0)
            } else if x >= model.h_hi {
                g.min(0.0)
            } else {
                g
            }
        })
        .collect()
}

/// Per-coordinate curvature estimate used to scale the ascent direction.
fn curvature(scenario: &Scenario, s: &ShareVector) -> Vec<f64> {
    let d = scenario.domain();
    let cost = scenario.cost();
    let wedge = d.zeta + (1.0 - d.rho) * d.wtp();
    let slopes = choice::utility_slopes(scenario);
    scenario
        .products()
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let c2 = cost.cost_second_unchecked(p.h) + slopes[j].max(0.0) * wedge * (1.0 - s[j]);
            (s[j] * c2).max(f64::MIN_POSITIVE)
        })
        .collect()
}

fn ascend(scenario: &Scenario, start: &[f64], opts: &AscentOptions) -> Result<AscentRun> {
    let model = *scenario.cost();
    let project = |x: &mut Vec<f64>| x.iter_mut().for_each(|v| *v = model.clamp(*v));

    let mut h: Vec<f64> = start.to_vec();
    project(&mut h);
    let mut current = scenario.with_hallucination(&h)?;
    let mut nw = welfare::net_welfare(&current)?.nw;

    // Scaled step: projected point along the curvature-scaled gradient, minus h.
    let scaled_step = |sc: &Scenario, x: &[f64], g: &[f64]| -> Vec<f64> {
        let s = choice::shares(sc);
        let curv = curvature(sc, &s);
        x.iter()
            .zip(g.iter().zip(&curv))
            .map(|(&x, (&g, &c))| model.clamp(x + g / c) - x)
            .collect::<Vec<f64>>()
    };

    let mut iterations = 0;
    loop {
        let g = welfare::nw_gradient(&current);
        let pg_norm = math::norm_inf(&projected_gradient(&g, &h, &model));
        let step = scaled_step(&current, &h, &g);
        let step_norm = math::norm_inf(&step);
        if pg_norm < opts.grad_tol && step_norm < opts.step_tol {
            return Ok(AscentRun {
                h,
                nw,
                grad_norm: pg_norm,
                iterations,
            });
        }
        if iterations >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                best: h,
                grad_norm: pg_norm,
            });
        }
        iterations += 1;

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = h
                .iter()
                .zip(&step)
                .map(|(&x, &d)| model.clamp(x + t * d))
                .collect();
            let trial_sc = scenario.with_hallucination(&trial)?;
            let trial_nw = welfare::net_welfare(&trial_sc)?.nw;
            let predicted: f64 = g.iter().zip(trial.iter().zip(&h)).map(|(g, (a, b))| g * (a - b)).sum();
            let gain = trial_nw - nw;
            let noise = 64.0 * f64::EPSILON * nw.abs().max(1.0);
            let sufficient = gain >= 1e-4 * predicted && gain > 0.0;
            // below rounding noise the welfare values cannot rank the points;
            // fall back on the scaled step getting shorter
            let noisy = predicted.abs() <= noise && gain.abs() <= noise && {
                let g2 = welfare::nw_gradient(&trial_sc);
                math::norm_inf(&scaled_step(&trial_sc, &trial, &g2)) < step_norm
            };
            if sufficient || noisy {
                h = trial;
                current = trial_sc;
                nw = trial_nw;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations,
                best: h,
                grad_norm: pg_norm,
            });
        }
    }
}

/// Maximize net welfare over all hallucination vectors in `[h_lo, h_hi]^L`.
///
/// Projected gradient ascent with a diagonal curvature scaling and
/// backtracking, started from the scenario's current rates and from
/// `opts.starts - 1` seeded random points. Returns the best limit; all
/// distinct limits are listed in [`OptimumReport::limits`].
pub fn unconstrained_optimum(scenario: &Scenario, opts: &AscentOptions) -> Result<OptimumReport> {
    let model = scenario.cost();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = vec![scenario.hallucination()];
    for _ in 1..opts.starts.max(1) {
        starts.push(
            (0..scenario.len())
                .map(|_| rng.gen_range(model.h_lo..=model.h_hi))
                .collect(),
        );
    }

    let mut best: Option<AscentRun> = None;
    let mut primary_iterations = 0;
    let mut limits: Vec<Vec<f64>> = Vec::new();
    for (k, start) in starts.iter().enumerate() {
        let run = ascend(scenario, start, opts)?;
        if k == 0 {
            primary_iterations = run.iterations;
        }
        let seen = limits.iter().any(|l| {
            l.iter().zip(&run.h).all(|(a, b)| (a - b).abs() <= 1e-6)
        });
        if !seen {
            limits.push(run.h.clone());
        }
        if best.as_ref().is_none_or(|b| run.nw > b.nw) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    Ok(OptimumReport {
        h: best.h,
        nw: best.nw,
        grad_norm: best.grad_norm,
        iterations: primary_iterations,
        limits,
    })
}

/// Market outcome once a maximum hallucination standard is in force.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardOutcome {
    /// The cap.
    pub cap: f64,
    /// `min(H_l, cap)`.
    pub h_bar: Vec<f64>,
    /// Prices `c(h_bar_l) + omega_l`.
    pub price_bar: Vec<f64>,
    /// Decision utilities under the standard.
    pub v_bar: Vec<f64>,
    /// Shares under the standard.
    pub s_bar: ShareVector,
    /// Net welfare under the standard.
    pub nw_bar: f64,
    /// Share-weighted hallucination rate under the standard.
    pub avg_h_bar: f64,
    /// The compliant scenario.
    pub scenario: Scenario,
}

/// Bring every product above `cap` down to it; markups stay, prices follow `c(.)`.
pub fn apply_standard(scenario: &Scenario, cap: f64) -> Result<StandardOutcome> {
    let model = scenario.cost();
    if !model.contains(cap) {
        return Err(Error::Domain {
            h: cap,
            lo: model.h_lo,
            hi: model.h_hi,
        });
    }
    let h_bar: Vec<f64> = scenario.products().iter().map(|p| p.h.min(cap)).collect();
    let capped = scenario.with_hallucination(&h_bar)?;
    let report = welfare::net_welfare(&capped)?;
    Ok(StandardOutcome {
        cap,
        h_bar,
        price_bar: capped.prices(),
        v_bar: choice::decision_utilities(&capped),
        s_bar: choice::shares(&capped),
        nw_bar: report.nw,
        avg_h_bar: report.avg_h,
        scenario: capped,
    })
}

/// Welfare change of a maximum standard, split into its three sources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionReport {
    /// The cap.
    pub cap: f64,
    /// Change in the log-sum term: value of the choice set.
    pub comp_i: f64,
    /// Change in the misperception wedge.
    pub comp_ii: f64,
    /// Change in the misinformation externality.
    pub comp_iii: f64,
    /// Net welfare with the standard minus without.
    pub delta_nw: f64,
    /// Share-weighted hallucination rate without the standard.
    pub avg_h_before: f64,
    /// Share-weighted hallucination rate with the standard.
    pub avg_h_after: f64,
    /// `avg_h_after <= avg_h_before`.
    pub avg_h_decreased: bool,
}

impl DecompositionReport {
    /// `comp_i + comp_ii + comp_iii`.
    pub fn component_sum(&self) -> f64 {
        self.comp_i + self.comp_ii + self.comp_iii
    }
}

/// Decompose the welfare effect of capping hallucination rates at `cap`.
pub fn decompose(scenario: &Scenario, cap: f64) -> Result<DecompositionReport> {
    let d = scenario.domain();
    let outcome = apply_standard(scenario, cap)?;
    let before = welfare::net_welfare(scenario)?;
    let v = choice::decision_utilities(scenario);

    let delta_avg = outcome.avg_h_bar - before.avg_h;
    let comp_i = (math::logsumexp(&outcome.v_bar) - math::logsumexp(&v)) / d.alpha;
    let comp_ii = (d.rho - 1.0) * d.wtp() * delta_avg;
    let comp_iii = -d.zeta * delta_avg;
    let delta_nw = outcome.nw_bar - before.nw;

    let report = DecompositionReport {
        cap,
        comp_i,
        comp_ii,
        comp_iii,
        delta_nw,
        avg_h_before: before.avg_h,
        avg_h_after: outcome.avg_h_bar,
        avg_h_decreased: outcome.avg_h_bar <= before.avg_h,
    };
    if !math::close(report.component_sum(), delta_nw, DECOMPOSITION_TOL) {
        return Err(Error::Inconsistent {
            what: "decomposition: I + II + III vs delta NW",
            lhs: report.component_sum(),
            rhs: delta_nw,
        });
    }
    Ok(report)
}

/// [`decompose`] at every cap of a strictly increasing grid, in grid order.
pub fn sweep_standard(scenario: &Scenario, grid: &[f64]) -> Result<Vec<DecompositionReport>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("sweep grid must be strictly increasing"));
    }
    grid.iter().map(|&cap| decompose(scenario, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Product;

    fn inverse_scenario(rho: f64, products: Vec<Product>) -> Scenario {
        Scenario::new(
            DomainParams::new(1.0, 3.0, rho, 1.0),
            CostModel::inverse(1.0, 1.0),
            products,
        )
        .unwrap()
    }

    fn pair(rho: f64) -> Scenario {
        inverse_scenario(
            rho,
            vec![Product::new("a", 2.0, 0.1, 0.3), Product::new("b", 1.0, 0.0, 0.8)],
        )
    }

    #[test]
    fn closed_form_examples() {
        let d = DomainParams::new(1.0, 3.0, 0.5, 1.0);
        let sol = perfect_info_mandate(&d, &CostModel::inverse(1.0, 1.0)).unwrap();
        assert!((sol.h_star - 0.5).abs() < 1e-15);
        assert!(sol.residual.abs() < 1e-10);
        assert!(!sol.clamped);
        assert_eq!(sol.method, MandateMethod::ClosedForm);

        let log = marginal_cost_closed_form(&CostModel::log(0.0, 2.0), 4.0).unwrap();
        assert!((log.h_star - 0.5).abs() < 1e-15);

        let bis = marginal_cost_bisection(&CostModel::inverse(1.0, 1.0), 4.0).unwrap();
        assert!((bis.h_star - 0.5).abs() < 1e-12);
        let newton = marginal_cost_newton(&CostModel::inverse(1.0, 1.0), 4.0, 100).unwrap();
        assert!((newton.h_star - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mandate_ignores_awareness() {
        let cost = CostModel::exp(3.0, 2.0);
        let lo = perfect_info_mandate(&DomainParams::new(1.2, 2.0, 0.1, 0.5), &cost).unwrap();
        let hi = perfect_info_mandate(&DomainParams::new(1.2, 2.0, 0.9, 0.5), &cost).unwrap();
        assert_eq!(lo.h_star, hi.h_star);
    }

    #[test]
    fn corners() {
        let inv = CostModel::inverse(1.0, 1.0);
        // m = 0: never worth lowering H
        let z = perfect_info_mandate(&DomainParams::new(1.0, 0.0, 0.5, 0.0), &inv).unwrap();
        assert_eq!(z.h_star, 1.0);
        assert!(z.clamped);
        // huge m: zero tolerance
        let big = perfect_info_mandate(&DomainParams::new(1.0, 1e6, 0.5, 0.0), &inv).unwrap();
        assert_eq!(big.h_star, 0.01);
        assert!(big.clamped);
        // exp with ab <= m has a non-positive unclamped root
        let exp = CostModel::exp(1.0, 1.0);
        let e = perfect_info_mandate(&DomainParams::new(1.0, 2.0, 0.5, 0.0), &exp).unwrap();
        assert_eq!(e.h_star, 0.01);
        assert!(e.clamped);
        assert!(marginal_cost_closed_form(&inv, -1.0).is_err());
    }

    #[test]
    fn uniform_mandate_matches_closed_form() {
        for rho in [0.0, 0.3, 1.0] {
            let sol = optimal_uniform_mandate(&pair(rho)).unwrap();
            assert!((sol.h_star - 0.5).abs() < 1e-8, "{sol:?}");
            assert!(!sol.clamped);
        }
        let one = inverse_scenario(0.4, vec![Product::new("a", 0.0, 0.0, 0.9)]);
        let sol = optimal_uniform_mandate(&one).unwrap();
        let closed = perfect_info_mandate(one.domain(), one.cost()).unwrap();
        assert!((sol.h_star - closed.h_star).abs() < 1e-12);
    }

    #[test]
    fn uniform_mandate_clamps() {
        let s = Scenario::new(
            DomainParams::new(1.0, 0.0, 0.5, 0.0),
            CostModel::log(0.0, 1.0),
            vec![Product::new("a", 0.0, 0.0, 0.3), Product::new("b", 0.5, 0.0, 0.6)],
        )
        .unwrap();
        let sol = optimal_uniform_mandate(&s).unwrap();
        assert_eq!(sol.h_star, 1.0);
        assert!(sol.clamped);
    }

    #[test]
    fn uniform_mandate_iteration_cap() {
        assert!(matches!(
            optimal_uniform_mandate_with(&pair(0.5), 3),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn optimum_is_uniform_mandate() {
        let s = inverse_scenario(
            0.2,
            vec![
                Product::new("a", 2.0, 0.1, 0.3),
                Product::new("b", 1.0, 0.0, 0.8),
                Product::new("c", 0.0, 0.5, 0.1),
            ],
        );
        let opt = unconstrained_optimum(&s, &AscentOptions::default()).unwrap();
        for h in &opt.h {
            assert!((h - 0.5).abs() < 1e-6, "{:?}", opt.h);
        }
        assert_eq!(opt.limits.len(), 1);
        assert!(opt.grad_norm < 1e-8);
    }

    #[test]
    fn optimum_from_stationary_start_does_not_move() {
        let s = inverse_scenario(
            0.6,
            vec![Product::new("a", 2.0, 0.1, 0.5), Product::new("b", 1.0, 0.0, 0.5)],
        );
        let opt = unconstrained_optimum(&s, &AscentOptions::default()).unwrap();
        assert_eq!(opt.iterations, 0);
        assert_eq!(opt.h, vec![0.5, 0.5]);
    }

    #[test]
    fn standard_caps_and_reprices() {
        let s = pair(0.5);
        let out = apply_standard(&s, 0.5).unwrap();
        assert_eq!(out.h_bar, vec![0.3, 0.5]);
        assert!((out.price_bar[1] - 3.0).abs() < 1e-15);
        assert!((out.s_bar.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let loose = apply_standard(&s, 0.9).unwrap();
        assert_eq!(loose.scenario, s);
        assert_eq!(loose.nw_bar, welfare::net_welfare(&s).unwrap().nw);

        let tight = apply_standard(&s, 0.01).unwrap();
        assert!(tight.h_bar.iter().all(|&h| h == 0.01));
        // equal costs: shares depend on delta - alpha omega only
        let gap = (2.0 - 0.1) - 1.0;
        assert!((tight.s_bar[0] / tight.s_bar[1] - libm::exp(gap)).abs() < 1e-12);

        assert!(matches!(apply_standard(&s, 1.5), Err(Error::Domain { .. })));
    }

    #[test]
    fn decomposition_cases() {
        let s = pair(0.5);
        let none = decompose(&s, 0.95).unwrap();
        assert_eq!((none.comp_i, none.comp_ii, none.comp_iii, none.delta_nw), (0.0, 0.0, 0.0, 0.0));

        let binding = decompose(&s, 0.4).unwrap();
        assert!((binding.component_sum() - binding.delta_nw).abs() < 1e-12);
        assert!(binding.avg_h_decreased);
        assert!(binding.comp_ii > 0.0);
        assert!(binding.comp_iii > 0.0);

        let aware = decompose(&pair(1.0), 0.4).unwrap();
        assert_eq!(aware.comp_ii, 0.0);

        let plain = Scenario::new(
            DomainParams::new(1.0, 3.0, 1.0, 0.0),
            CostModel::inverse(1.0, 1.0),
            s.products().to_vec(),
        )
        .unwrap();
        let r = decompose(&plain, 0.4).unwrap();
        assert!((r.delta_nw - r.comp_i).abs() < 1e-12);
        assert_eq!(r.comp_iii, 0.0);
    }

    #[test]
    fn sweep_in_order_and_best_at_mandate() {
        // every product above H* = 0.5, so the cap at H* is the mandate
        let s = inverse_scenario(
            0.3,
            vec![
                Product::new("a", 2.0, 0.1, 0.7),
                Product::new("b", 1.0, 0.0, 0.9),
                Product::new("c", 0.5, 0.2, 0.6),
            ],
        );
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        let rows = sweep_standard(&s, &grid).unwrap();
        assert_eq!(rows.len(), 10);
        for (r, cap) in rows.iter().zip(&grid) {
            assert_eq!(r.cap, *cap);
        }
        let at_mandate = rows[4].delta_nw;
        assert!(rows.iter().all(|r| r.delta_nw <= at_mandate + 1e-12));

        let single = sweep_standard(&s, &[1.0]).unwrap();
        assert_eq!(single[0].delta_nw, 0.0);

        assert!(sweep_standard(&s, &[]).is_err());
        assert!(sweep_standard(&s, &[0.5, 0.5]).is_err());
        assert!(sweep_standard(&s, &[0.5, 2.0]).is_err());
    }
}
