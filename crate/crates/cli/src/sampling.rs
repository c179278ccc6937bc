//! Seeded random scenarios for the self-check and the test suites.
//!
//! Ranges keep utility slopes moderate on `[0.1, 0.95]`, so central
//! differences with a `1e-5` step stay accurate.

use halstd_core::{CostFamily, CostModel, DomainParams, Product, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn count(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn family(&mut self) -> CostFamily {
        CostFamily::ALL[self.rng.gen_range(0..CostFamily::ALL.len())]
    }

    pub fn cost(&mut self, family: CostFamily) -> CostModel {
        let a = self.uniform(0.0, 2.0);
        let u = self.uniform(0.0, 1.0);
        match family {
            CostFamily::Inverse => CostModel::inverse(a, 0.01 + 0.19 * u),
            CostFamily::Log => CostModel::log(a, 0.1 + 1.9 * u),
            CostFamily::Exp => CostModel::exp(0.5 + a, 0.5 + 2.5 * u),
        }
    }

    pub fn domain(&mut self) -> DomainParams {
        DomainParams::new(
            self.uniform(0.2, 2.0),
            self.uniform(0.0, 5.0),
            self.uniform(0.0, 1.0),
            self.uniform(0.0, 3.0),
        )
    }

    pub fn products(&mut self, n: usize) -> Vec<Product> {
        (0..n)
            .map(|i| {
                let delta = self.uniform(-2.0, 2.0);
                let omega = self.uniform(0.0, 1.0);
                let h = self.uniform(0.1, 0.95);
                Product::new(format!("p{i}"), delta, omega, h)
            })
            .collect()
    }

    /// Scenario with `1..=max_products` products and a random cost family.
    pub fn scenario(&mut self, max_products: usize) -> Scenario {
        let family = self.family();
        let n = self.count(1, max_products);
        self.scenario_with(family, n)
    }

    pub fn scenario_with(&mut self, family: CostFamily, n: usize) -> Scenario {
        let domain = self.domain();
        let cost = self.cost(family);
        let products = self.products(n);
        Scenario::new(domain, cost, products).expect("sampled scenarios are valid")
    }

    /// Redraw `theta` and `zeta` so that the mandate is interior: a target
    /// rate in `[0.05, 0.95]` is drawn and the marginal benefit set to the
    /// marginal cost saving there, split randomly between the two.
    pub fn with_interior_mandate(&mut self, scenario: &Scenario) -> (Scenario, f64) {
        let h_star = self.uniform(0.05, 0.95);
        let split = self.uniform(0.0, 1.0);
        let m = -scenario.cost().cost_prime(h_star).expect("target inside the domain");
        let mut d = *scenario.domain();
        d.theta = split * m * d.alpha;
        d.zeta = (1.0 - split) * m;
        let sc = scenario.with_domain(d).expect("nonnegative theta and zeta");
        (sc, h_star)
    }
}
