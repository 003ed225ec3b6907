//! Seeded benchmark instance generation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Customer, DistributionCenter, EmissionParams, Instance, Matrix};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid generator spec: {0}")]
pub struct GenSpecError(pub String);

/// Parameters of a random instance. Values are drawn uniformly from each
/// closed range; capacities are then rescaled so that
/// `Σ a_i = capacity_slack · Σ b_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub demand_range: (f64, f64),
    pub unit_cost_range: (f64, f64),
    pub fixed_cost_range: (f64, f64),
    pub opening_cost_range: (f64, f64),
    pub capacity_slack: f64,
    /// Round every drawn value to an integer.
    pub integral: bool,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(m: usize, n: usize, seed: u64) -> Self {
        GenSpec {
            m,
            n,
            demand_range: (10.0, 100.0),
            unit_cost_range: (1.0, 10.0),
            fixed_cost_range: (50.0, 200.0),
            opening_cost_range: (100.0, 500.0),
            capacity_slack: 1.5,
            integral: true,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenSpecError> {
        if self.m == 0 || self.n == 0 {
            return Err(GenSpecError("m and n must be positive".into()));
        }
        for (name, (lo, hi)) in [
            ("demand", self.demand_range),
            ("unit cost", self.unit_cost_range),
            ("fixed cost", self.fixed_cost_range),
            ("opening cost", self.opening_cost_range),
        ] {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return Err(GenSpecError(format!(
                    "{name} range [{lo}, {hi}] must satisfy 0 <= lo <= hi"
                )));
            }
            if self.integral && lo.ceil() > hi.floor() {
                return Err(GenSpecError(format!("{name} range [{lo}, {hi}] holds no integer")));
            }
        }
        if !(self.capacity_slack >= 1.0 && self.capacity_slack.is_finite()) {
            return Err(GenSpecError(format!(
                "capacity slack {} must be at least 1",
                self.capacity_slack
            )));
        }
        Ok(())
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64), integral: bool) -> f64 {
    if integral {
        let (lo, hi) = (lo.ceil() as u64, hi.floor() as u64);
        rng.gen_range(lo..=hi) as f64
    } else if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Splits `total` in proportion to `weights`, as integers summing exactly to
/// `total`. Remainders go to the largest fractional parts, lowest index first.
fn integer_shares(weights: &[f64], total: u64) -> Vec<f64> {
    let sum: f64 = weights.iter().sum();
    let exact: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut shares: Vec<u64> = exact.iter().map(|e| e.floor() as u64).collect();
    let assigned: u64 = shares.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = exact[a] - exact[a].floor();
        let fb = exact[b] - exact[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in order.iter().cycle().take(total.saturating_sub(assigned) as usize) {
        shares[i] += 1;
    }
    shares.into_iter().map(|s| s as f64).collect()
}

/// Draws a random instance; emission parameters are the benchmark defaults.
pub fn generate_instance(spec: &GenSpec) -> Result<(Instance, EmissionParams), GenSpecError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (m, n) = (spec.m, spec.n);
    let int = spec.integral;

    let demands: Vec<f64> = (0..n).map(|_| draw(&mut rng, spec.demand_range, int)).collect();
    let opening: Vec<f64> = (0..m).map(|_| draw(&mut rng, spec.opening_cost_range, int)).collect();
    let unitcost: Vec<f64> = (0..m).map(|_| draw(&mut rng, spec.unit_cost_range, int)).collect();
    let fixed: Vec<f64> = (0..m * n).map(|_| draw(&mut rng, spec.fixed_cost_range, int)).collect();
    let cost: Vec<f64> = (0..m * n).map(|_| draw(&mut rng, spec.unit_cost_range, int)).collect();
    let raw_capacity: Vec<f64> = (0..m).map(|_| rng.gen_range(0.5..1.5)).collect();

    let target = spec.capacity_slack * demands.iter().sum::<f64>();
    let capacity = if int {
        integer_shares(&raw_capacity, target.ceil() as u64)
    } else {
        let raw_sum: f64 = raw_capacity.iter().sum();
        let mut caps: Vec<f64> = raw_capacity.iter().map(|r| r / raw_sum * target).collect();
        // the last center absorbs rounding so the total never falls short
        let head: f64 = caps[..m - 1].iter().sum();
        let mut last = (target - head).max(0.0);
        while head + last < target {
            last = last.next_up();
        }
        caps[m - 1] = last;
        caps
    };

    let instance = Instance {
        centers: (0..m)
            .map(|i| DistributionCenter {
                capacity: capacity[i],
                opening_cost: opening[i],
                unit_transport_cost: unitcost[i],
            })
            .collect(),
        customers: demands.into_iter().map(|demand| Customer { demand }).collect(),
        edge_fixed_cost: Matrix::from_vec(m, n, fixed).expect("m*n values"),
        edge_unit_cost: Matrix::from_vec(m, n, cost).expect("m*n values"),
    };
    Ok((instance, EmissionParams::benchmark_defaults()))
}

/// Benchmark sizes: 10×10, 10×30 and 30×100.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Small,
    Medium,
    Large,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Small, Preset::Medium, Preset::Large];
    pub const INSTANCES_PER_PRESET: u64 = 3;

    pub fn dims(self) -> (usize, usize) {
        match self {
            Preset::Small => (10, 10),
            Preset::Medium => (10, 30),
            Preset::Large => (30, 100),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Small => "small",
            Preset::Medium => "medium",
            Preset::Large => "large",
        }
    }

    /// Specs for the preset's instances, seeded `seed`, `seed + 1`, `seed + 2`.
    pub fn specs(self, seed: u64) -> Vec<GenSpec> {
        let (m, n) = self.dims();
        (0..Self::INSTANCES_PER_PRESET)
            .map(|k| GenSpec::new(m, n, seed.wrapping_add(k)))
            .collect()
    }

    /// `(name, instance, params)` triples; names look like `small-1`.
    pub fn generate(self, seed: u64) -> Vec<(String, Instance, EmissionParams)> {
        self.specs(seed)
            .iter()
            .enumerate()
            .map(|(k, spec)| {
                let (inst, params) = generate_instance(spec).expect("preset specs are valid");
                (format!("{}-{}", self.as_str(), k + 1), inst, params)
            })
            .collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown preset `{s}` (expected small, medium or large)"))
    }
}
