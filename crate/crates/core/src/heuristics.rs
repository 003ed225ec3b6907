//! Nearest Neighbor construction and its hybrid center-selection variants.
//!
//! Every variant runs the same loop: pick a distribution center that still
//! has capacity, then fill it greedily along its cheapest edges to unserved
//! customers until the center is exhausted or all demand is served. The
//! variants differ only in how the center is picked:
//!
//! | variant | center choice                                                  |
//! |---------|----------------------------------------------------------------|
//! | `nn`    | center owning the cheapest edge to any unserved customer       |
//! | `dx`    | uniform over centers with remaining capacity                   |
//! | `dy10`  | ∝ `a_i / request`                                              |
//! | `dy11`  | ∝ `a_i / (max(xcont_i, 1) · request)`                          |
//! | `dy12`  | ∝ `max(xcont_i, 1) / a_i`                                      |
//!
//! `a_i` is the center's remaining capacity, `request` the remaining total
//! demand, and `xcont_i` the number of customers the center already ships to.
//!
//! Randomness comes from a ChaCha8 stream seeded with
//! [`rand::SeedableRng::seed_from_u64`] on the run's 64-bit seed.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::evaluator::{self, CostBreakdown, FeasibilityReport, GhgMode};
use crate::model::{validate_instance, EmissionParams, Instance, Matrix, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Nn,
    Dx,
    Dy10,
    Dy11,
    Dy12,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Nn, Variant::Dx, Variant::Dy10, Variant::Dy11, Variant::Dy12];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Nn => "nn",
            Variant::Dx => "dx",
            Variant::Dy10 => "dy10",
            Variant::Dy11 => "dy11",
            Variant::Dy12 => "dy12",
        }
    }

    pub fn is_deterministic(self) -> bool {
        self == Variant::Nn
    }

    /// Stable small integer used in seed derivation and the C ABI.
    pub fn code(self) -> u32 {
        match self {
            Variant::Nn => 0,
            Variant::Dx => 1,
            Variant::Dy10 => 2,
            Variant::Dy11 => 3,
            Variant::Dy12 => 4,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let key = lower.strip_prefix("hnn-").unwrap_or(&lower);
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == key.replace('-', ""))
            .ok_or_else(|| format!("unknown variant `{s}` (expected nn, dx, dy10, dy11 or dy12)"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("no center with remaining capacity while {request} units are still requested")]
    NoEligibleCenter { request: f64 },
    #[error("{0} has no selection weights")]
    NoWeights(Variant),
    #[error(transparent)]
    Shape(#[from] evaluator::ShapeMismatch),
}

/// Mutable bookkeeping of one construction run.
#[derive(Debug, Clone)]
pub struct ConstructionState<'a> {
    instance: &'a Instance,
    remaining_capacity: Vec<f64>,
    remaining_demand: Vec<f64>,
    xcont: Vec<usize>,
    flow: Matrix,
    rng: ChaCha8Rng,
}

impl<'a> ConstructionState<'a> {
    pub fn new(instance: &'a Instance, seed: u64) -> Self {
        let (m, n) = (instance.num_centers(), instance.num_customers());
        ConstructionState {
            instance,
            remaining_capacity: instance.centers.iter().map(|c| c.capacity).collect(),
            remaining_demand: instance.customers.iter().map(|c| c.demand).collect(),
            xcont: vec![0; m],
            flow: Matrix::zeros(m, n),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn remaining_capacity(&self) -> &[f64] {
        &self.remaining_capacity
    }

    pub fn remaining_demand(&self) -> &[f64] {
        &self.remaining_demand
    }

    /// Total demand not yet served.
    pub fn request(&self) -> f64 {
        self.remaining_demand.iter().sum()
    }

    pub fn xcont(&self) -> &[usize] {
        &self.xcont
    }

    pub fn flow(&self) -> &Matrix {
        &self.flow
    }

    pub fn is_done(&self) -> bool {
        self.remaining_demand.iter().all(|&d| d <= 0.0)
    }

    fn eligible(&self) -> impl Iterator<Item = usize> + '_ {
        self.remaining_capacity
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(i, _)| i)
    }

    /// Overrides the bookkeeping vectors; only meant for exercising the
    /// selection rules on hand-built states.
    pub fn with_counts(mut self, remaining_capacity: Vec<f64>, xcont: Vec<usize>) -> Self {
        assert_eq!(remaining_capacity.len(), self.remaining_capacity.len());
        assert_eq!(xcont.len(), self.xcont.len());
        self.remaining_capacity = remaining_capacity;
        self.xcont = xcont;
        self
    }

    pub fn with_remaining_demand(mut self, remaining_demand: Vec<f64>) -> Self {
        assert_eq!(remaining_demand.len(), self.remaining_demand.len());
        self.remaining_demand = remaining_demand;
        self
    }
}

/// Raw, unnormalized selection weights for the DY variants. Centers without
/// remaining capacity get weight 0.
pub fn selection_weights(state: &ConstructionState<'_>, variant: Variant) -> Result<Vec<f64>, SolveError> {
    let request = state.request();
    let weights: Vec<f64> = state
        .remaining_capacity
        .iter()
        .zip(&state.xcont)
        .map(|(&a, &xcont)| {
            if a <= 0.0 {
                return Ok(0.0);
            }
            let used = xcont.max(1) as f64;
            match variant {
                Variant::Dy10 => Ok(a / request),
                Variant::Dy11 => Ok(a / (used * request)),
                Variant::Dy12 => Ok(used / a),
                other => Err(SolveError::NoWeights(other)),
            }
        })
        .collect::<Result<_, _>>()?;
    if weights.iter().all(|&w| w == 0.0) {
        return Err(SolveError::NoEligibleCenter { request });
    }
    Ok(weights)
}

/// Scales weights to sum to one.
pub fn normalize(weights: &[f64]) -> Vec<f64> {
    let sum: f64 = weights.iter().sum();
    weights.iter().map(|w| w / sum).collect()
}

/// Draws an index with probability proportional to `weights`.
///
/// Panics if no weight is positive.
pub fn sample_weighted<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    WeightedIndex::new(normalize(weights))
        .expect("at least one positive weight")
        .sample(rng)
}

/// Picks the next center to fill.
pub fn select_center(state: &mut ConstructionState<'_>, variant: Variant) -> Result<usize, SolveError> {
    let eligible: Vec<usize> = state.eligible().collect();
    if eligible.is_empty() || state.is_done() {
        return Err(SolveError::NoEligibleCenter {
            request: state.request(),
        });
    }
    match variant {
        Variant::Nn => {
            let costs = &state.instance.edge_unit_cost;
            let nearest = |i: usize| {
                state
                    .remaining_demand
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0.0)
                    .map(|(j, _)| costs[(i, j)])
                    .fold(f64::INFINITY, f64::min)
            };
            let mut best = eligible[0];
            let mut best_cost = nearest(best);
            for &i in &eligible[1..] {
                let c = nearest(i);
                if c < best_cost {
                    best = i;
                    best_cost = c;
                }
            }
            Ok(best)
        }
        Variant::Dx => Ok(eligible[state.rng.gen_range(0..eligible.len())]),
        Variant::Dy10 | Variant::Dy11 | Variant::Dy12 => {
            let weights = selection_weights(state, variant)?;
            Ok(sample_weighted(&weights, &mut state.rng))
        }
    }
}

/// Fills `center` along its cheapest edges to unserved customers until its
/// capacity or the outstanding demand runs out. Ties go to the lowest
/// customer index; a customer may be served partially.
pub fn assign_from_center(state: &mut ConstructionState<'_>, center: usize) {
    let costs = &state.instance.edge_unit_cost;
    while state.remaining_capacity[center] > 0.0 {
        let mut target: Option<(usize, f64)> = None;
        for (j, &d) in state.remaining_demand.iter().enumerate() {
            if d <= 0.0 {
                continue;
            }
            let c = costs[(center, j)];
            if target.is_none_or(|(_, best)| c < best) {
                target = Some((j, c));
            }
        }
        let Some((j, _)) = target else { break };

        let cap = state.remaining_capacity[center];
        let demand = state.remaining_demand[j];
        // exact zeros on the exhausted side keep the loop finite
        let q = if cap >= demand {
            state.remaining_capacity[center] = cap - demand;
            state.remaining_demand[j] = 0.0;
            demand
        } else {
            state.remaining_capacity[center] = 0.0;
            state.remaining_demand[j] = demand - cap;
            cap
        };
        if state.flow[(center, j)] == 0.0 {
            state.xcont[center] += 1;
        }
        state.flow[(center, j)] += q;
    }
}

/// A constructed solution together with its evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub solution: Solution,
    pub cost: CostBreakdown,
    pub emissions: f64,
    pub feasibility: FeasibilityReport,
    pub variant: Variant,
    pub seed: u64,
    /// Shipment counts per center at the end of construction.
    pub xcont: Vec<usize>,
}

/// Runs one construction to completion and evaluates the result.
///
/// The emission cap is reported in `feasibility.ghg_ok` but does not steer
/// the construction.
pub fn construct_solution(
    instance: &Instance,
    params: &EmissionParams,
    mode: GhgMode,
    variant: Variant,
    seed: u64,
) -> Result<SolveResult, SolveError> {
    let report = validate_instance(instance);
    if !report.ok() {
        return Err(SolveError::InvalidInstance(report.to_string()));
    }
    if !params.is_valid() {
        return Err(SolveError::InvalidInstance(
            "emission factors must be nonnegative and the cap positive".into(),
        ));
    }

    let mut state = ConstructionState::new(instance, seed);
    while !state.is_done() {
        let center = select_center(&mut state, variant)?;
        assign_from_center(&mut state, center);
    }

    let xcont = state.xcont;
    let solution = Solution::new(state.flow);
    let cost = evaluator::total_cost(instance, &solution)?;
    let feasibility = evaluator::check_feasibility(instance, params, &solution, mode)?;
    debug_assert!(feasibility.nonneg_ok && feasibility.capacity_ok && feasibility.demand_ok);
    Ok(SolveResult {
        emissions: feasibility.emissions,
        solution,
        cost,
        feasibility,
        variant,
        seed,
        xcont,
    })
}
