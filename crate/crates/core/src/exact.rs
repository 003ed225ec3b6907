//! Brute-force optimum over unsplit assignments, for desk-scale instances.
//!
//! Every customer is shipped its full demand from a single center; all
//! `m^n` such maps are enumerated. When each center alone can cover the
//! whole demand this is the true optimum, since splitting a customer only
//! adds fixed charges without lowering any linear term.

use rayon::prelude::*;
use thiserror::Error;

use crate::evaluator::{self, CostBreakdown, FeasibilityReport, GhgMode};
use crate::model::{validate_instance, EmissionParams, Instance, Matrix, Solution};

/// Upper bound on the number of enumerated assignments.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{m}^{n} assignments exceed the enumeration budget of {ENUMERATION_BUDGET}")]
    BudgetExceeded { m: usize, n: usize },
    #[error("no unsplit assignment satisfies the capacities")]
    NoFeasibleAssignment,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// The set the returned optimum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    UnsplitAssignments,
    /// Unsplit assignments whose emissions respect the cap.
    UnsplitWithinCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub solution: Solution,
    pub cost: CostBreakdown,
    pub feasibility: FeasibilityReport,
    /// Customer → center map of the optimum.
    pub assignment: Vec<usize>,
    pub optimal_over: Scope,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleOptions {
    /// Skip assignments whose emissions exceed the cap.
    pub enforce_ghg_cap: bool,
}

/// Minimum-cost unsplit assignment. Ties resolve to the lexicographically
/// smallest customer→center map.
pub fn brute_force_optimum(
    instance: &Instance,
    params: &EmissionParams,
    mode: GhgMode,
) -> Result<OracleResult, OracleError> {
    brute_force_optimum_with(instance, params, mode, OracleOptions::default())
}

pub fn brute_force_optimum_with(
    instance: &Instance,
    params: &EmissionParams,
    mode: GhgMode,
    options: OracleOptions,
) -> Result<OracleResult, OracleError> {
    let report = validate_instance(instance);
    if !report.ok() {
        return Err(OracleError::InvalidInstance(report.to_string()));
    }
    let (m, n) = (instance.num_centers(), instance.num_customers());
    let total = (m as u64).checked_pow(n as u32);
    if total.is_none_or(|t| t > ENUMERATION_BUDGET) {
        return Err(OracleError::BudgetExceeded { m, n });
    }

    let enumerator = Enumerator::new(instance, params, mode, options);
    if n == 0 {
        return Ok(finish(instance, params, mode, options, Vec::new()));
    }
    // partitioned by the first customer's center; partitions are merged in
    // index order so the result does not depend on the worker count
    let best = (0..m)
        .into_par_iter()
        .map(|first| enumerator.best_with_first(first))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<usize>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        });
    let (_, assignment) = best.ok_or(OracleError::NoFeasibleAssignment)?;
    Ok(finish(instance, params, mode, options, assignment))
}

fn finish(
    instance: &Instance,
    params: &EmissionParams,
    mode: GhgMode,
    options: OracleOptions,
    assignment: Vec<usize>,
) -> OracleResult {
    let solution = assignment_solution(instance, &assignment);
    let cost = evaluator::total_cost(instance, &solution).expect("shapes validated");
    let feasibility = evaluator::check_feasibility(instance, params, &solution, mode).expect("shapes validated");
    OracleResult {
        solution,
        cost,
        feasibility,
        assignment,
        optimal_over: if options.enforce_ghg_cap {
            Scope::UnsplitWithinCap
        } else {
            Scope::UnsplitAssignments
        },
    }
}

/// Flow matrix shipping each customer's full demand from its assigned center.
pub fn assignment_solution(instance: &Instance, assignment: &[usize]) -> Solution {
    let mut flow = Matrix::zeros(instance.num_centers(), instance.num_customers());
    for (j, &i) in assignment.iter().enumerate() {
        flow[(i, j)] = instance.customers[j].demand;
    }
    Solution::new(flow)
}

struct Enumerator<'a> {
    instance: &'a Instance,
    options: OracleOptions,
    cap: f64,
    /// Per (center, customer): linear cost of the full demand plus the edge
    /// charge when the demand is positive.
    edge_cost: Matrix,
    /// Per (center, customer): emissions of shipping the full demand.
    edge_emission: Matrix,
}

impl<'a> Enumerator<'a> {
    fn new(instance: &'a Instance, params: &EmissionParams, mode: GhgMode, options: OracleOptions) -> Self {
        let (m, n) = (instance.num_centers(), instance.num_customers());
        let mut edge_cost = Matrix::zeros(m, n);
        let mut edge_emission = Matrix::zeros(m, n);
        for (i, center) in instance.centers.iter().enumerate() {
            for (j, customer) in instance.customers.iter().enumerate() {
                let b = customer.demand;
                if b > 0.0 {
                    edge_cost[(i, j)] = (center.unit_transport_cost + instance.edge_unit_cost[(i, j)]) * b
                        + instance.edge_fixed_cost[(i, j)];
                }
                // the literal formula weighs stage 1 by capacity and stage 2 by demand
                let (s1, s2) = match mode {
                    GhgMode::Unweighted => (1.0, 1.0),
                    GhgMode::Weighted => (center.capacity, b),
                };
                edge_emission[(i, j)] = s1
                    * (params.alpha_manufacturer + params.beta_manufacturer.at(i) * center.unit_transport_cost)
                    * b
                    + s2 * (params.alpha_center.at(i) + params.beta_edge.at(i, j) * instance.edge_unit_cost[(i, j)])
                        * b;
            }
        }
        Enumerator {
            instance,
            options,
            cap: params.ghg_cap,
            edge_cost,
            edge_emission,
        }
    }

    fn score(&self, assignment: &[usize], load: &mut [f64]) -> Option<f64> {
        load.iter_mut().for_each(|l| *l = 0.0);
        let mut cost = 0.0;
        let mut emission = 0.0;
        for (j, &i) in assignment.iter().enumerate() {
            load[i] += self.instance.customers[j].demand;
            cost += self.edge_cost[(i, j)];
            emission += self.edge_emission[(i, j)];
        }
        for (center, &l) in self.instance.centers.iter().zip(load.iter()) {
            if l > center.capacity {
                return None;
            }
            if l > 0.0 {
                cost += center.opening_cost;
            }
        }
        if self.options.enforce_ghg_cap && emission > self.cap {
            return None;
        }
        Some(cost)
    }

    /// Best assignment (lexicographic tie-break) with customer 0 at `first`.
    fn best_with_first(&self, first: usize) -> Option<(f64, Vec<usize>)> {
        let (m, n) = (self.instance.num_centers(), self.instance.num_customers());
        let mut assignment = vec![0usize; n];
        assignment[0] = first;
        let mut load = vec![0.0; m];
        let mut best: Option<(f64, Vec<usize>)> = None;
        loop {
            if let Some(cost) = self.score(&assignment, &mut load) {
                if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                    best = Some((cost, assignment.clone()));
                }
            }
            // odometer over customers 1..n, last customer fastest
            let mut k = n;
            loop {
                k -= 1;
                if k == 0 {
                    return best;
                }
                assignment[k] += 1;
                if assignment[k] < m {
                    break;
                }
                assignment[k] = 0;
            }
        }
    }
}
