//! Cost, emission, and feasibility evaluation of a shipment plan.
//!
//! All sums run in a fixed order (stage 1 before stage 2, row-major) so that
//! results are bit-reproducible.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{EmissionParams, Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("shape mismatch: instance is {expected_m}x{expected_n}, {what} is {got_m}x{got_n}")]
pub struct ShapeMismatch {
    pub what: &'static str,
    pub expected_m: usize,
    pub expected_n: usize,
    pub got_m: usize,
    pub got_n: usize,
}

fn check_shape(instance: &Instance, solution: &Solution) -> Result<(), ShapeMismatch> {
    let (m, n) = (instance.num_centers(), instance.num_customers());
    let (got_m, got_n) = solution.flow.shape();
    let inst_ok = instance.edge_fixed_cost.shape() == (m, n) && instance.edge_unit_cost.shape() == (m, n);
    if !inst_ok {
        let (got_m, got_n) = instance.edge_unit_cost.shape();
        return Err(ShapeMismatch {
            what: "instance cost matrix",
            expected_m: m,
            expected_n: n,
            got_m,
            got_n,
        });
    }
    if (got_m, got_n) != (m, n) {
        return Err(ShapeMismatch {
            what: "flow matrix",
            expected_m: m,
            expected_n: n,
            got_m,
            got_n,
        });
    }
    Ok(())
}

/// `Z = Z_tc + Z_fc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    pub transport: f64,
    pub fixed: f64,
    pub total: f64,
}

/// Open-center and used-edge indicators (`y_i`, `y_ij`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicators {
    pub center_open: Vec<bool>,
    /// Row-major, m×n.
    pub edge_used: Vec<Vec<bool>>,
}

/// Which emission formula to apply.
///
/// `Unweighted` charges each shipped unit `α + β·c` on both stages. `Weighted`
/// additionally multiplies stage-1 terms by the center capacity `a_i` and
/// stage-2 terms by the customer demand `b_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum GhgMode {
    #[default]
    Unweighted,
    Weighted,
}

impl GhgMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GhgMode::Unweighted => "unweighted",
            GhgMode::Weighted => "weighted",
        }
    }
}

impl fmt::Display for GhgMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GhgMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unweighted" => Ok(GhgMode::Unweighted),
            "weighted" => Ok(GhgMode::Weighted),
            other => Err(format!(
                "unknown ghg mode `{other}` (expected `unweighted` or `weighted`)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub nonneg_ok: bool,
    pub capacity_ok: bool,
    pub demand_ok: bool,
    pub emissions: f64,
    pub ghg_ok: bool,
    pub feasible: bool,
}

/// Relative tolerance used for demand equality and capacity checks.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

fn tolerance(bound: f64) -> f64 {
    BALANCE_TOLERANCE * bound.abs().max(1.0)
}

/// `x_i = Σ_j x_ij` for every center.
pub fn stage1_flows(solution: &Solution) -> Vec<f64> {
    solution.flow.iter_rows().map(|row| row.iter().sum()).collect()
}

/// Strict positivity: a center is open, or an edge used, iff it carries flow.
pub fn indicators(solution: &Solution) -> Indicators {
    let edge_used: Vec<Vec<bool>> = solution
        .flow
        .iter_rows()
        .map(|row| row.iter().map(|&x| x > 0.0).collect())
        .collect();
    let center_open = edge_used.iter().map(|row| row.iter().any(|&u| u)).collect();
    Indicators { center_open, edge_used }
}

pub fn total_cost(instance: &Instance, solution: &Solution) -> Result<CostBreakdown, ShapeMismatch> {
    check_shape(instance, solution)?;
    let flows = stage1_flows(solution);
    let ind = indicators(solution);

    let mut transport = 0.0;
    for (center, &x) in instance.centers.iter().zip(&flows) {
        transport += center.unit_transport_cost * x;
    }
    for (i, row) in solution.flow.iter_rows().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            transport += instance.edge_unit_cost[(i, j)] * x;
        }
    }

    let mut fixed = 0.0;
    for (center, &open) in instance.centers.iter().zip(&ind.center_open) {
        if open {
            fixed += center.opening_cost;
        }
    }
    for (i, row) in ind.edge_used.iter().enumerate() {
        for (j, &used) in row.iter().enumerate() {
            if used {
                fixed += instance.edge_fixed_cost[(i, j)];
            }
        }
    }

    Ok(CostBreakdown {
        transport,
        fixed,
        total: transport + fixed,
    })
}

/// Total emissions (tons CO2e) of `solution` under the chosen formula.
pub fn ghg_emissions(
    instance: &Instance,
    params: &EmissionParams,
    solution: &Solution,
    mode: GhgMode,
) -> Result<f64, ShapeMismatch> {
    check_shape(instance, solution)?;
    let flows = stage1_flows(solution);

    let mut total = 0.0;
    for (i, (center, &x)) in instance.centers.iter().zip(&flows).enumerate() {
        let scale = match mode {
            GhgMode::Unweighted => 1.0,
            GhgMode::Weighted => center.capacity,
        };
        total += params.alpha_manufacturer * scale * x;
        total += params.beta_manufacturer.at(i) * scale * center.unit_transport_cost * x;
    }
    for (i, row) in solution.flow.iter_rows().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let scale = match mode {
                GhgMode::Unweighted => 1.0,
                GhgMode::Weighted => instance.customers[j].demand,
            };
            total += params.alpha_center.at(i) * scale * x;
            total += params.beta_edge.at(i, j) * scale * instance.edge_unit_cost[(i, j)] * x;
        }
    }
    Ok(total)
}

pub fn check_feasibility(
    instance: &Instance,
    params: &EmissionParams,
    solution: &Solution,
    mode: GhgMode,
) -> Result<FeasibilityReport, ShapeMismatch> {
    let emissions = ghg_emissions(instance, params, solution, mode)?;

    let nonneg_ok = solution.flow.as_slice().iter().all(|&x| x >= 0.0);
    let capacity_ok = stage1_flows(solution)
        .iter()
        .zip(&instance.centers)
        .all(|(&x, c)| x <= c.capacity + tolerance(c.capacity));
    let demand_ok = instance.customers.iter().enumerate().all(|(j, c)| {
        let mut shipped = 0.0;
        for i in 0..solution.num_centers() {
            shipped += solution.flow[(i, j)];
        }
        (shipped - c.demand).abs() <= tolerance(c.demand)
    });
    let ghg_ok = emissions <= params.ghg_cap;

    Ok(FeasibilityReport {
        nonneg_ok,
        capacity_ok,
        demand_ok,
        emissions,
        ghg_ok,
        feasible: nonneg_ok && capacity_ok && demand_ok && ghg_ok,
    })
}
