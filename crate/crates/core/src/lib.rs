//! Two-stage supply-chain fixed-charge transportation problem under a
//! greenhouse-gas emission cap.
//!
//! A manufacturer ships to capacitated distribution centers (stage 1), which
//! ship on to customers with fixed demands (stage 2). Opening a center and
//! using a center→customer edge each carry a fixed charge on top of the
//! per-unit transport costs. The crate provides:
//!
//! * [`model`] / [`format`]: instances, emission factors, solutions and the
//!   line-oriented `.fctp` text format.
//! * [`evaluator`]: exact cost breakdown, emission totals and feasibility.
//! * [`heuristics`]: Nearest Neighbor and the hybrid DX / DY10 / DY11 / DY12
//!   constructive solvers.
//! * [`exact`]: brute-force optimum over unsplit assignments (test oracle).
//! * [`instances`]: seeded benchmark generation (10×10, 10×30, 30×100).
//! * [`stats`]: experiment runner and unpaired two-sample t-test.
//! * [`cli`]: the `fctp` command-line driver.

pub mod cli;
pub mod evaluator;
pub mod exact;
pub mod format;
pub mod heuristics;
pub mod instances;
pub mod model;
pub mod stats;

pub use evaluator::{CostBreakdown, FeasibilityReport, GhgMode, Indicators};
pub use heuristics::{construct_solution, SolveResult, Variant};
pub use model::{CenterFactor, Customer, DistributionCenter, EdgeFactor, EmissionParams, Instance, Matrix, Solution};
