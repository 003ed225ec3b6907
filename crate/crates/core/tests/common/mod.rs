//! Shared fixtures and independent reference computations for the
//! integration tests. Nothing here calls into the evaluator or stats code.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use fctp::instances::{generate_instance, GenSpec};
use fctp::model::{CenterFactor, EdgeFactor, EmissionParams, Instance, Matrix, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

/// Random integral instance in which every center alone covers all demand.
pub fn slack_instance(m: usize, n: usize, seed: u64) -> (Instance, EmissionParams) {
    let (mut inst, params) = generate_instance(&GenSpec::new(m, n, seed)).unwrap();
    let demand: f64 = inst.customers.iter().map(|c| c.demand).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
    for c in &mut inst.centers {
        c.capacity = demand + f64::from(rng.gen_range(0u32..50));
    }
    (inst, params)
}

/// Plain-array copy of everything the reference formulas need.
pub struct Plain {
    pub a: Vec<f64>,
    pub f: Vec<f64>,
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    pub fij: Vec<Vec<f64>>,
    pub cij: Vec<Vec<f64>>,
}

impl Plain {
    pub fn of(inst: &Instance) -> Self {
        let m = inst.centers.len();
        let n = inst.customers.len();
        Plain {
            a: inst.centers.iter().map(|c| c.capacity).collect(),
            f: inst.centers.iter().map(|c| c.opening_cost).collect(),
            c: inst.centers.iter().map(|c| c.unit_transport_cost).collect(),
            b: inst.customers.iter().map(|c| c.demand).collect(),
            fij: (0..m)
                .map(|i| (0..n).map(|j| inst.edge_fixed_cost[(i, j)]).collect())
                .collect(),
            cij: (0..m)
                .map(|i| (0..n).map(|j| inst.edge_unit_cost[(i, j)]).collect())
                .collect(),
        }
    }
}

/// Emission factors as plain arrays.
pub struct PlainFactors {
    pub alpha_man: f64,
    pub alpha: Vec<f64>,
    pub beta_man: Vec<f64>,
    pub beta: Vec<Vec<f64>>,
}

/// Naive double-loop cost: returns (transport, fixed).
pub fn naive_cost(p: &Plain, x: &[Vec<f64>]) -> (f64, f64) {
    let m = p.a.len();
    let n = p.b.len();
    let mut stage1 = 0.0;
    let mut stage2 = 0.0;
    let mut opening = 0.0;
    let mut edges = 0.0;
    for i in 0..m {
        let mut shipped = 0.0;
        let mut any = false;
        for j in 0..n {
            shipped += x[i][j];
            stage2 += p.cij[i][j] * x[i][j];
            if x[i][j] != 0.0 {
                edges += p.fij[i][j];
                any = true;
            }
        }
        stage1 += p.c[i] * shipped;
        if any {
            opening += p.f[i];
        }
    }
    (stage1 + stage2, opening + edges)
}

/// Naive emission total. `literal` applies the capacity / demand multipliers.
pub fn naive_emissions(p: &Plain, e: &PlainFactors, x: &[Vec<f64>], literal: bool) -> f64 {
    let m = p.a.len();
    let n = p.b.len();
    let mut total = 0.0;
    for i in 0..m {
        let xi: f64 = x[i].iter().sum();
        let w = if literal { p.a[i] } else { 1.0 };
        total += w * xi * (e.alpha_man + e.beta_man[i] * p.c[i]);
        for j in 0..n {
            let w = if literal { p.b[j] } else { 1.0 };
            total += w * x[i][j] * (e.alpha[i] + e.beta[i][j] * p.cij[i][j]);
        }
    }
    total
}

/// Random emission factors, stored both in the library form (vector
/// variants) and as plain arrays.
pub fn random_factors(rng: &mut impl Rng, m: usize, n: usize) -> (EmissionParams, PlainFactors) {
    let alpha_man = rng.gen_range(0.0..0.1);
    let alpha: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..0.1)).collect();
    let beta_man: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..0.1)).collect();
    let beta: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.gen_range(0.0..0.1)).collect())
        .collect();
    let params = EmissionParams {
        alpha_manufacturer: alpha_man,
        alpha_center: CenterFactor::PerCenter(alpha.clone()),
        beta_manufacturer: CenterFactor::PerCenter(beta_man.clone()),
        beta_edge: EdgeFactor::PerEdge(Matrix::from_rows(&beta).unwrap()),
        ghg_cap: 1.0,
    };
    (
        params,
        PlainFactors {
            alpha_man,
            alpha,
            beta_man,
            beta,
        },
    )
}

/// Random sparse flow with integral and fractional entries.
pub fn random_flow(rng: &mut impl Rng, m: usize, n: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|_| {
            (0..n)
                .map(|_| match rng.gen_range(0..4) {
                    0 => 0.0,
                    1 => f64::from(rng.gen_range(1u32..100)),
                    _ => rng.gen_range(0.0..100.0),
                })
                .collect()
        })
        .collect()
}

pub fn to_solution(x: &[Vec<f64>]) -> Solution {
    Solution::new(Matrix::from_rows(x).unwrap())
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Textbook pooled-variance t statistic and degrees of freedom.
pub fn textbook_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let na = a.len() as f64;
    let nb = b.len() as f64;
    let ma = a.iter().sum::<f64>() / na;
    let mb = b.iter().sum::<f64>() / nb;
    let ssa: f64 = a.iter().map(|v| (v - ma).powi(2)).sum();
    let ssb: f64 = b.iter().map(|v| (v - mb).powi(2)).sum();
    let sp2 = (ssa + ssb) / (na + nb - 2.0);
    ((ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt(), na + nb - 2.0)
}

/// Two-tailed p-value from the `statrs` Student t CDF.
pub fn p_statrs(t: f64, df: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    2.0 * (1.0 - dist.cdf(t.abs()))
}

/// Two-tailed p-value by composite Simpson quadrature of the t density
/// over [0, |t|].
pub fn p_quadrature(t: f64, df: f64) -> f64 {
    let ln_norm =
        ln_gamma_stirling((df + 1.0) / 2.0) - ln_gamma_stirling(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    let pdf = |x: f64| (ln_norm - (df + 1.0) / 2.0 * (1.0 + x * x / df).ln()).exp();
    let steps = 20_000;
    let h = t.abs() / steps as f64;
    let mut s = pdf(0.0) + pdf(t.abs());
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(k as f64 * h);
    }
    1.0 - 2.0 * s * h / 3.0
}

/// `ln Γ` by shifting to x >= 10 and applying Stirling's series.
fn ln_gamma_stirling(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}
