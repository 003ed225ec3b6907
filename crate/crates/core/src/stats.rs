//! Unpaired two-sample t-tests and the seeded experiment runner that feeds
//! them.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::evaluator::GhgMode;
use crate::heuristics::{construct_solution, SolveError, Variant};
use crate::model::{EmissionParams, Instance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample {which} has {len} values; at least 2 are required")]
    SampleTooSmall { which: char, len: usize },
    #[error("both samples have zero variance but different means ({mean_a} vs {mean_b})")]
    Degenerate { mean_a: f64, mean_b: f64 },
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("baseline variant {0} has no samples")]
    MissingBaseline(Variant),
    #[error("variant {variant}: {source}")]
    Comparison {
        variant: Variant,
        #[source]
        source: Box<StatsError>,
    },
    #[error("instance {instance}, variant {variant}: {source}")]
    Solve {
        instance: String,
        variant: Variant,
        #[source]
        source: SolveError,
    },
}

// ---------------------------------------------------------------------------
// special functions

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (k, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const CF_EPS: f64 = 1e-15;
const CF_MAX_ITER: usize = 10_000;
const CF_TINY: f64 = 1e-300;

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`,
/// `0 <= x <= 1`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Two-tailed p-value of a Student t statistic.
pub fn student_t_two_tailed(t: f64, df: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(df / 2.0, 0.5, x).clamp(f64::MIN_POSITIVE, 1.0)
}

// ---------------------------------------------------------------------------
// t-tests

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TTestKind {
    /// Student's test with pooled variance.
    #[default]
    Pooled,
    /// Welch's test with Satterthwaite degrees of freedom.
    Welch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTestResult {
    pub t: f64,
    /// Two-tailed, in (0, 1].
    pub p: f64,
    pub df: f64,
    pub n_a: usize,
    pub n_b: usize,
}

fn mean_var(sample: &[f64]) -> (f64, f64) {
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let ss: f64 = sample.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Classical unpaired two-sample t-test with pooled variance.
pub fn unpaired_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult, StatsError> {
    t_test(a, b, TTestKind::Pooled)
}

pub fn t_test(a: &[f64], b: &[f64], kind: TTestKind) -> Result<TTestResult, StatsError> {
    for (which, s) in [('a', a), ('b', b)] {
        if s.len() < 2 {
            return Err(StatsError::SampleTooSmall { which, len: s.len() });
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(StatsError::NonFinite);
        }
    }
    let (n_a, n_b) = (a.len(), b.len());
    let (na, nb) = (n_a as f64, n_b as f64);
    let (mean_a, var_a) = mean_var(a);
    let (mean_b, var_b) = mean_var(b);

    let (se, df) = match kind {
        TTestKind::Pooled => {
            let df = na + nb - 2.0;
            let pooled = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / df;
            ((pooled * (1.0 / na + 1.0 / nb)).sqrt(), df)
        }
        TTestKind::Welch => {
            let (qa, qb) = (var_a / na, var_b / nb);
            let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
            ((qa + qb).sqrt(), df)
        }
    };

    if se == 0.0 {
        if mean_a == mean_b {
            let df = if df.is_finite() { df } else { na + nb - 2.0 };
            return Ok(TTestResult {
                t: 0.0,
                p: 1.0,
                df,
                n_a,
                n_b,
            });
        }
        return Err(StatsError::Degenerate { mean_a, mean_b });
    }
    let t = (mean_a - mean_b) / se;
    Ok(TTestResult {
        t,
        p: student_t_two_tailed(t, df),
        df,
        n_a,
        n_b,
    })
}

// ---------------------------------------------------------------------------
// experiments

/// An instance with the label used in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedInstance {
    pub name: String,
    pub instance: Instance,
    pub params: EmissionParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub instance: String,
    pub variant: Variant,
    pub seed: u64,
    /// Total cost `Z`.
    pub cost: f64,
    pub emissions: f64,
    pub ghg_ok: bool,
}

/// Samples in (instance, variant, trial) order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrialTable {
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cost,
    Emissions,
}

impl Metric {
    pub fn of(self, s: &Sample) -> f64 {
        match self {
            Metric::Cost => s.cost,
            Metric::Emissions => s.emissions,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Cost => "cost",
            Metric::Emissions => "emissions",
        }
    }
}

impl TrialTable {
    /// Variants in order of first appearance.
    pub fn variants(&self) -> Vec<Variant> {
        let mut seen = Vec::new();
        for s in &self.samples {
            if !seen.contains(&s.variant) {
                seen.push(s.variant);
            }
        }
        seen
    }

    /// One variant's metric values pooled across instances.
    pub fn pooled(&self, variant: Variant, metric: Metric) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|s| s.variant == variant)
            .map(|s| metric.of(s))
            .collect()
    }

    pub fn samples_for<'a>(&'a self, instance: &'a str, variant: Variant) -> impl Iterator<Item = &'a Sample> + 'a {
        self.samples
            .iter()
            .filter(move |s| s.instance == instance && s.variant == variant)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial: splitmix64 chained over
/// `(base_seed, instance index, variant code, trial index)`.
pub fn trial_seed(base_seed: u64, instance: usize, variant: Variant, trial: usize) -> u64 {
    [instance as u64, u64::from(variant.code()), trial as u64]
        .into_iter()
        .fold(splitmix64(base_seed), |h, part| splitmix64(h ^ part))
}

/// Runs every (instance, variant, trial) construction. The deterministic
/// `nn` variant contributes one sample per instance. Trials run in
/// parallel; the table order is fixed regardless.
pub fn run_experiment(
    instances: &[NamedInstance],
    mode: GhgMode,
    variants: &[Variant],
    trials_per_variant: usize,
    base_seed: u64,
) -> Result<TrialTable, StatsError> {
    let mut jobs = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        for &variant in variants {
            let trials = if variant.is_deterministic() {
                1
            } else {
                trials_per_variant
            };
            for trial in 0..trials {
                jobs.push((k, inst, variant, trial_seed(base_seed, k, variant, trial)));
            }
        }
    }
    let samples = jobs
        .into_par_iter()
        .map(|(_, inst, variant, seed)| {
            let r = construct_solution(&inst.instance, &inst.params, mode, variant, seed).map_err(|source| {
                StatsError::Solve {
                    instance: inst.name.clone(),
                    variant,
                    source,
                }
            })?;
            Ok(Sample {
                instance: inst.name.clone(),
                variant,
                seed,
                cost: r.cost.total,
                emissions: r.emissions,
                ghg_ok: r.feasibility.ghg_ok,
            })
        })
        .collect::<Result<Vec<_>, StatsError>>()?;
    Ok(TrialTable { samples })
}

/// One pooled t-test per non-baseline variant, `variant` vs `baseline`.
pub fn compare_vs_baseline(
    table: &TrialTable,
    baseline: Variant,
    metric: Metric,
    kind: TTestKind,
) -> Result<Vec<(Variant, TTestResult)>, StatsError> {
    let base = table.pooled(baseline, metric);
    if base.is_empty() {
        return Err(StatsError::MissingBaseline(baseline));
    }
    table
        .variants()
        .into_iter()
        .filter(|&v| v != baseline)
        .map(|v| {
            t_test(&table.pooled(v, metric), &base, kind)
                .map(|r| (v, r))
                .map_err(|e| StatsError::Comparison {
                    variant: v,
                    source: Box::new(e),
                })
        })
        .collect()
}

/// Fixed-point rendering with trailing zeros removed; byte-stable.
pub fn format_decimal(x: f64, places: usize) -> String {
    let s = format!("{x:.places$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// `variant  t  p  df  n`, where `n` is the compared variant's sample count.
pub fn comparison_tsv(results: &[(Variant, TTestResult)]) -> String {
    let mut out = String::from("variant\tt\tp\tdf\tn\n");
    for (v, r) in results {
        writeln!(
            out,
            "{v}\t{}\t{}\t{}\t{}",
            format_decimal(r.t, 6),
            format_decimal(r.p, 6),
            format_decimal(r.df, 4),
            r.n_a
        )
        .unwrap();
    }
    out
}

/// `instance  variant  seed  Z  emissions  ghg_ok`
pub fn trials_tsv(table: &TrialTable) -> String {
    let mut out = String::from("instance\tvariant\tseed\tZ\temissions\tghg_ok\n");
    for s in &table.samples {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.instance,
            s.variant,
            s.seed,
            format_decimal(s.cost, 6),
            format_decimal(s.emissions, 6),
            s.ghg_ok
        )
        .unwrap();
    }
    out
}
