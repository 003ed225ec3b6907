//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use fctp::evaluator::{check_feasibility, ghg_emissions, total_cost, GhgMode};
use fctp::exact::brute_force_optimum;
use fctp::format::{read_instance, read_solution};
use fctp::heuristics::{construct_solution, normalize, sample_weighted, selection_weights, ConstructionState, Variant};
use fctp::model::{Customer, DistributionCenter, EmissionParams, Instance, Matrix};
use fctp::stats::unpaired_t_test;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_rel(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

/// 1. Golden emission totals on the two-stage example.
fn golden_ghg() -> Check {
    let (inst, _) = read_instance(data("two_stage_example.fctp")).map_err(|e| e.to_string())?;
    let sol = read_solution(data("two_stage_example.sol")).map_err(|e| e.to_string())?;
    let heavy = EmissionParams::uniform(1.0, 1.0, 2.0, 2.0, 1e9);
    let light = EmissionParams::uniform(0.01, 0.01, 0.02, 0.02, 50.0);

    let start = Instant::now();
    let e_heavy = ghg_emissions(&inst, &heavy, &sol, GhgMode::Unweighted).map_err(|e| e.to_string())?;
    let e_light = ghg_emissions(&inst, &light, &sol, GhgMode::Unweighted).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure(
        within_rel(e_heavy, 4650.0, 1e-9),
        format!("alpha=1 beta=2 gave {e_heavy}"),
    )?;
    ensure(
        within_rel(e_light, 46.5, 1e-9),
        format!("alpha=0.01 beta=0.02 gave {e_light}"),
    )?;
    ensure(elapsed < Duration::from_millis(1), format!("took {elapsed:?}"))?;
    Ok(format!("{e_heavy} and {e_light} in {elapsed:?}"))
}

/// 2. Cap 50 holds, cap 40 does not.
fn cap_check() -> Check {
    let (inst, mut params) = read_instance(data("two_stage_example.fctp")).map_err(|e| e.to_string())?;
    let sol = read_solution(data("two_stage_example.sol")).map_err(|e| e.to_string())?;
    params.ghg_cap = 50.0;
    let under = check_feasibility(&inst, &params, &sol, GhgMode::Unweighted).map_err(|e| e.to_string())?;
    params.ghg_cap = 40.0;
    let over = check_feasibility(&inst, &params, &sol, GhgMode::Unweighted).map_err(|e| e.to_string())?;
    ensure(under.ghg_ok, "cap 50 rejected")?;
    ensure(!over.ghg_ok, "cap 40 accepted")?;
    Ok(format!("emissions {} vs caps 50 (ok) / 40 (exceeded)", under.emissions))
}

/// 3. No heuristic run beats the brute-force optimum on slack instances.
fn oracle_dominance() -> Check {
    let start = Instant::now();
    let mut runs = 0;
    for k in 0..50u64 {
        let (inst, params) = slack_instance(3, 4, 10_000 + k);
        ensure(inst.has_slack_capacity(), format!("instance {k} lacks slack"))?;
        let opt = brute_force_optimum(&inst, &params, GhgMode::Unweighted).map_err(|e| e.to_string())?;
        for v in Variant::ALL {
            for seed in 1..=20 {
                let r = construct_solution(&inst, &params, GhgMode::Unweighted, v, seed).map_err(|e| e.to_string())?;
                let f = r.feasibility;
                ensure(
                    f.demand_ok && f.capacity_ok && f.nonneg_ok,
                    format!("instance {k} {v} seed {seed} infeasible"),
                )?;
                ensure(
                    r.cost.total >= opt.cost.total,
                    format!(
                        "instance {k} {v} seed {seed}: {} < optimum {}",
                        r.cost.total, opt.cost.total
                    ),
                )?;
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), format!("took {elapsed:?}"))?;
    Ok(format!("{runs} runs in {elapsed:?}"))
}

/// 4. Evaluator agrees with naive summation.
fn evaluator_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for case in 0..200u64 {
        let m = rng.gen_range(1..5);
        let n = rng.gen_range(1..6);
        let (inst, _) = slack_instance(m, n, 20_000 + case);
        let (params, factors) = random_factors(&mut rng, m, n);
        let x = random_flow(&mut rng, m, n);
        let plain = Plain::of(&inst);
        let sol = to_solution(&x);

        let (transport, fixed) = naive_cost(&plain, &x);
        let cost = total_cost(&inst, &sol).map_err(|e| e.to_string())?;
        let mut pairs = vec![
            (cost.total, transport + fixed),
            (cost.transport, transport),
            (cost.fixed, fixed),
        ];
        for (mode, literal) in [(GhgMode::Unweighted, false), (GhgMode::Weighted, true)] {
            let got = ghg_emissions(&inst, &params, &sol, mode).map_err(|e| e.to_string())?;
            pairs.push((got, naive_emissions(&plain, &factors, &x, literal)));
        }
        for (got, want) in pairs {
            let rel = if want == 0.0 {
                got.abs()
            } else {
                (got - want).abs() / want.abs()
            };
            worst = worst.max(rel);
            ensure(rel <= 1e-12, format!("case {case}: {got} vs {want}"))?;
        }
    }
    Ok(format!("200 solutions, worst relative error {worst:.1e}"))
}

/// 5. Selection weights, normalization, and sampler frequency.
fn selection_weights_check() -> Check {
    let two = |a: [f64; 2]| Instance {
        centers: a
            .iter()
            .map(|&capacity| DistributionCenter {
                capacity,
                opening_cost: 0.0,
                unit_transport_cost: 0.0,
            })
            .collect(),
        customers: vec![Customer { demand: 100.0 }],
        edge_fixed_cost: Matrix::zeros(2, 1),
        edge_unit_cost: Matrix::zeros(2, 1),
    };
    let inst = two([30.0, 70.0]);
    let dy10 = selection_weights(&ConstructionState::new(&inst, 0), Variant::Dy10).map_err(|e| e.to_string())?;
    let dy11 = selection_weights(
        &ConstructionState::new(&inst, 0).with_counts(vec![30.0, 70.0], vec![2, 1]),
        Variant::Dy11,
    )
    .map_err(|e| e.to_string())?;
    let small = two([4.0, 10.0]);
    let dy12 = selection_weights(
        &ConstructionState::new(&small, 0).with_counts(vec![4.0, 10.0], vec![2, 1]),
        Variant::Dy12,
    )
    .map_err(|e| e.to_string())?;

    // exact up to the rounding of the decimal literals themselves
    let same = |got: &[f64], want: [f64; 2]| got.iter().zip(want).all(|(g, w)| (g - w).abs() <= f64::EPSILON * w);
    ensure(same(&dy10, [0.3, 0.7]), format!("dy10 {dy10:?}"))?;
    ensure(same(&dy11, [0.15, 0.7]), format!("dy11 {dy11:?}"))?;
    ensure(same(&dy12, [0.5, 0.1]), format!("dy12 {dy12:?}"))?;
    for w in [&dy10, &dy11, &dy12] {
        let sum: f64 = normalize(w).iter().sum();
        ensure((sum - 1.0).abs() <= 1e-12, format!("normalized sum {sum}"))?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let draws = 100_000;
    let hits = (0..draws).filter(|_| sample_weighted(&dy10, &mut rng) == 1).count();
    let freq = hits as f64 / draws as f64;
    ensure((0.69..=0.71).contains(&freq), format!("frequency {freq}"))?;
    Ok(format!("weights exact, sampler frequency {freq:.4}"))
}

/// 6. t-test against the textbook oracle plus symmetry and invariance.
fn t_test_correctness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..20 {
        let na = rng.gen_range(2..30);
        let nb = rng.gen_range(2..30);
        let a: Vec<f64> = (0..na).map(|_| rng.gen_range(0.0..50.0)).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.gen_range(5.0..55.0)).collect();
        let r = unpaired_t_test(&a, &b).map_err(|e| e.to_string())?;
        let (t, df) = textbook_t(&a, &b);
        let p = p_statrs(t, df);
        ensure(
            (r.t - t).abs() <= 1e-9 * t.abs().max(1.0),
            format!("pair {k}: t {} vs {t}", r.t),
        )?;
        ensure((r.p - p).abs() <= 1e-9, format!("pair {k}: p {} vs {p}", r.p))?;
    }

    let same = [4.0, 8.0, 15.0, 16.0, 23.0, 42.0];
    let r = unpaired_t_test(&same, &same).map_err(|e| e.to_string())?;
    ensure(
        r.t == 0.0 && r.p == 1.0,
        format!("identical samples gave t={} p={}", r.t, r.p),
    )?;

    for k in 0..100 {
        let a: Vec<f64> = (0..rng.gen_range(2..20)).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let b: Vec<f64> = (0..rng.gen_range(2..20)).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let shift = rng.gen_range(-100.0..100.0);
        let scale = rng.gen_range(0.01..100.0);
        let r = unpaired_t_test(&a, &b).map_err(|e| e.to_string())?;
        let s = unpaired_t_test(&b, &a).map_err(|e| e.to_string())?;
        ensure(r.t == -s.t && r.p == s.p, format!("pair {k}: not antisymmetric"))?;
        let map = |v: &[f64], f: &dyn Fn(f64) -> f64| v.iter().map(|&x| f(x)).collect::<Vec<_>>();
        let shifted = unpaired_t_test(&map(&a, &|x| x + shift), &map(&b, &|x| x + shift)).map_err(|e| e.to_string())?;
        let scaled = unpaired_t_test(&map(&a, &|x| x * scale), &map(&b, &|x| x * scale)).map_err(|e| e.to_string())?;
        for (name, q) in [("shift", shifted), ("scale", scaled)] {
            ensure(
                (q.t - r.t).abs() <= 1e-9 * r.t.abs().max(1.0) && (q.p - r.p).abs() <= 1e-9,
                format!("pair {k}: {name} changed t {} -> {}", r.t, q.t),
            )?;
        }
    }
    Ok("20 oracle pairs, 100 symmetry/invariance pairs".into())
}

fn fctp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fctp"))
}

fn run_ok(cmd: &mut Command) -> Result<Vec<u8>, String> {
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{cmd:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn generate_presets(dir: &Path, seed: u64) -> Result<(), String> {
    for preset in ["small", "medium", "large"] {
        run_ok(
            fctp()
                .args(["gen", "--preset", preset, "--seed", &seed.to_string(), "--out"])
                .arg(dir),
        )?;
    }
    Ok(())
}

/// 7. The comparison table over the nine preset instances.
fn table_protocol() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    generate_presets(dir.path(), 2013)?;
    for entry in std::fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let (_, params) = read_instance(&path).map_err(|e| e.to_string())?;
        ensure(
            params.as_scalars() == Some((0.02, 0.02, 0.04, 0.04, 150_000.0)),
            format!("{} has emission params {:?}", path.display(), params.as_scalars()),
        )?;
    }

    let start = Instant::now();
    let compare = || -> Result<Vec<u8>, String> {
        run_ok(fctp().args(["compare", "--in"]).arg(dir.path()).args([
            "--trials",
            "30",
            "--seed",
            "7",
            "--baseline",
            "dy10",
        ]))
    };
    let first = compare()?;
    let second = compare()?;
    let elapsed = start.elapsed();
    ensure(first == second, "two runs differ")?;

    let text = String::from_utf8(first).map_err(|e| e.to_string())?;
    let mut lines = text.lines();
    ensure(lines.next() == Some("variant\tt\tp\tdf\tn"), "missing header")?;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    ensure(rows.len() == 4, format!("{} rows", rows.len()))?;
    let names: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    ensure(names == ["nn", "dy11", "dy12", "dx"], format!("rows {names:?}"))?;
    for row in &rows {
        let t: f64 = row[1].parse().map_err(|_| format!("bad t in {row:?}"))?;
        let p: f64 = row[2].parse().map_err(|_| format!("bad p in {row:?}"))?;
        ensure(t.is_finite(), format!("t not finite in {row:?}"))?;
        ensure(p > 0.0 && p <= 1.0, format!("p out of range in {row:?}"))?;
    }
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("4 rows, byte-identical, two runs in {elapsed:?}"))
}

/// 8. Byte-identical output across repeats and thread counts.
fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_ok(
        fctp()
            .args(["gen", "--preset", "medium", "--seed", "99", "--out"])
            .arg(dir.path()),
    )?;
    let file = dir.path().join("medium-2.fctp");

    for variant in ["nn", "dx", "dy10", "dy11", "dy12"] {
        let solve = || {
            run_ok(
                fctp()
                    .args(["solve", "--in"])
                    .arg(&file)
                    .args(["--variant", variant, "--seed", "5", "--flows"]),
            )
        };
        ensure(solve()? == solve()?, format!("solve {variant} differs"))?;
    }

    let compare = |threads: Option<&str>| {
        let mut cmd = fctp();
        cmd.args(["compare", "--in"])
            .arg(dir.path())
            .args(["--trials", "12", "--seed", "3", "--metric", "both"]);
        if let Some(t) = threads {
            cmd.args(["--threads", t]);
        }
        run_ok(&mut cmd)
    };
    let reference = compare(None)?;
    ensure(reference == compare(None)?, "compare repeat differs")?;
    for threads in ["1", "2", "8"] {
        ensure(
            reference == compare(Some(threads))?,
            format!("compare with {threads} threads differs"),
        )?;
    }
    Ok("solve x5 variants, compare x5 (1/2/8/default threads)".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("AC1 golden GHG example", golden_ghg),
        ("AC2 cap check", cap_check),
        ("AC3 oracle dominance", oracle_dominance),
        ("AC4 evaluator oracle equivalence", evaluator_equivalence),
        ("AC5 selection weights", selection_weights_check),
        ("AC6 t-test correctness", t_test_correctness),
        ("AC7 comparison table protocol", table_protocol),
        ("AC8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
