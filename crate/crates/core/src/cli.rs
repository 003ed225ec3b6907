//! The `fctp` command-line driver.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data errors (missing
//! files, parse failures, invalid instances).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::evaluator::{self, GhgMode};
use crate::format;
use crate::heuristics::{construct_solution, Variant};
use crate::instances::Preset;
use crate::stats::{self, format_decimal, Metric, NamedInstance, TTestKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fctp",
    version,
    about = "Two-stage fixed-charge transportation with emission caps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the three instances of a benchmark preset.
    Gen(GenArgs),
    /// Construct a solution with one heuristic variant.
    Solve(SolveArgs),
    /// Evaluate a solution file against an instance.
    Eval(EvalArgs),
    /// Run all variants over a set of instances and t-test them against a baseline.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    Small,
    Medium,
    Large,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Small => Preset::Small,
            PresetArg::Medium => Preset::Medium,
            PresetArg::Large => Preset::Large,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Emissions,
    Cost,
    Both,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub preset: PresetArg,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_variant)]
    pub variant: Variant,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "unweighted", value_parser = parse_mode)]
    pub ghg_mode: GhgMode,
    /// Also print the flow matrix.
    #[arg(long)]
    pub flows: bool,
    /// Write the solution file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, default_value = "unweighted", value_parser = parse_mode)]
    pub ghg_mode: GhgMode,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Instance files, or directories whose `*.fctp` files are used.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value_t = 30)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "dy10", value_parser = parse_variant)]
    pub baseline: Variant,
    /// Comma-separated variant list; report rows follow this order.
    #[arg(long, value_delimiter = ',', default_value = "nn,dy10,dy11,dy12,dx", value_parser = parse_variant)]
    pub variants: Vec<Variant>,
    #[arg(long, value_enum, default_value = "emissions")]
    pub metric: MetricArg,
    #[arg(long, default_value = "unweighted", value_parser = parse_mode)]
    pub ghg_mode: GhgMode,
    /// Welch's test instead of the pooled-variance test.
    #[arg(long)]
    pub welch: bool,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write the raw per-trial table here.
    #[arg(long)]
    pub raw: Option<PathBuf>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<GhgMode, String> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(e: impl std::fmt::Display) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a, out),
        Command::Solve(a) => solve(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Compare(a) => compare(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Outcome {
    std::fs::create_dir_all(&args.out).map_err(|e| Failure::Data(format!("{}: {e}", args.out.display())))?;
    let preset = Preset::from(args.preset);
    for (name, inst, params) in preset.generate(args.seed) {
        let path = args.out.join(format!("{name}.fctp"));
        format::write_instance(&path, &inst, &params).map_err(Failure::data)?;
        writeln!(out, "{}", path.display()).map_err(Failure::data)?;
    }
    Ok(())
}

fn summary_line(r: &crate::heuristics::SolveResult) -> String {
    let f = &r.feasibility;
    format!(
        "variant={} seed={} Z={} transport={} fixed={} emissions={} nonneg_ok={} capacity_ok={} demand_ok={} ghg_ok={} feasible={}",
        r.variant,
        r.seed,
        format_decimal(r.cost.total, 6),
        format_decimal(r.cost.transport, 6),
        format_decimal(r.cost.fixed, 6),
        format_decimal(r.emissions, 6),
        f.nonneg_ok,
        f.capacity_ok,
        f.demand_ok,
        f.ghg_ok,
        f.feasible,
    )
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Outcome {
    let (inst, params) = format::read_instance(&args.input).map_err(Failure::data)?;
    let r = construct_solution(&inst, &params, args.ghg_mode, args.variant, args.seed).map_err(Failure::data)?;
    writeln!(out, "{}", summary_line(&r)).map_err(Failure::data)?;
    let text = format::serialize_solution(&r.solution);
    if args.flows {
        write!(out, "{text}").map_err(Failure::data)?;
    }
    if let Some(path) = &args.out {
        std::fs::write(path, &text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn eval(args: EvalArgs, out: &mut dyn Write) -> Outcome {
    let (inst, params) = format::read_instance(&args.input).map_err(Failure::data)?;
    let sol = format::read_solution(&args.solution).map_err(Failure::data)?;
    let cost = evaluator::total_cost(&inst, &sol).map_err(Failure::data)?;
    let f = evaluator::check_feasibility(&inst, &params, &sol, args.ghg_mode).map_err(Failure::data)?;
    writeln!(
        out,
        "Z={} transport={} fixed={}\nemissions={} ghg_cap={} mode={}\nnonneg_ok={} capacity_ok={} demand_ok={} ghg_ok={} feasible={}",
        format_decimal(cost.total, 6),
        format_decimal(cost.transport, 6),
        format_decimal(cost.fixed, 6),
        format_decimal(f.emissions, 6),
        format_decimal(params.ghg_cap, 6),
        args.ghg_mode,
        f.nonneg_ok,
        f.capacity_ok,
        f.demand_ok,
        f.ghg_ok,
        f.feasible,
    )
    .map_err(Failure::data)
}

/// Expands directories to their `*.fctp` files, sorted by name.
fn collect_instance_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut paths = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let entries = std::fs::read_dir(input).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "fctp"))
                .collect();
            found.sort();
            if found.is_empty() {
                return Err(Failure::Data(format!("{}: no .fctp files", input.display())));
            }
            paths.extend(found);
        } else {
            paths.push(input.clone());
        }
    }
    Ok(paths)
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn compare(args: CompareArgs, out: &mut dyn Write) -> Outcome {
    if args.trials < 2 {
        return Err(Failure::Usage("--trials must be at least 2".into()));
    }
    if !args.variants.contains(&args.baseline) {
        return Err(Failure::Usage(format!(
            "baseline {} is not among --variants",
            args.baseline
        )));
    }
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    let mut variants = Vec::new();
    for v in &args.variants {
        if !variants.contains(v) {
            variants.push(*v);
        }
    }

    let instances = collect_instance_paths(&args.inputs)?
        .iter()
        .map(|path| {
            let (instance, params) = format::read_instance(path).map_err(Failure::data)?;
            Ok(NamedInstance {
                name: instance_name(path),
                instance,
                params,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;

    let run = || stats::run_experiment(&instances, args.ghg_mode, &variants, args.trials, args.seed);
    let table = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(Failure::data)?
            .install(run),
        None => run(),
    }
    .map_err(Failure::data)?;

    if let Some(path) = &args.raw {
        std::fs::write(path, stats::trials_tsv(&table))
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }

    let kind = if args.welch {
        TTestKind::Welch
    } else {
        TTestKind::Pooled
    };
    let metrics: &[Metric] = match args.metric {
        MetricArg::Emissions => &[Metric::Emissions],
        MetricArg::Cost => &[Metric::Cost],
        MetricArg::Both => &[Metric::Emissions, Metric::Cost],
    };
    for (k, &metric) in metrics.iter().enumerate() {
        let results = stats::compare_vs_baseline(&table, args.baseline, metric, kind).map_err(Failure::data)?;
        if metrics.len() > 1 {
            if k > 0 {
                writeln!(out).map_err(Failure::data)?;
            }
            writeln!(out, "# metric: {}", metric.as_str()).map_err(Failure::data)?;
        }
        write!(out, "{}", stats::comparison_tsv(&results)).map_err(Failure::data)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("fctp").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_capture(&["solve", "--in", "x", "--variant", "nn", "--seed", "1", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn bad_variant_is_usage_error() {
        let (code, _, _) = run_capture(&["solve", "--in", "x", "--variant", "dy13", "--seed", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_data_error() {
        let (code, _, err) = run_capture(&["solve", "--in", "/nonexistent/x.fctp", "--variant", "nn", "--seed", "1"]);
        assert_eq!(code, EXIT_DATA);
        assert!(err.contains("/nonexistent/x.fctp"));
    }

    #[test]
    fn compare_flag_validation() {
        let (code, _, _) = run_capture(&["compare", "--in", "d", "--trials", "1", "--seed", "1"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["compare", "--in", "d", "--seed", "1", "--variants", "nn,dx"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture(&["compare", "--in", "d", "--seed", "1", "--threads", "0"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("compare"));
    }
}
