mod cache;
mod selector;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use amalgam::amalgamation::{
    amalgamation_property_scan, enumerate_amalgamations, is_separated, oddness_scan,
    strong_amalgamation_scan, ScanMode, ScanReport, SeparationQuery,
};
use amalgam::marked::{enumerate_minimal_marked, fmm_certificate, MinimalMarkedClass};
use amalgam::structures::{aut_check, Embedding, Structure, StructureRecord};
use amalgam::theta::{
    count_measures, regular_filter, satisfies, sign_measure, verify_assignments, CoefficientDomain,
    MeasureAssignment, RelationSystem,
};
use amalgam::Context;
use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::cache::Cache;

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

const REPORT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "amalgam",
    version,
    about = "Measures on amalgamation classes of finite structures"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Class selector: a built-in name, `join(A,B)`, `colored(A,s)` or a class file
    #[arg(long, global = true, default_value = "linear-orders")]
    class: String,
    /// Size bound B (default depends on the class)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Directory for cached structure tables
    #[arg(long, global = true, env = "AMALGAM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache directory
    #[arg(long, global = true)]
    no_cache: bool,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock timing in the report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in classes and combinators
    Classes,
    /// Members of the class up to isomorphism
    Enumerate {
        /// Size to enumerate (default: the bound)
        #[arg(long)]
        size: Option<usize>,
        /// Only report counts per size
        #[arg(long)]
        counts_only: bool,
    },
    /// Minimal marked structures up to the bound
    MinimalMarked,
    /// Amalgamations of a diagram `Y <- X -> Z`
    Amalgamate {
        /// JSON diagram, inline or `@file`
        #[arg(long)]
        diagram: String,
    },
    /// Whether two parts of a structure are separated
    Separated {
        /// JSON structure record, inline or `@file`
        #[arg(long)]
        structure: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        part_a: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        part_b: Vec<usize>,
    },
    /// Oddness scan up to the bound
    Oddness {
        /// Range over all pairs of extensions instead of one-point extensions
        #[arg(long)]
        exhaustive: bool,
    },
    /// Other amalgamation scans
    Scan {
        #[arg(long, value_enum)]
        property: Property,
    },
    /// Relation system at the bound
    Relations {
        /// Also write the plain-text export to this file
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// All measures at the bound
    Solve {
        #[arg(long, default_value = "z", value_parser = parse_domain)]
        domain: CoefficientDomain,
        /// Re-solve at bound + 1 and compare
        #[arg(long)]
        check_stability: bool,
    },
    /// Solve, then check every solution against all amalgamation relations
    Verify {
        #[arg(long, default_value = "z", value_parser = parse_domain)]
        domain: CoefficientDomain,
        /// Size bound V for the check (default: the bound)
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        verify_bound: Option<u64>,
    },
    /// The closed-form regular measure
    Sign,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Oddness,
    OddnessExhaustive,
    Amalgamation,
    StrongAmalgamation,
}

fn parse_domain(s: &str) -> Result<CoefficientDomain, String> {
    s.parse().map_err(|e: amalgam::Error| e.to_string())
}

/// Malformed user input (exit status 2).
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

mod exit {
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const PRECONDITION: u8 = 3;
    pub const COUNTEREXAMPLE: u8 = 4;
}

/// Result payload plus whether the checked property held.
struct Outcome {
    result: Value,
    passed: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome {
            result,
            passed: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(exit::COUNTEREXAMPLE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return exit::USAGE;
    }
    match e.downcast_ref::<amalgam::Error>() {
        Some(amalgam::Error::Precondition(_)) => exit::PRECONDITION,
        Some(_) => exit::USAGE,
        None => exit::INTERNAL,
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    if let Some(j) = g.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j as usize)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let start = Instant::now();
    let (name, config, outcome) = if let Command::Classes = cli.command {
        ("classes", json!({}), classes())
    } else {
        let class = selector::parse(&g.class).map_err(|e| usage(format!("{e:#}")))?;
        let bound = g
            .bound
            .map_or_else(|| selector::default_bound(&class), |b| b as usize);
        let ctx = Context::new(class);
        let cache = g
            .cache_dir
            .as_ref()
            .filter(|_| !g.no_cache)
            .map(|dir| Cache::new(dir, &ctx));
        if let Some(c) = &cache {
            c.load(&ctx);
        }
        let mut config = json!({ "class": ctx.class().name(), "bound": bound });
        let (name, outcome) = dispatch(&ctx, bound, &cli.command, &mut config)?;
        if let Some(c) = &cache {
            c.store(&ctx)?;
        }
        (name, config, outcome)
    };
    let mut report = json!({
        "command": name,
        "config": config,
        "result": outcome.result,
        "version": { "report": REPORT_VERSION, "artifact": env!("CARGO_PKG_VERSION") },
    });
    if g.timing {
        report["timing"] = json!({ "seconds": start.elapsed().as_secs_f64() });
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &g.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(outcome.passed)
}

fn dispatch(
    ctx: &Context,
    bound: usize,
    command: &Command,
    config: &mut Value,
) -> Result<(&'static str, Outcome)> {
    Ok(match command {
        Command::Classes => unreachable!(),
        Command::Enumerate { size, counts_only } => {
            let size = size.unwrap_or(bound);
            config["size"] = json!(size);
            ("enumerate", enumerate(ctx, size, *counts_only))
        }
        Command::MinimalMarked => ("minimal-marked", minimal_marked(ctx, bound)?),
        Command::Amalgamate { diagram } => ("amalgamate", amalgamate(ctx, diagram)?),
        Command::Separated {
            structure,
            part_a,
            part_b,
        } => {
            config["part_a"] = json!(part_a);
            config["part_b"] = json!(part_b);
            ("separated", separated(ctx, structure, part_a, part_b)?)
        }
        Command::Oddness { exhaustive } => {
            let mode = if *exhaustive {
                ScanMode::Exhaustive
            } else {
                ScanMode::OnePoint
            };
            config["mode"] = json!(mode);
            ("oddness", scan_outcome(oddness_scan(ctx, bound, mode))?)
        }
        Command::Scan { property } => {
            config["property"] = json!(format!("{property:?}"));
            let report = match property {
                Property::Oddness => oddness_scan(ctx, bound, ScanMode::OnePoint),
                Property::OddnessExhaustive => oddness_scan(ctx, bound, ScanMode::Exhaustive),
                Property::Amalgamation => amalgamation_property_scan(ctx, bound),
                Property::StrongAmalgamation => strong_amalgamation_scan(ctx, bound),
            };
            ("scan", scan_outcome(report)?)
        }
        Command::Relations { export } => ("relations", relations(ctx, bound, export.as_deref())?),
        Command::Solve {
            domain,
            check_stability,
        } => {
            config["domain"] = json!(domain);
            config["check_stability"] = json!(check_stability);
            ("solve", solve(ctx, bound, *domain, *check_stability)?)
        }
        Command::Verify {
            domain,
            verify_bound,
        } => {
            let v = verify_bound.map_or(bound, |v| v as usize);
            config["domain"] = json!(domain);
            config["verify_bound"] = json!(v);
            ("verify", verify(ctx, bound, *domain, v)?)
        }
        Command::Sign => ("sign", sign(ctx, bound)?),
    })
}

fn classes() -> Outcome {
    let list: Vec<Value> = selector::BUILTINS
        .iter()
        .map(|(s, d)| json!({ "selector": s, "description": d }))
        .collect();
    Outcome::ok(json!({ "classes": list }))
}

fn record(ctx: &Context, s: &Structure) -> Value {
    json!(StructureRecord::new(ctx.class().signature(), s))
}

fn enumerate(ctx: &Context, size: usize, counts_only: bool) -> Outcome {
    let counts: Vec<usize> = (0..=size).map(|n| ctx.structures(n).len()).collect();
    let mut result = json!({ "size": size, "count": counts[size], "counts": counts });
    if !counts_only {
        let list: Vec<Value> = ctx
            .structures(size)
            .iter()
            .map(|c| {
                json!({
                    "certificate": c.certificate,
                    "aut_order": c.aut_order,
                    "structure": record(ctx, &c.structure),
                })
            })
            .collect();
        result["structures"] = json!(list);
    }
    Outcome::ok(result)
}

fn variable_table(ctx: &Context, vars: &[MinimalMarkedClass]) -> Vec<Value> {
    vars.iter()
        .map(|v| {
            json!({
                "id": v.id,
                "certificate": v.class.certificate,
                "mark": v.class.mark,
                "size": v.class.size(),
                "structure": record(ctx, &v.class.structure),
            })
        })
        .collect()
}

fn minimal_marked(ctx: &Context, bound: usize) -> Result<Outcome> {
    let table = enumerate_minimal_marked(ctx, bound)?;
    let fmm = fmm_certificate(ctx, bound)?;
    let passed = fmm.complete && fmm.extraneous_check.as_ref().is_none_or(|c| c.passed);
    let mut result = json!(fmm);
    result["classes"] = json!(variable_table(ctx, &table.classes));
    Ok(Outcome { result, passed })
}

/// Read a JSON argument given inline or as `@path`.
fn json_arg<T: for<'de> Deserialize<'de>>(arg: &str, what: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(Path::new(path))
            .map_err(|e| usage(format!("reading {path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("malformed {what}: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramInput {
    base: StructureRecord,
    left: StructureRecord,
    left_map: Vec<usize>,
    right: StructureRecord,
    right_map: Vec<usize>,
}

fn amalgamate(ctx: &Context, arg: &str) -> Result<Outcome> {
    let d: DiagramInput = json_arg(arg, "diagram")?;
    let sig = ctx.class().signature();
    let base = d.base.to_structure(sig)?;
    let i = Embedding::new(base.clone(), d.left.to_structure(sig)?, d.left_map)?;
    let j = Embedding::new(base, d.right.to_structure(sig)?, d.right_map)?;
    let diagrams = enumerate_amalgamations(ctx.class(), &i, &j)?;
    let list: Vec<Value> = diagrams
        .iter()
        .map(|a| {
            json!({
                "result": record(ctx, &a.result),
                "left_leg": a.left_leg.map(),
                "right_leg": a.right_leg.map(),
                "identified": a.identified,
            })
        })
        .collect();
    Ok(Outcome::ok(
        json!({ "count": list.len(), "amalgamations": list }),
    ))
}

fn separated(ctx: &Context, arg: &str, a: &[usize], b: &[usize]) -> Result<Outcome> {
    let rec: StructureRecord = json_arg(arg, "structure")?;
    let s = rec.to_structure(ctx.class().signature())?;
    let q = SeparationQuery::new(s, a.to_vec(), b.to_vec())?;
    let sep = is_separated(ctx.class(), &q)?;
    Ok(Outcome::ok(
        json!({ "structure": rec, "part_a": a, "part_b": b, "separated": sep }),
    ))
}

fn scan_outcome(report: ScanReport) -> Result<Outcome> {
    let passed = report.passed;
    Ok(Outcome {
        result: serde_json::to_value(report)?,
        passed,
    })
}

fn relations(ctx: &Context, bound: usize, export: Option<&Path>) -> Result<Outcome> {
    let system = amalgam::theta::build_relation_system(ctx, bound)?;
    if let Some(path) = export {
        fs::write(path, system.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::ok(json!({
        "bound": system.bound,
        "variables": variable_table(ctx, &system.variables),
        "linear": system.linear,
        "quadratic": system.quadratic,
    })))
}

/// Assignment keyed by generator certificate.
fn keyed(system: &RelationSystem, a: &MeasureAssignment) -> Map<String, Value> {
    system
        .variables
        .iter()
        .map(|v| (v.class.certificate.to_hex(), json!(a.values[v.id])))
        .collect()
}

fn keyed_list(system: &RelationSystem, list: &[MeasureAssignment]) -> Vec<Map<String, Value>> {
    list.iter().map(|a| keyed(system, a)).collect()
}

fn solve(
    ctx: &Context,
    bound: usize,
    domain: CoefficientDomain,
    check_stability: bool,
) -> Result<Outcome> {
    let (system, solutions, report) = count_measures(ctx, bound, domain)?;
    let regular = regular_filter(&solutions);
    let mut passed = report.within_bounds;
    let mut result = json!({
        "report": report,
        "variables": variable_table(ctx, &system.variables),
        "assignments": keyed_list(&system, &solutions),
        "regular": keyed_list(&system, &regular),
    });
    if check_stability {
        let (next_system, next, next_report) = count_measures(ctx, bound + 1, domain)?;
        let stable = keyed_list(&system, &solutions) == keyed_list(&next_system, &next);
        passed &= next_report.within_bounds;
        result["stability"] = json!({ "report": next_report, "stable": stable });
    }
    Ok(Outcome { result, passed })
}

fn verify(ctx: &Context, bound: usize, domain: CoefficientDomain, v: usize) -> Result<Outcome> {
    let (system, solutions, report) = count_measures(ctx, bound, domain)?;
    let checks = verify_assignments(ctx, &system, &solutions, v)?;
    let passed = checks.iter().all(|c| c.passed);
    let entries: Vec<Value> = solutions
        .iter()
        .zip(&checks)
        .map(|(a, c)| json!({ "assignment": keyed(&system, a), "verify": c }))
        .collect();
    Ok(Outcome {
        result: json!({ "report": report, "verify_bound": v, "passed": passed, "assignments": entries }),
        passed,
    })
}

fn sign(ctx: &Context, bound: usize) -> Result<Outcome> {
    let measure = sign_measure(ctx, bound)?;
    let system = amalgam::theta::build_relation_system(ctx, bound)?;
    let ok = satisfies(&system, measure.domain, &measure.values);
    let aut = aut_check(ctx, 1, bound);
    Ok(Outcome {
        result: json!({
            "assignment": keyed(&system, &measure),
            "variables": variable_table(ctx, &system.variables),
            "satisfies_relations": ok,
            "aut_check": aut,
        }),
        passed: ok,
    })
}
