//! The `pbb` command line: solve, sweep, compare, breakeven and audit.
//!
//! Exit codes: 0 success, 1 usage or precondition error, 2 solver failure,
//! 3 audit failure under `--strict`.

pub mod config;
pub mod problem;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bench::{
    audit_with_registry, breakeven_n, build_pareto_front, config_digest, match_equal_accuracy, match_equal_runtime,
    sweep_cost_accuracy_parallel, time_with_output, BenchRecord, BreakEvenInputs, Claim, Grade, ParetoFront, Registry,
    SweepSpec, TOOL_VERSION,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::io::{write_binary, write_csv};
use crate::norms::compute_all;

pub use config::RunConfig;
pub use problem::{build_problem, OwnedReference, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_AUDIT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pbb", version, about = "Classical PDE baselines and fair cost-accuracy comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one solve; writes the field and a benchmark record.
    Solve(RunArgs),
    /// Sweep resolutions; writes the records and the Pareto front.
    Sweep(RunArgs),
    /// Compare two record files at equal accuracy (or equal runtime).
    Compare(CompareArgs),
    /// Number of surrogate evaluations needed to amortize data and training cost.
    Breakeven(BreakevenArgs),
    /// Grade a speedup claim against rule 1 (equal accuracy) and rule 2 (strong baseline).
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps (capped by PBB_THREADS).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    pde: Option<String>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated sweep resolutions.
    #[arg(long, value_delimiter = ',')]
    resolutions: Option<Vec<usize>>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    ic: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    modes: Option<usize>,
    #[arg(long)]
    amplitude_min: Option<f64>,
    #[arg(long)]
    amplitude_max: Option<f64>,
    #[arg(long)]
    k_min: Option<u32>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    offset: Option<f64>,
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    speed: Option<f64>,
    #[arg(long)]
    viscosity: Option<f64>,
    #[arg(long)]
    limiter_m: Option<f64>,
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    forcing_amplitude: Option<f64>,
    #[arg(long)]
    forcing_wavenumber: Option<u32>,
    #[arg(long)]
    drag: Option<f64>,
    #[arg(long)]
    reference_factor: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    warmups: Option<usize>,
    #[arg(long)]
    snapshot_interval: Option<f64>,
    /// Field dump format: csv or pbf.
    #[arg(long)]
    format: Option<String>,
}

impl RunArgs {
    fn overrides(&self) -> Map<String, Value> {
        let mut m = Map::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                m.insert(k.to_owned(), v);
            }
        };
        put("pde", self.pde.as_ref().map(|v| json!(v)));
        put("solver", self.solver.as_ref().map(|v| json!(v)));
        put("order", self.order.map(|v| json!(v)));
        put("n", self.n.map(|v| json!(v)));
        put("resolutions", self.resolutions.as_ref().map(|v| json!(v)));
        put("x_min", self.x_min.map(|v| json!(v)));
        put("x_max", self.x_max.map(|v| json!(v)));
        put("ic", self.ic.as_ref().map(|v| json!(v)));
        put("seed", self.seed.map(|v| json!(v)));
        put("modes", self.modes.map(|v| json!(v)));
        put("amplitude_min", self.amplitude_min.map(|v| json!(v)));
        put("amplitude_max", self.amplitude_max.map(|v| json!(v)));
        put("k_min", self.k_min.map(|v| json!(v)));
        put("k_max", self.k_max.map(|v| json!(v)));
        put("offset", self.offset.map(|v| json!(v)));
        put("width", self.width.map(|v| json!(v)));
        put("t_final", self.t_final.map(|v| json!(v)));
        put("cfl", self.cfl.map(|v| json!(v)));
        put("speed", self.speed.map(|v| json!(v)));
        put("viscosity", self.viscosity.map(|v| json!(v)));
        put("limiter_m", self.limiter_m.map(|v| json!(v)));
        put("boundary", self.boundary.as_ref().map(|v| json!(v)));
        put("tol", self.tol.map(|v| json!(v)));
        put("max_iter", self.max_iter.map(|v| json!(v)));
        put("forcing_amplitude", self.forcing_amplitude.map(|v| json!(v)));
        put("forcing_wavenumber", self.forcing_wavenumber.map(|v| json!(v)));
        put("drag", self.drag.map(|v| json!(v)));
        put("reference_factor", self.reference_factor.map(|v| json!(v)));
        put("repeats", self.repeats.map(|v| json!(v)));
        put("warmups", self.warmups.map(|v| json!(v)));
        put("snapshot_interval", self.snapshot_interval.map(|v| json!(v)));
        put("format", self.format.as_ref().map(|v| json!(v)));
        m
    }

    fn config(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
                Some(serde_json::from_str::<Value>(&text).map_err(|e| Error::InvalidInput(format!("config: {e}")))?)
            }
            None => None,
        };
        RunConfig::layered(file.as_ref(), &self.overrides())
    }
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Baseline records (a sweep output, a record array or a single record).
    a: PathBuf,
    /// Competing records.
    b: PathBuf,
    /// Compare at this relative L2 error (default: the most accurate common level).
    #[arg(long, conflicts_with = "target_cost")]
    target_error: Option<f64>,
    /// Compare at this runtime in seconds instead.
    #[arg(long)]
    target_cost: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BreakevenArgs {
    /// Data generation cost, seconds.
    #[arg(long, default_value_t = 0.0)]
    c_data: f64,
    /// Training cost, seconds.
    #[arg(long, default_value_t = 0.0)]
    c_train: f64,
    /// Baseline time per evaluation at equal accuracy, seconds.
    #[arg(long)]
    t_b: f64,
    /// Surrogate speedup per evaluation.
    #[arg(long)]
    s: f64,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Claim JSON file.
    claim: PathBuf,
    /// Replacement registry of efficient and forbidden methods.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Exit with code 3 when any verdict fails.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::InvalidConfig(_)
        | Error::Parse(_)
        | Error::NotFaster(_)
        | Error::ZeroBaselineTime
        | Error::EmptyClaim(_)
        | Error::MixedSolverIds(_)
        | Error::ReferenceTooCoarse { .. }
        | Error::Extrapolation { .. } => EXIT_USAGE,
        _ => EXIT_SOLVER,
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run_cli<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::Compare(a) => compare(&a, out),
        Command::Breakeven(a) => breakeven(&a, out),
        Command::Audit(a) => audit(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn dump_field(field: &Field, path: &Path, format: &str) -> Result<()> {
    let file = std::io::BufWriter::new(fs::File::create(path)?);
    match format {
        "pbf" => write_binary(field, file),
        _ => write_csv(field, file),
    }
}

fn stem(cfg: &RunConfig, solver_id: &str, n: &str, digest: &str) -> String {
    format!("{}_{solver_id}_{n}_{digest}", cfg.pde)
}

fn solve(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = args.config()?;
    if !matches!(cfg.format.as_str(), "csv" | "pbf") {
        return Err(Error::InvalidInput(format!("unknown format '{}'", cfg.format)));
    }
    let problem = build_problem(&cfg)?;
    let digest = cfg.digest();
    let n = cfg.n;
    let (stats, (field, frames)) =
        time_with_output(|| problem.solve_with_snapshots(n, cfg.snapshot_interval), cfg.repeats, cfg.warmups)?;
    let scored = if field.components() > 1 { field.component(0)? } else { field.clone() };
    let reference = problem.reference_for(n)?;
    let errors = compute_all(&scored, to_reference(&reference))?;
    let record = BenchRecord::new(
        &problem.solver_id,
        &problem.pde_id,
        n,
        field.dof_count(),
        &digest,
        &stats,
        errors,
        cfg.seed,
    );
    fs::create_dir_all(&args.out)?;
    let base = stem(&cfg, &problem.solver_id, &n.to_string(), &digest);
    let ext = if cfg.format == "pbf" { "pbf" } else { "csv" };
    dump_field(&field, &args.out.join(format!("{base}.{ext}")), &cfg.format)?;
    for (k, (_, frame)) in frames.iter().enumerate() {
        dump_field(frame, &args.out.join(format!("{base}_snap{k:04}.{ext}")), &cfg.format)?;
    }
    let doc = json!({
        "tool_version": TOOL_VERSION,
        "config_digest": digest,
        "config": cfg,
        "record": record,
        "snapshot_times": frames.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
    });
    write_json(&args.out.join(format!("{base}.json")), &doc)?;
    writeln!(
        out,
        "{} {} n={n}: rel_l2={:.4e} median={:.4e}s -> {}",
        problem.pde_id,
        problem.solver_id,
        record.error_l2,
        record.runtime_median_s,
        args.out.join(format!("{base}.json")).display()
    )?;
    Ok(EXIT_OK)
}

fn to_reference(r: &OwnedReference) -> crate::norms::Reference<'_> {
    match r {
        OwnedReference::Analytic1D(f) => crate::norms::Reference::Analytic1D(f.as_ref()),
        OwnedReference::Analytic2D(f) => crate::norms::Reference::Analytic2D(f.as_ref()),
        OwnedReference::Field(f) => crate::norms::Reference::Field(f),
    }
}

fn sweep(args: &RunArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = args.config()?;
    let problem = build_problem(&cfg)?;
    let digest = cfg.digest();
    let resolutions = cfg.resolutions();
    let largest = *resolutions.iter().max().expect("at least one resolution");
    let reference = problem.reference_for(largest)?;
    let spec = SweepSpec {
        solver_id: problem.solver_id.clone(),
        pde_id: problem.pde_id.clone(),
        resolutions: resolutions.clone(),
        repeats: cfg.repeats,
        warmups: cfg.warmups,
        seed: cfg.seed,
        config_digest: digest.clone(),
    };
    let jobs = args.jobs.min(crate::bench::timing::thread_count().max(1)).max(1);
    let solve = |n: usize| problem.solve(n);
    let records = sweep_cost_accuracy_parallel(&spec, &solve, reference.as_sweep(), jobs)?;
    let front = build_pareto_front(&records)?;
    fs::create_dir_all(&args.out)?;
    let smallest = *resolutions.iter().min().expect("at least one resolution");
    let base = stem(&cfg, &problem.solver_id, &format!("{smallest}-{largest}"), &digest);
    let doc = json!({
        "tool_version": TOOL_VERSION,
        "config_digest": digest,
        "config": cfg,
        "records": records,
        "front": front,
    });
    write_json(&args.out.join(format!("{base}.json")), &doc)?;
    let mut csv = Vec::new();
    front.write_csv(&mut csv)?;
    fs::write(args.out.join(format!("{base}.csv")), csv)?;
    for r in &records {
        writeln!(out, "n={:<6} dof={:<8} rel_l2={:.4e} median={:.4e}s", r.resolution, r.dof, r.error_l2, r.runtime_median_s)?;
    }
    writeln!(out, "front: {} of {} points -> {}", front.points.len(), records.len(), args.out.join(format!("{base}.json")).display())?;
    Ok(EXIT_OK)
}

/// Accepts a sweep document, an array of records or a single record.
fn load_records(path: &Path) -> Result<Vec<BenchRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)?;
    let records = match &value {
        Value::Object(m) if m.contains_key("records") => m["records"].clone(),
        Value::Object(m) if m.contains_key("record") => Value::Array(vec![m["record"].clone()]),
        Value::Array(_) => value.clone(),
        Value::Object(_) => Value::Array(vec![value.clone()]),
        _ => return Err(Error::InvalidInput(format!("{}: no records found", path.display()))),
    };
    Ok(serde_json::from_value(records)?)
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let a = build_pareto_front(&load_records(&args.a)?)?;
    let b = build_pareto_front(&load_records(&args.b)?)?;
    let report = match args.target_cost {
        Some(c) => {
            let r = match_equal_runtime(&a, &b, c)?;
            writeln!(out, "accuracy ratio {:.6} at cost {c:.4e}s", r.accuracy_ratio)?;
            json!({"mode": "equal_runtime", "a": a.solver_id, "b": b.solver_id, "report": r})
        }
        None => {
            let target = match args.target_error {
                Some(e) => e,
                None => common_error(&a, &b)?,
            };
            let r = match_equal_accuracy(&a, &b, target)?;
            writeln!(out, "speedup {:.6} at error {target:.4e}", r.speedup)?;
            json!({"mode": "equal_accuracy", "a": a.solver_id, "b": b.solver_id, "report": r})
        }
    };
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        let digest = config_digest(&report);
        write_json(&dir.join(format!("compare_{}_{}_{digest}.json", a.solver_id, b.solver_id)), &report)?;
    }
    Ok(EXIT_OK)
}

/// Most accurate error level reached by both fronts.
fn common_error(a: &ParetoFront, b: &ParetoFront) -> Result<f64> {
    let (a_lo, a_hi) = a.error_range();
    let (b_lo, b_hi) = b.error_range();
    let lo = a_lo.max(b_lo);
    if lo > a_hi.min(b_hi) {
        return Err(Error::Extrapolation {
            front: format!("{} vs {}", a.solver_id, b.solver_id),
            target: lo,
            lo: a_lo.min(b_lo),
            hi: a_hi.min(b_hi),
        });
    }
    Ok(lo)
}

fn breakeven(args: &BreakevenArgs, out: &mut dyn Write) -> Result<i32> {
    let n = breakeven_n(&BreakEvenInputs {
        c_data: args.c_data,
        c_train: args.c_train,
        t_b: args.t_b,
        s: args.s,
    })?;
    writeln!(out, "N={n}")?;
    Ok(EXIT_OK)
}

fn audit(args: &AuditArgs, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&args.claim)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", args.claim.display())))?;
    let claim: Claim = serde_json::from_str(&text)?;
    let registry = match &args.registry {
        Some(p) => Registry::from_json(&fs::read_to_string(p)?)?,
        None => Registry::builtin(),
    };
    let verdicts = audit_with_registry(&claim, &registry)?;
    let doc = json!({"tool_version": TOOL_VERSION, "claim_digest": config_digest(&serde_json::to_value(&claim)?), "verdicts": verdicts});
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join(format!("audit_{}.json", doc["claim_digest"].as_str().unwrap_or("claim"))), &doc)?;
    }
    let failed = verdicts.iter().any(|v| v.grade == Grade::Fail);
    Ok(if failed && args.strict { EXIT_AUDIT_FAIL } else { EXIT_OK })
}
