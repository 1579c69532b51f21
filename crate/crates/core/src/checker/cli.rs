use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::{task_deadlock, task_next, task_prev, task_reachability, task_scc, Outcome, TaskOptions, TaskReport};
use crate::bdd::{deserialize, serialize, NodeSource, ReducedDiagram};
use crate::extmem::{BlockConfig, Engine};
use crate::models::{build_symbolic, Model, ModelFormat, Ordering, PartitionKind, SymbolicModel};
use crate::quantify::{OptTier, Partition};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "xbdd", version, about = "Symbolic model checking with external-memory BDDs")]
struct Cli {
    #[command(subcommand)]
    task: Task,
    /// Model file (.pnet or .bnet).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Model format, inferred from the extension when omitted.
    #[arg(long, global = true)]
    format: Option<ModelFormat>,
    #[arg(long, global = true, default_value = "joint")]
    partition: PartitionKind,
    #[arg(long, global = true, default_value = "sloan")]
    ordering: Ordering,
    #[arg(long = "opt-tier", global = true, default_value = "shift-replace")]
    opt_tier: OptTier,
    /// Memory budget M in records.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    memory: usize,
    /// Block size B in records.
    #[arg(long, global = true, default_value_t = 64)]
    block: usize,
    /// Write the result diagram here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the statistics as JSON here; `-` is standard output.
    #[arg(long = "stats-json", global = true)]
    stats_json: Option<PathBuf>,
    /// State set file: input of next/prev, output of convert.
    #[arg(long, global = true)]
    states: Option<PathBuf>,
    /// Relation file: input of next/prev, output of convert.
    #[arg(long, global = true)]
    relation: Option<PathBuf>,
    /// Apply Next to the whole reachable set instead of the frontier.
    #[arg(long = "full-set", global = true)]
    full_set: bool,
    /// Check after every iteration that the reachable set only grows.
    #[arg(long = "check-monotone", global = true)]
    check_monotone: bool,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Task {
    /// Reachable states.
    Reach,
    /// Reachable states without successors.
    Deadlock,
    /// Number of strongly connected components of the reachable states.
    Scc,
    /// One forward step from --states under --relation.
    Next,
    /// One backward step from --states under --relation.
    Prev,
    /// Export the initial states and the joint relation of a model.
    Convert,
}

/// Process exit code for an error: 1 for usage, 2 for bad input, 3 for a
/// violated internal invariant.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => 1,
        Error::Io(_) | Error::Format(_) | Error::Input(_) | Error::NonMonotone(_) | Error::Parse { .. } => 2,
        Error::Structural(_) | Error::Invariant(_) | Error::MemoryBudget { .. } => 3,
    }
}

/// Run the command line `args` (including the program name) and return the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "xbdd: {e}");
            exit_code(&e)
        }
    }
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str, task: Task) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("{task:?} needs --{flag}").to_lowercase()))
}

fn load_model(engine: &Engine, cli: &Cli, task: Task) -> Result<(String, SymbolicModel)> {
    let path = required(&cli.model, "model", task)?;
    let model = Model::load(path, cli.format)?;
    let order = model.order(cli.ordering);
    let symbolic = build_symbolic(engine, &model, &order, cli.partition)?;
    Ok((name_of(path), symbolic))
}

fn name_of(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn read_diagram(engine: &Engine, path: &Path) -> Result<ReducedDiagram> {
    let mut r = BufReader::new(File::open(path)?);
    deserialize(engine, &mut r)
}

fn write_diagram(engine: &Engine, d: &dyn NodeSource, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serialize(engine, d, &mut w)?;
    w.flush()?;
    Ok(())
}

fn write_report(report: &TaskReport, target: &Path, stdout: &mut dyn Write) -> Result<()> {
    let json = report.to_json();
    if target == Path::new("-") {
        writeln!(stdout, "{json}")?;
    } else {
        std::fs::write(target, json + "\n")?;
    }
    Ok(())
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let engine = Engine::new(BlockConfig::new(cli.block, cli.memory)?)?;
    let opts = TaskOptions {
        tier: cli.opt_tier,
        full_set: cli.full_set,
        check_monotone: cli.check_monotone,
    };
    let task = cli.task;
    let outcome: Outcome = match task {
        Task::Reach | Task::Deadlock | Task::Scc => {
            let (name, model) = load_model(&engine, cli, task)?;
            match task {
                Task::Reach => task_reachability(&engine, &name, &model, opts)?,
                Task::Deadlock => task_deadlock(&engine, &name, &model, opts)?,
                _ => task_scc(&engine, &name, &model, opts)?,
            }
        }
        Task::Next | Task::Prev => {
            let s_path = required(&cli.states, "states", task)?;
            let r_path = required(&cli.relation, "relation", task)?;
            let states = read_diagram(&engine, s_path)?;
            let relation = read_diagram(&engine, r_path)?;
            let name = name_of(r_path);
            if matches!(task, Task::Next) {
                task_next(&engine, &name, &states, &relation, opts.tier)?
            } else {
                task_prev(&engine, &name, &states, &relation, opts.tier)?
            }
        }
        Task::Convert => {
            let (_, model) = load_model(&engine, cli, task)?;
            let s_path = required(&cli.states, "states", task)?;
            let r_path = required(&cli.relation, "relation", task)?;
            write_diagram(&engine, &model.initial, s_path)?;
            let joint = match model.relation.partition() {
                Partition::Joint(r) => r.clone(),
                Partition::Disjoint(parts) => {
                    let mut acc = ReducedDiagram::constant(false);
                    for p in parts {
                        acc = engine.or(&acc, p)?;
                    }
                    acc
                }
            };
            write_diagram(&engine, &joint, r_path)?;
            if let Some(target) = &cli.stats_json {
                let json = serde_json::json!({
                    "task": "convert",
                    "variables": model.variables,
                    "io": engine.counters(),
                    "peak_resident_records": engine.peak_resident_records(),
                });
                let text = serde_json::to_string_pretty(&json).expect("json values serialize");
                if target == Path::new("-") {
                    writeln!(stdout, "{text}")?;
                } else {
                    std::fs::write(target, text + "\n")?;
                }
            }
            return Ok(());
        }
    };
    if let Some(out) = &cli.out {
        write_diagram(&engine, &outcome.result, out)?;
    }
    if let Some(target) = &cli.stats_json {
        write_report(&outcome.report, target, stdout)?;
    }
    Ok(())
}
