//! Reachability, deadlocks and SCCs of a model, with the JSON report.
//!
//! `cargo run --example model_checking -- crates/core/models/mutex.pnet`

use std::path::PathBuf;

use xbdd::checker::{task_deadlock, task_reachability, task_scc, TaskOptions};
use xbdd::models::{build_symbolic, Model, Ordering, PartitionKind};
use xbdd::{BlockConfig, Engine};

fn main() -> xbdd::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models/philosophers3.pnet"));
    let engine = Engine::new(BlockConfig::new(64, 1 << 16)?)?;
    let model = Model::load(&path, None)?;
    let m = build_symbolic(&engine, &model, &model.order(Ordering::Sloan), PartitionKind::Disjoint)?;
    let name = path.file_stem().unwrap().to_string_lossy();
    let opts = TaskOptions::default();
    let reach = task_reachability(&engine, &name, &m, opts)?;
    let dead = task_deadlock(&engine, &name, &m, opts)?;
    let scc = task_scc(&engine, &name, &m, opts)?;
    println!("{} variables", m.vars());
    println!(
        "reachable states: {} in {} steps",
        reach.report.state_count, reach.report.iterations
    );
    println!("deadlock states:  {}", dead.report.state_count);
    println!("SCCs:             {}", scc.report.scc_count.as_deref().unwrap_or("?"));
    println!("{}", scc.report.to_json());
    Ok(())
}
