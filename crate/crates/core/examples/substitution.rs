//! Three ways to rename variables, and what each costs.

use xbdd::substitution::{attach_shift, materialize, replace_naive};
use xbdd::sweeps::{reduce, transpose_diagram};
use xbdd::{AffineShift, BlockConfig, Engine, Level, ReducedDiagram};

fn main() -> xbdd::Result<()> {
    let engine = Engine::in_memory(BlockConfig::new(8, 4096)?)?;
    let lits: Vec<(Level, bool)> = (0..1000).map(|l| (2 * l, l % 2 == 0)).collect();
    let d = ReducedDiagram::cube(&engine, &lits)?;
    let shift = AffineShift::offset(1);
    let subst = shift.to_subst(d.level_labels())?;

    let t0 = engine.counters();
    let a = replace_naive(&engine, &d, &subst)?;
    let t1 = engine.counters();
    let b = reduce(&engine, transpose_diagram(&engine, &d)?, Some(&subst))?;
    let t2 = engine.counters();
    let view = attach_shift(&d, shift)?;
    let t3 = engine.counters();
    let c = materialize(&engine, &view)?;

    println!("{} nodes, B = 8", d.node_count());
    println!("replace_naive:  {:4} blocks", t1.since(&t0).blocks());
    println!("transpose+reduce: {:4} blocks", t2.since(&t1).blocks());
    println!("attach_shift:   {:4} blocks", t3.since(&t2).blocks());
    assert_eq!(a.levels(), b.levels());
    assert_eq!(a.levels(), c.levels());
    println!("all three agree; top level is now {}", a.levels()[0].level);
    Ok(())
}
