//! The two sweeps: a top-down product and a bottom-up reduction.

use xbdd::bdd::{truth_table, ArcStream};
use xbdd::sweeps::{apply, reduce};
use xbdd::{BlockConfig, BooleanOp, Engine, ReducedDiagram};

fn main() -> xbdd::Result<()> {
    let engine = Engine::in_memory(BlockConfig::new(8, 4096)?)?;
    let f = ReducedDiagram::cube(&engine, &[(0, true), (2, false)])?;
    let g = engine.xor(&ReducedDiagram::var(&engine, 1)?, &ReducedDiagram::var(&engine, 2)?)?;
    for op in BooleanOp::ALL {
        let unreduced: ArcStream = apply(&engine, &f, &g, op)?;
        let arcs = unreduced.record_count();
        let before = unreduced.node_count();
        let h = reduce(&engine, unreduced, None)?;
        let table: String = truth_table(&engine, &h, &[0, 1, 2])?
            .into_iter()
            .map(|b| if b { '1' } else { '0' })
            .collect();
        println!(
            "{:>5}: {arcs:2} arcs, {before} -> {} nodes, table {table}",
            format!("{op:?}"),
            h.node_count()
        );
    }
    let io = engine.counters();
    println!("total: {} blocks, {} sorts", io.blocks(), io.sorts);
    Ok(())
}
