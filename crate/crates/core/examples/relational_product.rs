//! One image computation on the two-state example at every optimisation tier.

use std::path::Path;

use xbdd::bdd::pick_min_state;
use xbdd::models::{build_symbolic, Model, PartitionKind};
use xbdd::quantify::{relnext, relprev};
use xbdd::{BlockConfig, Engine, OptTier};

fn main() -> xbdd::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("models/two_state.pnet");
    let model = Model::load(&path, None)?;
    for tier in OptTier::ALL {
        let engine = Engine::in_memory(BlockConfig::new(8, 4096)?)?;
        let m = build_symbolic(&engine, &model, &[0, 1], PartitionKind::Joint)?;
        engine.reset_counters();
        let next = relnext(&engine, &m.initial, &m.relation, tier)?;
        let prev = relprev(&engine, &m.initial, &m.relation, tier)?;
        let io = engine.counters();
        println!(
            "{tier:>14}: next {:?}, prev has {} nodes, {} blocks, {} sorts, {} intermediate arcs",
            pick_min_state(&engine, &next, &m.state_levels())?.unwrap_or_default(),
            prev.node_count(),
            io.blocks(),
            io.sorts,
            engine.intermediate_records()
        );
    }
    Ok(())
}
