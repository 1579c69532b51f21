//! Build diagrams, evaluate them, count satisfying assignments and write
//! them in the `XBDD0001` format.

use xbdd::bdd::{count_states, evaluate, serialize};
use xbdd::{BlockConfig, Engine, ReducedDiagram};

fn main() -> xbdd::Result<()> {
    let engine = Engine::in_memory(BlockConfig::new(8, 4096)?)?;
    let x0 = ReducedDiagram::var(&engine, 0)?;
    let x1 = ReducedDiagram::var(&engine, 1)?;
    let x2 = ReducedDiagram::var(&engine, 2)?;
    // majority of three
    let m = engine.or(
        &engine.or(&engine.and(&x0, &x1)?, &engine.and(&x1, &x2)?)?,
        &engine.and(&x0, &x2)?,
    )?;
    println!("majority: {} nodes", m.node_count());
    for bits in 0..8u32 {
        let v = evaluate(&engine, &m, |l| Some(bits >> (2 - l) & 1 == 1))?;
        println!("  {bits:03b} -> {}", v as u8);
    }
    println!(
        "satisfying assignments over x0..x3: {}",
        count_states(&engine, &m, &[0, 1, 2, 3])?
    );
    let mut bytes = Vec::new();
    serialize(&engine, &m, &mut bytes)?;
    println!("serialized size: {} bytes", bytes.len());
    Ok(())
}
