//! Sort a file larger than the memory budget and watch the block counters.

use xbdd::extmem::{sort_external, RecordFile};
use xbdd::{BlockConfig, Engine};

fn main() -> xbdd::Result<()> {
    let engine = Engine::new(BlockConfig::new(16, 512)?)?;
    let input: Vec<u64> = (0..20_000u64)
        .map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 40)
        .collect();
    let file = RecordFile::from_records(&engine, input)?;
    let before = engine.counters();
    let sorted = sort_external(&engine, &file)?;
    let io = engine.counters().since(&before);
    let all = sorted.read_all(&engine)?;
    assert!(all.windows(2).all(|w| w[0] <= w[1]));
    println!("sorted {} records with M = 512, B = 16", all.len());
    println!(
        "blocks read {}, written {}, sorts {}",
        io.blocks_read, io.blocks_written, io.sorts
    );
    println!("peak resident records: {}", engine.peak_resident_records());
    Ok(())
}
