use crate::bdd::ByTarget;
use crate::bdd::{ArcOrder, ArcRecord, ArcStream, NodeReader, NodeSource};
use crate::extmem::{Direction, Engine, RecordWriter, Sorter};
use crate::Result;

/// Re-sort the internal arcs of a source-sorted stream by target. A stream
/// that is already transposed is returned unchanged.
pub fn transpose(engine: &Engine, arcs: ArcStream) -> Result<ArcStream> {
    if arcs.order == ArcOrder::Target {
        return Ok(arcs);
    }
    let share = engine.shares(2, 1)?;
    let mut sorter = Sorter::new(engine, share)?;
    {
        let mut r = arcs.internal.reader(engine, Direction::Forward)?;
        while let Some(a) = r.next()? {
            sorter.push(ByTarget(a))?;
        }
    }
    let internal = write_sorted(engine, sorter)?;
    Ok(ArcStream {
        internal,
        order: ArcOrder::Target,
        ..arcs
    })
}

fn write_sorted(engine: &Engine, sorter: Sorter<ByTarget>) -> Result<crate::extmem::RecordFile<ArcRecord>> {
    let mut sorted = sorter.finish()?;
    let mut w = RecordWriter::new(engine)?;
    while let Some(ByTarget(a)) = sorted.next()? {
        w.push(a)?;
    }
    w.finish()
}

/// The arcs of a reduced diagram in transposed order.
pub fn transpose_diagram(engine: &Engine, source: &dyn NodeSource) -> Result<ArcStream> {
    let root = source.root();
    if let Some(v) = root.value() {
        return ArcStream::constant(engine, v);
    }
    let share = engine.shares(3, 1)?;
    let mut sorter = Sorter::new(engine, share)?;
    let mut terminal = RecordWriter::new(engine)?;
    {
        let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
        while let Some(n) = reader.next()? {
            for (high, target) in [(false, n.low), (true, n.high)] {
                let arc = ArcRecord {
                    source: n.uid,
                    high,
                    target,
                };
                if target.is_terminal() {
                    terminal.push(arc)?;
                } else {
                    sorter.push(ByTarget(arc))?;
                }
            }
        }
    }
    let terminal = terminal.finish()?;
    let internal = write_sorted(engine, sorter)?;
    Ok(ArcStream {
        internal,
        terminal,
        terminal_extra: None,
        levels: source.levels(),
        root,
        order: ArcOrder::Target,
    })
}
