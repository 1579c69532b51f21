//! The `XBDD0001` binary format.
//!
//! ```text
//! magic    8 bytes  "XBDD0001"
//! count    u64      N
//! records  N × (label u64, low u64, high u64)
//! root     u64      only when N = 0: 0 for ⊥, 1 for ⊤
//! ```
//!
//! All integers are little-endian. A reference is 0 for ⊥, 1 for ⊤ and
//! `k + 2` for record `k`. Children precede parents, so every reference
//! points to a smaller index, and the root is the last record.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::arcs::ByTarget;
use super::{ArcOrder, ArcRecord, ArcStream, LevelInfo, NodeReader, NodeSource, Ptr, ReducedDiagram, Uid, MAX_LEVEL};
use crate::extmem::{Direction, Engine, RecordWriter, Sorter};
use crate::{sweeps, Error, Result};

pub const MAGIC: &[u8; 8] = b"XBDD0001";

/// Write `source` (with its shift applied) in `XBDD0001` format.
///
/// The node file is read once, backwards; output blocks of `B` records are
/// counted as block writes.
pub fn serialize(engine: &Engine, source: &dyn NodeSource, sink: &mut dyn Write) -> Result<()> {
    let n = source.node_count();
    sink.write_all(MAGIC)?;
    sink.write_all(&n.to_le_bytes())?;
    if n == 0 {
        let root = source.root();
        sink.write_all(&u64::from(root == Ptr::TRUE).to_le_bytes())?;
        return Ok(());
    }
    let levels = source.levels();
    let mut offsets = BTreeMap::new();
    let mut acc = 0u64;
    for l in &levels {
        offsets.insert(l.level, acc);
        acc += l.width;
    }
    let record_index = |uid: Uid| -> Result<u64> {
        let base = offsets
            .get(&uid.level())
            .ok_or_else(|| Error::Structural(format!("node {uid:?} on a level missing from the width table")))?;
        Ok(n - 1 - (base + uid.index() as u64))
    };
    let reference = |p: Ptr| -> Result<u64> {
        Ok(match (p.value(), p.uid()) {
            (Some(v), _) => v as u64,
            (None, Some(uid)) => record_index(uid)? + 2,
            (None, None) => unreachable!(),
        })
    };
    let mut reader = NodeReader::new(engine, source, Direction::Backward)?;
    let b = engine.block();
    let mut block = Vec::with_capacity(b * 24);
    let mut in_block = 0;
    let mut k = 0u64;
    while let Some(node) = reader.next()? {
        if record_index(node.uid)? != k {
            return Err(Error::Structural("node indices are not dense".into()));
        }
        for word in [node.uid.level() as u64, reference(node.low)?, reference(node.high)?] {
            block.extend_from_slice(&word.to_le_bytes());
        }
        in_block += 1;
        k += 1;
        if in_block == b {
            sink.write_all(&block)?;
            engine.note_write(in_block);
            block.clear();
            in_block = 0;
        }
    }
    if in_block > 0 {
        sink.write_all(&block)?;
        engine.note_write(in_block);
    }
    Ok(())
}

fn read_u64(source: &mut dyn Read, what: &str) -> Result<u64> {
    let mut buf = [0u8; 8];
    source.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("truncated file while reading {what}")),
        _ => Error::Io(e),
    })?;
    Ok(u64::from_le_bytes(buf))
}

/// Read an `XBDD0001` file and canonicalize it.
pub fn deserialize(engine: &Engine, source: &mut dyn Read) -> Result<ReducedDiagram> {
    let mut magic = [0u8; 8];
    source
        .read_exact(&mut magic)
        .map_err(|_| Error::Format("file too short for the magic number".into()))?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic number".into()));
    }
    let n = read_u64(source, "the record count")?;
    if n == 0 {
        return match read_u64(source, "the terminal root")? {
            0 => Ok(ReducedDiagram::constant(false)),
            1 => Ok(ReducedDiagram::constant(true)),
            other => Err(Error::Format(format!("invalid terminal root {other}"))),
        };
    }
    if n > u32::MAX as u64 {
        return Err(Error::Format(format!("{n} records exceed the supported maximum")));
    }
    let share = engine.shares(2, 3)?;
    // (child record, parent uid, polarity), sorted by child record.
    let mut by_child: Sorter<(u64, u64, u64)> = Sorter::new(engine, share)?;
    let mut terminal: Sorter<ArcRecord> = Sorter::new(engine, share)?;
    let mut labels = RecordWriter::<u64>::new(engine)?;
    let mut widths: BTreeMap<u32, u64> = BTreeMap::new();
    let b = engine.block() as u64;
    let mut root = Ptr::FALSE;
    for k in 0..n {
        let label = read_u64(source, "a record")?;
        let low = read_u64(source, "a record")?;
        let high = read_u64(source, "a record")?;
        if k % b == 0 {
            engine.note_read(b.min(n - k) as usize);
        }
        if label > MAX_LEVEL as u64 {
            return Err(Error::Format(format!("record {k} has label {label} out of range")));
        }
        let uid = Uid::new(label as u32, k as u32);
        for (polarity, r) in [(false, low), (true, high)] {
            match r {
                0 | 1 => terminal.push(ArcRecord {
                    source: uid,
                    high: polarity,
                    target: Ptr::terminal(r == 1),
                })?,
                r if r - 2 < k => by_child.push((r - 2, uid.raw(), polarity as u64))?,
                r => {
                    return Err(Error::Format(format!(
                        "record {k} refers to record {} which does not precede it",
                        r - 2
                    )))
                }
            }
        }
        labels.push(label)?;
        *widths.entry(label as u32).or_default() += 1;
        if k == n - 1 {
            root = Ptr::node(uid);
        }
    }
    let labels = labels.finish()?;
    let mut by_child = by_child.finish()?;
    let mut by_target: Sorter<ByTarget> = Sorter::new(engine, share)?;
    let mut label_reader = labels.reader(engine, Direction::Forward)?;
    let mut loaded = 0u64;
    let mut child_label = 0u64;
    while let Some((child, parent, polarity)) = by_child.next()? {
        while loaded <= child {
            let label = label_reader
                .next()?
                .ok_or_else(|| Error::Format("dangling reference".into()))?;
            if loaded < child {
                return Err(Error::Format(format!("record {loaded} is unreachable from the root")));
            }
            child_label = label;
            loaded += 1;
        }
        let parent = Uid::from_raw(parent);
        if child_label <= parent.level() as u64 {
            return Err(Error::Format(format!(
                "record {} (label {}) has a child with label {child_label}",
                parent.index(),
                parent.level()
            )));
        }
        by_target.push(ByTarget(ArcRecord {
            source: parent,
            high: polarity == 1,
            target: Ptr::node(Uid::new(child_label as u32, child as u32)),
        }))?;
    }
    drop(by_child);
    if loaded < n - 1 {
        return Err(Error::Format(format!("record {loaded} is unreachable from the root")));
    }
    drop(label_reader);
    let mut w = RecordWriter::new(engine)?;
    let mut sorted = by_target.finish()?;
    while let Some(ByTarget(a)) = sorted.next()? {
        w.push(a)?;
    }
    drop(sorted);
    let internal = w.finish()?;
    let terminal = terminal.finish()?.into_file(engine)?;
    let arcs = ArcStream {
        internal,
        terminal,
        terminal_extra: None,
        levels: widths
            .into_iter()
            .map(|(level, width)| LevelInfo { level, width })
            .collect(),
        root,
        order: ArcOrder::Target,
    };
    sweeps::reduce(engine, arcs, None)
}
