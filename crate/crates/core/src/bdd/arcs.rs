use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{LevelInfo, NodeRecord, Ptr, Uid};
use crate::extmem::{Engine, Record, RecordFile, Sorter};
use crate::{Error, Level, Result};

/// One edge of an unreduced diagram: `source --high/low--> target`.
///
/// The derived order is by source, then polarity, then target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcRecord {
    pub source: Uid,
    pub high: bool,
    pub target: Ptr,
}

impl Record for ArcRecord {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.source.raw();
        out[1] = self.high as u64;
        out[2] = self.target.raw();
    }

    fn decode(w: &[u64]) -> Self {
        ArcRecord {
            source: Uid::from_raw(w[0]),
            high: w[1] != 0,
            target: Ptr::from_raw(w[2]),
        }
    }
}

/// Arc ordered by target first ("transposed" order).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct ByTarget(pub ArcRecord);

impl Ord for ByTarget {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.0.target, self.0.source, self.0.high).cmp(&(other.0.target, other.0.source, other.0.high))
    }
}

impl PartialOrd for ByTarget {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Record for ByTarget {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        self.0.encode(out)
    }

    fn decode(w: &[u64]) -> Self {
        ByTarget(ArcRecord::decode(w))
    }
}

/// Order of the internal-arc file of an [`ArcStream`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcOrder {
    /// Sorted by source, as a top-down scan of nodes produces them.
    Source,
    /// Sorted by target, the order a bottom-up `Reduce` consumes.
    Target,
}

/// An unreduced diagram given by its arcs.
///
/// Arcs into internal nodes and arcs into terminals are kept in separate
/// files. Terminal arcs are always sorted by source; they may come in two
/// sorted files when a sweep produced some of them out of order. Every
/// internal source has exactly one low and one high arc.
#[derive(Clone, Debug)]
pub struct ArcStream {
    pub(crate) internal: RecordFile<ArcRecord>,
    pub(crate) terminal: RecordFile<ArcRecord>,
    pub(crate) terminal_extra: Option<RecordFile<ArcRecord>>,
    pub(crate) levels: Vec<LevelInfo>,
    pub(crate) root: Ptr,
    pub(crate) order: ArcOrder,
}

impl ArcStream {
    /// A stream with no arcs denoting a constant.
    pub fn constant(engine: &Engine, value: bool) -> Result<ArcStream> {
        Ok(ArcStream {
            internal: RecordFile::from_records(engine, [])?,
            terminal: RecordFile::from_records(engine, [])?,
            terminal_extra: None,
            levels: Vec::new(),
            root: Ptr::terminal(value),
            order: ArcOrder::Target,
        })
    }

    /// Build a source-sorted stream from arbitrary arcs.
    pub fn from_arcs(engine: &Engine, root: Ptr, arcs: impl IntoIterator<Item = ArcRecord>) -> Result<ArcStream> {
        let mut arcs: Vec<ArcRecord> = arcs.into_iter().collect();
        arcs.sort();
        let mut widths: BTreeMap<Level, u64> = BTreeMap::new();
        for a in arcs.iter().filter(|a| !a.high) {
            *widths.entry(a.source.level()).or_default() += 1;
        }
        let (terminal, internal): (Vec<_>, Vec<_>) = arcs.into_iter().partition(|a| a.target.is_terminal());
        Ok(ArcStream {
            internal: RecordFile::from_records(engine, internal)?,
            terminal: RecordFile::from_records(engine, terminal)?,
            terminal_extra: None,
            levels: widths
                .into_iter()
                .map(|(level, width)| LevelInfo { level, width })
                .collect(),
            root,
            order: ArcOrder::Source,
        })
    }

    pub fn root(&self) -> Ptr {
        self.root
    }

    pub fn order(&self) -> ArcOrder {
        self.order
    }

    pub fn levels(&self) -> &[LevelInfo] {
        &self.levels
    }

    /// Number of (unreduced) nodes.
    pub fn node_count(&self) -> u64 {
        self.levels.iter().map(|l| l.width).sum()
    }

    /// Number of arc records across all files.
    pub fn record_count(&self) -> u64 {
        self.internal.len() + self.terminal.len() + self.terminal_extra.as_ref().map_or(0, |f| f.len())
    }

    pub fn internal_arcs(&self, engine: &Engine) -> Result<Vec<ArcRecord>> {
        self.internal.read_all(engine)
    }

    /// Terminal arcs merged into source order.
    pub fn terminal_arcs(&self, engine: &Engine) -> Result<Vec<ArcRecord>> {
        let mut all = self.terminal.read_all(engine)?;
        if let Some(extra) = &self.terminal_extra {
            all.extend(extra.read_all(engine)?);
            all.sort();
        }
        Ok(all)
    }
}

/// Collects nodes in any order and produces a target-sorted [`ArcStream`].
///
/// Node uids must be unique but need not be dense; children must lie on
/// strictly deeper levels.
pub struct ArcBuilder {
    engine: Engine,
    internal: Sorter<ByTarget>,
    terminal: Sorter<ArcRecord>,
    widths: BTreeMap<Level, u64>,
}

impl ArcBuilder {
    pub fn new(engine: &Engine) -> Result<ArcBuilder> {
        let share = engine.shares(1, 2)?;
        Ok(ArcBuilder {
            engine: engine.clone(),
            internal: Sorter::new(engine, share)?,
            terminal: Sorter::new(engine, share)?,
            widths: BTreeMap::new(),
        })
    }

    pub fn add(&mut self, node: NodeRecord) -> Result<()> {
        let level = node.uid.level();
        for (high, child) in [(false, node.low), (true, node.high)] {
            if child.level().is_some_and(|l| l <= level) {
                return Err(Error::Structural(format!(
                    "arc from {:?} to {:?} does not go strictly downward",
                    node.uid, child
                )));
            }
            let arc = ArcRecord {
                source: node.uid,
                high,
                target: child,
            };
            if child.is_terminal() {
                self.terminal.push(arc)?;
            } else {
                self.internal.push(ByTarget(arc))?;
            }
        }
        *self.widths.entry(level).or_default() += 1;
        Ok(())
    }

    pub fn finish(self, root: Ptr) -> Result<ArcStream> {
        let mut w = crate::extmem::RecordWriter::new(&self.engine)?;
        let mut sorted = self.internal.finish()?;
        while let Some(ByTarget(a)) = sorted.next()? {
            w.push(a)?;
        }
        drop(sorted);
        let internal = w.finish()?;
        let terminal = self.terminal.finish()?.into_file(&self.engine)?;
        Ok(ArcStream {
            internal,
            terminal,
            terminal_extra: None,
            levels: self
                .widths
                .into_iter()
                .map(|(level, width)| LevelInfo { level, width })
                .collect(),
            root,
            order: ArcOrder::Target,
        })
    }
}
