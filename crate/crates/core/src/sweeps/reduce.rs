//! Bottom-up reduction of an arc stream into a canonical diagram.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use super::{transpose, Quantifier};
use crate::bdd::{ArcRecord, ArcStream, LevelInfo, NodeRecord, Ptr, ReducedDiagram, Uid};
use crate::extmem::{Direction, Engine, LevelizedPriorityQueue, PqEntry, Record, RecordReader, RecordWriter, Sorter};
use crate::quantify::VarSet;
use crate::substitution::MonotoneSubst;
use crate::{Error, Level, Result};

/// An arc whose target has been reduced, queued for its source's level.
/// Ordered by decreasing source so the queue follows the bottom-up sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Resolved(ArcRecord);

impl Ord for Resolved {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Resolved {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Record for Resolved {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        self.0.encode(out)
    }

    fn decode(w: &[u64]) -> Self {
        Resolved(ArcRecord::decode(w))
    }
}

impl PqEntry for Resolved {
    fn level(&self) -> u32 {
        u32::MAX - self.0.source.level()
    }
}

/// Settings of a reduce sweep beyond the plain reduction rules.
#[derive(Clone, Copy, Default)]
pub(crate) struct ReduceOptions<'a> {
    /// Relabel the output, unless quantified nodes are left over.
    pub subst: Option<&'a MonotoneSubst>,
    /// Levels being quantified: a node there is replaced by a child when its
    /// children decide the quantification without dropping an internal
    /// child. Other nodes there are kept and reported as residual.
    pub quantify: Option<(&'a VarSet, Quantifier)>,
}

pub(crate) struct Reduced {
    pub diagram: ReducedDiagram,
    /// Some node on a quantified level survived.
    pub residual: bool,
}

/// Merge of the three descending arc sources feeding one level.
struct Inputs<'a> {
    terminal: RecordReader<ArcRecord>,
    extra: Option<RecordReader<ArcRecord>>,
    pq: &'a mut LevelizedPriorityQueue<Resolved>,
}

impl Inputs<'_> {
    fn next(&mut self, level: Level) -> Result<Option<ArcRecord>> {
        let on = |a: Option<ArcRecord>| a.filter(|a| a.source.level() == level);
        let t = on(self.terminal.peek()?);
        let e = match &mut self.extra {
            Some(r) => on(r.peek()?),
            None => None,
        };
        let q = on(self.pq.peek()?.map(|r| r.0));
        let best = [t, e, q].into_iter().flatten().max();
        let Some(best) = best else { return Ok(None) };
        if t == Some(best) {
            self.terminal.next()?;
        } else if e == Some(best) {
            if let Some(r) = &mut self.extra {
                r.next()?;
            }
        } else {
            self.pq.pop()?;
        }
        Ok(Some(best))
    }
}

/// Reduce `arcs` to a canonical diagram, optionally renaming levels with a
/// monotone `subst` on the way out.
pub fn reduce(engine: &Engine, arcs: ArcStream, subst: Option<&MonotoneSubst>) -> Result<ReducedDiagram> {
    Ok(reduce_with(engine, arcs, ReduceOptions { subst, quantify: None })?.diagram)
}

pub(crate) fn reduce_with(engine: &Engine, arcs: ArcStream, opts: ReduceOptions<'_>) -> Result<Reduced> {
    if let Some(v) = arcs.root.value() {
        return Ok(Reduced {
            diagram: ReducedDiagram::constant(v),
            residual: false,
        });
    }
    if let Some(s) = opts.subst {
        let kept = arcs
            .levels
            .iter()
            .map(|l| l.level)
            .filter(|&l| !opts.quantify.is_some_and(|(vs, _)| vs.contains(l)));
        s.validate_on(kept)?;
    }
    let arcs = transpose(engine, arcs)?;
    let share = engine.shares(4, 3)?;
    let mut pq = LevelizedPriorityQueue::new(engine, share)?;
    let mut internal = arcs.internal.reader(engine, Direction::Backward)?;
    let mut inputs = Inputs {
        terminal: arcs.terminal.reader(engine, Direction::Backward)?,
        extra: match &arcs.terminal_extra {
            Some(f) => Some(f.reader(engine, Direction::Backward)?),
            None => None,
        },
        pq: &mut pq,
    };
    let mut out = RecordWriter::<NodeRecord>::new(engine)?;
    let mut widths: BTreeMap<Level, u64> = BTreeMap::new();
    let mut root = None;
    let mut residual = false;
    let old_root = arcs.root;

    for info in arcs.levels.iter().rev() {
        let level = info.level;
        let quantified = opts.quantify.filter(|(vs, _)| vs.contains(level)).map(|(_, q)| q);
        let mut by_children: Sorter<Reverse<(u64, u64, u64)>> = Sorter::new(engine, share)?;
        let mut mapping: Sorter<Reverse<(u64, u64)>> = Sorter::new(engine, share)?;
        while let Some(high) = inputs.next(level)? {
            let low = inputs.next(level)?;
            let low = match low {
                Some(low) if low.source == high.source && high.high && !low.high => low,
                _ => {
                    return Err(Error::Structural(format!(
                        "node {:?} does not have exactly one low and one high arc",
                        high.source
                    )))
                }
            };
            let (src, lo, hi) = (high.source, low.target, high.target);
            let forward = match quantified {
                Some(q) => {
                    let absorbing = Ptr::terminal(q.absorbing());
                    let neutral = Ptr::terminal(!q.absorbing());
                    if (lo == absorbing && hi.is_terminal()) || (hi == absorbing && lo.is_terminal()) {
                        Some(absorbing)
                    } else if lo == neutral || lo == hi {
                        Some(hi)
                    } else if hi == neutral {
                        Some(lo)
                    } else {
                        residual = true;
                        None
                    }
                }
                None => (lo == hi).then_some(lo),
            };
            match forward {
                Some(p) => mapping.push(Reverse((src.raw(), p.raw())))?,
                None => by_children.push(Reverse((lo.raw(), hi.raw(), src.raw())))?,
            }
        }
        let mut sorted = by_children.finish()?;
        let mut index = 0u32;
        let mut last: Option<(u64, u64)> = None;
        while let Some(Reverse((lo, hi, src))) = sorted.next()? {
            if last != Some((lo, hi)) {
                if last.is_some() {
                    index += 1;
                }
                out.push(NodeRecord::new(
                    Uid::new(level, index),
                    Ptr::from_raw(lo),
                    Ptr::from_raw(hi),
                ))?;
                last = Some((lo, hi));
            }
            mapping.push(Reverse((src, Uid::new(level, index).raw())))?;
        }
        drop(sorted);
        if last.is_some() {
            widths.insert(level, index as u64 + 1);
        }
        let mut mapping = mapping.finish()?;
        while let Some(Reverse((old, new))) = mapping.next()? {
            let new = Ptr::from_raw(new);
            if old == old_root.raw() {
                root = Some(new);
            }
            while let Some(a) = internal.peek()? {
                if a.target.level() != Some(level) || a.target.raw() < old {
                    break;
                }
                if a.target.raw() > old {
                    return Err(Error::Structural(format!("arc into missing node {:?}", a.target)));
                }
                internal.next()?;
                inputs.pq.push(Resolved(ArcRecord {
                    source: a.source,
                    high: a.high,
                    target: new,
                }))?;
            }
        }
        if let Some(a) = internal.peek()? {
            if a.target.level() == Some(level) {
                return Err(Error::Structural(format!("arc into missing node {:?}", a.target)));
            }
        }
    }
    let leftover = internal
        .next()?
        .or(inputs.terminal.next()?)
        .or(match &mut inputs.extra {
            Some(r) => r.next()?,
            None => None,
        });
    if let Some(a) = leftover {
        return Err(Error::Structural(format!(
            "arc from {:?} lies outside the level table",
            a.source
        )));
    }
    if !inputs.pq.is_empty() {
        return Err(Error::Structural("arcs left over after the last level".into()));
    }
    drop(inputs);
    drop(internal);
    drop(pq);
    let root = root.ok_or_else(|| Error::Structural(format!("root {old_root:?} is not a node of the stream")))?;
    let bottom_up = out.finish()?;

    let subst = opts.subst.filter(|_| !residual);
    let rename = |l: Level| subst.map_or(l, |s| s.apply(l));
    let fix = |p: Ptr| -> Ptr {
        match p.uid() {
            Some(u) => Ptr::node(Uid::new(rename(u.level()), (widths[&u.level()] - 1) as u32 - u.index())),
            None => p,
        }
    };
    let root = fix(root);
    if root.is_terminal() {
        return Ok(Reduced {
            diagram: ReducedDiagram::constant(root == Ptr::TRUE),
            residual: false,
        });
    }
    let mut reader = bottom_up.reader(engine, Direction::Backward)?;
    let mut w = RecordWriter::new(engine)?;
    while let Some(n) = reader.next()? {
        let uid = fix(Ptr::node(n.uid)).uid().unwrap_or(n.uid);
        w.push(NodeRecord::new(uid, fix(n.low), fix(n.high)))?;
    }
    drop(reader);
    let levels = widths
        .iter()
        .map(|(&level, &width)| LevelInfo {
            level: rename(level),
            width,
        })
        .collect();
    Ok(Reduced {
        diagram: ReducedDiagram::from_parts(w.finish()?, root, levels),
        residual,
    })
}
