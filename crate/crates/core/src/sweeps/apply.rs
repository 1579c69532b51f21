//! Top-down product construction.

use std::collections::BTreeMap;

use super::{BooleanOp, Quantifier};
use crate::bdd::{ArcOrder, ArcRecord, ArcStream, LevelInfo, NodeReader, NodeSource, Ptr, Uid};
use crate::extmem::{Direction, Engine, LevelizedPriorityQueue, PqEntry, Record, RecordWriter, Sorter};
use crate::quantify::VarSet;
use crate::{Error, Level, Result};

const ROOT: u64 = u64::MAX;

/// A pending product node `(t1, t2)` with `t1 ≤ t2`, and the arc that asked
/// for it. `swapped` records that `t1` comes from the second operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Request {
    t1: Ptr,
    t2: Ptr,
    swapped: bool,
    parent: u64,
    high: bool,
}

impl Record for Request {
    const WORDS: usize = 5;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.t1.raw();
        out[1] = self.t2.raw();
        out[2] = self.swapped as u64;
        out[3] = self.parent;
        out[4] = self.high as u64;
    }

    fn decode(w: &[u64]) -> Self {
        Request {
            t1: Ptr::from_raw(w[0]),
            t2: Ptr::from_raw(w[1]),
            swapped: w[2] != 0,
            parent: w[3],
            high: w[4] != 0,
        }
    }
}

impl PqEntry for Request {
    fn level(&self) -> u32 {
        self.t1.sweep_level() as u32
    }
}

/// A request whose two nodes share a level, waiting for `t2` to be read.
/// Carries the children of `t1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pending {
    t2: Ptr,
    t1: Ptr,
    swapped: bool,
    low1: Ptr,
    high1: Ptr,
    parent: u64,
    high: bool,
}

impl Record for Pending {
    const WORDS: usize = 7;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.t2.raw();
        out[1] = self.t1.raw();
        out[2] = self.swapped as u64;
        out[3] = self.low1.raw();
        out[4] = self.high1.raw();
        out[5] = self.parent;
        out[6] = self.high as u64;
    }

    fn decode(w: &[u64]) -> Self {
        Pending {
            t2: Ptr::from_raw(w[0]),
            t1: Ptr::from_raw(w[1]),
            swapped: w[2] != 0,
            low1: Ptr::from_raw(w[3]),
            high1: Ptr::from_raw(w[4]),
            parent: w[5],
            high: w[6] != 0,
        }
    }
}

impl PqEntry for Pending {
    fn level(&self) -> u32 {
        self.t2.sweep_level() as u32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Terminal(bool),
    Pair(Ptr, Ptr),
}

/// Settings of a product sweep beyond the operator.
#[derive(Clone, Copy, Default)]
pub(crate) struct ProductOptions<'a> {
    /// Drop nodes on these levels whose quantification is already decided by
    /// a terminal child.
    pub prune: Option<(&'a VarSet, Quantifier)>,
    /// Operands are the same diagram: `(a, a)` collapses to a single request,
    /// and a single request on one of these levels is replaced by the
    /// combination of its two children.
    pub fold: Option<&'a VarSet>,
}

struct Product<'a> {
    op: BooleanOp,
    opts: ProductOptions<'a>,
    symmetric: bool,
    pq1: LevelizedPriorityQueue<Request>,
    pq2: LevelizedPriorityQueue<Pending>,
    internal: RecordWriter<ArcRecord>,
    terminal: RecordWriter<ArcRecord>,
    extra: Sorter<ArcRecord>,
    widths: BTreeMap<Level, u64>,
    root: Option<Ptr>,
}

impl Product<'_> {
    fn resolve(&self, a: Ptr, b: Ptr) -> Target {
        match (a.value(), b.value()) {
            (Some(x), Some(y)) => return Target::Terminal(self.op.eval(x, y)),
            (Some(x), None) => {
                if let Some(v) = self.op.left_shortcut(x) {
                    return Target::Terminal(v);
                }
            }
            (None, Some(y)) => {
                if let Some(v) = self.op.right_shortcut(y) {
                    return Target::Terminal(v);
                }
            }
            (None, None) => {}
        }
        if self.symmetric {
            if a == b {
                return Target::Pair(a, Ptr::terminal(self.op == BooleanOp::And));
            }
            return Target::Pair(a.min(b), a.max(b));
        }
        Target::Pair(a, b)
    }

    fn request(&mut self, a: Ptr, b: Ptr, parent: u64, high: bool) -> Result<()> {
        let swapped = a > b;
        self.pq1.push(Request {
            t1: a.min(b),
            t2: a.max(b),
            swapped,
            parent,
            high,
        })
    }

    fn forward(&mut self, parents: &[(u64, bool)], target: Target) -> Result<()> {
        for &(parent, high) in parents {
            match target {
                Target::Terminal(v) if parent == ROOT => self.root = Some(Ptr::terminal(v)),
                Target::Terminal(v) => self.extra.push(ArcRecord {
                    source: Uid::from_raw(parent),
                    high,
                    target: Ptr::terminal(v),
                })?,
                Target::Pair(a, b) => self.request(a, b, parent, high)?,
            }
        }
        Ok(())
    }

    fn emit(&mut self, level: Level, parents: &[(u64, bool)], lo: Target, hi: Target) -> Result<()> {
        if let Some((vs, q)) = self.opts.prune {
            if vs.contains(level) {
                let absorbing = Target::Terminal(q.absorbing());
                let neutral = Target::Terminal(!q.absorbing());
                if lo == absorbing || hi == absorbing {
                    return self.forward(parents, absorbing);
                }
                if lo == neutral {
                    return self.forward(parents, hi);
                }
                if hi == neutral {
                    return self.forward(parents, lo);
                }
            }
        }
        let width = self.widths.entry(level).or_default();
        let uid = Uid::new(level, *width as u32);
        *width += 1;
        for &(parent, high) in parents {
            if parent == ROOT {
                self.root = Some(Ptr::node(uid));
            } else {
                self.internal.push(ArcRecord {
                    source: Uid::from_raw(parent),
                    high,
                    target: Ptr::node(uid),
                })?;
            }
        }
        for (high, child) in [(false, lo), (true, hi)] {
            match child {
                Target::Terminal(v) => self.terminal.push(ArcRecord {
                    source: uid,
                    high,
                    target: Ptr::terminal(v),
                })?,
                Target::Pair(a, b) => self.request(a, b, uid.raw(), high)?,
            }
        }
        Ok(())
    }
}

/// Product of `f` and `g` under `op` as a target-sorted unreduced stream.
pub fn apply(engine: &Engine, f: &dyn NodeSource, g: &dyn NodeSource, op: BooleanOp) -> Result<ArcStream> {
    product(engine, f, g, op, ProductOptions::default(), false)
}

pub(crate) fn product(
    engine: &Engine,
    f: &dyn NodeSource,
    g: &dyn NodeSource,
    op: BooleanOp,
    opts: ProductOptions<'_>,
    symmetric: bool,
) -> Result<ArcStream> {
    let share = engine.shares(4, 3)?;
    let mut st = Product {
        op,
        opts,
        symmetric,
        pq1: LevelizedPriorityQueue::new(engine, share)?,
        pq2: LevelizedPriorityQueue::new(engine, share)?,
        internal: RecordWriter::new(engine)?,
        terminal: RecordWriter::new(engine)?,
        extra: Sorter::new(engine, share)?,
        widths: BTreeMap::new(),
        root: None,
    };
    match st.resolve(f.root(), g.root()) {
        Target::Terminal(v) => return ArcStream::constant(engine, v),
        Target::Pair(a, b) => st.request(a, b, ROOT, false)?,
    }
    let mut readers = [
        NodeReader::new(engine, f, Direction::Forward)?,
        NodeReader::new(engine, g, Direction::Forward)?,
    ];
    let mut parents: Vec<(u64, bool)> = Vec::new();
    loop {
        let a = st.pq1.peek()?;
        let b = st.pq2.peek()?;
        let from_pq1 = match (a, b) {
            (None, None) => break,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.t1 <= b.t2,
        };
        parents.clear();
        if from_pq1 {
            let Some(r) = st.pq1.pop()? else { break };
            parents.push((r.parent, r.high));
            while let Some(n) = st.pq1.peek()? {
                if (n.t1, n.t2, n.swapped) != (r.t1, r.t2, r.swapped) {
                    break;
                }
                st.pq1.pop()?;
                parents.push((n.parent, n.high));
            }
            let uid1 =
                r.t1.uid()
                    .ok_or_else(|| Error::Invariant("terminal request in product".into()))?;
            let level = uid1.level();
            let node1 = readers[r.swapped as usize].seek(uid1)?;
            if r.t2.level() == Some(level) {
                for &(parent, high) in &parents {
                    st.pq2.push(Pending {
                        t2: r.t2,
                        t1: r.t1,
                        swapped: r.swapped,
                        low1: node1.low,
                        high1: node1.high,
                        parent,
                        high,
                    })?;
                }
                continue;
            }
            if st.symmetric && r.t2.is_terminal() && st.opts.fold.is_some_and(|vs| vs.contains(level)) {
                let t = st.resolve(node1.low, node1.high);
                st.forward(&parents, t)?;
                continue;
            }
            let (lo, hi) = if r.swapped {
                (st.resolve(r.t2, node1.low), st.resolve(r.t2, node1.high))
            } else {
                (st.resolve(node1.low, r.t2), st.resolve(node1.high, r.t2))
            };
            st.emit(level, &parents, lo, hi)?;
        } else {
            let Some(r) = st.pq2.pop()? else { break };
            parents.push((r.parent, r.high));
            while let Some(n) = st.pq2.peek()? {
                if (n.t2, n.t1, n.swapped) != (r.t2, r.t1, r.swapped) {
                    break;
                }
                st.pq2.pop()?;
                parents.push((n.parent, n.high));
            }
            let uid2 =
                r.t2.uid()
                    .ok_or_else(|| Error::Invariant("terminal request in product".into()))?;
            let node2 = readers[!r.swapped as usize].seek(uid2)?;
            let (lo, hi) = if r.swapped {
                (st.resolve(node2.low, r.low1), st.resolve(node2.high, r.high1))
            } else {
                (st.resolve(r.low1, node2.low), st.resolve(r.high1, node2.high))
            };
            st.emit(uid2.level(), &parents, lo, hi)?;
        }
    }
    drop(readers);
    let Product {
        pq1,
        pq2,
        internal,
        terminal,
        extra,
        widths,
        root,
        ..
    } = st;
    drop((pq1, pq2));
    let root = root.ok_or_else(|| Error::Invariant("product sweep never resolved its root".into()))?;
    let internal = internal.finish()?;
    let terminal = terminal.finish()?;
    let extra = extra.finish()?.into_file(engine)?;
    let levels: Vec<LevelInfo> = widths
        .into_iter()
        .map(|(level, width)| LevelInfo { level, width })
        .collect();
    let nodes: u64 = levels.iter().map(|l| l.width).sum();
    engine.note_intermediate_nodes(nodes);
    Ok(ArcStream {
        internal,
        terminal,
        terminal_extra: (!extra.is_empty()).then_some(extra),
        levels,
        root,
        order: ArcOrder::Target,
    })
}
