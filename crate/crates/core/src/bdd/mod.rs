//! The diagram data model.
//!
//! A [`ReducedDiagram`] is a file of [`NodeRecord`]s sorted by [`Uid`], i.e.
//! top-down by level and by index within a level, plus a root pointer and a
//! table of level widths. Terminals are never stored; they only occur as
//! [`Ptr`] values.

mod arcs;
pub(crate) use arcs::ByTarget;
mod build;
mod eval;
mod serialize;
mod view;

pub use arcs::{ArcBuilder, ArcOrder, ArcRecord, ArcStream};
pub use eval::{
    count_nodes, count_paths_to_true, count_states, evaluate, load_nodes, pick_min_state, same_diagram, truth_table,
};
pub use serialize::{deserialize, serialize, MAGIC};
pub use view::{NodeReader, NodeSource};

use std::fmt;
use std::sync::Arc;

use crate::extmem::{Record, RecordFile};
use crate::Level;

/// Largest usable level; the next value is reserved for terminals.
pub const MAX_LEVEL: Level = u32::MAX - 1;

const TERMINAL_LEVEL: u64 = u32::MAX as u64;

/// Identity of a node: its level and its index within that level.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Uid(u64);

impl Uid {
    pub fn new(level: Level, index: u32) -> Uid {
        debug_assert!(level <= MAX_LEVEL);
        Uid(((level as u64) << 32) | index as u64)
    }

    pub fn level(self) -> Level {
        (self.0 >> 32) as Level
    }

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub(crate) fn raw(self) -> u64 {
        self.0
    }

    pub(crate) fn from_raw(raw: u64) -> Uid {
        Uid(raw)
    }
}

impl fmt::Debug for Uid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level(), self.index())
    }
}

/// A child pointer: a terminal or an internal node.
///
/// The encoding orders internal nodes by uid and puts both terminals after
/// every internal node, with `false < true`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ptr(u64);

impl Ptr {
    pub const FALSE: Ptr = Ptr(TERMINAL_LEVEL << 32);
    pub const TRUE: Ptr = Ptr((TERMINAL_LEVEL << 32) | 1);

    pub fn terminal(value: bool) -> Ptr {
        if value {
            Ptr::TRUE
        } else {
            Ptr::FALSE
        }
    }

    pub fn node(uid: Uid) -> Ptr {
        Ptr(uid.0)
    }

    pub fn is_terminal(self) -> bool {
        self.0 >> 32 == TERMINAL_LEVEL
    }

    pub fn value(self) -> Option<bool> {
        self.is_terminal().then_some(self.0 & 1 == 1)
    }

    pub fn uid(self) -> Option<Uid> {
        (!self.is_terminal()).then_some(Uid(self.0))
    }

    /// Level of the target, `None` for terminals.
    pub fn level(self) -> Option<Level> {
        self.uid().map(Uid::level)
    }

    /// Level used for ordering sweeps; terminals sit below every level.
    pub(crate) fn sweep_level(self) -> u64 {
        self.0 >> 32
    }

    pub(crate) fn raw(self) -> u64 {
        self.0
    }

    pub(crate) fn from_raw(raw: u64) -> Ptr {
        Ptr(raw)
    }

    /// Apply `f` to the level of an internal pointer.
    pub(crate) fn map_level(self, f: impl Fn(Level) -> Level) -> Ptr {
        match self.uid() {
            Some(u) => Ptr::node(Uid::new(f(u.level()), u.index())),
            None => self,
        }
    }
}

impl From<Uid> for Ptr {
    fn from(uid: Uid) -> Ptr {
        Ptr::node(uid)
    }
}

impl fmt::Debug for Ptr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value(), self.uid()) {
            (Some(true), _) => write!(f, "⊤"),
            (Some(false), _) => write!(f, "⊥"),
            (None, Some(u)) => write!(f, "{u:?}"),
            (None, None) => unreachable!(),
        }
    }
}

/// A stored node: `uid ? high : low`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRecord {
    pub uid: Uid,
    pub low: Ptr,
    pub high: Ptr,
}

impl NodeRecord {
    pub fn new(uid: Uid, low: Ptr, high: Ptr) -> NodeRecord {
        NodeRecord { uid, low, high }
    }

    pub fn child(&self, high: bool) -> Ptr {
        if high {
            self.high
        } else {
            self.low
        }
    }
}

impl Record for NodeRecord {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.uid.0;
        out[1] = self.low.0;
        out[2] = self.high.0;
    }

    fn decode(w: &[u64]) -> Self {
        NodeRecord {
            uid: Uid(w[0]),
            low: Ptr(w[1]),
            high: Ptr(w[2]),
        }
    }
}

/// Number of nodes on one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelInfo {
    pub level: Level,
    pub width: u64,
}

/// A canonical (reduced and ordered) diagram stored top-down.
///
/// Immutable; clones share the node file.
#[derive(Clone, Debug)]
pub struct ReducedDiagram {
    nodes: Option<RecordFile<NodeRecord>>,
    root: Ptr,
    levels: Arc<Vec<LevelInfo>>,
}

impl ReducedDiagram {
    /// The constant function `value`.
    pub fn constant(value: bool) -> ReducedDiagram {
        ReducedDiagram {
            nodes: None,
            root: Ptr::terminal(value),
            levels: Arc::new(Vec::new()),
        }
    }

    pub(crate) fn from_parts(nodes: RecordFile<NodeRecord>, root: Ptr, levels: Vec<LevelInfo>) -> ReducedDiagram {
        if root.is_terminal() {
            return ReducedDiagram::constant(root.value().unwrap_or(false));
        }
        ReducedDiagram {
            nodes: Some(nodes),
            root,
            levels: Arc::new(levels),
        }
    }

    pub fn root(&self) -> Ptr {
        self.root
    }

    /// `Some(value)` when the diagram is a terminal.
    pub fn as_constant(&self) -> Option<bool> {
        self.root.value()
    }

    pub fn is_false(&self) -> bool {
        self.root == Ptr::FALSE
    }

    pub fn is_true(&self) -> bool {
        self.root == Ptr::TRUE
    }

    /// Non-empty levels with their widths, top-down.
    pub fn levels(&self) -> &[LevelInfo] {
        &self.levels
    }

    pub fn level_labels(&self) -> Vec<Level> {
        self.levels.iter().map(|l| l.level).collect()
    }

    pub fn node_count(&self) -> u64 {
        self.nodes.as_ref().map_or(0, |f| f.len())
    }

    pub fn nodes(&self) -> Option<&RecordFile<NodeRecord>> {
        self.nodes.as_ref()
    }
}
