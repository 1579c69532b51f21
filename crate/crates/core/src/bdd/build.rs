use super::{ArcBuilder, LevelInfo, NodeRecord, Ptr, ReducedDiagram, Uid};
use crate::extmem::{Engine, RecordWriter};
use crate::{sweeps, Error, Level, Result};

impl ReducedDiagram {
    /// The positive literal of `level`.
    pub fn var(engine: &Engine, level: Level) -> Result<ReducedDiagram> {
        ReducedDiagram::cube(engine, &[(level, true)])
    }

    /// The negative literal of `level`.
    pub fn nvar(engine: &Engine, level: Level) -> Result<ReducedDiagram> {
        ReducedDiagram::cube(engine, &[(level, false)])
    }

    /// Conjunction of literals; the empty cube is `true`.
    pub fn cube(engine: &Engine, literals: &[(Level, bool)]) -> Result<ReducedDiagram> {
        let mut lits = literals.to_vec();
        lits.sort();
        if lits.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Input("cube mentions a level twice".into()));
        }
        if let Some(&(l, _)) = lits.iter().find(|(l, _)| *l > super::MAX_LEVEL) {
            return Err(Error::Input(format!("level {l} out of range")));
        }
        if lits.is_empty() {
            return Ok(ReducedDiagram::constant(true));
        }
        // Written top-down; node i points at node i + 1.
        let mut w = RecordWriter::new(engine)?;
        for (i, &(level, positive)) in lits.iter().enumerate() {
            let next = lits.get(i + 1).map_or(Ptr::TRUE, |&(l, _)| Ptr::node(Uid::new(l, 0)));
            let (low, high) = if positive {
                (Ptr::FALSE, next)
            } else {
                (next, Ptr::FALSE)
            };
            w.push(NodeRecord::new(Uid::new(level, 0), low, high))?;
        }
        let file = w.finish()?;
        let levels = lits.iter().map(|&(level, _)| LevelInfo { level, width: 1 }).collect();
        Ok(ReducedDiagram::from_parts(
            file,
            Ptr::node(Uid::new(lits[0].0, 0)),
            levels,
        ))
    }

    /// Canonicalize an arbitrary (possibly unreduced) node set rooted at `root`.
    /// Every node must be reachable from `root`.
    pub fn from_nodes(
        engine: &Engine,
        nodes: impl IntoIterator<Item = NodeRecord>,
        root: Ptr,
    ) -> Result<ReducedDiagram> {
        if root.is_terminal() {
            return Ok(ReducedDiagram::constant(root == Ptr::TRUE));
        }
        let mut b = ArcBuilder::new(engine)?;
        for n in nodes {
            b.add(n)?;
        }
        let arcs = b.finish(root)?;
        sweeps::reduce(engine, arcs, None)
    }
}
