use super::{LevelInfo, NodeRecord, Ptr, ReducedDiagram, Uid};
use crate::extmem::{Direction, Engine, RecordReader};
use crate::substitution::AffineShift;
use crate::{Error, Result};

/// Anything that can be streamed as a top-down node file: a plain diagram,
/// or a diagram seen through an affine level shift.
///
/// The shift is applied as records are read, so consumers always see the
/// relabelled levels.
pub trait NodeSource {
    fn diagram(&self) -> &ReducedDiagram;

    fn shift(&self) -> AffineShift {
        AffineShift::IDENTITY
    }

    fn root(&self) -> Ptr {
        let s = self.shift();
        self.diagram().root().map_level(|l| s.map(l))
    }

    fn levels(&self) -> Vec<LevelInfo> {
        let s = self.shift();
        self.diagram()
            .levels()
            .iter()
            .map(|l| LevelInfo {
                level: s.map(l.level),
                width: l.width,
            })
            .collect()
    }

    fn node_count(&self) -> u64 {
        self.diagram().node_count()
    }
}

impl NodeSource for ReducedDiagram {
    fn diagram(&self) -> &ReducedDiagram {
        self
    }
}

impl<T: NodeSource + ?Sized> NodeSource for &T {
    fn diagram(&self) -> &ReducedDiagram {
        (**self).diagram()
    }

    fn shift(&self) -> AffineShift {
        (**self).shift()
    }
}

/// Sequential reader of a [`NodeSource`] in either direction, with the
/// source's shift applied to every uid and child pointer.
pub struct NodeReader {
    inner: Option<RecordReader<NodeRecord>>,
    shift: AffineShift,
}

impl NodeReader {
    pub fn new(engine: &Engine, source: &dyn NodeSource, direction: Direction) -> Result<Self> {
        let inner = match source.diagram().nodes() {
            Some(f) => Some(f.reader(engine, direction)?),
            None => None,
        };
        Ok(NodeReader {
            inner,
            shift: source.shift(),
        })
    }

    fn map(&self, n: NodeRecord) -> NodeRecord {
        if self.shift.is_identity() {
            return n;
        }
        let s = self.shift;
        NodeRecord {
            uid: Uid::new(s.map(n.uid.level()), n.uid.index()),
            low: n.low.map_level(|l| s.map(l)),
            high: n.high.map_level(|l| s.map(l)),
        }
    }

    pub fn peek(&mut self) -> Result<Option<NodeRecord>> {
        let raw = match &mut self.inner {
            Some(r) => r.peek()?,
            None => None,
        };
        Ok(raw.map(|n| self.map(n)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Option<NodeRecord>> {
        let raw = match &mut self.inner {
            Some(r) => r.next()?,
            None => None,
        };
        Ok(raw.map(|n| self.map(n)))
    }

    /// Advance a forward reader to `uid` and return that node without
    /// consuming it.
    pub fn seek(&mut self, uid: Uid) -> Result<NodeRecord> {
        while let Some(n) = self.peek()? {
            if n.uid == uid {
                return Ok(n);
            }
            if n.uid > uid {
                break;
            }
            self.next()?;
        }
        Err(Error::Structural(format!("node {uid:?} not found in node stream")))
    }
}
