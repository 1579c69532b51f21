//! Monotone variable substitution.
//!
//! A substitution renames levels. It is only applied when it preserves the
//! order of the levels it touches, so the renamed node file stays sorted and
//! a single streaming pass suffices. Three ways to apply one:
//!
//! - [`replace_naive`]: a dedicated pass that reads and rewrites the file.
//! - inside `Reduce`, folded into the pass that writes the output.
//! - as an [`AffineShift`] attached to a diagram ([`attach_shift`]), which
//!   costs nothing until a sweep reads the diagram.

use std::collections::BTreeMap;

use crate::bdd::{LevelInfo, NodeReader, NodeSource, ReducedDiagram, MAX_LEVEL};
use crate::extmem::{Direction, Engine, RecordWriter};
use crate::{Error, Level, Result};

/// A finite renaming of levels; levels outside its domain are unchanged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonotoneSubst {
    map: BTreeMap<Level, Level>,
}

impl MonotoneSubst {
    pub fn identity() -> Self {
        MonotoneSubst::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Level, Level)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if to > MAX_LEVEL {
                return Err(Error::NonMonotone(format!("level {to} is out of range")));
            }
            if let Some(prev) = map.insert(from, to) {
                if prev != to {
                    return Err(Error::NonMonotone(format!(
                        "level {from} is mapped to both {prev} and {to}"
                    )));
                }
            }
        }
        Ok(MonotoneSubst { map })
    }

    pub fn apply(&self, level: Level) -> Level {
        self.map.get(&level).copied().unwrap_or(level)
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().all(|(a, b)| a == b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Level, Level)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// Check that the images of `levels` are strictly increasing.
    pub fn validate_on(&self, levels: impl IntoIterator<Item = Level>) -> Result<()> {
        let mut levels: Vec<Level> = levels.into_iter().collect();
        levels.sort_unstable();
        levels.dedup();
        for w in levels.windows(2) {
            let (a, b) = (self.apply(w[0]), self.apply(w[1]));
            if a >= b {
                return Err(Error::NonMonotone(format!(
                    "levels {} < {} map to {a} and {b}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

/// The level map `ℓ ↦ alpha·ℓ + beta` with `alpha ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineShift {
    alpha: u32,
    beta: i64,
}

impl AffineShift {
    pub const IDENTITY: AffineShift = AffineShift { alpha: 1, beta: 0 };

    pub fn new(alpha: u32, beta: i64) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::NonMonotone("affine shift needs alpha >= 1".into()));
        }
        Ok(AffineShift { alpha, beta })
    }

    /// `ℓ ↦ ℓ + beta`
    pub fn offset(beta: i64) -> Self {
        AffineShift { alpha: 1, beta }
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn is_identity(&self) -> bool {
        *self == AffineShift::IDENTITY
    }

    fn checked(&self, level: Level) -> Option<Level> {
        let v = self.alpha as i64 * level as i64 + self.beta;
        (0..=MAX_LEVEL as i64).contains(&v).then_some(v as Level)
    }

    /// Image of `level`. Callers validate the range first.
    pub fn map(&self, level: Level) -> Level {
        self.checked(level).unwrap_or(MAX_LEVEL)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &AffineShift) -> AffineShift {
        AffineShift {
            alpha: self.alpha * inner.alpha,
            beta: self.alpha as i64 * inner.beta + self.beta,
        }
    }

    pub fn validate_on(&self, levels: impl IntoIterator<Item = Level>) -> Result<()> {
        for l in levels {
            if self.checked(l).is_none() {
                return Err(Error::NonMonotone(format!(
                    "shift {}·ℓ{:+} sends level {l} out of range",
                    self.alpha, self.beta
                )));
            }
        }
        Ok(())
    }

    /// The equivalent finite substitution on `levels`.
    pub fn to_subst(&self, levels: impl IntoIterator<Item = Level>) -> Result<MonotoneSubst> {
        let levels: Vec<Level> = levels.into_iter().collect();
        self.validate_on(levels.iter().copied())?;
        MonotoneSubst::from_pairs(levels.into_iter().map(|l| (l, self.map(l))))
    }
}

/// A diagram read through an affine shift. Creating one does no I/O.
#[derive(Clone, Debug)]
pub struct ShiftedDiagram {
    diagram: ReducedDiagram,
    shift: AffineShift,
}

impl ShiftedDiagram {
    pub fn inner(&self) -> &ReducedDiagram {
        &self.diagram
    }
}

impl NodeSource for ShiftedDiagram {
    fn diagram(&self) -> &ReducedDiagram {
        &self.diagram
    }

    fn shift(&self) -> AffineShift {
        self.shift
    }
}

/// Attach `shift` to the node stream of `source` without touching its file.
/// Shifts compose when `source` is already shifted.
pub fn attach_shift(source: &dyn NodeSource, shift: AffineShift) -> Result<ShiftedDiagram> {
    let combined = shift.compose(&source.shift());
    combined.validate_on(source.diagram().level_labels())?;
    Ok(ShiftedDiagram {
        diagram: source.diagram().clone(),
        shift: combined,
    })
}

/// Rename levels in a dedicated pass: one read and one write of the node
/// file. Fails with [`Error::NonMonotone`] unless `subst` is monotone on the
/// levels present.
pub fn replace_naive(engine: &Engine, source: &dyn NodeSource, subst: &MonotoneSubst) -> Result<ReducedDiagram> {
    let levels = source.levels();
    subst.validate_on(levels.iter().map(|l| l.level))?;
    let root = source.root();
    if root.is_terminal() {
        return Ok(ReducedDiagram::constant(root == crate::Ptr::TRUE));
    }
    let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
    let mut w = RecordWriter::new(engine)?;
    while let Some(mut n) = reader.next()? {
        n.uid = crate::Uid::new(subst.apply(n.uid.level()), n.uid.index());
        n.low = n.low.map_level(|l| subst.apply(l));
        n.high = n.high.map_level(|l| subst.apply(l));
        w.push(n)?;
    }
    drop(reader);
    let file = w.finish()?;
    let levels = levels
        .into_iter()
        .map(|l| LevelInfo {
            level: subst.apply(l.level),
            width: l.width,
        })
        .collect();
    Ok(ReducedDiagram::from_parts(
        file,
        root.map_level(|l| subst.apply(l)),
        levels,
    ))
}

/// Write the shifted node stream to a new file.
pub fn materialize(engine: &Engine, source: &dyn NodeSource) -> Result<ReducedDiagram> {
    if source.shift().is_identity() {
        return Ok(source.diagram().clone());
    }
    replace_naive(engine, source, &MonotoneSubst::identity())
}
