//! Quantification, `AndExists` and the relational product.
//!
//! `exists` runs an outer `Reduce` that already resolves every quantified
//! node whose children decide the result. Nodes it cannot resolve are kept,
//! and a top-down pass combines their cofactors with a product of the
//! diagram with itself, followed by another `Reduce`. Each pass removes the
//! topmost remaining quantified level, so there are at most `|vs|` passes.

use std::fmt;
use std::str::FromStr;

use crate::bdd::{ArcStream, NodeSource, ReducedDiagram};
use crate::extmem::Engine;
use crate::substitution::{attach_shift, replace_naive, AffineShift, MonotoneSubst};
use crate::sweeps::{
    self, product, reduce, reduce_with, transpose_diagram, BooleanOp, ProductOptions, Quantifier, ReduceOptions,
};
use crate::{Error, Level, Result};

/// A finite set of levels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet {
    levels: Vec<Level>,
}

impl VarSet {
    pub fn new(levels: impl IntoIterator<Item = Level>) -> Self {
        let mut levels: Vec<Level> = levels.into_iter().collect();
        levels.sort_unstable();
        levels.dedup();
        VarSet { levels }
    }

    pub fn empty() -> Self {
        VarSet::default()
    }

    /// Levels `0, 2, …, 2(n-1)`.
    pub fn unprimed(vars: usize) -> Self {
        VarSet::new((0..vars as Level).map(|i| 2 * i))
    }

    /// Levels `1, 3, …, 2n-1`.
    pub fn primed(vars: usize) -> Self {
        VarSet::new((0..vars as Level).map(|i| 2 * i + 1))
    }

    pub fn contains(&self, level: Level) -> bool {
        self.levels.binary_search(&level).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Level> + '_ {
        self.levels.iter().copied()
    }
}

impl FromIterator<Level> for VarSet {
    fn from_iter<I: IntoIterator<Item = Level>>(iter: I) -> Self {
        VarSet::new(iter)
    }
}

/// Cumulative optimisation tiers of the relational product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum OptTier {
    /// Separate `Apply`, `Reduce`, `Transpose`, `Exists` and substitution.
    Naive,
    /// The unreduced conjunction feeds the quantification directly.
    SkipTranspose,
    /// The conjunction prunes nodes on quantified levels.
    PruningAnd,
    /// The substitution happens in the last `Reduce` of the quantification.
    ExistsReplace,
    /// Level shifts of operands are applied while reading them.
    #[default]
    ShiftReplace,
}

impl OptTier {
    pub const ALL: [OptTier; 5] = [
        OptTier::Naive,
        OptTier::SkipTranspose,
        OptTier::PruningAnd,
        OptTier::ExistsReplace,
        OptTier::ShiftReplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OptTier::Naive => "naive",
            OptTier::SkipTranspose => "skip-transpose",
            OptTier::PruningAnd => "pruning-and",
            OptTier::ExistsReplace => "exists-replace",
            OptTier::ShiftReplace => "shift-replace",
        }
    }
}

impl fmt::Display for OptTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for OptTier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OptTier::ALL
            .into_iter()
            .find(|t| t.name() == s || t.name().replace('-', "_") == s)
            .ok_or_else(|| Error::Config(format!("unknown optimisation tier `{s}`")))
    }
}

/// A transition relation over the interleaved order: variable `i` is level
/// `2i` and its next-state copy is level `2i + 1`.
#[derive(Clone, Debug)]
pub struct RelationSpec {
    vars: usize,
    partition: Partition,
}

#[derive(Clone, Debug)]
pub enum Partition {
    Joint(ReducedDiagram),
    /// One relation per transition, combined by disjunction.
    Disjoint(Vec<ReducedDiagram>),
}

impl RelationSpec {
    pub fn joint(vars: usize, relation: ReducedDiagram) -> Result<Self> {
        RelationSpec::new(vars, Partition::Joint(relation))
    }

    pub fn disjoint(vars: usize, relations: Vec<ReducedDiagram>) -> Result<Self> {
        RelationSpec::new(vars, Partition::Disjoint(relations))
    }

    fn new(vars: usize, partition: Partition) -> Result<Self> {
        let spec = RelationSpec { vars, partition };
        let limit = 2 * vars as Level;
        for r in spec.parts() {
            if let Some(l) = r.level_labels().into_iter().find(|&l| l >= limit) {
                return Err(Error::Input(format!("relation uses level {l} beyond {vars} variables")));
            }
        }
        Ok(spec)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn parts(&self) -> &[ReducedDiagram] {
        match &self.partition {
            Partition::Joint(r) => std::slice::from_ref(r),
            Partition::Disjoint(rs) => rs,
        }
    }

    pub fn is_joint(&self) -> bool {
        matches!(self.partition, Partition::Joint(_))
    }

    /// Renaming of every next-state level onto its current-state level.
    pub fn primed_to_unprimed(&self) -> MonotoneSubst {
        MonotoneSubst::from_pairs((0..self.vars as Level).map(|i| (2 * i + 1, 2 * i)))
            .expect("interleaved renaming is well formed")
    }
}

fn quantify_arcs(
    engine: &Engine,
    arcs: ArcStream,
    vs: &VarSet,
    q: Quantifier,
    subst: Option<&MonotoneSubst>,
) -> Result<ReducedDiagram> {
    let quantify = (!vs.is_empty()).then_some((vs, q));
    let mut r = reduce_with(engine, arcs, ReduceOptions { subst, quantify })?;
    while r.residual {
        let d = r.diagram;
        let opts = ProductOptions {
            prune: Some((vs, q)),
            fold: Some(vs),
        };
        let arcs = product(engine, &d, &d, q.op(), opts, true)?;
        r = reduce_with(engine, arcs, ReduceOptions { subst, quantify })?;
    }
    Ok(r.diagram)
}

/// `∃vs. f`, relabelled by `subst` in the last `Reduce`.
pub fn exists(
    engine: &Engine,
    f: &dyn NodeSource,
    vs: &VarSet,
    subst: Option<&MonotoneSubst>,
) -> Result<ReducedDiagram> {
    quantify_arcs(engine, transpose_diagram(engine, f)?, vs, Quantifier::Exists, subst)
}

/// `∃vs. u` for an unreduced stream, without reducing it first.
pub fn exists_arcs(
    engine: &Engine,
    u: ArcStream,
    vs: &VarSet,
    subst: Option<&MonotoneSubst>,
) -> Result<ReducedDiagram> {
    quantify_arcs(engine, u, vs, Quantifier::Exists, subst)
}

/// `∀vs. f`
pub fn forall(engine: &Engine, f: &dyn NodeSource, vs: &VarSet) -> Result<ReducedDiagram> {
    quantify_arcs(engine, transpose_diagram(engine, f)?, vs, Quantifier::Forall, None)
}

/// `(∃vs. f ∧ g)[subst]` with the pipeline selected by `tier`.
pub fn and_exists(
    engine: &Engine,
    f: &dyn NodeSource,
    g: &dyn NodeSource,
    vs: &VarSet,
    tier: OptTier,
    subst: Option<&MonotoneSubst>,
) -> Result<ReducedDiagram> {
    let prune = ProductOptions {
        prune: (!vs.is_empty()).then_some((vs, Quantifier::Exists)),
        fold: None,
    };
    let conj = if tier >= OptTier::PruningAnd {
        product(engine, f, g, BooleanOp::And, prune, false)?
    } else {
        sweeps::apply(engine, f, g, BooleanOp::And)?
    };
    engine.note_intermediate_records(conj.record_count());
    let quantified = match tier {
        OptTier::Naive => {
            let d = reduce(engine, conj, None)?;
            exists(engine, &d, vs, None)?
        }
        OptTier::SkipTranspose | OptTier::PruningAnd => exists_arcs(engine, conj, vs, None)?,
        OptTier::ExistsReplace | OptTier::ShiftReplace => return exists_arcs(engine, conj, vs, subst),
    };
    match subst {
        Some(s) => replace_naive(engine, &quantified, s),
        None => Ok(quantified),
    }
}

/// The generic relational product `(∃vs. s ∧ r)[subst]`.
pub fn relprod(
    engine: &Engine,
    s: &dyn NodeSource,
    r: &dyn NodeSource,
    vs: &VarSet,
    subst: Option<&MonotoneSubst>,
    tier: OptTier,
) -> Result<ReducedDiagram> {
    and_exists(engine, s, r, vs, tier, subst)
}

fn check_unprimed(s: &dyn NodeSource, spec: &RelationSpec) -> Result<()> {
    for l in s.levels() {
        if l.level % 2 == 1 || l.level >= 2 * spec.vars as Level {
            return Err(Error::Input(format!(
                "state set uses level {}, which is not a current-state level",
                l.level
            )));
        }
    }
    Ok(())
}

fn accumulate(
    engine: &Engine,
    spec: &RelationSpec,
    mut step: impl FnMut(&ReducedDiagram) -> Result<ReducedDiagram>,
) -> Result<ReducedDiagram> {
    let mut acc: Option<ReducedDiagram> = None;
    for r in spec.parts() {
        let image = step(r)?;
        acc = Some(match acc {
            None => image,
            Some(a) => engine.or(&a, &image)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ReducedDiagram::constant(false)))
}

/// Successors of `s`: `(∃x. s ∧ R)[x'/x]`.
pub fn relnext(engine: &Engine, s: &dyn NodeSource, spec: &RelationSpec, tier: OptTier) -> Result<ReducedDiagram> {
    check_unprimed(s, spec)?;
    let vs = VarSet::unprimed(spec.vars);
    let subst = spec.primed_to_unprimed();
    accumulate(engine, spec, |r| and_exists(engine, s, r, &vs, tier, Some(&subst)))
}

/// Predecessors of `s`: `∃x'. s[x/x'] ∧ R`.
pub fn relprev(engine: &Engine, s: &dyn NodeSource, spec: &RelationSpec, tier: OptTier) -> Result<ReducedDiagram> {
    check_unprimed(s, spec)?;
    let vs = VarSet::primed(spec.vars);
    let shift = AffineShift::offset(1);
    let view = attach_shift(s, shift)?;
    let materialized;
    let primed: &dyn NodeSource = if tier >= OptTier::ShiftReplace {
        &view
    } else {
        materialized = replace_naive(engine, s, &shift.to_subst(s.levels().iter().map(|l| l.level))?)?;
        &materialized
    };
    accumulate(engine, spec, |r| and_exists(engine, primed, r, &vs, tier, None))
}
