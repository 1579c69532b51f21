//! Model checking tasks on symbolic models and the `xbdd` command line.

mod cli;
mod report;

pub use cli::{exit_code, run};
pub use report::TaskReport;

use std::time::Instant;

use crate::bdd::{count_states, pick_min_state, same_diagram, NodeSource, ReducedDiagram};
use crate::extmem::Engine;
use crate::models::SymbolicModel;
use crate::quantify::{relnext, relprev, OptTier, RelationSpec};
use crate::{Error, Level, Result};

/// Settings shared by the tasks.
#[derive(Clone, Copy, Debug, Default)]
pub struct TaskOptions {
    pub tier: OptTier,
    /// Apply `Next` to the whole reachable set instead of the frontier.
    pub full_set: bool,
    /// Check that every reachability iteration only adds states.
    pub check_monotone: bool,
}

/// A task's report together with its result diagram.
#[derive(Debug)]
pub struct Outcome {
    pub report: TaskReport,
    pub result: ReducedDiagram,
}

fn domain(vars: usize) -> Vec<Level> {
    (0..vars as Level).map(|k| 2 * k).collect()
}

/// Number of states in `set`, a diagram over the current-state levels.
pub fn state_count(engine: &Engine, set: &dyn NodeSource, vars: usize) -> Result<u128> {
    count_states(engine, set, &domain(vars))
}

/// The least fixpoint of `S ∨ Next(S)` from the initial states, and the
/// number of `Next` steps taken.
pub fn reachable_states(engine: &Engine, model: &SymbolicModel, opts: TaskOptions) -> Result<(ReducedDiagram, u64)> {
    let r = &model.relation;
    let mut reach = model.initial.clone();
    let mut frontier = reach.clone();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let source = if opts.full_set { &reach } else { &frontier };
        let next = relnext(engine, source, r, opts.tier)?;
        let grown = engine.or(&reach, &next)?;
        if opts.check_monotone && !engine.diff(&reach, &grown)?.is_false() {
            return Err(Error::Invariant("reachable set shrank".into()));
        }
        if same_diagram(engine, &grown, &reach)? {
            return Ok((reach, iterations));
        }
        if !opts.full_set {
            frontier = engine.diff(&grown, &reach)?;
        }
        reach = grown;
    }
}

/// States of `reach` without a successor.
pub fn deadlock_states(
    engine: &Engine,
    reach: &ReducedDiagram,
    relation: &RelationSpec,
    tier: OptTier,
) -> Result<ReducedDiagram> {
    let prev = relprev(engine, reach, relation, tier)?;
    engine.diff(reach, &prev)
}

/// A partition of the reachable states into strongly connected components.
#[derive(Debug)]
pub struct SccDecomposition {
    /// Deadlock states; each is an SCC of its own.
    pub deadlocks: ReducedDiagram,
    /// The remaining SCCs.
    pub components: Vec<ReducedDiagram>,
    /// Total number of SCCs.
    pub count: u128,
}

fn restricted_closure(
    engine: &Engine,
    start: &ReducedDiagram,
    within: &ReducedDiagram,
    relation: &RelationSpec,
    tier: OptTier,
    forward: bool,
) -> Result<ReducedDiagram> {
    let mut closure = start.clone();
    let mut frontier = start.clone();
    loop {
        let step = if forward {
            relnext(engine, &frontier, relation, tier)?
        } else {
            relprev(engine, &frontier, relation, tier)?
        };
        let new = engine.diff(&engine.and(&step, within)?, &closure)?;
        if new.is_false() {
            return Ok(closure);
        }
        closure = engine.or(&closure, &new)?;
        frontier = new;
    }
}

/// Forward/backward decomposition of `reach`. The pivot is the least state
/// of the candidate set; after an SCC is found, the next pivot in the rest
/// of its forward set is taken among the SCC's successors when there are
/// any, which walks down chains of SCCs.
pub fn scc_decomposition(
    engine: &Engine,
    model: &SymbolicModel,
    reach: &ReducedDiagram,
    tier: OptTier,
) -> Result<SccDecomposition> {
    let r = &model.relation;
    let vars = model.vars();
    let deadlocks = deadlock_states(engine, reach, r, tier)?;
    let mut count = state_count(engine, &deadlocks, vars)?;
    let mut components = Vec::new();
    let mut work = vec![(engine.diff(reach, &deadlocks)?, None::<ReducedDiagram>)];
    while let Some((set, hint)) = work.pop() {
        if set.is_false() {
            continue;
        }
        let candidates = match hint {
            Some(h) if !h.is_false() => h,
            _ => set.clone(),
        };
        let pivot = pick_min_state(engine, &candidates, &domain(vars))?
            .ok_or_else(|| Error::Invariant("empty pivot candidates".into()))?;
        let pivot = ReducedDiagram::cube(engine, &pivot)?;
        let fw = restricted_closure(engine, &pivot, &set, r, tier, true)?;
        let scc = restricted_closure(engine, &pivot, &fw, r, tier, false)?;
        let rest = engine.diff(&fw, &scc)?;
        let hint = engine.and(&relnext(engine, &scc, r, tier)?, &rest)?;
        work.push((engine.diff(&set, &fw)?, None));
        work.push((rest, Some(hint)));
        components.push(scc);
        count += 1;
    }
    Ok(SccDecomposition {
        deadlocks,
        components,
        count,
    })
}

pub fn task_reachability(engine: &Engine, name: &str, model: &SymbolicModel, opts: TaskOptions) -> Result<Outcome> {
    let started = Instant::now();
    let (reach, iterations) = reachable_states(engine, model, opts)?;
    let count = state_count(engine, &reach, model.vars())?;
    Ok(Outcome {
        report: TaskReport::new("reach", name, engine, started, iterations, count, &reach),
        result: reach,
    })
}

pub fn task_deadlock(engine: &Engine, name: &str, model: &SymbolicModel, opts: TaskOptions) -> Result<Outcome> {
    let started = Instant::now();
    let (reach, iterations) = reachable_states(engine, model, opts)?;
    let dead = deadlock_states(engine, &reach, &model.relation, opts.tier)?;
    let count = state_count(engine, &dead, model.vars())?;
    Ok(Outcome {
        report: TaskReport::new("deadlock", name, engine, started, iterations, count, &dead),
        result: dead,
    })
}

/// The report's `state_count` is the number of reachable states; the
/// number of SCCs is in `scc_count`.
pub fn task_scc(engine: &Engine, name: &str, model: &SymbolicModel, opts: TaskOptions) -> Result<Outcome> {
    let started = Instant::now();
    let (reach, iterations) = reachable_states(engine, model, opts)?;
    let scc = scc_decomposition(engine, model, &reach, opts.tier)?;
    let count = state_count(engine, &reach, model.vars())?;
    let mut report = TaskReport::new("scc", name, engine, started, iterations, count, &reach);
    report.scc_count = Some(scc.count.to_string());
    Ok(Outcome { report, result: reach })
}

/// Number of variables implied by the levels of a state set and a relation.
pub fn vars_of(states: &ReducedDiagram, relation: &ReducedDiagram) -> usize {
    states
        .level_labels()
        .into_iter()
        .chain(relation.level_labels())
        .max()
        .map_or(0, |l| l as usize / 2 + 1)
}

fn single_step(
    engine: &Engine,
    task: &str,
    name: &str,
    states: &ReducedDiagram,
    relation: &ReducedDiagram,
    tier: OptTier,
    forward: bool,
) -> Result<Outcome> {
    let started = Instant::now();
    let vars = vars_of(states, relation);
    let spec = RelationSpec::joint(vars, relation.clone())?;
    let result = if forward {
        relnext(engine, states, &spec, tier)?
    } else {
        relprev(engine, states, &spec, tier)?
    };
    let count = state_count(engine, &result, vars)?;
    Ok(Outcome {
        report: TaskReport::new(task, name, engine, started, 1, count, &result),
        result,
    })
}

pub fn task_next(
    engine: &Engine,
    name: &str,
    states: &ReducedDiagram,
    relation: &ReducedDiagram,
    tier: OptTier,
) -> Result<Outcome> {
    single_step(engine, "next", name, states, relation, tier, true)
}

pub fn task_prev(
    engine: &Engine,
    name: &str,
    states: &ReducedDiagram,
    relation: &ReducedDiagram,
    tier: OptTier,
) -> Result<Outcome> {
    single_step(engine, "prev", name, states, relation, tier, false)
}
