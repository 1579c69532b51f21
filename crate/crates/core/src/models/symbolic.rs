use std::fmt;
use std::str::FromStr;

use super::expr::BoolExpr;
use super::{BooleanNetwork, Model, PetriNet};
use crate::bdd::ReducedDiagram;
use crate::extmem::Engine;
use crate::quantify::RelationSpec;
use crate::sweeps::BooleanOp;
use crate::{Error, Level, Result};

/// Whether transitions are combined into one relation or kept apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PartitionKind {
    #[default]
    Joint,
    Disjoint,
}

impl FromStr for PartitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "joint" => Ok(PartitionKind::Joint),
            "disjoint" => Ok(PartitionKind::Disjoint),
            _ => Err(Error::Config(format!("unknown partition `{s}`"))),
        }
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionKind::Joint => "joint",
            PartitionKind::Disjoint => "disjoint",
        })
    }
}

/// A model encoded over the interleaved order: the variable at position `k`
/// of the order is level `2k`, its next-state copy level `2k + 1`.
#[derive(Clone, Debug)]
pub struct SymbolicModel {
    /// Variable names by position in the order.
    pub variables: Vec<String>,
    /// `order[k]` is the input index of the variable at position `k`.
    pub order: Vec<usize>,
    pub initial: ReducedDiagram,
    pub relation: RelationSpec,
}

impl SymbolicModel {
    pub fn vars(&self) -> usize {
        self.variables.len()
    }

    /// The current-state levels.
    pub fn state_levels(&self) -> Vec<Level> {
        (0..self.vars() as Level).map(|k| 2 * k).collect()
    }
}

struct Encoder<'a> {
    engine: &'a Engine,
    /// Position in the order of each input variable.
    pos: Vec<usize>,
}

impl Encoder<'_> {
    fn current(&self, v: usize) -> Level {
        2 * self.pos[v] as Level
    }

    fn next(&self, v: usize) -> Level {
        self.current(v) + 1
    }

    /// Conjunction of `terms`, combined deepest first.
    fn conjoin(&self, mut terms: Vec<(Level, ReducedDiagram)>) -> Result<ReducedDiagram> {
        terms.sort_by_key(|(l, _)| std::cmp::Reverse(*l));
        let mut acc = ReducedDiagram::constant(true);
        for (_, t) in terms {
            acc = self.engine.and(&t, &acc)?;
        }
        Ok(acc)
    }

    fn literal(&self, level: Level, value: bool) -> Result<ReducedDiagram> {
        ReducedDiagram::cube(self.engine, &[(level, value)])
    }

    /// `x_v' ↔ x_v`
    fn frame(&self, v: usize) -> Result<ReducedDiagram> {
        let x = ReducedDiagram::var(self.engine, self.current(v))?;
        let y = ReducedDiagram::var(self.engine, self.next(v))?;
        self.engine.binary(&x, &y, BooleanOp::Xnor)
    }

    fn expr(&self, e: &BoolExpr, net: &BooleanNetwork) -> Result<ReducedDiagram> {
        let en = self.engine;
        Ok(match e {
            BoolExpr::Var(name) => {
                let v = net
                    .index_of(name)
                    .ok_or_else(|| Error::Input(format!("undeclared variable `{name}`")))?;
                ReducedDiagram::var(en, self.current(v))?
            }
            BoolExpr::Const(c) => ReducedDiagram::constant(*c),
            BoolExpr::Not(a) => en.not(&self.expr(a, net)?)?,
            BoolExpr::And(a, b) => en.and(&self.expr(a, net)?, &self.expr(b, net)?)?,
            BoolExpr::Or(a, b) => en.or(&self.expr(a, net)?, &self.expr(b, net)?)?,
            BoolExpr::Xor(a, b) => en.xor(&self.expr(a, net)?, &self.expr(b, net)?)?,
            BoolExpr::Implies(a, b) => en.binary(&self.expr(a, net)?, &self.expr(b, net)?, BooleanOp::Imp)?,
        })
    }

    fn petri_transitions(&self, net: &PetriNet) -> Result<Vec<ReducedDiagram>> {
        let mut out = Vec::with_capacity(net.transitions.len());
        for t in &net.transitions {
            let touched = net.touched(t);
            let mut terms = Vec::new();
            for &p in &t.preset {
                terms.push((self.current(p), self.literal(self.current(p), true)?));
                if !t.postset.contains(&p) {
                    terms.push((self.next(p), self.literal(self.next(p), false)?));
                }
            }
            for &p in &t.postset {
                terms.push((self.next(p), self.literal(self.next(p), true)?));
            }
            for p in (0..net.places.len()).filter(|p| !touched.contains(p)) {
                terms.push((self.current(p), self.frame(p)?));
            }
            out.push(self.conjoin(terms)?);
        }
        Ok(out)
    }

    fn network_updates(&self, net: &BooleanNetwork) -> Result<Vec<ReducedDiagram>> {
        let mut out = Vec::with_capacity(net.variables.len());
        for (v, f) in net.functions.iter().enumerate() {
            let next = ReducedDiagram::var(self.engine, self.next(v))?;
            let update = self.engine.binary(&next, &self.expr(f, net)?, BooleanOp::Xnor)?;
            let mut terms = vec![(self.current(v), update)];
            for u in (0..net.variables.len()).filter(|&u| u != v) {
                terms.push((self.current(u), self.frame(u)?));
            }
            out.push(self.conjoin(terms)?);
        }
        Ok(out)
    }
}

/// Encode `model` with the variable order `order` (`order[k]` is the input
/// index placed at position `k`).
pub fn build_symbolic(
    engine: &Engine,
    model: &Model,
    order: &[usize],
    partition: PartitionKind,
) -> Result<SymbolicModel> {
    let n = model.variables().len();
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::Input("variable order is not a permutation".into()));
        }
        pos[v] = k;
    }
    if order.len() != n {
        return Err(Error::Input("variable order is not a permutation".into()));
    }
    let enc = Encoder { engine, pos };
    let init = model.initial_state();
    let lits: Vec<(Level, bool)> = (0..n).map(|v| (enc.current(v), init[v])).collect();
    let initial = ReducedDiagram::cube(engine, &lits)?;
    let parts = match model {
        Model::Petri(net) => enc.petri_transitions(net)?,
        Model::Boolean(net) => enc.network_updates(net)?,
    };
    let relation = match partition {
        PartitionKind::Disjoint => RelationSpec::disjoint(n, parts)?,
        PartitionKind::Joint => {
            let mut acc = ReducedDiagram::constant(false);
            for p in &parts {
                acc = engine.or(&acc, p)?;
            }
            RelationSpec::joint(n, acc)?
        }
    };
    Ok(SymbolicModel {
        variables: order.iter().map(|&v| model.variables()[v].clone()).collect(),
        order: order.to_vec(),
        initial,
        relation,
    })
}
