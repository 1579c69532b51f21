//! Explicit-state semantics of parsed models, used as oracles.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use xbdd::bdd::truth_table;
use xbdd::models::{Model, SymbolicModel};
use xbdd::{Engine, ReducedDiagram};

/// A state is a bit mask over the model's input variables.
pub type State = u64;

pub fn successors(model: &Model, s: State) -> Vec<State> {
    match model {
        Model::Petri(net) => net
            .transitions
            .iter()
            .filter_map(|t| {
                let pre: State = t.preset.iter().map(|&p| 1 << p).sum();
                let post: State = t.postset.iter().map(|&p| 1 << p).sum();
                (s & pre == pre).then_some((s & !pre) | post)
            })
            .collect(),
        Model::Boolean(bn) => {
            let index: HashMap<&str, usize> = bn.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
            let value = |name: &str| s >> index[name] & 1 == 1;
            bn.functions
                .iter()
                .enumerate()
                .map(|(i, f)| if f.eval(&value) { s | 1 << i } else { s & !(1 << i) })
                .collect()
        }
    }
}

pub fn initial(model: &Model) -> State {
    model
        .initial_state()
        .iter()
        .enumerate()
        .map(|(i, &b)| (b as State) << i)
        .sum()
}

pub struct Explicit {
    pub states: Vec<State>,
    pub edges: HashMap<State, Vec<State>>,
}

pub fn explore(model: &Model) -> Explicit {
    let start = initial(model);
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = HashMap::new();
    while let Some(s) = queue.pop_front() {
        let succ = successors(model, s);
        for &t in &succ {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
        edges.insert(s, succ);
    }
    Explicit {
        states: seen.into_iter().collect(),
        edges,
    }
}

impl Explicit {
    pub fn deadlocks(&self) -> usize {
        self.states.iter().filter(|s| self.edges[s].is_empty()).count()
    }

    /// Number of SCCs by Tarjan's algorithm (iterative).
    pub fn scc_count(&self) -> usize {
        let idx: HashMap<State, usize> = self.states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let adj: Vec<Vec<usize>> = self
            .states
            .iter()
            .map(|s| self.edges[s].iter().map(|t| idx[t]).collect())
            .collect();
        let n = adj.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut count = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call = vec![(root, 0usize)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < adj[v].len() {
                    let w = adj[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(u, _)) = call.last() {
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        count += 1;
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            if w == v {
                                break;
                            }
                        }
                    }
                }
            }
        }
        count
    }
}

/// The explicit states of a symbolic state set.
pub fn decode(e: &Engine, m: &SymbolicModel, set: &ReducedDiagram) -> BTreeSet<State> {
    let levels = m.state_levels();
    let n = levels.len();
    let t = truth_table(e, set, &levels).unwrap();
    (0..t.len())
        .filter(|&i| t[i])
        .map(|i| {
            (0..n)
                .filter(|k| i >> (n - 1 - k) & 1 == 1)
                .map(|k| 1 << m.order[k])
                .sum()
        })
        .collect()
}

/// A random 1-safe style net in `.pnet` syntax.
pub fn random_pnet(rng: &mut impl Rng, places: usize) -> String {
    let name = |p: usize| format!("p{p}");
    let mut text = format!("places: {}\n", (0..places).map(name).collect::<Vec<_>>().join(" "));
    let init: Vec<String> = (0..places).filter(|_| rng.gen_bool(0.3)).map(name).collect();
    text += &format!("initial: {}\n", init.join(" "));
    for t in 0..rng.gen_range(1..=places + 2) {
        let mut pick = |lo: usize, hi: usize| {
            let k = rng.gen_range(lo..=hi);
            let mut v: Vec<usize> = (0..k).map(|_| rng.gen_range(0..places)).collect();
            v.sort_unstable();
            v.dedup();
            v.into_iter().map(name).collect::<Vec<_>>().join(" ")
        };
        let pre = pick(1, 2);
        let post = pick(0, 2);
        text += &format!("transition t{t}: in {pre} ; out {post}\n");
    }
    text
}

fn random_expr(rng: &mut impl Rng, vars: usize, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        let v = format!("v{}", rng.gen_range(0..vars));
        return if rng.gen_bool(0.4) { format!("!{v}") } else { v };
    }
    let op = ["&", "|", "^"][rng.gen_range(0..3)];
    format!(
        "({} {op} {})",
        random_expr(rng, vars, depth - 1),
        random_expr(rng, vars, depth - 1)
    )
}

/// A random asynchronous Boolean network in `.bnet` syntax.
pub fn random_bnet(rng: &mut impl Rng, vars: usize) -> String {
    let mut text = String::from("targets, factors\n");
    for v in 0..vars {
        text += &format!("v{v}, {}\n", random_expr(rng, vars, 2));
    }
    let init: Vec<String> = (0..vars)
        .map(|v| {
            if rng.gen_bool(0.5) {
                format!("v{v}")
            } else {
                format!("!v{v}")
            }
        })
        .collect();
    text += &format!("initial: {}\n", init.join(" "));
    text
}
