#![allow(dead_code)]

pub mod explicit;

use rand::Rng;
use xbdd::bdd::{serialize, truth_table, NodeSource};
use xbdd::{BlockConfig, Engine, Level, NodeRecord, Ptr, ReducedDiagram, Uid};

pub fn engine() -> Engine {
    Engine::in_memory(BlockConfig::new(8, 4096).unwrap()).unwrap()
}

pub fn engine_with(b: usize, m: usize) -> Engine {
    Engine::in_memory(BlockConfig::new(b, m).unwrap()).unwrap()
}

/// Full decision tree over `labels` (top first) with leaves from `table`;
/// entry `i` uses `labels[0]` as its most significant bit.
pub fn from_table(e: &Engine, labels: &[Level], table: &[bool]) -> ReducedDiagram {
    assert_eq!(table.len(), 1 << labels.len());
    if labels.is_empty() {
        return ReducedDiagram::constant(table[0]);
    }
    let n = labels.len();
    let mut nodes = Vec::new();
    for (d, &level) in labels.iter().enumerate() {
        for prefix in 0..(1u32 << d) {
            let child = |bit: u32| {
                let p = (prefix << 1) | bit;
                if d + 1 == n {
                    Ptr::terminal(table[p as usize])
                } else {
                    Ptr::node(Uid::new(labels[d + 1], p))
                }
            };
            nodes.push(NodeRecord::new(Uid::new(level, prefix), child(0), child(1)));
        }
    }
    ReducedDiagram::from_nodes(e, nodes, Ptr::node(Uid::new(labels[0], 0))).unwrap()
}

pub fn random_table(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    // Bias towards sparse or dense functions now and then.
    let p: f64 = [0.5, 0.2, 0.8][rng.gen_range(0..3)];
    (0..1usize << n).map(|_| rng.gen_bool(p)).collect()
}

pub fn table(e: &Engine, d: &dyn NodeSource, labels: &[Level]) -> Vec<bool> {
    truth_table(e, d, labels).unwrap()
}

pub fn bytes(e: &Engine, d: &dyn NodeSource) -> Vec<u8> {
    let mut out = Vec::new();
    serialize(e, d, &mut out).unwrap();
    out
}

pub fn labels(n: usize) -> Vec<Level> {
    (0..n as Level).collect()
}

/// `∃` (or `∀` with `conj`) over the positions `qs` of a table on `n` bits.
pub fn quantify_table(t: &[bool], n: usize, qs: &[usize], conj: bool) -> Vec<bool> {
    let mut t = t.to_vec();
    for &q in qs {
        let bit = 1usize << (n - 1 - q);
        t = (0..t.len())
            .map(|i| {
                let (a, b) = (t[i & !bit], t[i | bit]);
                if conj {
                    a && b
                } else {
                    a || b
                }
            })
            .collect();
    }
    t
}

/// Every node is reduced: no `low == high`, no duplicate children per level.
pub fn assert_reduced(e: &Engine, d: &ReducedDiagram) {
    let nodes = xbdd::bdd::load_nodes(e, d).unwrap();
    let mut seen = std::collections::HashSet::new();
    for n in &nodes {
        assert_ne!(n.low, n.high, "redundant node {n:?}");
        assert!(seen.insert((n.uid.level(), n.low, n.high)), "duplicate node {n:?}");
    }
    let mut sorted = nodes.clone();
    sorted.sort();
    assert_eq!(sorted, nodes, "node file is not sorted");
}

/// A random unreduced node set over levels `0..n` (with redundant and
/// duplicate nodes), restricted to the nodes reachable from its root.
pub fn random_unreduced(rng: &mut impl Rng, n: usize) -> (Vec<NodeRecord>, Ptr) {
    if n == 0 {
        return (Vec::new(), Ptr::terminal(rng.gen_bool(0.5)));
    }
    let mut pool = vec![Ptr::FALSE, Ptr::TRUE];
    let mut nodes = Vec::new();
    for level in (0..n as Level).rev() {
        let width = if level == 0 { 1 } else { rng.gen_range(1..=3) };
        let mut fresh = Vec::new();
        for i in 0..width {
            let low = pool[rng.gen_range(0..pool.len())];
            let high = if rng.gen_bool(0.15) {
                low
            } else {
                pool[rng.gen_range(0..pool.len())]
            };
            let uid = Uid::new(level, i);
            nodes.push(NodeRecord::new(uid, low, high));
            fresh.push(Ptr::node(uid));
        }
        pool.extend(fresh);
    }
    let root = Ptr::node(Uid::new(0, 0));
    let by_uid: std::collections::HashMap<Uid, NodeRecord> = nodes.iter().map(|n| (n.uid, *n)).collect();
    let mut keep = std::collections::BTreeSet::new();
    let mut stack = vec![root];
    while let Some(p) = stack.pop() {
        if let Some(u) = p.uid() {
            if keep.insert(u) {
                stack.push(by_uid[&u].low);
                stack.push(by_uid[&u].high);
            }
        }
    }
    (keep.into_iter().map(|u| by_uid[&u]).collect(), root)
}

/// The unreduced stream of a random node set.
pub fn random_arcs(e: &Engine, rng: &mut impl Rng, n: usize) -> (xbdd::bdd::ArcStream, Vec<NodeRecord>, Ptr) {
    let (nodes, root) = random_unreduced(rng, n);
    let mut b = xbdd::bdd::ArcBuilder::new(e).unwrap();
    for node in &nodes {
        b.add(*node).unwrap();
    }
    (b.finish(root).unwrap(), nodes, root)
}
