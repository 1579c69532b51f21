use std::collections::HashMap;

use super::{NodeReader, NodeRecord, NodeSource, Ptr, ReducedDiagram};
use crate::extmem::{Direction, Engine, LevelizedPriorityQueue, PqEntry, Record};
use crate::{Error, Level, Result};

/// Largest number of variables [`truth_table`] accepts.
pub const TRUTH_TABLE_LIMIT: usize = 24;

/// Follow the path selected by `assignment` in one forward scan.
pub fn evaluate(engine: &Engine, source: &dyn NodeSource, assignment: impl Fn(Level) -> Option<bool>) -> Result<bool> {
    let mut at = source.root();
    let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
    while let Some(uid) = at.uid() {
        let node = reader.seek(uid)?;
        let value = assignment(uid.level())
            .ok_or_else(|| Error::Input(format!("no value assigned to level {}", uid.level())))?;
        at = node.child(value);
    }
    Ok(at == Ptr::TRUE)
}

/// All nodes of `source` (shift applied), top-down.
pub fn load_nodes(engine: &Engine, source: &dyn NodeSource) -> Result<Vec<NodeRecord>> {
    let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
    let mut out = Vec::new();
    while let Some(n) = reader.next()? {
        out.push(n);
    }
    Ok(out)
}

/// Evaluate under every assignment to `labels`; entry `i` uses the bits of
/// `i` with `labels[0]` as the most significant one.
pub fn truth_table(engine: &Engine, source: &dyn NodeSource, labels: &[Level]) -> Result<Vec<bool>> {
    if labels.len() > TRUTH_TABLE_LIMIT {
        return Err(Error::Input(format!(
            "truth table over {} variables exceeds the limit of {TRUTH_TABLE_LIMIT}",
            labels.len()
        )));
    }
    let nodes: HashMap<_, _> = load_nodes(engine, source)?.into_iter().map(|n| (n.uid, n)).collect();
    let position: HashMap<Level, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    if let Some(n) = nodes.values().find(|n| !position.contains_key(&n.uid.level())) {
        return Err(Error::Input(format!("level {} missing from label list", n.uid.level())));
    }
    let n = labels.len();
    let root = source.root();
    Ok((0..1usize << n)
        .map(|i| {
            let mut at = root;
            while let Some(uid) = at.uid() {
                let bit = (i >> (n - 1 - position[&uid.level()])) & 1 == 1;
                at = nodes[&uid].child(bit);
            }
            at == Ptr::TRUE
        })
        .collect())
}

pub fn count_nodes(d: &ReducedDiagram) -> u64 {
    d.node_count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CountEntry {
    target: Ptr,
    count: u128,
}

impl Record for CountEntry {
    const WORDS: usize = 3;

    fn encode(&self, out: &mut [u64]) {
        out[0] = self.target.raw();
        out[1] = (self.count >> 64) as u64;
        out[2] = self.count as u64;
    }

    fn decode(w: &[u64]) -> Self {
        CountEntry {
            target: Ptr::from_raw(w[0]),
            count: ((w[1] as u128) << 64) | w[2] as u128,
        }
    }
}

impl PqEntry for CountEntry {
    fn level(&self) -> u32 {
        self.target.sweep_level() as u32
    }
}

fn overflow() -> Error {
    Error::Input("count does not fit in 128 bits".into())
}

fn pow2(k: usize) -> Result<u128> {
    1u128.checked_shl(k as u32).filter(|_| k < 128).ok_or_else(overflow)
}

/// Weighted path count in one top-down sweep. An arc skipping `k` weighted
/// levels multiplies the flow by `2^k`.
fn weighted_paths(
    engine: &Engine,
    source: &dyn NodeSource,
    skipped: impl Fn(Option<Level>, Option<Level>) -> Result<usize>,
) -> Result<u128> {
    let root = source.root();
    let top = skipped(None, root.level())?;
    if root.is_terminal() {
        return if root == Ptr::TRUE { pow2(top) } else { Ok(0) };
    }
    let share = engine.shares(1, 1)?;
    let mut pq = LevelizedPriorityQueue::new(engine, share)?;
    let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
    pq.push(CountEntry {
        target: root,
        count: pow2(top)?,
    })?;
    let mut total: u128 = 0;
    while let Some(node) = reader.next()? {
        let here = Ptr::node(node.uid);
        let mut flow: u128 = 0;
        while let Some(e) = pq.peek()? {
            if e.target != here {
                break;
            }
            pq.pop()?;
            flow = flow.checked_add(e.count).ok_or_else(overflow)?;
        }
        if flow == 0 {
            continue;
        }
        for child in [node.low, node.high] {
            let k = skipped(Some(node.uid.level()), child.level())?;
            let w = flow.checked_mul(pow2(k)?).ok_or_else(overflow)?;
            match child.value() {
                Some(true) => total = total.checked_add(w).ok_or_else(overflow)?,
                Some(false) => {}
                None => pq.push(CountEntry {
                    target: child,
                    count: w,
                })?,
            }
        }
    }
    Ok(total)
}

/// Number of root-to-⊤ paths.
pub fn count_paths_to_true(engine: &Engine, source: &dyn NodeSource) -> Result<u128> {
    weighted_paths(engine, source, |_, _| Ok(0))
}

/// Number of satisfying assignments over `domain`, which must contain every
/// level of the diagram.
pub fn count_states(engine: &Engine, source: &dyn NodeSource, domain: &[Level]) -> Result<u128> {
    let mut domain = domain.to_vec();
    domain.sort_unstable();
    domain.dedup();
    for l in source.levels() {
        if domain.binary_search(&l.level).is_err() {
            return Err(Error::Input(format!(
                "level {} is outside the counting domain",
                l.level
            )));
        }
    }
    // Number of domain levels strictly above `level` (all of them for terminals).
    let rank = |level: Option<Level>| match level {
        Some(l) => domain.partition_point(|&d| d < l),
        None => domain.len(),
    };
    weighted_paths(engine, source, |from, to| {
        let start = match from {
            Some(l) => rank(Some(l)) + 1,
            None => 0,
        };
        Ok(rank(to) - start)
    })
}

/// The smallest satisfying assignment over `domain` in lexicographic order
/// (false before true, top level first), or `None` for ⊥.
pub fn pick_min_state(
    engine: &Engine,
    source: &dyn NodeSource,
    domain: &[Level],
) -> Result<Option<Vec<(Level, bool)>>> {
    let root = source.root();
    if root == Ptr::FALSE {
        return Ok(None);
    }
    let mut domain = domain.to_vec();
    domain.sort_unstable();
    domain.dedup();
    let mut chosen: HashMap<Level, bool> = HashMap::new();
    let mut reader = NodeReader::new(engine, source, Direction::Forward)?;
    let mut at = root;
    while let Some(uid) = at.uid() {
        let node = reader.seek(uid)?;
        let go_high = node.low == Ptr::FALSE;
        chosen.insert(uid.level(), go_high);
        at = node.child(go_high);
    }
    for level in chosen.keys() {
        if domain.binary_search(level).is_err() {
            return Err(Error::Input(format!("level {level} is outside the domain")));
        }
    }
    Ok(Some(
        domain
            .iter()
            .map(|&l| (l, chosen.get(&l).copied().unwrap_or(false)))
            .collect(),
    ))
}

/// Whether two sources have identical node streams, roots and level tables.
/// For canonical diagrams this is equality of the functions.
pub fn same_diagram(engine: &Engine, a: &dyn NodeSource, b: &dyn NodeSource) -> Result<bool> {
    if a.root() != b.root() || a.levels() != b.levels() {
        return Ok(false);
    }
    let mut ra = NodeReader::new(engine, a, Direction::Forward)?;
    let mut rb = NodeReader::new(engine, b, Direction::Forward)?;
    loop {
        match (ra.next()?, rb.next()?) {
            (None, None) => return Ok(true),
            (x, y) if x == y => {}
            _ => return Ok(false),
        }
    }
}
