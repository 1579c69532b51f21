//! Sloan profile-reducing ordering on the variable incidence graph.

use std::collections::VecDeque;

use super::Model;

const W1: i64 = 1;
const W2: i64 = 2;

/// Undirected graph on the state variables: two variables are adjacent when
/// they occur together in some transition or update function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    adj: Vec<Vec<usize>>,
}

impl IncidenceGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        IncidenceGraph { adj }
    }

    pub fn from_model(model: &Model) -> Self {
        let mut edges = Vec::new();
        for group in model.interaction_groups() {
            for (i, &u) in group.iter().enumerate() {
                for &v in &group[i + 1..] {
                    edges.push((u, v));
                }
            }
        }
        IncidenceGraph::from_edges(model.variables().len(), edges)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Distances from `start`, `usize::MAX` when unreachable.
    fn distances(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices at maximal distance from `start` and that distance.
    fn last_level(&self, start: usize) -> (usize, Vec<usize>) {
        let dist = self.distances(start);
        let depth = dist.iter().filter(|&&d| d != usize::MAX).max().copied().unwrap_or(0);
        let mut last: Vec<usize> = (0..self.len()).filter(|&v| dist[v] == depth).collect();
        last.sort_by_key(|&v| (self.degree(v), v));
        (depth, last)
    }

    fn pseudo_peripheral(&self, component: &[usize]) -> (usize, usize) {
        let mut s = *component
            .iter()
            .min_by_key(|&&v| (self.degree(v), v))
            .expect("components are non-empty");
        loop {
            let (depth, last) = self.last_level(s);
            match last.iter().find(|&&c| self.last_level(c).0 > depth) {
                Some(&c) => s = c,
                None => return (s, last[0]),
            }
        }
    }

    fn number_component(&self, start: usize, end: usize, order: &mut Vec<usize>) {
        #[derive(Clone, Copy, PartialEq, Eq)]
        enum Status {
            Inactive,
            Preactive,
            Active,
            Postactive,
        }
        let dist = self.distances(end);
        let mut prio: Vec<i64> = (0..self.len())
            .map(|v| {
                let d = if dist[v] == usize::MAX { 0 } else { dist[v] as i64 };
                W1 * d - W2 * (self.degree(v) as i64 + 1)
            })
            .collect();
        let mut status = vec![Status::Inactive; self.len()];
        status[start] = Status::Preactive;
        let mut queue = vec![start];
        while !queue.is_empty() {
            let (at, &v) = queue
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| (prio[v], std::cmp::Reverse(v)))
                .expect("queue is non-empty");
            queue.swap_remove(at);
            if status[v] == Status::Preactive {
                for &w in &self.adj[v] {
                    prio[w] += W2;
                    if status[w] == Status::Inactive {
                        status[w] = Status::Preactive;
                        queue.push(w);
                    }
                }
            }
            status[v] = Status::Postactive;
            order.push(v);
            for &w in &self.adj[v] {
                if status[w] != Status::Preactive {
                    continue;
                }
                status[w] = Status::Active;
                prio[w] += W2;
                for &x in &self.adj[w] {
                    if status[x] == Status::Postactive {
                        continue;
                    }
                    prio[x] += W2;
                    if status[x] == Status::Inactive {
                        status[x] = Status::Preactive;
                        queue.push(x);
                    }
                }
            }
        }
    }

    /// A Sloan ordering: `order[k]` is the vertex placed at position `k`.
    /// Components are numbered one after the other, by smallest vertex.
    pub fn sloan_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut done = vec![false; self.len()];
        for v in 0..self.len() {
            if done[v] {
                continue;
            }
            let dist = self.distances(v);
            let component: Vec<usize> = (0..self.len()).filter(|&u| dist[u] != usize::MAX).collect();
            let (s, e) = self.pseudo_peripheral(&component);
            let before = order.len();
            self.number_component(s, e, &mut order);
            for &u in &order[before..] {
                done[u] = true;
            }
        }
        order
    }

    /// `Σ_v (pos(v) − min pos over v and its neighbours)`.
    pub fn profile(&self, order: &[usize]) -> u64 {
        let mut pos = vec![0usize; self.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        (0..self.len())
            .map(|v| {
                let lowest = self.adj[v].iter().map(|&w| pos[w]).min().unwrap_or(pos[v]).min(pos[v]);
                (pos[v] - lowest) as u64
            })
            .sum()
    }
}

/// Sloan ordering of the model's variables on its incidence graph.
pub fn order_variables_sloan(model: &Model) -> Vec<usize> {
    IncidenceGraph::from_model(model).sloan_order()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_numbered_from_an_end() {
        let g = IncidenceGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(g.sloan_order(), vec![0, 1, 2]);
        assert_eq!(g.profile(&[0, 1, 2]), 2);
    }

    #[test]
    fn disconnected_graphs_are_permutations() {
        let g = IncidenceGraph::from_edges(7, [(5, 6), (1, 3), (3, 4)]);
        let mut o = g.sloan_order();
        assert_eq!(o[0], 0);
        o.sort_unstable();
        assert_eq!(o, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn shuffled_path_profile_drops() {
        // 0-4-2-6-1-5-3 as a path over scrambled indices.
        let p = [0, 4, 2, 6, 1, 5, 3];
        let g = IncidenceGraph::from_edges(7, p.windows(2).map(|w| (w[0], w[1])));
        let identity: Vec<usize> = (0..7).collect();
        assert_eq!(g.profile(&g.sloan_order()), 6);
        assert!(g.profile(&g.sloan_order()) < g.profile(&identity));
    }
}
