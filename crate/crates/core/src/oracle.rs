//! Exact reference solvers.
//!
//! An optimal deletion set is always the set of edges crossing some partition
//! of `V(G)` into parts of size at most `h`: the components of any feasible
//! `G \ F` refine such a partition, and cutting every crossing edge of a
//! bounded partition is feasible. The oracle therefore searches bounded set
//! partitions instead of edge subsets.

use thiserror::Error;

use crate::graph::{components_among, connected_components, Edge, Graph, VertexPartition};

pub const DEFAULT_MATCHING_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} vertices exceed the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// A bounded vertex partition together with the edges it cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSolution {
    pub partition: VertexPartition,
    pub deleted_edges: Vec<Edge>,
    pub cost: usize,
}

impl PartitionSolution {
    pub fn from_partition(g: &Graph, partition: VertexPartition) -> Self {
        let deleted_edges = partition.crossing_edges(g);
        PartitionSolution {
            cost: deleted_edges.len(),
            partition,
            deleted_edges,
        }
    }

    /// Checks every invariant of a solution for `(g, h)`.
    pub fn verify(&self, g: &Graph, h: usize) -> bool {
        let all: Vec<usize> = (0..g.n()).collect();
        self.partition.validate(&all).is_ok()
            && self.partition.parts().iter().all(|p| p.len() <= h)
            && self.deleted_edges == self.partition.crossing_edges(g)
            && self.cost == self.deleted_edges.len()
            && is_feasible(g, &self.deleted_edges, h)
    }
}

/// Whether every component of `g` minus `removed` has at most `h` vertices.
pub fn is_feasible(g: &Graph, removed: &[Edge], h: usize) -> bool {
    g.without_edges(removed).max_component_size() <= h
}

/// Minimum-cost partition into parts of size at most `h`.
///
/// Components are solved independently by branch and bound over
/// restricted-growth strings, visiting vertices in BFS order.
pub fn opt_partition(g: &Graph, h: usize) -> PartitionSolution {
    assert!(h >= 1, "component bound must be positive");
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for comp in connected_components(g).parts() {
        if comp.len() <= h {
            parts.push(comp.clone());
            continue;
        }
        let (sub, ids) = g.induced(comp);
        for p in solve_connected(&sub, h) {
            parts.push(p.into_iter().map(|v| ids[v]).collect());
        }
    }
    PartitionSolution::from_partition(g, VertexPartition::from_parts(parts))
}

/// Yes-certificate iff some solution deletes at most `k` edges.
pub fn decide(g: &Graph, k: usize, h: usize) -> Option<PartitionSolution> {
    let best = opt_partition(g, h);
    (best.cost <= k).then_some(best)
}

struct Search<'a> {
    g: &'a Graph,
    h: usize,
    order: Vec<usize>,
    block: Vec<usize>,
    sizes: Vec<usize>,
    best_cost: usize,
    best_block: Vec<usize>,
}

const UNASSIGNED: usize = usize::MAX;

impl Search<'_> {
    /// Each unassigned vertex keeps edges to at most one block, so the edges it
    /// has to every other assigned block are certainly cut.
    fn lower_bound(&self, from: usize) -> usize {
        let mut total = 0;
        let mut count = vec![0usize; self.sizes.len()];
        for &v in &self.order[from..] {
            let mut assigned = 0;
            let mut best = 0;
            for &w in self.g.neighbors(v) {
                let b = self.block[w];
                if b != UNASSIGNED {
                    assigned += 1;
                    count[b] += 1;
                    if self.sizes[b] < self.h {
                        best = best.max(count[b]);
                    }
                }
            }
            for &w in self.g.neighbors(v) {
                let b = self.block[w];
                if b != UNASSIGNED {
                    count[b] = 0;
                }
            }
            total += assigned - best;
        }
        total
    }

    fn run(&mut self, pos: usize, cost: usize) {
        if cost >= self.best_cost {
            return;
        }
        if pos == self.order.len() {
            self.best_cost = cost;
            self.best_block = self.block.clone();
            return;
        }
        if cost + self.lower_bound(pos) >= self.best_cost {
            return;
        }
        let v = self.order[pos];
        let mut adjacent = vec![0usize; self.sizes.len()];
        let mut assigned = 0;
        for &w in self.g.neighbors(v) {
            if self.block[w] != UNASSIGNED {
                adjacent[self.block[w]] += 1;
                assigned += 1;
            }
        }
        let mut choices: Vec<usize> = (0..self.sizes.len())
            .filter(|&b| self.sizes[b] < self.h)
            .collect();
        choices.sort_by_key(|&b| std::cmp::Reverse(adjacent[b]));
        for b in choices {
            self.block[v] = b;
            self.sizes[b] += 1;
            self.run(pos + 1, cost + assigned - adjacent[b]);
            self.sizes[b] -= 1;
        }
        self.block[v] = self.sizes.len();
        self.sizes.push(1);
        self.run(pos + 1, cost + assigned);
        self.sizes.pop();
        self.block[v] = UNASSIGNED;
    }
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

fn solve_connected(g: &Graph, h: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut search = Search {
        g,
        h,
        order: bfs_order(g),
        block: vec![UNASSIGNED; n],
        sizes: Vec::new(),
        best_cost: g.m() + 1,
        best_block: Vec::new(),
    };
    search.run(0, 0);
    let blocks = search.sizes.len().max(n);
    let mut parts = vec![Vec::new(); blocks];
    for (v, &b) in search.best_block.iter().enumerate() {
        parts[b].push(v);
    }
    parts.retain(|p| !p.is_empty());
    parts
}

/// Maximum-cardinality matching by branch and bound; `n` may not exceed
/// [`DEFAULT_MATCHING_CAP`].
pub fn maximum_matching(g: &Graph) -> Result<Vec<Edge>, OracleError> {
    maximum_matching_capped(g, DEFAULT_MATCHING_CAP)
}

pub fn maximum_matching_capped(g: &Graph, cap: usize) -> Result<Vec<Edge>, OracleError> {
    if g.n() > cap {
        return Err(OracleError::CapExceeded { n: g.n(), cap });
    }
    let mut state = MatchSearch {
        g,
        used: vec![false; g.n()],
        current: Vec::new(),
        best: Vec::new(),
    };
    state.run(0);
    let mut best = state.best;
    best.sort_unstable();
    Ok(best)
}

struct MatchSearch<'a> {
    g: &'a Graph,
    used: Vec<bool>,
    current: Vec<Edge>,
    best: Vec<Edge>,
}

impl MatchSearch<'_> {
    fn run(&mut self, from: usize) {
        let free = (from..self.g.n()).filter(|&v| !self.used[v]).count();
        if self.current.len() + free / 2 <= self.best.len() {
            return;
        }
        let next = (from..self.g.n()).find(|&v| {
            !self.used[v] && self.g.neighbors(v).iter().any(|&w| !self.used[w])
        });
        let Some(v) = next else {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        };
        self.used[v] = true;
        for i in 0..self.g.degree(v) {
            // Unused vertices below v were left unmatched on purpose.
            let w = self.g.neighbors(v)[i];
            if w < v || self.used[w] {
                continue;
            }
            self.used[w] = true;
            self.current.push((v, w));
            self.run(v + 1);
            self.current.pop();
            self.used[w] = false;
        }
        // leave v unmatched
        self.run(v + 1);
        self.used[v] = false;
    }
}

/// Optimum for `h = 2`: every kept edge is a component of size two, so the
/// kept edges form a matching.
pub fn opt_h2(g: &Graph) -> Result<usize, OracleError> {
    Ok(g.m() - maximum_matching(g)?.len())
}

/// Size of every component after deleting `removed`, largest first.
pub fn component_sizes_after(g: &Graph, removed: &[Edge]) -> Vec<usize> {
    let h = g.without_edges(removed);
    let alive = vec![true; g.n()];
    let mut sizes: Vec<usize> = components_among(&h, &alive)
        .parts()
        .iter()
        .map(Vec::len)
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_graph, rng};

    /// Independent route: minimum |F| over all edge subsets (n small).
    fn brute_edge_subsets(g: &Graph, h: usize) -> usize {
        let m = g.m();
        (0u32..1 << m)
            .filter(|mask| {
                let removed: Vec<Edge> = (0..m)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| g.edges()[i])
                    .collect();
                is_feasible(g, &removed, h)
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn documented_examples() {
        let k3 = Graph::complete(3);
        let s = opt_partition(&k3, 2);
        assert_eq!(s.cost, 2);
        assert_eq!(s.partition.len(), 2);
        assert_eq!(opt_partition(&Graph::path(4), 2).cost, 1);
        assert_eq!(
            opt_partition(&Graph::path(4), 2).deleted_edges,
            vec![(1, 2)]
        );
        let k4 = Graph::complete(4);
        assert_eq!(opt_partition(&k4, 1).cost, 6);
        assert_eq!(opt_partition(&k4, 4).cost, 0);
        assert_eq!(opt_partition(&Graph::new(0), 1).cost, 0);
    }

    #[test]
    fn decide_examples() {
        let k3 = Graph::complete(3);
        assert!(decide(&k3, 1, 2).is_none());
        let yes = decide(&k3, 2, 2).unwrap();
        assert_eq!(yes.deleted_edges.len(), 2);
        let two = Graph::complete(2).disjoint_union(&Graph::complete(2));
        assert_eq!(decide(&two, 0, 2).unwrap().deleted_edges, vec![]);
    }

    #[test]
    fn matching_examples() {
        assert_eq!(maximum_matching(&Graph::complete(4)).unwrap().len(), 2);
        assert_eq!(maximum_matching(&Graph::star(4)).unwrap().len(), 1);
        assert!(maximum_matching(&Graph::new(0)).unwrap().is_empty());
        assert_eq!(opt_h2(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(opt_h2(&Graph::path(4)).unwrap(), 1);
        assert_eq!(opt_h2(&Graph::path(2)).unwrap(), 0);
        assert!(matches!(
            maximum_matching(&Graph::new(21)),
            Err(OracleError::CapExceeded { n: 21, cap: 20 })
        ));
    }

    #[test]
    fn partition_matches_edge_subset_brute_force() {
        let mut r = rng(11);
        for _ in 0..120 {
            let g = random_graph(&mut r, 7, 0.45);
            for h in 1..=g.n().max(1) {
                let s = opt_partition(&g, h);
                assert!(s.verify(&g, h));
                assert_eq!(s.cost, brute_edge_subsets(&g, h), "{g:?} h={h}");
            }
        }
    }

    #[test]
    fn monotone_in_h_and_h2_identity() {
        let mut r = rng(12);
        for _ in 0..80 {
            let g = random_graph(&mut r, 10, 0.35);
            let costs: Vec<usize> = (1..=g.n().max(1)).map(|h| opt_partition(&g, h).cost).collect();
            assert!(costs.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(costs[0], g.m());
            if g.n() >= 2 {
                assert_eq!(opt_h2(&g).unwrap(), costs[1]);
            }
        }
    }

    #[test]
    fn edge_removal_changes_opt_by_at_most_one() {
        let mut r = rng(13);
        for _ in 0..60 {
            let g = random_graph(&mut r, 8, 0.4);
            for h in 1..=3 {
                let base = opt_partition(&g, h).cost;
                for &e in g.edges() {
                    let c = opt_partition(&g.without_edges(&[e]), h).cost;
                    assert!(c <= base && c + 1 >= base);
                }
            }
        }
    }
}
