//! Split graphs: recognition and an exact solver.
//!
//! With clique side `V1` and independent side `V2`, every vertex of `V2` has
//! all its neighbors in `V1`. If `|V1| > k + 1` the clique cannot be split
//! within budget, so the only question is which `V2` vertices join it.
//! Otherwise the partitions of `V1` are enumerated, and for each one the
//! best placement of `V2` is a transportation problem solved by min-cost flow.

use thiserror::Error;

use crate::graph::{Graph, VertexPartition};
use crate::oracle::PartitionSolution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("the graph is not a split graph")]
    NotSplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPartitionView {
    pub clique_side: Vec<usize>,
    pub independent_side: Vec<usize>,
}

/// Vertices sorted by degree, descending, ties by identifier.
fn degree_order(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    order
}

/// Takes the longest prefix of the degree order that is a clique while the
/// rest is independent.
pub fn recognize_split(g: &Graph) -> Option<SplitPartitionView> {
    let n = g.n();
    let order = degree_order(g);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // prefix_clique[i]: order[..i] is a clique.
    let mut prefix_clique = vec![true; n + 1];
    for i in 0..n {
        let earlier = g.neighbors(order[i]).iter().filter(|&&w| pos[w] < i).count();
        prefix_clique[i + 1] = prefix_clique[i] && earlier == i;
    }
    // suffix_edges[i]: edges inside order[i..].
    let mut suffix_edges = vec![0usize; n + 1];
    for i in (0..n).rev() {
        let later = g.neighbors(order[i]).iter().filter(|&&w| pos[w] > i).count();
        suffix_edges[i] = suffix_edges[i + 1] + later;
    }
    let cut = (0..=n).rev().find(|&i| prefix_clique[i] && suffix_edges[i] == 0)?;
    let mut clique_side = order[..cut].to_vec();
    let mut independent_side = order[cut..].to_vec();
    clique_side.sort_unstable();
    independent_side.sort_unstable();
    Some(SplitPartitionView {
        clique_side,
        independent_side,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitCase {
    /// `|V1| > k + 1`: the clique stays whole.
    LargeClique,
    /// `|V1| <= k + 1`: the clique side is small enough to enumerate.
    SmallClique,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub yes: bool,
    pub case: SplitCase,
    pub view: SplitPartitionView,
    /// A solution of cost at most `k` when one exists.
    pub solution: Option<PartitionSolution>,
}

pub fn solve_split(g: &Graph, k: usize, h: usize) -> Result<SplitOutcome, SplitError> {
    assert!(h >= 1, "component bound must be positive");
    let view = recognize_split(g).ok_or(SplitError::NotSplit)?;
    if view.clique_side.len() > k + 1 {
        let solution = large_clique(g, &view, k, h);
        return Ok(SplitOutcome {
            yes: solution.is_some(),
            case: SplitCase::LargeClique,
            view,
            solution,
        });
    }
    let solution = small_clique(g, &view, k, h);
    Ok(SplitOutcome {
        yes: solution.is_some(),
        case: SplitCase::SmallClique,
        view,
        solution,
    })
}

/// Keeps `V1` whole and lets the highest-degree `V2` vertices join it.
///
/// A `V2` vertex either joins the clique component, keeping all its edges,
/// or ends up alone, losing all of them, since its neighbors lie in `V1`.
fn large_clique(g: &Graph, view: &SplitPartitionView, k: usize, h: usize) -> Option<PartitionSolution> {
    let c = view.clique_side.len();
    if h < c {
        // Splitting a clique of more than k + 1 vertices costs at least k + 1.
        return None;
    }
    let mut v2 = view.independent_side.clone();
    v2.sort_by_key(|&w| (std::cmp::Reverse(g.degree(w)), w));
    let room = (h - c).min(v2.len());
    let cost: usize = v2[room..].iter().map(|&w| g.degree(w)).sum();
    if cost > k {
        return None;
    }
    let mut parts = vec![view.clique_side.iter().chain(&v2[..room]).copied().collect::<Vec<_>>()];
    parts.extend(v2[room..].iter().map(|&w| vec![w]));
    let sol = PartitionSolution::from_partition(g, VertexPartition::from_parts(parts));
    debug_assert_eq!(sol.cost, cost);
    Some(sol)
}

fn small_clique(g: &Graph, view: &SplitPartitionView, k: usize, h: usize) -> Option<PartitionSolution> {
    let v1 = &view.clique_side;
    // Group V2 by neighborhood; every member of a group is interchangeable.
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for &w in &view.independent_side {
        let nb = g.neighbors(w).to_vec();
        match groups.iter_mut().find(|(n, _)| *n == nb) {
            Some((_, members)) => members.push(w),
            None => groups.push((nb, vec![w])),
        }
    }
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut labels = Vec::with_capacity(v1.len());
    enumerate_partitions(v1.len(), &mut labels, 0, &mut |labels| {
        let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); parts];
        for (i, &l) in labels.iter().enumerate() {
            blocks[l].push(v1[i]);
        }
        if blocks.iter().any(|b| b.len() > h) {
            return;
        }
        // Each clique edge between different blocks is cut.
        let sizes: Vec<usize> = blocks.iter().map(Vec::len).collect();
        let total: usize = sizes.iter().sum();
        let inner: usize = sizes.iter().map(|&s| s * (s - 1) / 2).sum();
        let clique_cut = total * total.saturating_sub(1) / 2 - inner;
        let limit = match &best {
            None => k,
            Some((0, _)) => return,
            Some((c, _)) => (c - 1).min(k),
        };
        if clique_cut > limit {
            return;
        }
        let (placement_cost, assignment) = place_independent(&blocks, &groups, h);
        let cost = clique_cut + placement_cost;
        if cost <= limit {
            let mut parts = blocks.clone();
            let mut alone = Vec::new();
            for (gi, per_block) in assignment.iter().enumerate() {
                let mut members = groups[gi].1.iter().copied();
                for (b, &count) in per_block.iter().enumerate() {
                    parts[b].extend(members.by_ref().take(count));
                }
                alone.extend(members);
            }
            parts.extend(alone.into_iter().map(|w| vec![w]));
            best = Some((cost, parts));
        }
    });
    best.map(|(cost, parts)| {
        let sol = PartitionSolution::from_partition(g, VertexPartition::from_parts(parts));
        debug_assert_eq!(sol.cost, cost);
        sol
    })
}

/// Calls `f` with every restricted growth string of length `n`.
fn enumerate_partitions(n: usize, labels: &mut Vec<usize>, next_label: usize, f: &mut dyn FnMut(&[usize])) {
    if labels.len() == n {
        f(labels);
        return;
    }
    for l in 0..=next_label {
        labels.push(l);
        enumerate_partitions(n, labels, next_label.max(l + 1), f);
        labels.pop();
    }
}

/// Min-cost placement of the independent side into `blocks` (capacity
/// `h - |block|` each) or into singletons. Returns the number of cut edges
/// incident to the independent side and, per group, the count sent to each block.
fn place_independent(
    blocks: &[Vec<usize>],
    groups: &[(Vec<usize>, Vec<usize>)],
    h: usize,
) -> (usize, Vec<Vec<usize>>) {
    let nb = blocks.len();
    let ng = groups.len();
    // Nodes: source, groups, blocks, alone, sink.
    let source = 0;
    let alone = 1 + ng + nb;
    let sink = alone + 1;
    let mut flow = MinCostFlow::new(sink + 1);
    let mut block_arcs = vec![vec![usize::MAX; nb]; ng];
    let mut total_vertices = 0i64;
    for (gi, (nbrs, members)) in groups.iter().enumerate() {
        let size = members.len() as i64;
        total_vertices += size;
        flow.add_arc(source, 1 + gi, size, 0);
        let deg = nbrs.len() as i64;
        for (b, block) in blocks.iter().enumerate() {
            let kept = block.iter().filter(|v| nbrs.binary_search(v).is_ok()).count() as i64;
            block_arcs[gi][b] = flow.add_arc(1 + gi, 1 + ng + b, size, deg - kept);
        }
        flow.add_arc(1 + gi, alone, size, deg);
    }
    for (b, block) in blocks.iter().enumerate() {
        flow.add_arc(1 + ng + b, sink, (h - block.len()) as i64, 0);
    }
    flow.add_arc(alone, sink, total_vertices, 0);
    let (sent, cost) = flow.run(source, sink);
    debug_assert_eq!(sent, total_vertices);
    let assignment = (0..ng)
        .map(|gi| (0..nb).map(|b| flow.flow_on(block_arcs[gi][b]) as usize).collect())
        .collect();
    (cost as usize, assignment)
}

/// Successive shortest paths with Bellman-Ford; fine for the tiny networks here.
struct MinCostFlow {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
}

impl MinCostFlow {
    fn new(n: usize) -> Self {
        MinCostFlow {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
        }
    }

    /// Returns the arc index; its reverse is at index + 1.
    fn add_arc(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let id = self.to.len();
        self.head[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.head[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
        id
    }

    fn flow_on(&self, arc: usize) -> i64 {
        self.cap[arc + 1]
    }

    fn run(&mut self, s: usize, t: usize) -> (i64, i64) {
        let n = self.head.len();
        let (mut flow, mut total) = (0i64, 0i64);
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut via = vec![usize::MAX; n];
            dist[s] = 0;
            for _ in 0..n {
                let mut changed = false;
                for u in 0..n {
                    if dist[u] == i64::MAX {
                        continue;
                    }
                    for &e in &self.head[u] {
                        let v = self.to[e];
                        if self.cap[e] > 0 && dist[u] + self.cost[e] < dist[v] {
                            dist[v] = dist[u] + self.cost[e];
                            via[v] = e;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            if dist[t] == i64::MAX {
                return (flow, total);
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let e = via[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            flow += push;
            total += push * dist[t];
        }
    }
}
