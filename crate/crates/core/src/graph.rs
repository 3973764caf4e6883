//! Undirected and directed simple graphs on dense vertex identifiers `0..n`,
//! together with the partition machinery every solver builds on: connected
//! components, twin classes, neighborhood diversity and cluster vertex
//! deletion sets.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// An undirected edge, always stored with the smaller endpoint first.
pub type Edge = (usize, usize);

#[inline]
pub fn normalize(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph. Adjacency lists and the edge list are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(GraphError::OutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push(normalize(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: list,
            labels: None,
        })
    }

    /// Builds from edges that are known to be valid; panics otherwise.
    pub(crate) fn from_valid_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges).expect("generated edge list must be simple")
    }

    pub fn complete(n: usize) -> Self {
        Self::from_valid_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn path(n: usize) -> Self {
        Self::from_valid_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_valid_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star on `n` vertices with center 0.
    pub fn star(n: usize) -> Self {
        Self::from_valid_edges(n, (1..n).map(|v| (0, v)))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n());
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Subgraph induced by `vertices`; new identifiers follow ascending original order.
    /// Returns the graph and the map from new to original identifiers.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]));
        let mut g = Graph::from_valid_edges(keep.len(), edges);
        if let Some(labels) = &self.labels {
            g.labels = Some(keep.iter().map(|&v| labels[v].clone()).collect());
        }
        (g, keep)
    }

    /// Same vertex set with the given edges removed (edges not present are ignored).
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let mut removed: Vec<Edge> = removed.iter().map(|&(u, v)| normalize(u, v)).collect();
        removed.sort_unstable();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| removed.binary_search(e).is_err());
        let mut g = Graph::from_valid_edges(self.n(), edges);
        g.labels = self.labels.clone();
        g
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off)));
        Graph::from_valid_edges(self.n() + other.n(), edges)
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..].iter().all(|&v| !self.has_edge(u, v))
        })
    }

    /// Number of edges with exactly one endpoint inside `set`.
    pub fn cut_size(&self, set: &[usize]) -> usize {
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(u, v)| inside[u] != inside[v])
            .count()
    }

    /// Largest connected component size (0 for the empty graph).
    pub fn max_component_size(&self) -> usize {
        connected_components(self)
            .parts()
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }
}

/// Disjoint vertex sets covering a universe. Parts are sorted and ordered by
/// their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexPartition {
    parts: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Normalizes the order of parts and members; empty parts are dropped.
    pub fn from_parts(parts: Vec<Vec<usize>>) -> Self {
        let mut parts: Vec<Vec<usize>> = parts
            .into_iter()
            .filter(|p| !p.is_empty())
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        parts.sort_unstable_by_key(|p| p[0]);
        VertexPartition { parts }
    }

    /// Parts from a per-vertex label vector (`labels[v]` = part id of `v`).
    pub fn from_labels(labels: &[usize]) -> Self {
        let count = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut parts = vec![Vec::new(); count];
        for (v, &l) in labels.iter().enumerate() {
            parts[l].push(v);
        }
        Self::from_parts(parts)
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks disjointness, non-emptiness and that the union equals `universe`.
    pub fn validate(&self, universe: &[usize]) -> Result<(), GraphError> {
        let mut seen: Vec<usize> = self.parts.iter().flatten().copied().collect();
        if self.parts.iter().any(Vec::is_empty) {
            return Err(GraphError::InvalidPartition("empty part".into()));
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidPartition("parts overlap".into()));
        }
        let mut expected = universe.to_vec();
        expected.sort_unstable();
        expected.dedup();
        if seen != expected {
            return Err(GraphError::InvalidPartition(
                "union differs from the universe".into(),
            ));
        }
        Ok(())
    }

    /// `index[v]` = part containing `v`, `None` outside the partition.
    pub fn part_index(&self, n: usize) -> Vec<Option<usize>> {
        let mut index = vec![None; n];
        for (i, p) in self.parts.iter().enumerate() {
            for &v in p {
                index[v] = Some(i);
            }
        }
        index
    }

    /// Edges of `g` whose endpoints lie in different parts. Every vertex of
    /// `g` must be covered.
    pub fn crossing_edges(&self, g: &Graph) -> Vec<Edge> {
        let index = self.part_index(g.n());
        g.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| index[u] != index[v])
            .collect()
    }
}

/// Connected components, ordered by smallest identifier.
pub fn connected_components(g: &Graph) -> VertexPartition {
    let alive = vec![true; g.n()];
    components_among(g, &alive)
}

/// Connected components of the subgraph induced by the `alive` vertices.
pub fn components_among(g: &Graph, alive: &[bool]) -> VertexPartition {
    let mut seen = vec![false; g.n()];
    let mut parts = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if seen[s] || !alive[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut part = Vec::new();
        while let Some(u) = queue.pop_front() {
            part.push(u);
            for &w in g.neighbors(u) {
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        parts.push(part);
    }
    VertexPartition::from_parts(parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodMode {
    /// Signature of `v` is `N(v) ∩ domain`.
    Open,
    /// Signature of `v` is `N[v] ∩ domain`.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinKind {
    /// The class induces a clique (singletons included).
    True,
    /// The class does not induce a clique.
    False,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinClass {
    pub vertices: Vec<usize>,
    pub signature: Vec<usize>,
    pub kind: TwinKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TwinClassification {
    pub classes: Vec<TwinClass>,
}

impl TwinClassification {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn partition(&self) -> VertexPartition {
        VertexPartition::from_parts(self.classes.iter().map(|c| c.vertices.clone()).collect())
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.vertices.len()).collect()
    }
}

fn class_kind(g: &Graph, vertices: &[usize]) -> TwinKind {
    if g.is_clique(vertices) {
        TwinKind::True
    } else {
        TwinKind::False
    }
}

/// Groups the vertices of `restrict_to` by their neighborhood signature over
/// `signature_domain`, by partition refinement with one pivot per domain vertex.
pub fn twin_classes(
    g: &Graph,
    restrict_to: &[usize],
    signature_domain: &[usize],
    mode: NeighborhoodMode,
) -> TwinClassification {
    let n = g.n();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut members: Vec<usize> = restrict_to.to_vec();
    members.sort_unstable();
    members.dedup();
    if !members.is_empty() {
        for &v in &members {
            class_of[v] = 0;
        }
        classes.push(members);
    }
    let mut domain = signature_domain.to_vec();
    domain.sort_unstable();
    domain.dedup();

    let mut touched: Vec<Vec<usize>> = Vec::new();
    let mut marked = vec![false; n];
    for &x in &domain {
        let closed = mode == NeighborhoodMode::Closed;
        let pivot = g
            .neighbors(x)
            .iter()
            .copied()
            .chain(closed.then_some(x))
            .filter(|&v| class_of[v] != usize::MAX);
        touched.clear();
        touched.resize(classes.len(), Vec::new());
        for v in pivot {
            touched[class_of[v]].push(v);
        }
        for c in 0..touched.len() {
            let hit = std::mem::take(&mut touched[c]);
            if hit.is_empty() || hit.len() == classes[c].len() {
                continue;
            }
            for &v in &hit {
                marked[v] = true;
            }
            classes[c].retain(|&v| !marked[v]);
            let id = classes.len();
            for &v in &hit {
                marked[v] = false;
                class_of[v] = id;
            }
            classes.push(hit);
        }
    }

    let mut out: Vec<TwinClass> = classes
        .into_iter()
        .map(|mut vertices| {
            vertices.sort_unstable();
            let rep = vertices[0];
            let signature = domain
                .iter()
                .copied()
                .filter(|&x| {
                    g.has_edge(rep, x) || (mode == NeighborhoodMode::Closed && x == rep)
                })
                .collect();
            let kind = class_kind(g, &vertices);
            TwinClass {
                vertices,
                signature,
                kind,
            }
        })
        .collect();
    out.sort_unstable_by_key(|c| c.vertices[0]);
    TwinClassification { classes: out }
}

/// `N(u) \ {v} == N(v) \ {u}`: true twins if adjacent, false twins otherwise.
pub fn same_type(g: &Graph, u: usize, v: usize) -> bool {
    let a = g.neighbors(u).iter().filter(|&&w| w != v);
    let b = g.neighbors(v).iter().filter(|&&w| w != u);
    a.eq(b)
}

/// Neighborhood diversity: the coarsest partition into classes of vertices
/// with the same type. Each class is a clique or an independent set; the
/// signature is the neighborhood outside the class.
pub fn neighborhood_diversity(g: &Graph) -> (usize, TwinClassification) {
    let mut reps: Vec<usize> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n() {
        match reps.iter().position(|&r| same_type(g, r, v)) {
            Some(i) => classes[i].push(v),
            None => {
                reps.push(v);
                classes.push(vec![v]);
            }
        }
    }
    let classes: Vec<TwinClass> = classes
        .into_iter()
        .map(|vertices| {
            let rep = vertices[0];
            let signature = g
                .neighbors(rep)
                .iter()
                .copied()
                .filter(|w| vertices.binary_search(w).is_err())
                .collect();
            let kind = class_kind(g, &vertices);
            TwinClass {
                vertices,
                signature,
                kind,
            }
        })
        .collect();
    (classes.len(), TwinClassification { classes })
}

/// First induced path `a - center - b` (with `a < b` non-adjacent) among the
/// alive vertices, scanning centers and then neighbor pairs in ascending order.
pub fn find_induced_p3(g: &Graph, alive: &[bool]) -> Option<[usize; 3]> {
    for center in 0..g.n() {
        if !alive[center] {
            continue;
        }
        let nbrs: Vec<usize> = g
            .neighbors(center)
            .iter()
            .copied()
            .filter(|&w| alive[w])
            .collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !g.has_edge(a, b) {
                    return Some([a, center, b]);
                }
            }
        }
    }
    None
}

/// Whether every component is a clique.
pub fn is_cluster_graph(g: &Graph) -> bool {
    find_induced_p3(g, &vec![true; g.n()]).is_none()
}

/// A minimum-size set `S` with `|S| <= budget` such that `g - S` is a disjoint
/// union of cliques, or `None` if none exists. Iterative deepening over
/// three-way branching on induced P3s.
pub fn find_cluster_deletion_set(g: &Graph, budget: usize) -> Option<Vec<usize>> {
    let mut alive = vec![true; g.n()];
    let mut chosen = Vec::new();
    (0..=budget).find_map(|b| {
        if branch_p3(g, &mut alive, &mut chosen, b) {
            let mut s = chosen.clone();
            s.sort_unstable();
            Some(s)
        } else {
            None
        }
    })
}

fn branch_p3(g: &Graph, alive: &mut [bool], chosen: &mut Vec<usize>, budget: usize) -> bool {
    let Some(p3) = find_induced_p3(g, alive) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    let mut order = p3;
    order.sort_unstable();
    for v in order {
        alive[v] = false;
        chosen.push(v);
        if branch_p3(g, alive, chosen, budget - 1) {
            alive[v] = true;
            return true;
        }
        chosen.pop();
        alive[v] = true;
    }
    false
}

/// Simple directed graph; out-adjacency lists and the arc list are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiGraph {
    out: Vec<Vec<usize>>,
    arcs: Vec<(usize, usize)>,
}

impl DiGraph {
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut out = vec![Vec::new(); n];
        for &(u, v) in &list {
            out[u].push(v);
        }
        Ok(DiGraph { out, arcs: list })
    }

    /// Each undirected edge becomes two opposite arcs.
    pub fn bidirected(g: &Graph) -> Self {
        let arcs = g.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
        Self::from_arcs(g.n(), arcs).expect("simple graph yields a simple digraph")
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// Whether the digraph has no directed cycle (Kahn's algorithm).
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.n()];
        for &(_, v) in &self.arcs {
            indeg[v] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n()).filter(|&v| indeg[v] == 0).collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &w in &self.out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        visited == self.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert_eq!(
            Graph::from_edges(3, [(0, 0)]).unwrap_err(),
            GraphError::SelfLoop(0)
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::OutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn components_basic() {
        assert!(connected_components(&Graph::new(0)).is_empty());
        assert_eq!(
            connected_components(&Graph::complete(3)).parts(),
            &[vec![0, 1, 2]]
        );
        assert_eq!(
            connected_components(&g(4, &[(0, 1), (2, 3)])).parts(),
            &[vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn twin_examples() {
        let k4 = Graph::complete(4);
        let all: Vec<usize> = (0..4).collect();
        let t = twin_classes(&k4, &all, &all, NeighborhoodMode::Closed);
        assert_eq!(t.len(), 1);
        assert_eq!(t.classes[0].kind, TwinKind::True);

        let c4 = Graph::cycle(4);
        let t = twin_classes(&c4, &all, &all, NeighborhoodMode::Open);
        assert_eq!(t.partition().parts(), &[vec![0, 2], vec![1, 3]]);
        assert!(t.classes.iter().all(|c| c.kind == TwinKind::False));

        // clique {1,2,3} fully attached to x = 0
        let gx = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let t = twin_classes(&gx, &[1, 2, 3], &[0], NeighborhoodMode::Open);
        assert_eq!(t.len(), 1);
        assert_eq!(t.classes[0].signature, vec![0]);
    }

    #[test]
    fn nd_examples() {
        assert_eq!(neighborhood_diversity(&Graph::complete(4)).0, 1);
        assert_eq!(neighborhood_diversity(&Graph::cycle(4)).0, 2);
        assert_eq!(neighborhood_diversity(&Graph::path(4)).0, 4);
        assert_eq!(neighborhood_diversity(&Graph::new(5)).0, 1);
    }

    #[test]
    fn cluster_deletion_examples() {
        let cluster = Graph::complete(3).disjoint_union(&Graph::complete(2));
        assert_eq!(find_cluster_deletion_set(&cluster, 0), Some(vec![]));
        let p3 = Graph::path(3);
        assert_eq!(find_cluster_deletion_set(&p3, 1).map(|s| s.len()), Some(1));
        let c5 = Graph::cycle(5);
        assert_eq!(find_cluster_deletion_set(&c5, 1), None);
        let s = find_cluster_deletion_set(&c5, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!c5.has_edge(s[0], s[1]));
    }

    fn brute_cvd_size(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|mask| {
                let alive: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 0).collect();
                find_induced_p3(g, &alive).is_none()
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let len = pairs.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |bits| {
                let edges = pairs.iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| *e);
                Graph::from_edges(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn components_form_a_partition(g in arb_graph(64)) {
            let parts = connected_components(&g);
            let all: Vec<usize> = (0..g.n()).collect();
            prop_assert!(parts.validate(&all).is_ok());
            prop_assert!(parts.crossing_edges(&g).is_empty());
            for p in parts.parts() {
                let (sub, _) = g.induced(p);
                prop_assert_eq!(connected_components(&sub).len(), 1);
            }
        }

        #[test]
        fn twin_classes_match_signatures(g in arb_graph(12), closed in any::<bool>()) {
            let mode = if closed { NeighborhoodMode::Closed } else { NeighborhoodMode::Open };
            let all: Vec<usize> = (0..g.n()).collect();
            let domain: Vec<usize> = (0..g.n()).filter(|v| v % 3 != 1).collect();
            let t = twin_classes(&g, &all, &domain, mode);
            let sig = |v: usize| -> Vec<usize> {
                domain.iter().copied()
                    .filter(|&x| g.has_edge(v, x) || (closed && x == v))
                    .collect()
            };
            let idx = t.partition().part_index(g.n());
            for u in 0..g.n() {
                for v in 0..g.n() {
                    prop_assert_eq!(idx[u] == idx[v], sig(u) == sig(v));
                }
            }
            for c in &t.classes {
                prop_assert_eq!(&c.signature, &sig(c.vertices[0]));
            }
        }

        #[test]
        fn nd_classes_are_types(g in arb_graph(12)) {
            let (t, classes) = neighborhood_diversity(&g);
            prop_assert!(t <= g.n());
            let idx = classes.partition().part_index(g.n());
            for u in 0..g.n() {
                for v in 0..g.n() {
                    prop_assert_eq!(idx[u] == idx[v], same_type(&g, u, v));
                }
            }
        }

        #[test]
        fn cluster_deletion_is_minimum(g in arb_graph(8)) {
            let best = brute_cvd_size(&g);
            let found = find_cluster_deletion_set(&g, g.n()).unwrap();
            prop_assert_eq!(found.len(), best);
            let alive: Vec<bool> = (0..g.n()).map(|v| !found.contains(&v)).collect();
            prop_assert!(find_induced_p3(&g, &alive).is_none());
            if best > 0 {
                prop_assert!(find_cluster_deletion_set(&g, best - 1).is_none());
            }
        }
    }
}
