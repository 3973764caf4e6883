//! Path decompositions and the partition dynamic program that runs over them.
//!
//! The program walks the nice event chain of a decomposition. A state is a
//! partition of the current bag together with the number of vertices already
//! committed to each part. Parts always carry at least one bag vertex; a part
//! whose last bag vertex is forgotten is complete and leaves the state.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{Graph, VertexPartition};
use crate::oracle::PartitionSolution;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("bag {bag} does not induce a clique")]
    NotCliqueBags { bag: usize },
    #[error("interval {index} has its low end above its high end")]
    InvalidInterval { index: usize },
    #[error("malformed decomposition text on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NiceEvent {
    Introduce(usize),
    Forget(usize),
}

impl fmt::Display for NiceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NiceEvent::Introduce(v) => write!(f, "introduce {v}"),
            NiceEvent::Forget(v) => write!(f, "forget {v}"),
        }
    }
}

/// A sequence of bags plus the nice event chain that walks through them,
/// starting and ending at the empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
    events: Vec<NiceEvent>,
}

impl PathDecomposition {
    /// Bags are sorted and deduplicated; the event chain between consecutive
    /// bags forgets the departing vertices first, then introduces new ones,
    /// each in ascending order.
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        let bags: Vec<Vec<usize>> = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let mut events = Vec::new();
        let mut prev: &[usize] = &[];
        for bag in &bags {
            for &v in prev {
                if bag.binary_search(&v).is_err() {
                    events.push(NiceEvent::Forget(v));
                }
            }
            for &v in bag {
                if prev.binary_search(&v).is_err() {
                    events.push(NiceEvent::Introduce(v));
                }
            }
            prev = bag;
        }
        events.extend(prev.iter().map(|&v| NiceEvent::Forget(v)));
        PathDecomposition { bags, events }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn events(&self) -> &[NiceEvent] {
        &self.events
    }

    /// Largest bag size minus one (zero for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Checks vertex coverage, edge coverage and contiguity against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompError> {
        let n = g.n();
        let mut first = vec![usize::MAX; n];
        let mut last = vec![0usize; n];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(DecompError::InvalidDecomposition(format!(
                        "bag {i} holds vertex {v} but the graph has {n} vertices"
                    )));
                }
                if first[v] == usize::MAX {
                    first[v] = i;
                } else if last[v] + 1 != i {
                    return Err(DecompError::InvalidDecomposition(format!(
                        "bags holding vertex {v} are not contiguous"
                    )));
                }
                last[v] = i;
            }
        }
        if let Some(v) = first.iter().position(|&f| f == usize::MAX) {
            return Err(DecompError::InvalidDecomposition(format!(
                "vertex {v} is in no bag"
            )));
        }
        for &(u, v) in g.edges() {
            // Contiguity makes the overlap of the two ranges the set of shared bags.
            if first[u].max(first[v]) > last[u].min(last[v]) {
                return Err(DecompError::InvalidDecomposition(format!(
                    "edge {u}-{v} is in no bag"
                )));
            }
        }
        Ok(())
    }

    /// One bag per line, identifiers separated by spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for bag in &self.bags {
            let ids: Vec<String> = bag.iter().map(usize::to_string).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`PathDecomposition::to_text`]. Lines
    /// starting with `c` are comments.
    pub fn from_text(text: &str) -> Result<Self, DecompError> {
        let mut bags = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.starts_with('c') {
                continue;
            }
            let bag = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| DecompError::Parse {
                        line: i + 1,
                        reason: format!("'{t}' is not a vertex identifier"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            bags.push(bag);
        }
        Ok(PathDecomposition::new(bags))
    }
}

/// Subdivides `pd` so that consecutive bags differ by exactly one vertex and
/// the first and last bags are empty. The event chain is unchanged.
pub fn make_nice(pd: &PathDecomposition) -> PathDecomposition {
    let mut bags = vec![Vec::new()];
    let mut current: Vec<usize> = Vec::new();
    for event in &pd.events {
        match *event {
            NiceEvent::Introduce(v) => {
                let at = current.binary_search(&v).unwrap_err();
                current.insert(at, v);
            }
            NiceEvent::Forget(v) => {
                let at = current.binary_search(&v).expect("forgotten vertex is in the bag");
                current.remove(at);
            }
        }
        bags.push(current.clone());
    }
    PathDecomposition {
        bags,
        events: pd.events.clone(),
    }
}

/// Bags `X ∪ C` for every component `C` of `g - X`, components ordered by
/// their smallest identifier. With no components the only bag is `X`.
pub fn build_cvd_path_decomposition(g: &Graph, x: &[usize]) -> PathDecomposition {
    let mut alive = vec![true; g.n()];
    for &v in x {
        alive[v] = false;
    }
    let comps = crate::graph::components_among(g, &alive);
    let mut bags: Vec<Vec<usize>> = comps
        .parts()
        .iter()
        .map(|c| x.iter().chain(c).copied().collect())
        .collect();
    if bags.is_empty() && !x.is_empty() {
        bags.push(x.to_vec());
    }
    PathDecomposition::new(bags)
}

/// Bags `S ∪ {w}` for every `w` outside the vertex cover `cover`.
pub fn vertex_cover_path_decomposition(g: &Graph, cover: &[usize]) -> PathDecomposition {
    let mut in_cover = vec![false; g.n()];
    for &v in cover {
        in_cover[v] = true;
    }
    let mut bags: Vec<Vec<usize>> = (0..g.n())
        .filter(|&w| !in_cover[w])
        .map(|w| cover.iter().copied().chain([w]).collect())
        .collect();
    if bags.is_empty() && !cover.is_empty() {
        bags.push(cover.to_vec());
    }
    PathDecomposition::new(bags)
}

/// The decomposition induced by a linear vertex order: bag `i` holds
/// `order[i]` and every earlier vertex with a neighbor at position `i` or later.
///
/// # Panics
///
/// If `order` is not a permutation of the vertices of `g`.
pub fn ordering_path_decomposition(g: &Graph, order: &[usize]) -> PathDecomposition {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        assert!(v < n && pos[v] == usize::MAX, "order must be a permutation");
        pos[v] = i;
    }
    assert_eq!(order.len(), n, "order must be a permutation");
    let last: Vec<usize> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| pos[u]).fold(pos[v], usize::max))
        .collect();
    let mut active: Vec<usize> = Vec::new();
    let mut bags = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        active.retain(|&u| last[u] >= i);
        active.push(v);
        bags.push(active.clone());
    }
    PathDecomposition::new(bags)
}

/// Counters describing one run of the dynamic program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpStats {
    /// Candidate states produced by transitions.
    pub generated: usize,
    /// Candidates that collided with an existing canonical state.
    pub collisions: usize,
    /// Largest number of states alive after one event.
    pub peak_states: usize,
    pub pruned: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct StateKey {
    /// Part label of each bag vertex, in bag order, as a restricted growth string.
    labels: Box<[u16]>,
    sizes: Box<[u32]>,
}

#[derive(Debug, Clone)]
struct Back {
    pred: usize,
    /// Bag vertices whose parts the introduced vertex joined.
    joined: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    General,
    /// Clique bags: join at most one part, and apply the size pruning.
    CliqueBags { k: usize },
}

struct Layer {
    keys: Vec<StateKey>,
    costs: Vec<usize>,
    backs: Vec<Back>,
    index: HashMap<StateKey, usize>,
}

impl Layer {
    fn new() -> Self {
        Layer {
            keys: Vec::new(),
            costs: Vec::new(),
            backs: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn offer(&mut self, key: StateKey, cost: usize, back: Back, stats: &mut DpStats) {
        stats.generated += 1;
        match self.index.get(&key) {
            Some(&i) => {
                stats.collisions += 1;
                if cost < self.costs[i] {
                    self.costs[i] = cost;
                    self.backs[i] = back;
                }
            }
            None => {
                self.index.insert(key.clone(), self.keys.len());
                self.keys.push(key);
                self.costs.push(cost);
                self.backs.push(back);
            }
        }
    }
}

/// Relabels in first-appearance order, carrying sizes along.
fn canonical(labels: &[u16], sizes: &[u32]) -> StateKey {
    let mut map: Vec<u16> = vec![u16::MAX; sizes.len()];
    let mut new_sizes = Vec::with_capacity(sizes.len());
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        if map[l as usize] == u16::MAX {
            map[l as usize] = new_sizes.len() as u16;
            new_sizes.push(sizes[l as usize]);
        }
        out.push(map[l as usize]);
    }
    StateKey {
        labels: out.into_boxed_slice(),
        sizes: new_sizes.into_boxed_slice(),
    }
}

fn run(
    g: &Graph,
    pd: &PathDecomposition,
    h: usize,
    cap: Option<usize>,
    mode: Mode,
    stats: &mut DpStats,
) -> Option<PartitionSolution> {
    let mut bag: Vec<usize> = Vec::new();
    let mut layers: Vec<Layer> = Vec::with_capacity(pd.events.len() + 1);
    let mut start = Layer::new();
    start.offer(
        StateKey {
            labels: Box::new([]),
            sizes: Box::new([]),
        },
        0,
        Back {
            pred: 0,
            joined: Vec::new(),
        },
        stats,
    );
    layers.push(start);
    let within_cap = |c: usize| cap.is_none_or(|k| c <= k);

    for &event in &pd.events {
        let prev = layers.last().expect("start layer exists");
        let mut next = Layer::new();
        match event {
            NiceEvent::Introduce(v) => {
                let at = bag.binary_search(&v).unwrap_err();
                let nb_pos: Vec<usize> = (0..bag.len()).filter(|&i| g.has_edge(bag[i], v)).collect();
                let new_bag_len = bag.len() + 1;
                for (si, key) in prev.keys.iter().enumerate() {
                    let cost = prev.costs[si];
                    let parts = key.sizes.len();
                    // Parts holding a bag neighbor of v, with neighbor counts.
                    let mut nb_count = vec![0usize; parts];
                    let mut rep = vec![usize::MAX; parts];
                    for &i in &nb_pos {
                        let l = key.labels[i] as usize;
                        nb_count[l] += 1;
                        if rep[l] == usize::MAX {
                            rep[l] = bag[i];
                        }
                    }
                    let candidates: Vec<usize> = (0..parts).filter(|&l| nb_count[l] > 0).collect();
                    let subsets: Vec<u64> = match mode {
                        Mode::General => (0..1u64 << candidates.len()).collect(),
                        Mode::CliqueBags { .. } => std::iter::once(0)
                            .chain((0..candidates.len()).map(|i| 1u64 << i))
                            .collect(),
                    };
                    for mask in subsets {
                        let merged: Vec<usize> = (0..candidates.len())
                            .filter(|&i| mask >> i & 1 == 1)
                            .map(|i| candidates[i])
                            .collect();
                        let size: usize = 1 + merged.iter().map(|&l| key.sizes[l] as usize).sum::<usize>();
                        if size > h {
                            stats.pruned += 1;
                            continue;
                        }
                        let kept: usize = merged.iter().map(|&l| nb_count[l]).sum();
                        let new_cost = cost + nb_pos.len() - kept;
                        if !within_cap(new_cost) {
                            stats.pruned += 1;
                            continue;
                        }
                        // Label `parts` is the fresh part for v; merged parts fold into it.
                        let fresh = parts as u16;
                        let mut labels: Vec<u16> = Vec::with_capacity(new_bag_len);
                        for (i, &l) in key.labels.iter().enumerate() {
                            if i == at {
                                labels.push(fresh);
                            }
                            labels.push(if merged.contains(&(l as usize)) { fresh } else { l });
                        }
                        if at == key.labels.len() {
                            labels.push(fresh);
                        }
                        let mut sizes: Vec<u32> = key.sizes.to_vec();
                        sizes.push(size as u32);
                        let new_key = canonical(&labels, &sizes);
                        if let Mode::CliqueBags { k } = mode {
                            if new_bag_len > k + 1 && new_key.sizes.len() > 1 {
                                stats.pruned += 1;
                                continue;
                            }
                            if new_key.sizes.iter().filter(|&&s| s as usize > k + 1).count() > 1 {
                                stats.pruned += 1;
                                continue;
                            }
                        }
                        let joined = merged.iter().map(|&l| rep[l]).collect();
                        next.offer(new_key, new_cost, Back { pred: si, joined }, stats);
                    }
                }
                bag.insert(at, v);
            }
            NiceEvent::Forget(v) => {
                let at = bag.binary_search(&v).expect("forgotten vertex is in the bag");
                for (si, key) in prev.keys.iter().enumerate() {
                    let mut labels = key.labels.to_vec();
                    labels.remove(at);
                    let new_key = canonical(&labels, &key.sizes);
                    next.offer(
                        new_key,
                        prev.costs[si],
                        Back {
                            pred: si,
                            joined: Vec::new(),
                        },
                        stats,
                    );
                }
                bag.remove(at);
            }
        }
        stats.peak_states = stats.peak_states.max(next.keys.len());
        if next.keys.is_empty() {
            return None;
        }
        layers.push(next);
    }

    // The chain ends at the empty bag, so exactly one state remains.
    let last = layers.last().expect("start layer exists");
    debug_assert_eq!(last.keys.len(), 1);
    let best = last.costs[0];
    let mut uf = UnionFind::new(g.n());
    let mut idx = 0;
    for (li, &event) in pd.events.iter().enumerate().rev() {
        let back = &layers[li + 1].backs[idx];
        if let NiceEvent::Introduce(v) = event {
            for &u in &back.joined {
                uf.union(u, v);
            }
        }
        idx = back.pred;
    }
    let labels: Vec<usize> = (0..g.n()).map(|v| uf.find(v)).collect();
    let solution = PartitionSolution::from_partition(g, VertexPartition::from_labels(&labels));
    debug_assert!(solution.cost <= best);
    debug_assert!(solution.partition.parts().iter().all(|p| p.len() <= h));
    Some(solution)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Minimum-cost partition of `g` into parts of size at most `h`, computed
/// over `pd`. With `k_cap`, states costing more than the cap are dropped and
/// `Ok(None)` means no partition of cost at most the cap exists.
pub fn dp_solve(
    g: &Graph,
    pd: &PathDecomposition,
    h: usize,
    k_cap: Option<usize>,
) -> Result<Option<PartitionSolution>, DecompError> {
    dp_solve_with_stats(g, pd, h, k_cap).map(|(s, _)| s)
}

pub fn dp_solve_with_stats(
    g: &Graph,
    pd: &PathDecomposition,
    h: usize,
    k_cap: Option<usize>,
) -> Result<(Option<PartitionSolution>, DpStats), DecompError> {
    assert!(h >= 1, "component bound must be positive");
    pd.validate(g)?;
    let mut stats = DpStats::default();
    let sol = run(g, pd, h, k_cap, Mode::General, &mut stats);
    Ok((sol, stats))
}

/// Intersection graph of closed intervals and its maximal cliques as a path
/// decomposition, in sweep order.
pub fn interval_clique_path(
    intervals: &[(Rational, Rational)],
) -> Result<(Graph, PathDecomposition), DecompError> {
    if let Some(index) = intervals.iter().position(|(lo, hi)| lo > hi) {
        return Err(DecompError::InvalidInterval { index });
    }
    let n = intervals.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let (a, b) = (intervals[u], intervals[v]);
            if a.0.max(b.0) <= a.1.min(b.1) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_valid_edges(n, edges);

    // Opens sort before closes at the same point, since closed intervals touch.
    let mut events: Vec<(Rational, u8, usize)> = Vec::with_capacity(2 * n);
    for (i, &(lo, hi)) in intervals.iter().enumerate() {
        events.push((lo, 0, i));
        events.push((hi, 1, i));
    }
    events.sort();
    let mut active: Vec<usize> = Vec::new();
    let mut bags = Vec::new();
    let mut last_open = false;
    for (_, kind, i) in events {
        if kind == 0 {
            let at = active.binary_search(&i).unwrap_err();
            active.insert(at, i);
            last_open = true;
        } else {
            if last_open {
                bags.push(active.clone());
            }
            let at = active.binary_search(&i).expect("closing an open interval");
            active.remove(at);
            last_open = false;
        }
    }
    Ok((g, PathDecomposition::new(bags)))
}

/// Decision version of the program for decompositions whose bags are cliques.
///
/// A new vertex joins at most one part, states with two parts larger than
/// `k + 1` are discarded, and bags of more than `k + 1` vertices are never
/// split. Returns a solution of cost at most `k`, or `None`.
pub fn dp_solve_interval(
    g: &Graph,
    pd: &PathDecomposition,
    k: usize,
    h: usize,
) -> Result<Option<PartitionSolution>, DecompError> {
    dp_solve_interval_with_stats(g, pd, k, h).map(|(s, _)| s)
}

pub fn dp_solve_interval_with_stats(
    g: &Graph,
    pd: &PathDecomposition,
    k: usize,
    h: usize,
) -> Result<(Option<PartitionSolution>, DpStats), DecompError> {
    assert!(h >= 1, "component bound must be positive");
    pd.validate(g)?;
    if let Some(bag) = pd.bags.iter().position(|b| !g.is_clique(b)) {
        return Err(DecompError::NotCliqueBags { bag });
    }
    let mut stats = DpStats::default();
    let sol = run(g, pd, h, Some(k), Mode::CliqueBags { k }, &mut stats);
    Ok((sol, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::opt_partition;
    use crate::random::{cluster_plus_x, intervals, random_graph, rng};
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn cvd_decomposition_examples() {
        // x = 0, components {1,2} and {3}.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        let pd = build_cvd_path_decomposition(&g, &[0]);
        assert_eq!(pd.bags(), &[vec![0, 1, 2], vec![0, 3]]);
        pd.validate(&g).unwrap();
        let pd = build_cvd_path_decomposition(&Graph::cycle(4), &[]);
        assert_eq!(pd.bags(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn nice_examples() {
        use NiceEvent::*;
        let pd = PathDecomposition::new(vec![vec![0, 1]]);
        assert_eq!(pd.events(), &[Introduce(0), Introduce(1), Forget(0), Forget(1)]);
        let pd = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(
            pd.events(),
            &[Introduce(0), Introduce(1), Forget(0), Introduce(2), Forget(1), Forget(2)]
        );
        let nice = make_nice(&pd);
        assert_eq!(nice.bags().first(), Some(&vec![]));
        assert_eq!(nice.bags().last(), Some(&vec![]));
        assert_eq!(nice.events(), pd.events());
        assert_eq!(make_nice(&nice), nice);
        nice.validate(&Graph::path(3)).unwrap();
    }

    #[test]
    fn validation_catches_broken_axioms() {
        let g = Graph::path(3);
        assert!(PathDecomposition::new(vec![vec![0, 1]]).validate(&g).is_err());
        assert!(PathDecomposition::new(vec![vec![0, 1], vec![2]]).validate(&g).is_err());
        assert!(PathDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0]])
            .validate(&g)
            .is_err());
        assert!(PathDecomposition::new(vec![vec![0, 1, 7]]).validate(&g).is_err());
        let err = dp_solve(&g, &PathDecomposition::new(vec![vec![0, 1]]), 2, None);
        assert!(matches!(err, Err(DecompError::InvalidDecomposition(_))));
    }

    #[test]
    fn text_round_trip() {
        let pd = PathDecomposition::new(vec![vec![2, 0], vec![2, 3], vec![]]);
        assert_eq!(pd.to_text(), "0 2\n2 3\n\n");
        assert_eq!(PathDecomposition::from_text(&pd.to_text()).unwrap(), pd);
        assert!(PathDecomposition::from_text("0 x\n").is_err());
    }

    #[test]
    fn dp_examples() {
        let k3 = Graph::complete(3);
        let pd = PathDecomposition::new(vec![vec![0, 1, 2]]);
        let sol = dp_solve(&k3, &pd, 2, None).unwrap().unwrap();
        assert_eq!(sol.cost, 2);
        assert!(sol.verify(&k3, 2));
        let sol = dp_solve(&k3, &pd, 3, None).unwrap().unwrap();
        assert_eq!(sol.cost, 0);
        assert!(dp_solve(&k3, &pd, 2, Some(1)).unwrap().is_none());
        assert!(dp_solve(&Graph::new(0), &PathDecomposition::new(vec![]), 1, None)
            .unwrap()
            .is_some());
    }

    #[test]
    fn dp_matches_oracle_on_cvd_decompositions() {
        let mut rg = rng(31);
        for _ in 0..150 {
            let g = random_graph(&mut rg, 8, 0.4);
            let n = g.n();
            let xs: Vec<Vec<usize>> = vec![vec![], vec![0], vec![n - 1, 0]];
            for h in 1..=n.min(5) {
                let opt = opt_partition(&g, h).cost;
                for x in &xs {
                    let mut x = x.clone();
                    x.dedup();
                    let pd = build_cvd_path_decomposition(&g, &x);
                    let (sol, stats) = dp_solve_with_stats(&g, &pd, h, None).unwrap();
                    let sol = sol.unwrap();
                    assert_eq!(sol.cost, opt);
                    assert!(sol.verify(&g, h));
                    assert!(stats.generated >= stats.collisions);
                    let capped = dp_solve(&g, &pd, h, Some(opt)).unwrap().unwrap();
                    assert_eq!(capped.cost, opt);
                    if opt > 0 {
                        assert!(dp_solve(&g, &pd, h, Some(opt - 1)).unwrap().is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn interval_examples() {
        let (g, pd) = interval_clique_path(&[(r(0, 1), r(2, 1)), (r(1, 1), r(3, 1)), (r(5, 2), r(4, 1))])
            .unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(pd.bags(), &[vec![0, 1], vec![1, 2]]);
        let (g, pd) = interval_clique_path(&[(r(0, 1), r(1, 1)), (r(2, 1), r(3, 1))]).unwrap();
        assert_eq!(g.m(), 0);
        assert_eq!(pd.bags(), &[vec![0], vec![1]]);
        let shared: Vec<(Rational, Rational)> = (0..4).map(|i| (r(i, 1), r(10, 1))).collect();
        let (g, pd) = interval_clique_path(&shared).unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!(pd.bags(), &[vec![0, 1, 2, 3]]);
        assert!(matches!(
            interval_clique_path(&[(r(2, 1), r(1, 1))]),
            Err(DecompError::InvalidInterval { index: 0 })
        ));
    }

    #[test]
    fn interval_dp_examples() {
        let (p3, pd) =
            interval_clique_path(&[(r(0, 1), r(1, 1)), (r(1, 1), r(2, 1)), (r(2, 1), r(3, 1))]).unwrap();
        assert_eq!(p3, Graph::path(3));
        let sol = dp_solve_interval(&p3, &pd, 1, 2).unwrap().unwrap();
        assert_eq!(sol.cost, 1);
        let shared: Vec<(Rational, Rational)> = (0..4).map(|_| (r(0, 1), r(1, 1))).collect();
        let (k4, pd) = interval_clique_path(&shared).unwrap();
        assert!(dp_solve_interval(&k4, &pd, 3, 2).unwrap().is_none());
        assert_eq!(dp_solve_interval(&k4, &pd, 4, 2).unwrap().unwrap().cost, 4);
        let sol = dp_solve_interval(&p3, &pd_of(&p3), 0, 3).unwrap().unwrap();
        assert!(sol.deleted_edges.is_empty());
        let bad = PathDecomposition::new(vec![vec![0, 1, 2]]);
        assert_eq!(
            dp_solve_interval(&p3, &bad, 1, 2),
            Err(DecompError::NotCliqueBags { bag: 0 })
        );
    }

    fn pd_of(p3: &Graph) -> PathDecomposition {
        let pd = PathDecomposition::new(vec![vec![0, 1], vec![1, 2]]);
        pd.validate(p3).unwrap();
        pd
    }

    #[test]
    fn interval_dp_agrees_with_unpruned() {
        let mut rg = rng(32);
        for _ in 0..200 {
            let n = rg.gen_range(1..=10);
            let ivs = intervals(&mut rg, n, 6);
            let (g, pd) = interval_clique_path(&ivs).unwrap();
            pd.validate(&g).unwrap();
            for k in 0..=4 {
                for h in 1..=7 {
                    let pruned = dp_solve_interval(&g, &pd, k, h).unwrap();
                    let full = dp_solve(&g, &pd, h, Some(k)).unwrap();
                    assert_eq!(pruned.is_some(), full.is_some(), "k={k} h={h} {ivs:?}");
                    if let Some(sol) = pruned {
                        assert!(sol.cost <= k && sol.verify(&g, h));
                    }
                }
            }
        }
    }

    use rand::Rng;

    proptest! {
        #[test]
        fn cvd_bags_satisfy_axioms(seed in any::<u64>()) {
            let mut rg = rng(seed);
            let (g, x) = cluster_plus_x(&mut rg, 12, 3);
            let pd = build_cvd_path_decomposition(&g, &x);
            prop_assert!(pd.validate(&g).is_ok());
            prop_assert!(make_nice(&pd).validate(&g).is_ok());
        }

        #[test]
        fn interval_bags_are_cliques(seed in any::<u64>()) {
            let mut rg = rng(seed);
            let n = rg.gen_range(0..=12);
            let ivs = intervals(&mut rg, n, 8);
            let (g, pd) = interval_clique_path(&ivs).unwrap();
            prop_assert!(pd.validate(&g).is_ok());
            prop_assert!(pd.bags().iter().all(|b| g.is_clique(b)));
        }
    }
}
