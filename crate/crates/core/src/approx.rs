//! Bicriteria approximation: a feasible deletion set of size at most `4k²`,
//! or a proof that no solution of size `k` exists.
//!
//! While some component is larger than `h`, cut out a set of between
//! `⌈h/2⌉` and `h` vertices whose boundary has at most `k` edges. On a
//! yes-instance such a set always exists, and after the `2kh` vertex guard
//! at most `4k` rounds are needed.

use crate::graph::{components_among, Edge, Graph};
use crate::preprocess::{drop_small_components, yes_instance_vertex_bound, Answer};

/// Calls `f(set, cut)` for every connected vertex set of size at most
/// `max_size`, where `cut` is the number of edges leaving the set.
pub fn for_each_connected_set(g: &Graph, max_size: usize, f: &mut dyn FnMut(&[usize], usize)) {
    if max_size == 0 {
        return;
    }
    let n = g.n();
    // near[u] counts how many members of the current set are u or adjacent to u.
    let mut near = vec![0usize; n];
    let mut set = Vec::with_capacity(max_size);
    for v in 0..n {
        let ext: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        add(g, &mut set, &mut near, v);
        extend(g, v, max_size, &mut set, &mut near, ext, g.degree(v), f);
        remove(g, &mut set, &mut near, v);
    }
}

fn add(g: &Graph, set: &mut Vec<usize>, near: &mut [usize], v: usize) {
    set.push(v);
    near[v] += 1;
    for &u in g.neighbors(v) {
        near[u] += 1;
    }
}

fn remove(g: &Graph, set: &mut Vec<usize>, near: &mut [usize], v: usize) {
    set.pop();
    near[v] -= 1;
    for &u in g.neighbors(v) {
        near[u] -= 1;
    }
}

/// One step of the ESU enumeration rooted at `root`.
#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    root: usize,
    max_size: usize,
    set: &mut Vec<usize>,
    near: &mut [usize],
    mut ext: Vec<usize>,
    cut: usize,
    f: &mut dyn FnMut(&[usize], usize),
) {
    f(set, cut);
    if set.len() == max_size {
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next_ext = ext.clone();
        next_ext.extend(g.neighbors(w).iter().copied().filter(|&u| u > root && near[u] == 0));
        let inside = g.neighbors(w).iter().filter(|u| set.contains(u)).count();
        let next_cut = cut + g.degree(w) - 2 * inside;
        add(g, set, near, w);
        extend(g, root, max_size, set, near, next_ext, next_cut, f);
        remove(g, set, near, w);
    }
}

/// A set of `⌈h/2⌉..=h` vertices of `c` whose boundary has at most `k`
/// edges, if one exists.
///
/// Connected candidates are searched first; among them the smallest cut
/// wins, then the lexicographically smallest set. Failing that, disjoint
/// connected pieces smaller than `⌈h/2⌉` are combined, and the first union
/// found in enumeration order is returned.
pub fn find_bounded_extract(c: &Graph, k: usize, h: usize) -> Option<Vec<usize>> {
    assert!(h >= 1, "component bound must be positive");
    let half = h.div_ceil(2);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut pieces: Vec<(Vec<usize>, usize)> = Vec::new();
    for_each_connected_set(c, h, &mut |set, cut| {
        if cut > k {
            return;
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if set.len() >= half {
            let better = match &best {
                None => true,
                Some((bc, bs)) => (cut, &sorted) < (*bc, bs),
            };
            if better {
                best = Some((cut, sorted));
            }
        } else {
            pieces.push((sorted, cut));
        }
    });
    if let Some((_, set)) = best {
        return Some(set);
    }
    pieces.sort();
    pieces.dedup();
    let mut taken = vec![false; c.n()];
    let mut chosen = Vec::new();
    combine(c, &pieces, 0, k, h, half, &mut taken, &mut chosen, 0, 0)
}

/// Depth-first search over unions of disjoint pieces, at most `2k` of them.
#[allow(clippy::too_many_arguments)]
fn combine(
    c: &Graph,
    pieces: &[(Vec<usize>, usize)],
    from: usize,
    k: usize,
    h: usize,
    half: usize,
    taken: &mut [bool],
    chosen: &mut Vec<usize>,
    size: usize,
    cut: usize,
) -> Option<Vec<usize>> {
    if chosen.len() >= 2 && size >= half && cut <= k {
        let mut union: Vec<usize> = chosen.iter().flat_map(|&i| pieces[i].0.iter().copied()).collect();
        union.sort_unstable();
        return Some(union);
    }
    if chosen.len() >= 2 * k.max(1) {
        return None;
    }
    for i in from..pieces.len() {
        let (set, piece_cut) = &pieces[i];
        if size + set.len() > h || set.iter().any(|&v| taken[v]) {
            continue;
        }
        let shared: usize = set
            .iter()
            .map(|&v| c.neighbors(v).iter().filter(|&&u| taken[u]).count())
            .sum();
        let next_cut = cut + piece_cut - 2 * shared;
        for &v in set {
            taken[v] = true;
        }
        chosen.push(i);
        let found = combine(c, pieces, i + 1, k, h, half, taken, chosen, size + set.len(), next_cut);
        chosen.pop();
        for &v in set {
            taken[v] = false;
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractRecord {
    /// The oversized component, in input identifiers.
    pub component: Vec<usize>,
    pub extracted: Vec<usize>,
    pub cut: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApproxOutcome {
    Solution(Vec<Edge>),
    NoInstance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxReport {
    pub outcome: ApproxOutcome,
    pub records: Vec<ExtractRecord>,
    /// True when the answer came from the vertex-count guard.
    pub guard_triggered: bool,
}

impl ApproxReport {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

pub fn approx_solve(g: &Graph, k: usize, h: usize) -> ApproxReport {
    assert!(h >= 1, "component bound must be positive");
    let big = drop_small_components(g, h);
    if yes_instance_vertex_bound(&big.graph, k, h) == Answer::No {
        return ApproxReport {
            outcome: ApproxOutcome::NoInstance,
            records: Vec::new(),
            guard_triggered: true,
        };
    }
    let mut alive = vec![true; g.n()];
    let mut deleted: Vec<Edge> = Vec::new();
    let mut records = Vec::new();
    loop {
        let comps = components_among(g, &alive);
        let Some(comp) = comps.parts().iter().find(|c| c.len() > h) else {
            break;
        };
        let (sub, ids) = g.induced(comp);
        let Some(local) = find_bounded_extract(&sub, k, h) else {
            return ApproxReport {
                outcome: ApproxOutcome::NoInstance,
                records,
                guard_triggered: false,
            };
        };
        let extracted: Vec<usize> = local.iter().map(|&v| ids[v]).collect();
        for &v in &extracted {
            alive[v] = false;
        }
        let mut cut = 0;
        for &v in &extracted {
            for &u in g.neighbors(v) {
                if alive[u] {
                    deleted.push(crate::graph::normalize(u, v));
                    cut += 1;
                }
            }
        }
        records.push(ExtractRecord {
            component: comp.clone(),
            extracted,
            cut,
        });
    }
    deleted.sort_unstable();
    ApproxReport {
        outcome: ApproxOutcome::Solution(deleted),
        records,
        guard_triggered: false,
    }
}
