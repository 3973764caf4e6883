//! The directed variant: delete at most `k` arcs so that no vertex reaches
//! more than `h` vertices. Reach counts include the start vertex, which makes
//! a bidirected graph behave exactly like its undirected original.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{DiGraph, GraphError};

pub const DEFAULT_ARC_CAP: usize = 24;
/// Budgets up to this size are searched regardless of the arc count.
pub const SMALL_BUDGET: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("{arcs} arcs with budget {k} exceed the search cap of {cap} arcs")]
    CapExceeded { arcs: usize, k: usize, cap: usize },
    #[error("malformed arc list on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiInstance {
    pub digraph: DiGraph,
    pub k: usize,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcOutcome {
    pub yes: bool,
    /// A smallest witness when the answer is yes.
    pub deleted: Vec<(usize, usize)>,
    pub nodes: usize,
}

/// Arc index bookkeeping shared by the searches.
struct ArcView<'a> {
    d: &'a DiGraph,
    start: Vec<usize>,
}

impl<'a> ArcView<'a> {
    fn new(d: &'a DiGraph) -> Self {
        let mut start = Vec::with_capacity(d.n() + 1);
        let mut acc = 0;
        for v in 0..d.n() {
            start.push(acc);
            acc += d.out_neighbors(v).len();
        }
        start.push(acc);
        ArcView { d, start }
    }

    /// Vertices reachable from `v` (in BFS order) and the tree arcs used.
    fn bfs(&self, v: usize, removed: &[bool]) -> (Vec<usize>, Vec<usize>) {
        let mut seen = vec![false; self.d.n()];
        let mut order = vec![v];
        let mut tree = Vec::new();
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            for (i, &w) in self.d.out_neighbors(u).iter().enumerate() {
                let arc = self.start[u] + i;
                if removed[arc] || seen[w] {
                    continue;
                }
                seen[w] = true;
                order.push(w);
                tree.push(arc);
                queue.push_back(w);
            }
        }
        (order, tree)
    }

    fn counts(&self, removed: &[bool]) -> Vec<usize> {
        (0..self.d.n()).map(|v| self.bfs(v, removed).0.len()).collect()
    }
}

/// Number of vertices reachable from each vertex, itself included.
pub fn reach_counts(d: &DiGraph) -> Vec<usize> {
    let view = ArcView::new(d);
    view.counts(&vec![false; d.arc_count()])
}

/// Exact decision by bounded branching.
///
/// Take the violating vertex with the smallest reach (lowest identifier on
/// ties). Any solution must delete an arc of its BFS tree, since the tree
/// alone still reaches more than `h` vertices, so the search branches over
/// those arcs. Budgets are tried in increasing order, so the witness is
/// a smallest one.
pub fn solve_arcs(inst: &DiInstance) -> Result<ArcOutcome, ArcError> {
    let groups: Vec<Vec<usize>> = (0..inst.digraph.arc_count()).map(|a| vec![a]).collect();
    let found = solve_arcs_grouped(&inst.digraph, &groups, inst.k, inst.h)?;
    let arcs = inst.digraph.arcs();
    Ok(match found.chosen {
        Some(chosen) => {
            let mut deleted: Vec<(usize, usize)> = chosen.iter().map(|&gi| arcs[gi]).collect();
            deleted.sort_unstable();
            ArcOutcome {
                yes: true,
                deleted,
                nodes: found.nodes,
            }
        }
        None => ArcOutcome {
            yes: false,
            deleted: Vec::new(),
            nodes: found.nodes,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupedOutcome {
    /// Indices of the deleted groups, if the budget suffices.
    pub chosen: Option<Vec<usize>>,
    pub nodes: usize,
}

/// Like [`solve_arcs`], but arcs are deleted in whole groups (given as arc
/// indices into `d.arcs()`) and `k` counts groups. Every arc must belong to
/// exactly one group.
pub fn solve_arcs_grouped(
    d: &DiGraph,
    groups: &[Vec<usize>],
    k: usize,
    h: usize,
) -> Result<GroupedOutcome, ArcError> {
    if d.arc_count() > DEFAULT_ARC_CAP && k > SMALL_BUDGET {
        return Err(ArcError::CapExceeded {
            arcs: d.arc_count(),
            k,
            cap: DEFAULT_ARC_CAP,
        });
    }
    let mut group_of = vec![usize::MAX; d.arc_count()];
    for (gi, g) in groups.iter().enumerate() {
        for &a in g {
            group_of[a] = gi;
        }
    }
    assert!(group_of.iter().all(|&g| g != usize::MAX), "every arc needs a group");
    let view = ArcView::new(d);
    let mut search = Search {
        view,
        groups,
        group_of,
        h,
        removed: vec![false; d.arc_count()],
        chosen: Vec::new(),
        nodes: 0,
    };
    for budget in 0..=k {
        if search.run(budget, None) {
            return Ok(GroupedOutcome {
                chosen: Some(search.chosen.clone()),
                nodes: search.nodes,
            });
        }
    }
    Ok(GroupedOutcome {
        chosen: None,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    view: ArcView<'a>,
    groups: &'a [Vec<usize>],
    group_of: Vec<usize>,
    h: usize,
    removed: Vec<bool>,
    chosen: Vec<usize>,
    nodes: usize,
}

impl Search<'_> {
    fn run(&mut self, budget: usize, before: Option<&[usize]>) -> bool {
        self.nodes += 1;
        let counts = self.view.counts(&self.removed);
        if let Some(before) = before {
            debug_assert!(counts.iter().zip(before).all(|(a, b)| a <= b), "deletion raised a reach count");
        }
        let violator = (0..counts.len())
            .filter(|&v| counts[v] > self.h)
            .min_by_key(|&v| (counts[v], v));
        let Some(v) = violator else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        let (_, tree) = self.view.bfs(v, &self.removed);
        let mut options: Vec<usize> = tree.iter().map(|&a| self.group_of[a]).collect();
        options.sort_unstable();
        options.dedup();
        for gi in options {
            for &a in &self.groups[gi] {
                self.removed[a] = true;
            }
            self.chosen.push(gi);
            if self.run(budget - 1, Some(&counts)) {
                return true;
            }
            self.chosen.pop();
            for &a in &self.groups[gi] {
                self.removed[a] = false;
            }
        }
        false
    }
}

/// One arc per line, `u v`; blank lines and lines starting with `c` are skipped.
pub fn digraph_from_text(n: usize, text: &str) -> Result<DiGraph, ArcError> {
    let mut arcs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| ArcError::Parse {
                line: i + 1,
                reason: format!("'{t}' is not a vertex identifier"),
            })
        };
        if parts.len() != 2 {
            return Err(ArcError::Parse {
                line: i + 1,
                reason: "expected two identifiers".into(),
            });
        }
        arcs.push((parse(parts[0])?, parse(parts[1])?));
    }
    Ok(DiGraph::from_arcs(n, arcs)?)
}

pub fn digraph_to_text(d: &DiGraph) -> String {
    d.arcs().iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle::decide;
    use crate::random::{random_graph, rng};

    fn dipath(n: usize) -> DiGraph {
        DiGraph::from_arcs(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn reach_examples() {
        let d = DiGraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(reach_counts(&d), vec![2, 1]);
        assert_eq!(reach_counts(&dipath(4)), vec![4, 3, 2, 1]);
    }

    #[test]
    fn solve_examples() {
        let out = solve_arcs(&DiInstance {
            digraph: dipath(4),
            k: 1,
            h: 2,
        })
        .unwrap();
        assert!(out.yes);
        assert_eq!(out.deleted, vec![(1, 2)]);
        let star = DiGraph::from_arcs(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!solve_arcs(&DiInstance { digraph: star, k: 1, h: 2 }).unwrap().yes);
        let out = solve_arcs(&DiInstance {
            digraph: dipath(3),
            k: 0,
            h: 3,
        })
        .unwrap();
        assert!(out.yes && out.deleted.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::complete(6);
        let d = DiGraph::bidirected(&g);
        assert!(matches!(
            solve_arcs(&DiInstance { digraph: d.clone(), k: 4, h: 2 }),
            Err(ArcError::CapExceeded { .. })
        ));
        assert!(solve_arcs(&DiInstance { digraph: d, k: 3, h: 2 }).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let d = dipath(4);
        let text = digraph_to_text(&d);
        assert_eq!(text, "0 1\n1 2\n2 3\n");
        assert_eq!(digraph_from_text(4, &text).unwrap(), d);
        assert!(digraph_from_text(2, "0 0\n").is_err());
        assert!(digraph_from_text(2, "0\n").is_err());
    }

    #[test]
    fn bidirected_pairs_match_undirected_oracle() {
        let mut r = rng(81);
        for _ in 0..150 {
            let g = random_graph(&mut r, 6, 0.4);
            let d = DiGraph::bidirected(&g);
            // Pair the two arcs of every edge.
            let groups: Vec<Vec<usize>> = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let a = d.arcs().binary_search(&(u, v)).unwrap();
                    let b = d.arcs().binary_search(&(v, u)).unwrap();
                    vec![a, b]
                })
                .collect();
            for h in 1..=g.n() {
                for k in 0..=3 {
                    let out = solve_arcs_grouped(&d, &groups, k, h).unwrap();
                    assert_eq!(out.chosen.is_some(), decide(&g, k, h).is_some(), "{g:?} k={k} h={h}");
                    if let Some(chosen) = out.chosen {
                        let removed: Vec<(usize, usize)> =
                            chosen.iter().map(|&i| g.edges()[i]).collect();
                        assert!(crate::oracle::is_feasible(&g, &removed, h));
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_are_feasible_and_minimum() {
        let mut r = rng(82);
        for _ in 0..100 {
            let n = rand::Rng::gen_range(&mut r, 2..=6);
            let mut arcs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rand::Rng::gen_bool(&mut r, 0.3) {
                        arcs.push((u, v));
                    }
                }
            }
            let d = DiGraph::from_arcs(n, arcs).unwrap();
            for h in 1..=n {
                let out = solve_arcs(&DiInstance { digraph: d.clone(), k: 3, h }).unwrap();
                if out.yes {
                    let rest = d.arcs().iter().copied().filter(|a| !out.deleted.contains(a));
                    let after = DiGraph::from_arcs(n, rest).unwrap();
                    assert!(reach_counts(&after).iter().all(|&c| c <= h));
                    if let Some(smaller) = out.deleted.len().checked_sub(1) {
                        let again = solve_arcs(&DiInstance { digraph: d.clone(), k: smaller, h }).unwrap();
                        assert!(!again.yes);
                    }
                }
            }
        }
    }
}
