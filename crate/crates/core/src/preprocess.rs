//! Safe simplifications: trivial parameter cases, the small-component drop,
//! the twin-class reduction relative to a cluster vertex deletion set, and a
//! vertex-count bound for yes-instances.

use std::fmt;

use thiserror::Error;

use crate::graph::{components_among, connected_components, twin_classes, Graph, NeighborhoodMode};
use crate::oracle::{opt_h2, DEFAULT_MATCHING_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreprocessError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialRule {
    /// `h = 1`: every edge must go.
    AllEdges,
    /// `h = 2`: kept edges form a matching.
    Matching,
    /// No component exceeds `h`.
    AlreadyFeasible,
}

impl TrivialRule {
    pub fn name(self) -> &'static str {
        match self {
            TrivialRule::AllEdges => "trivial-h1",
            TrivialRule::Matching => "trivial-h2",
            TrivialRule::AlreadyFeasible => "trivial-feasible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrivialAnswer {
    pub answer: Answer,
    pub rule: Option<TrivialRule>,
    /// Exact optimum when the rule determines it.
    pub optimum: Option<usize>,
}

/// A subgraph with the map from its identifiers back to the original ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub original_ids: Vec<usize>,
}

/// Removes every component with at most `h` vertices; such components need no deletions.
pub fn drop_small_components(g: &Graph, h: usize) -> InducedSubgraph {
    let keep: Vec<usize> = connected_components(g)
        .parts()
        .iter()
        .filter(|p| p.len() > h)
        .flatten()
        .copied()
        .collect();
    let (graph, original_ids) = g.induced(&keep);
    InducedSubgraph {
        graph,
        original_ids,
    }
}

pub fn trivial_answer(g: &Graph, k: usize, h: usize) -> TrivialAnswer {
    let decided = |rule, optimum: usize| TrivialAnswer {
        answer: if optimum <= k { Answer::Yes } else { Answer::No },
        rule: Some(rule),
        optimum: Some(optimum),
    };
    if h == 1 {
        return decided(TrivialRule::AllEdges, g.m());
    }
    if h == 2 && g.n() <= DEFAULT_MATCHING_CAP {
        let opt = opt_h2(g).expect("size checked against the cap");
        return decided(TrivialRule::Matching, opt);
    }
    if g.max_component_size() <= h {
        return decided(TrivialRule::AlreadyFeasible, 0);
    }
    TrivialAnswer {
        answer: Answer::Unknown,
        rule: None,
        optimum: None,
    }
}

/// One application of a reduction rule, in original identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: &'static str,
    pub removed: Vec<usize>,
    /// Amount subtracted from the budget.
    pub budget_delta: usize,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.removed.iter().map(usize::to_string).collect();
        write!(
            f,
            "{} removed={} budget_delta={}",
            self.rule,
            ids.join(","),
            self.budget_delta
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub graph: Graph,
    /// `original_ids[v]` is the identifier of `v` in the input graph.
    pub original_ids: Vec<usize>,
    /// The deletion set, renumbered into `graph`.
    pub x: Vec<usize>,
    pub k: usize,
    pub h: usize,
    pub trace: Vec<TraceStep>,
}

impl ReducedInstance {
    pub fn total_delta(&self) -> usize {
        self.trace.iter().map(|s| s.budget_delta).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule1Outcome {
    Reduced(ReducedInstance),
    /// The budget went negative; the last trace step is the one that did it.
    NoInstance { trace: Vec<TraceStep> },
}

pub const RULE1: &str = "twin-class-reduction";

/// Applies the twin-class reduction to a fixpoint.
///
/// For a component `C` of `g - X` and a class `P` of vertices of `C` with the
/// same neighborhood in `X`, once `|P| >= |X|(h-1) + h` the `h` lowest
/// identifiers of `P` are removed and `k` drops by `h(|C| - h + |N_X(P)|)`.
/// Components and classes are recomputed after every removal.
pub fn rule1_apply(
    g: &Graph,
    x: &[usize],
    k: usize,
    h: usize,
) -> Result<Rule1Outcome, PreprocessError> {
    assert!(h >= 1, "component bound must be positive");
    let n = g.n();
    let mut in_x = vec![false; n];
    for &v in x {
        if v >= n {
            return Err(PreprocessError::MalformedInput(format!(
                "deletion-set vertex {v} out of range"
            )));
        }
        in_x[v] = true;
    }
    let mut x_sorted: Vec<usize> = x.to_vec();
    x_sorted.sort_unstable();
    x_sorted.dedup();
    let ell = x_sorted.len();
    let threshold = ell * (h - 1) + h;

    let mut alive: Vec<bool> = in_x.iter().map(|&b| !b).collect();
    for comp in components_among(g, &alive).parts() {
        if !g.is_clique(comp) {
            return Err(PreprocessError::MalformedInput(
                "removing the deletion set does not leave a cluster graph".into(),
            ));
        }
    }

    let mut budget = k;
    let mut trace = Vec::new();
    'fixpoint: loop {
        for comp in components_among(g, &alive).parts() {
            let classes = twin_classes(g, comp, &x_sorted, NeighborhoodMode::Open);
            for class in &classes.classes {
                if class.vertices.len() < threshold {
                    continue;
                }
                let removed: Vec<usize> = class.vertices[..h].to_vec();
                let delta = h * (comp.len() - h + class.signature.len());
                for &v in &removed {
                    alive[v] = false;
                }
                trace.push(TraceStep {
                    rule: RULE1,
                    removed,
                    budget_delta: delta,
                });
                if delta > budget {
                    return Ok(Rule1Outcome::NoInstance { trace });
                }
                budget -= delta;
                continue 'fixpoint;
            }
        }
        break;
    }

    let keep: Vec<usize> = (0..n).filter(|&v| alive[v] || in_x[v]).collect();
    let (graph, original_ids) = g.induced(&keep);
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in original_ids.iter().enumerate() {
        new_id[v] = i;
    }
    Ok(Rule1Outcome::Reduced(ReducedInstance {
        graph,
        original_ids,
        x: x_sorted.iter().map(|&v| new_id[v]).collect(),
        k: budget,
        h,
        trace,
    }))
}

/// A feasible solution with at most `k` deletions leaves at most `2kh`
/// vertices in components larger than `h`. Returns `No` when that is
/// violated, `Unknown` otherwise.
pub fn yes_instance_vertex_bound(g: &Graph, k: usize, h: usize) -> Answer {
    let big: usize = connected_components(g)
        .parts()
        .iter()
        .filter(|p| p.len() > h)
        .map(Vec::len)
        .sum();
    if big > 2usize.saturating_mul(k).saturating_mul(h) {
        Answer::No
    } else {
        Answer::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_cluster_deletion_set;
    use crate::oracle::{decide, opt_partition};
    use crate::random::{cluster_plus_x, rng};

    /// x = 0 adjacent to every vertex of a K5 on 1..=5.
    fn k5_plus_x() -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..=5).map(|v| (0, v)).collect();
        for u in 1..=5 {
            for v in u + 1..=5 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(6, edges).unwrap()
    }

    #[test]
    fn drop_small_examples() {
        let g = Graph::complete(3).disjoint_union(&Graph::complete(2));
        let d = drop_small_components(&g, 2);
        assert_eq!(d.graph, Graph::complete(3));
        assert_eq!(d.original_ids, vec![0, 1, 2]);
        assert_eq!(drop_small_components(&g, 3).graph.n(), 0);
        let two = Graph::complete(3).disjoint_union(&Graph::complete(3));
        assert_eq!(drop_small_components(&two, 2).graph.n(), 6);
    }

    #[test]
    fn trivial_examples() {
        let k4 = Graph::complete(4);
        let t = trivial_answer(&k4, 5, 1);
        assert_eq!((t.answer, t.rule), (Answer::No, Some(TrivialRule::AllEdges)));
        let t = trivial_answer(&k4, 4, 2);
        assert_eq!((t.answer, t.rule), (Answer::Yes, Some(TrivialRule::Matching)));
        let t = trivial_answer(&Graph::cycle(5), 0, 5);
        assert_eq!(t.answer, Answer::Yes);
        assert_eq!(trivial_answer(&k4, 1, 3).answer, Answer::Unknown);
    }

    #[test]
    fn rule1_removes_whole_clique_for_h1() {
        let g = k5_plus_x();
        let Rule1Outcome::Reduced(r) = rule1_apply(&g, &[0], 20, 1).unwrap() else {
            panic!("expected a reduced instance");
        };
        let deltas: Vec<usize> = r.trace.iter().map(|s| s.budget_delta).collect();
        assert_eq!(deltas, vec![5, 4, 3, 2, 1]);
        assert_eq!(r.k, 5);
        assert_eq!(r.graph.n(), 1);
        assert_eq!(r.original_ids, vec![0]);
        assert_eq!(r.x, vec![0]);
    }

    #[test]
    fn rule1_threshold_not_met() {
        // ell = 1, h = 3: threshold 1*2 + 3 = 5; a class of 4 stays.
        let mut edges: Vec<(usize, usize)> = (1..=4).map(|v| (0, v)).collect();
        for u in 1..=4 {
            for v in u + 1..=4 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(5, edges).unwrap();
        let Rule1Outcome::Reduced(r) = rule1_apply(&g, &[0], 3, 3).unwrap() else {
            panic!("expected a reduced instance");
        };
        assert!(r.trace.is_empty());
        assert_eq!(r.graph, g);
        assert_eq!(r.k, 3);
    }

    #[test]
    fn rule1_negative_budget() {
        let out = rule1_apply(&k5_plus_x(), &[0], 4, 1).unwrap();
        assert!(matches!(out, Rule1Outcome::NoInstance { ref trace } if trace.len() == 1));
    }

    #[test]
    fn rule1_rejects_non_cluster() {
        assert!(rule1_apply(&Graph::path(3), &[], 3, 1).is_err());
    }

    #[test]
    fn rule1_is_safe_on_random_instances() {
        let mut r = rng(21);
        let mut triggered = 0;
        for _ in 0..250 {
            let (g, x) = cluster_plus_x(&mut r, 9, 2);
            for h in 1..=4 {
                let opt = opt_partition(&g, h).cost;
                match rule1_apply(&g, &x, usize::MAX / 2, h).unwrap() {
                    Rule1Outcome::Reduced(red) => {
                        if !red.trace.is_empty() {
                            triggered += 1;
                        }
                        assert_eq!(opt, opt_partition(&red.graph, h).cost + red.total_delta());
                        for k in 0..=opt + 1 {
                            let reduced = rule1_apply(&g, &x, k, h).unwrap();
                            let yes = match reduced {
                                Rule1Outcome::Reduced(rr) => decide(&rr.graph, rr.k, h).is_some(),
                                Rule1Outcome::NoInstance { .. } => false,
                            };
                            assert_eq!(yes, opt <= k);
                        }
                    }
                    Rule1Outcome::NoInstance { .. } => unreachable!(),
                }
            }
        }
        assert!(triggered > 50, "only {triggered} instances exercised the rule");
    }

    #[test]
    fn dropping_small_components_keeps_opt() {
        let mut r = rng(22);
        for _ in 0..100 {
            let g = crate::random::random_graph(&mut r, 9, 0.2);
            for h in 1..=4 {
                let d = drop_small_components(&g, h);
                assert_eq!(opt_partition(&g, h).cost, opt_partition(&d.graph, h).cost);
            }
        }
    }

    #[test]
    fn vertex_bound_never_rejects_yes_instances() {
        assert_eq!(
            yes_instance_vertex_bound(&Graph::path(5), 1, 2),
            Answer::No
        );
        assert!(decide(&Graph::path(5), 1, 2).is_none());
        assert_eq!(yes_instance_vertex_bound(&Graph::path(4), 1, 2), Answer::Unknown);
        assert_eq!(yes_instance_vertex_bound(&Graph::new(0), 0, 1), Answer::Unknown);
        let mut r = rng(23);
        for _ in 0..150 {
            let g = crate::random::random_graph(&mut r, 9, 0.3);
            for h in 1..=4 {
                let opt = opt_partition(&g, h).cost;
                let d = drop_small_components(&g, h);
                for k in opt..opt + 2 {
                    assert_ne!(yes_instance_vertex_bound(&d.graph, k, h), Answer::No);
                }
            }
        }
    }

    #[test]
    fn cvd_sets_feed_rule1() {
        let mut r = rng(24);
        for _ in 0..40 {
            let g = crate::random::random_graph(&mut r, 8, 0.5);
            if let Some(x) = find_cluster_deletion_set(&g, 2) {
                assert!(rule1_apply(&g, &x, 100, 2).is_ok());
            }
        }
    }
}
