//! The subcommands, each producing a [`RunReport`].

use std::time::Instant;

use tfed_core::approx::{approx_solve, ApproxOutcome};
use tfed_core::arcs::{reach_counts, solve_arcs, DiInstance};
use tfed_core::decomp::{
    build_cvd_path_decomposition, dp_solve, dp_solve_interval, interval_clique_path, Rational,
};
use tfed_core::graph::{
    connected_components, find_cluster_deletion_set, is_cluster_graph, neighborhood_diversity,
};
use tfed_core::ilp::solve_nd;
use tfed_core::io::Instance;
use tfed_core::oracle::{component_sizes_after, maximum_matching, opt_partition};
use tfed_core::preprocess::{rule1_apply, trivial_answer, Rule1Outcome, TrivialRule};
use tfed_core::split::{recognize_split, solve_split, SplitCase};
use tfed_core::vdc::solve_vdc;
use tfed_core::{Edge, Graph, PartitionSolution, VertexPartition};

use crate::report::{decision, RunReport};

/// Clique sides up to this size are enumerated by the split solver when the
/// budget forces enumeration.
pub const SPLIT_ENUM_MAX: usize = 11;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub cvd_budget: usize,
    pub nd_max: usize,
    pub oracle_max: usize,
    pub intervals: Option<Vec<(Rational, Rational)>>,
    pub timings: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cvd_budget: 3,
            nd_max: 4,
            oracle_max: 12,
            intervals: None,
            timings: false,
        }
    }
}

fn component_sizes(g: &Graph) -> Vec<usize> {
    component_sizes_after(g, &[])
}

fn summary(report: &mut RunReport, inst: &Instance) {
    report.kind = Some("undirected");
    report.n = Some(inst.graph.n());
    report.m = Some(inst.graph.m());
    report.k = Some(inst.k);
    report.h = Some(inst.h);
}

fn record_solution(report: &mut RunReport, g: &Graph, edges: Vec<Edge>) {
    report.cost = Some(edges.len());
    report.components_after = Some(component_sizes_after(g, &edges));
    report.solution = Some(edges);
}

fn record_partition(report: &mut RunReport, g: &Graph, k: usize, sol: PartitionSolution) {
    report.decision = Some(decision(sol.cost <= k));
    record_solution(report, g, sol.deleted_edges);
}

pub fn solve(inst: &Instance, opts: &SolveOptions) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("solve");
    summary(&mut report, inst);
    let g = &inst.graph;
    report.components_before = Some(component_sizes(g));
    let (nd, _) = neighborhood_diversity(g);
    report.nd = Some(nd);
    let cvd = find_cluster_deletion_set(g, opts.cvd_budget);
    report.cvd_size = Some(cvd.as_ref().map_or("none".to_string(), |x| x.len().to_string()));
    select(&mut report, inst, opts, cvd);
    if opts.timings {
        report.timings.push(("solve".into(), start.elapsed().as_micros()));
    }
    report
}

fn select(report: &mut RunReport, inst: &Instance, opts: &SolveOptions, cvd: Option<Vec<usize>>) {
    let (g, k, h) = (&inst.graph, inst.k, inst.h);

    let trivial = trivial_answer(g, k, h);
    if let Some(rule) = trivial.rule {
        report.algorithm = Some(rule.name().into());
        let edges: Vec<Edge> = match rule {
            TrivialRule::AllEdges => g.edges().to_vec(),
            TrivialRule::Matching => {
                let kept = maximum_matching(g).expect("size checked by the trivial rule");
                g.edges().iter().copied().filter(|e| !kept.contains(e)).collect()
            }
            TrivialRule::AlreadyFeasible => Vec::new(),
        };
        report.decision = Some(decision(edges.len() <= k));
        record_solution(report, g, edges);
        return;
    }

    if let Some(view) = recognize_split(g) {
        let enumerates = view.clique_side.len() <= k + 1;
        if enumerates && view.clique_side.len() > SPLIT_ENUM_MAX {
            report.warnings.push(format!(
                "split solver skipped: clique side of {} vertices is too large to enumerate",
                view.clique_side.len()
            ));
        } else {
            let out = solve_split(g, k, h).expect("recognized as split");
            report.algorithm = Some("split".into());
            report.detail("clique_side", out.view.clique_side.len());
            let case = match out.case {
                SplitCase::LargeClique => "large-clique",
                SplitCase::SmallClique => "small-clique",
            };
            report.detail("split_case", case);
            report.decision = Some(decision(out.yes));
            if let Some(sol) = out.solution {
                record_solution(report, g, sol.deleted_edges);
            }
            return;
        }
    }

    if let Some(intervals) = &opts.intervals {
        report.algorithm = Some("interval-dp".into());
        let (ig, pd) = match interval_clique_path(intervals) {
            Ok(pair) => pair,
            Err(e) => {
                report.error = Some(e.to_string());
                return;
            }
        };
        if ig != *g {
            report.error = Some("the interval model does not match the instance graph".into());
            return;
        }
        report.detail("bags", pd.bags().len());
        match dp_solve_interval(g, &pd, k, h) {
            Ok(Some(sol)) => record_partition(report, g, k, sol),
            Ok(None) => report.decision = Some("no"),
            Err(e) => report.error = Some(e.to_string()),
        }
        return;
    }

    if let Some(x) = cvd {
        let rest: Vec<usize> = (0..g.n()).filter(|v| !x.contains(v)).collect();
        if g.is_clique(&rest) {
            report.algorithm = Some("vdc-iqp".into());
            match solve_vdc(g, &x, k, h) {
                Ok(out) => {
                    report.detail("guesses", out.guesses);
                    report.detail("reduction_delta", out.reduction_delta);
                    report.detail("nodes", out.nodes);
                    record_partition(report, g, k, out.solution);
                }
                Err(e) => report.error = Some(e.to_string()),
            }
        } else {
            report.algorithm = Some("cvd-dp".into());
            cvd_pipeline(report, g, &x, k, h);
        }
        return;
    }

    if report.nd.is_some_and(|nd| nd <= opts.nd_max) {
        report.algorithm = Some("nd-ilp".into());
        match solve_nd(g, k, h) {
            Ok(out) => {
                report.detail("variables", out.variables);
                report.detail("nodes", out.nodes);
                record_partition(report, g, k, out.solution);
            }
            Err(e) => report.error = Some(e.to_string()),
        }
        return;
    }

    if g.n() <= opts.oracle_max {
        report.algorithm = Some("oracle".into());
        record_partition(report, g, k, opt_partition(g, h));
        return;
    }

    report.algorithm = Some("approx".into());
    report
        .warnings
        .push("no exact solver applies; the solution may use up to 4k^2 deletions".into());
    approx_into(report, g, k, h);
}

fn cvd_pipeline(report: &mut RunReport, g: &Graph, x: &[usize], k: usize, h: usize) {
    let reduced = match rule1_apply(g, x, k, h) {
        Ok(Rule1Outcome::Reduced(r)) => r,
        Ok(Rule1Outcome::NoInstance { trace }) => {
            report.trace = trace.iter().map(ToString::to_string).collect();
            report.decision = Some("no");
            return;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return;
        }
    };
    report.trace = reduced.trace.iter().map(ToString::to_string).collect();
    let pd = build_cvd_path_decomposition(&reduced.graph, &reduced.x);
    report.detail("width", pd.width());
    match dp_solve(&reduced.graph, &pd, h, Some(reduced.k)) {
        Ok(Some(sol)) => {
            let mut parts: Vec<Vec<usize>> = reduced.trace.iter().map(|s| s.removed.clone()).collect();
            parts.extend(
                sol.partition
                    .parts()
                    .iter()
                    .map(|p| p.iter().map(|&v| reduced.original_ids[v]).collect()),
            );
            let full = PartitionSolution::from_partition(g, VertexPartition::from_parts(parts));
            record_partition(report, g, k, full);
        }
        Ok(None) => report.decision = Some("no"),
        Err(e) => report.error = Some(e.to_string()),
    }
}

fn approx_into(report: &mut RunReport, g: &Graph, k: usize, h: usize) {
    let out = approx_solve(g, k, h);
    report.detail("iterations", out.iterations());
    report.detail("guard_triggered", out.guard_triggered);
    for rec in &out.records {
        let ids: Vec<String> = rec.extracted.iter().map(usize::to_string).collect();
        report.detail(
            "extract",
            format!("component={} set={} cut={}", rec.component.len(), ids.join(","), rec.cut),
        );
    }
    match out.outcome {
        ApproxOutcome::NoInstance => report.decision = Some("no"),
        ApproxOutcome::Solution(f) => {
            report.decision = Some(if f.len() <= k { "yes" } else { "unknown" });
            record_solution(report, g, f);
        }
    }
}

pub fn oracle(inst: &Instance, timings: bool) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("oracle");
    summary(&mut report, inst);
    report.components_before = Some(component_sizes(&inst.graph));
    report.algorithm = Some("oracle".into());
    record_partition(&mut report, &inst.graph, inst.k, opt_partition(&inst.graph, inst.h));
    if timings {
        report.timings.push(("oracle".into(), start.elapsed().as_micros()));
    }
    report
}

pub fn approx(inst: &Instance, timings: bool) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("approx");
    summary(&mut report, inst);
    report.components_before = Some(component_sizes(&inst.graph));
    report.algorithm = Some("approx".into());
    report.detail("budget_bound", 4 * inst.k * inst.k);
    approx_into(&mut report, &inst.graph, inst.k, inst.h);
    if timings {
        report.timings.push(("approx".into(), start.elapsed().as_micros()));
    }
    report
}

fn arc_list(arcs: &[(usize, usize)]) -> String {
    arcs.iter().map(|(u, v)| format!("{u}>{v}")).collect::<Vec<_>>().join(" ")
}

fn di_summary(report: &mut RunReport, inst: &DiInstance) {
    report.kind = Some("directed");
    report.n = Some(inst.digraph.n());
    report.m = Some(inst.digraph.arc_count());
    report.k = Some(inst.k);
    report.h = Some(inst.h);
}

fn max_reach(d: &tfed_core::DiGraph) -> usize {
    reach_counts(d).into_iter().max().unwrap_or(0)
}

pub fn arcs(inst: &DiInstance, timings: bool) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new("arcs");
    di_summary(&mut report, inst);
    report.algorithm = Some("arc-branching".into());
    report.detail("reach_max_before", max_reach(&inst.digraph));
    match solve_arcs(inst) {
        Ok(out) => {
            report.decision = Some(decision(out.yes));
            if out.yes {
                report.cost = Some(out.deleted.len());
                report.detail("deleted_arcs", arc_list(&out.deleted));
                let rest = inst.digraph.arcs().iter().copied().filter(|a| !out.deleted.contains(a));
                let after = tfed_core::DiGraph::from_arcs(inst.digraph.n(), rest)
                    .expect("subset of valid arcs");
                report.detail("reach_max_after", max_reach(&after));
            }
            report.detail("nodes", out.nodes);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    if timings {
        report.timings.push(("arcs".into(), start.elapsed().as_micros()));
    }
    report
}

pub fn analyze(inst: &Instance, cvd_budget: usize) -> RunReport {
    let mut report = RunReport::new("analyze");
    summary(&mut report, inst);
    let g = &inst.graph;
    let sizes = component_sizes(g);
    report.components_before = Some(sizes);
    let (nd, _) = neighborhood_diversity(g);
    report.nd = Some(nd);
    let cvd = find_cluster_deletion_set(g, cvd_budget);
    report.cvd_size = Some(cvd.map_or("none".to_string(), |x| x.len().to_string()));
    report.detail("components", connected_components(g).len());
    report.detail("max_degree", (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0));
    report.detail("cluster_graph", is_cluster_graph(g));
    match recognize_split(g) {
        Some(view) => report.detail("split_clique_side", view.clique_side.len()),
        None => report.detail("split_clique_side", "none"),
    }
    report.detail("feasible_now", g.max_component_size() <= inst.h);
    report
}

pub fn analyze_directed(inst: &DiInstance) -> RunReport {
    let mut report = RunReport::new("analyze");
    di_summary(&mut report, inst);
    report.detail("acyclic", inst.digraph.is_acyclic());
    report.detail("reach_max", max_reach(&inst.digraph));
    report
}

