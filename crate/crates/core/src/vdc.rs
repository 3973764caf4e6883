//! Instances where deleting a small set `X` leaves a clique `C`.
//!
//! After the twin-class reduction, an optimal partition can be assumed to
//! have a bounded number `p` of parts, all but at most one (index `s`) of
//! size at least `⌈h/2⌉`. For each guess `(p, s)` a quadratic integer program
//! counts, per part, how many vertices of each class of `C` (grouped by
//! neighborhood in `X`) it receives and which vertices of `X` it holds.

use thiserror::Error;

use crate::graph::{twin_classes, Graph, NeighborhoodMode, VertexPartition};
use crate::ilp::{solve_ip_below, IlpError, IntegerProgramModel, Relation};
use crate::oracle::PartitionSolution;
use crate::preprocess::{rule1_apply, Rule1Outcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VdcError {
    #[error("removing the given set does not leave a clique")]
    NotCliqueComplement,
    #[error(transparent)]
    Ilp(#[from] IlpError),
}

/// Number of parts and the index (1-based) of the part exempt from the size
/// lower bound; `s = 0` exempts none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartGuess {
    pub p: usize,
    pub s: usize,
}

/// `2^(ℓ+1)(ℓ+1) + 2ℓ + 1`, saturating.
pub fn part_bound(ell: usize) -> usize {
    let pow = 1usize.checked_shl(ell as u32 + 1).unwrap_or(usize::MAX);
    pow.saturating_mul(ell + 1)
        .saturating_add(2 * ell)
        .saturating_add(1)
}

#[derive(Debug, Clone)]
pub struct VdcModel {
    pub model: IntegerProgramModel,
    pub guess: PartGuess,
    /// Nonempty classes of `C`, each with its neighborhood in `X`.
    pub classes: Vec<(Vec<usize>, Vec<usize>)>,
    pub x: Vec<usize>,
    /// `xs[r][c]` is the variable counting class `c` in part `r`.
    pub xs: Vec<Vec<usize>>,
    /// `ys[r][i]` is the indicator that `x[i]` is in part `r`.
    pub ys: Vec<Vec<usize>>,
}

fn complement_of(g: &Graph, x: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let c: Vec<usize> = (0..g.n()).filter(|v| xs.binary_search(v).is_err()).collect();
    (xs, c)
}

pub fn build_vdc_model(
    g: &Graph,
    x: &[usize],
    guess: PartGuess,
    h: usize,
) -> Result<VdcModel, VdcError> {
    assert!(h >= 1 && guess.p >= 1 && guess.s <= guess.p, "malformed guess");
    let (x, c) = complement_of(g, x);
    if !g.is_clique(&c) {
        return Err(VdcError::NotCliqueComplement);
    }
    let classes: Vec<(Vec<usize>, Vec<usize>)> = twin_classes(g, &c, &x, NeighborhoodMode::Open)
        .classes
        .into_iter()
        .map(|cl| (cl.vertices, cl.signature))
        .collect();
    let p = guess.p;
    let mut model = IntegerProgramModel::new();
    let mut xs = vec![Vec::new(); p];
    let mut ys = vec![Vec::new(); p];
    for r in 0..p {
        for (ci, (verts, _)) in classes.iter().enumerate() {
            let upper = verts.len().min(h) as i64;
            xs[r].push(model.add_variable(format!("x_{}_{}", r + 1, ci), 0, upper));
        }
        for &u in &x {
            ys[r].push(model.add_variable(format!("y_{}_{}", r + 1, u), 0, 1));
        }
    }
    for (ci, (verts, _)) in classes.iter().enumerate() {
        let terms = (0..p).map(|r| (xs[r][ci], 1)).collect();
        model.add_constraint(format!("cover_{ci}"), terms, Relation::Eq, verts.len() as i64);
    }
    for (i, &u) in x.iter().enumerate() {
        let terms = (0..p).map(|r| (ys[r][i], 1)).collect();
        model.add_constraint(format!("assign_{u}"), terms, Relation::Eq, 1);
    }
    let size_terms = |r: usize, sign: i64| -> Vec<(usize, i64)> {
        xs[r].iter().chain(&ys[r]).map(|&j| (j, sign)).collect()
    };
    let half = h.div_ceil(2) as i64;
    for r in 0..p {
        model.add_constraint(format!("upper_{}", r + 1), size_terms(r, 1), Relation::Le, h as i64);
        if r + 1 != guess.s {
            model.add_constraint(format!("lower_{}", r + 1), size_terms(r, 1), Relation::Ge, half);
        }
    }
    // Nonincreasing sizes among the parts sharing the lower bound.
    let big: Vec<usize> = (0..p).filter(|&r| r + 1 != guess.s).collect();
    for w in big.windows(2) {
        let mut terms = size_terms(w[0], 1);
        terms.extend(size_terms(w[1], -1));
        model.add_constraint(format!("order_{}_{}", w[0] + 1, w[1] + 1), terms, Relation::Ge, 0);
    }

    // cut_C: every pair of clique vertices in different parts.
    for r in 0..p {
        for q in r + 1..p {
            for &a in &xs[r] {
                for &b in &xs[q] {
                    model.quadratic.push((a, b, 1));
                }
            }
        }
    }
    // cut_XC: an edge u-v with u in X, v in C, in different parts.
    for (i, &u) in x.iter().enumerate() {
        for (ci, (_, sig)) in classes.iter().enumerate() {
            if sig.binary_search(&u).is_err() {
                continue;
            }
            for r in 0..p {
                for q in 0..p {
                    if r != q {
                        model.quadratic.push((ys[r][i], xs[q][ci], 1));
                    }
                }
            }
        }
    }
    // cut_X
    for (i, &u) in x.iter().enumerate() {
        for (j, &v) in x.iter().enumerate().skip(i + 1) {
            if !g.has_edge(u, v) {
                continue;
            }
            for r in 0..p {
                for q in 0..p {
                    if r != q {
                        model.quadratic.push((ys[r][i], ys[q][j], 1));
                    }
                }
            }
        }
    }
    assert!(model.max_constraint_coefficient() <= 1, "constraint coefficient out of range");
    assert!(
        model.quadratic.iter().all(|&(_, _, q)| q == 0 || q == 1)
            && model.linear.iter().all(|&(_, c)| c == 0 || c == 1),
        "objective coefficient out of range"
    );
    Ok(VdcModel {
        model,
        guess,
        classes,
        x,
        xs,
        ys,
    })
}

impl VdcModel {
    /// Parts described by `values`, filling each from its classes in
    /// identifier order.
    pub fn materialize(&self, values: &[i64]) -> Vec<Vec<usize>> {
        let mut next = vec![0usize; self.classes.len()];
        let mut parts = Vec::new();
        for r in 0..self.guess.p {
            let mut part = Vec::new();
            for (ci, (verts, _)) in self.classes.iter().enumerate() {
                let take = values[self.xs[r][ci]] as usize;
                part.extend_from_slice(&verts[next[ci]..next[ci] + take]);
                next[ci] += take;
            }
            for (i, &u) in self.x.iter().enumerate() {
                if values[self.ys[r][i]] == 1 {
                    part.push(u);
                }
            }
            parts.push(part);
        }
        parts
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdcOutcome {
    pub yes: bool,
    pub cost: usize,
    pub solution: PartitionSolution,
    pub best_guess: Option<PartGuess>,
    pub guesses: usize,
    /// Budget consumed by the twin-class reduction.
    pub reduction_delta: usize,
    pub nodes: usize,
}

/// Exact optimum for `g` when `g - X` is a clique, decided against `k`.
pub fn solve_vdc(g: &Graph, x: &[usize], k: usize, h: usize) -> Result<VdcOutcome, VdcError> {
    assert!(h >= 1, "component bound must be positive");
    let (_, c) = complement_of(g, x);
    if !g.is_clique(&c) {
        return Err(VdcError::NotCliqueComplement);
    }
    let reduced = match rule1_apply(g, x, usize::MAX / 4, h) {
        Ok(Rule1Outcome::Reduced(r)) => r,
        Ok(Rule1Outcome::NoInstance { .. }) => unreachable!("the budget cannot run out"),
        Err(_) => return Err(VdcError::NotCliqueComplement),
    };
    let mut parts: Vec<Vec<usize>> = reduced.trace.iter().map(|s| s.removed.clone()).collect();
    let rg = &reduced.graph;
    let n = rg.n();
    let mut best: Option<(i64, Vec<Vec<usize>>, PartGuess)> = None;
    let mut guesses = 0;
    let mut nodes = 0;
    if n > 0 {
        let p_max = part_bound(reduced.x.len()).min(n);
        for p in 1..=p_max {
            // Guesses whose size bounds cannot add up to n are skipped unsolved.
            if p * h < n {
                continue;
            }
            for s in 0..=p {
                let bounded = if s == 0 { p } else { p - 1 };
                if bounded * h.div_ceil(2) > n {
                    continue;
                }
                let guess = PartGuess { p, s };
                guesses += 1;
                let vm = build_vdc_model(rg, &reduced.x, guess, h)?;
                match solve_ip_below(&vm.model, best.as_ref().map(|b| b.0)) {
                    Ok(sol) => {
                        nodes += sol.nodes;
                        best = Some((sol.objective, vm.materialize(&sol.values), guess));
                    }
                    Err(IlpError::Infeasible) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    let (inner, best_guess) = match best {
        Some((_, parts, guess)) => (parts, Some(guess)),
        None if n == 0 => (Vec::new(), None),
        None => return Err(IlpError::Infeasible.into()),
    };
    parts.extend(
        inner
            .into_iter()
            .map(|p| p.into_iter().map(|v| reduced.original_ids[v]).collect()),
    );
    let solution = PartitionSolution::from_partition(g, VertexPartition::from_parts(parts));
    Ok(VdcOutcome {
        yes: solution.cost <= k,
        cost: solution.cost,
        solution,
        best_guess,
        guesses,
        reduction_delta: reduced.total_delta(),
        nodes,
    })
}

/// Repeatedly merges the two smallest parts while both have at most
/// `⌊h/2⌋` vertices. Merging never cuts an edge, so the cost cannot rise.
pub fn merge_small_parts(partition: &VertexPartition, h: usize) -> VertexPartition {
    let mut parts: Vec<Vec<usize>> = partition.parts().to_vec();
    loop {
        let mut small: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].len() <= h / 2).collect();
        if small.len() < 2 {
            break;
        }
        small.sort_by_key(|&i| (parts[i].len(), parts[i][0]));
        let (a, b) = (small[0].min(small[1]), small[0].max(small[1]));
        let moved = parts.remove(b);
        parts[a].extend(moved);
    }
    VertexPartition::from_parts(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::solve_ip;
    use crate::oracle::opt_partition;
    use crate::random::{clique_plus_x, random_graph, rng};

    #[test]
    fn part_bound_values() {
        assert_eq!(part_bound(0), 3);
        assert_eq!(part_bound(1), 11);
        assert_eq!(part_bound(2), 29);
    }

    #[test]
    fn k4_two_parts() {
        let g = Graph::complete(4);
        let vm = build_vdc_model(&g, &[], PartGuess { p: 2, s: 0 }, 2).unwrap();
        assert_eq!(vm.model.variables.len(), 2);
        let sol = solve_ip(&vm.model).unwrap();
        assert_eq!(sol.objective, 4);
        assert_eq!(sol.values, vec![2, 2]);
    }

    #[test]
    fn single_part_guess() {
        // x = 0 adjacent to all of the triangle 1, 2, 3.
        let g = Graph::complete(4);
        let guess = PartGuess { p: 1, s: 0 };
        for h in 1..=5 {
            let vm = build_vdc_model(&g, &[0], guess, h).unwrap();
            match solve_ip(&vm.model) {
                Ok(sol) => {
                    assert!(h >= 4);
                    assert_eq!(sol.objective, 0);
                }
                Err(IlpError::Infeasible) => assert!(h < 4),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn small_part_is_exempt() {
        let g = Graph::complete(5);
        let vm = build_vdc_model(&g, &[], PartGuess { p: 2, s: 1 }, 3).unwrap();
        let names: Vec<&str> = vm.model.constraints.iter().map(|c| c.name.as_str()).collect();
        assert!(!names.contains(&"lower_1"));
        let lower = vm.model.constraints.iter().find(|c| c.name == "lower_2").unwrap();
        assert_eq!(lower.rhs, 2);
    }

    #[test]
    fn rejects_non_clique_complement() {
        assert_eq!(
            build_vdc_model(&Graph::path(3), &[], PartGuess { p: 1, s: 0 }, 2).unwrap_err(),
            VdcError::NotCliqueComplement
        );
        assert!(solve_vdc(&Graph::path(3), &[], 1, 2).is_err());
        assert!(solve_vdc(&Graph::path(3), &[0], 1, 2).is_ok());
    }

    #[test]
    fn solve_examples() {
        let out = solve_vdc(&Graph::complete(4), &[], 4, 2).unwrap();
        assert!(out.yes);
        assert_eq!(out.cost, 4);
        let out = solve_vdc(&Graph::complete(5), &[], 5, 3).unwrap();
        assert!(!out.yes);
        assert_eq!(out.cost, 6);
        let out = solve_vdc(&Graph::complete(5), &[0], 0, 5).unwrap();
        assert_eq!(out.cost, 0);
        assert_eq!(out.best_guess.map(|g| g.p), Some(1));
    }

    #[test]
    fn matches_oracle() {
        let mut r = rng(51);
        for _ in 0..120 {
            let (g, x) = clique_plus_x(&mut r, 8, 2);
            for h in 1..=g.n() {
                let out = solve_vdc(&g, &x, usize::MAX, h).unwrap();
                assert_eq!(out.cost, opt_partition(&g, h).cost, "{g:?} x={x:?} h={h}");
                assert!(out.solution.verify(&g, h));
            }
        }
    }

    #[test]
    fn merging_small_parts_keeps_cost() {
        let mut r = rng(52);
        for _ in 0..150 {
            let g = random_graph(&mut r, 9, 0.4);
            for h in 1..=g.n() {
                let opt = opt_partition(&g, h);
                let merged = merge_small_parts(&opt.partition, h);
                let half = h.div_ceil(2);
                assert!(merged.parts().iter().filter(|p| p.len() < half).count() <= 1);
                assert!(merged.parts().iter().all(|p| p.len() <= h));
                let after = PartitionSolution::from_partition(&g, merged);
                assert!(after.cost <= opt.cost);
            }
        }
    }
}
