//! Instance generators built from bin packing and hitting set instances, with
//! small exact deciders for the source problems.
//!
//! Each generator lays out identifiers deterministically: the bin (or
//! element) vertices first, then the gadgets in index order.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::arcs::{solve_arcs, DiInstance};
use crate::graph::{DiGraph, Graph};
use crate::io::Instance;

pub const BINPACK_ITEM_CAP: usize = 12;
pub const HITTING_UNIVERSE_CAP: usize = 16;
/// Largest total item size accepted (sizes are unary).
pub const UNARY_CAP: usize = 100_000;
/// Largest graph the generators will materialize.
pub const VERTEX_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("{size} exceeds the cap of {cap} for {what}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid source instance: {0}")]
    InvalidInstance(String),
    #[error("alpha = {alpha} is below the required minimum {min}")]
    AlphaTooSmall { alpha: u64, min: u64 },
    #[error("the construction needs {vertices} vertices, more than the cap of {VERTEX_CAP}")]
    TooLarge { vertices: String },
    #[error("c = {c} does not yield an equivalent instance")]
    ParameterTooSmall { c: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinPackingInstance {
    pub sizes: Vec<usize>,
    pub bins: usize,
    pub capacity: usize,
}

impl BinPackingInstance {
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<(), HardnessError> {
        let bad = |s: &str| Err(HardnessError::InvalidInstance(s.into()));
        if self.sizes.is_empty() {
            return bad("no items");
        }
        if self.sizes.contains(&0) {
            return bad("item sizes must be positive");
        }
        if self.bins == 0 || self.capacity == 0 {
            return bad("bin count and capacity must be positive");
        }
        let total = self.sizes.iter().try_fold(0usize, |a, &s| a.checked_add(s));
        match total {
            Some(t) if t <= UNARY_CAP => Ok(()),
            _ => Err(HardnessError::CapExceeded {
                what: "total item size",
                size: total.unwrap_or(usize::MAX),
                cap: UNARY_CAP,
            }),
        }
    }
}

/// Exhaustive search over bin assignments, largest items first, skipping
/// bins whose load equals an earlier bin's.
pub fn binpack_decide(bp: &BinPackingInstance) -> Result<bool, HardnessError> {
    bp.validate()?;
    if bp.sizes.len() > BINPACK_ITEM_CAP {
        return Err(HardnessError::CapExceeded {
            what: "item count",
            size: bp.sizes.len(),
            cap: BINPACK_ITEM_CAP,
        });
    }
    let mut sizes = bp.sizes.clone();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if sizes[0] > bp.capacity || bp.total() > bp.bins.saturating_mul(bp.capacity) {
        return Ok(false);
    }
    let mut loads = vec![0usize; bp.bins.min(sizes.len())];
    Ok(place(&sizes, 0, &mut loads, bp.capacity))
}

fn place(sizes: &[usize], i: usize, loads: &mut [usize], cap: usize) -> bool {
    if i == sizes.len() {
        return true;
    }
    for b in 0..loads.len() {
        if loads[..b].contains(&loads[b]) || loads[b] + sizes[i] > cap {
            continue;
        }
        loads[b] += sizes[i];
        let ok = place(sizes, i + 1, loads, cap);
        loads[b] -= sizes[i];
        if ok {
            return true;
        }
    }
    false
}

/// Connected gadget shapes available to the bin packing construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetFamily {
    Clique,
    Path,
    Star,
}

impl GadgetFamily {
    pub fn name(self) -> &'static str {
        match self {
            GadgetFamily::Clique => "clique",
            GadgetFamily::Path => "path",
            GadgetFamily::Star => "star",
        }
    }

    /// Edges of the gadget on `size` vertices starting at `base`.
    fn edges(self, base: usize, size: usize, out: &mut Vec<(usize, usize)>) {
        match self {
            GadgetFamily::Clique => {
                for u in base..base + size {
                    for v in u + 1..base + size {
                        out.push((u, v));
                    }
                }
            }
            GadgetFamily::Path => out.extend((base + 1..base + size).map(|v| (v - 1, v))),
            GadgetFamily::Star => out.extend((base + 1..base + size).map(|v| (base, v))),
        }
    }
}

impl std::str::FromStr for GadgetFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clique" => Ok(GadgetFamily::Clique),
            "path" => Ok(GadgetFamily::Path),
            "star" => Ok(GadgetFamily::Star),
            other => Err(format!("unknown gadget family '{other}'")),
        }
    }
}

/// Budget, bound and host gadget size of the bin packing construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinpackParameters {
    pub k: usize,
    pub h: usize,
    pub h_prime: usize,
}

pub fn binpack_parameters(bp: &BinPackingInstance) -> BinpackParameters {
    let k = bp.total() * (bp.bins - 1);
    let h = 10 * bp.capacity + k;
    BinpackParameters {
        k,
        h,
        h_prime: h - bp.capacity - 1,
    }
}

/// Bin vertices `v_1..v_t`, item gadgets `A_i` of `a_i` vertices joined to
/// every bin vertex, and host gadgets `H_j` of `h - C - 1` vertices joined to
/// `v_j`. The result is a yes-instance iff the items fit.
pub fn gen_binpack(bp: &BinPackingInstance, family: GadgetFamily) -> Result<Instance, HardnessError> {
    bp.validate()?;
    let params = binpack_parameters(bp);
    let t = bp.bins;
    let a = bp.total();
    let n = t + a + t * params.h_prime;
    if n > VERTEX_CAP {
        return Err(HardnessError::TooLarge {
            vertices: n.to_string(),
        });
    }
    let mut edges = Vec::new();
    let mut next = t;
    for &size in &bp.sizes {
        family.edges(next, size, &mut edges);
        for v in next..next + size {
            edges.extend((0..t).map(|x| (x, v)));
        }
        next += size;
    }
    for j in 0..t {
        family.edges(next, params.h_prime, &mut edges);
        edges.extend((next..next + params.h_prime).map(|v| (j, v)));
        next += params.h_prime;
    }
    let graph = Graph::from_edges(n, edges).expect("construction edges are valid");
    Ok(Instance {
        graph,
        k: params.k,
        h: params.h,
    })
}

/// Exact parameters of the split construction, before any size check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitParameters {
    pub alpha: BigUint,
    pub k: BigUint,
    pub h: BigUint,
    pub h_prime: BigUint,
    pub vertices: BigUint,
}

/// `alpha` defaults to `n^100` for `n` items.
pub fn split_parameters(bp: &BinPackingInstance, alpha: Option<u64>) -> SplitParameters {
    let n = BigUint::from(bp.sizes.len());
    let t = BigUint::from(bp.bins);
    let a = BigUint::from(bp.total());
    let c = BigUint::from(bp.capacity);
    let alpha = alpha.map(BigUint::from).unwrap_or_else(|| n.pow(100));
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let t_minus = &t - &one;
    let n_minus = if n.is_zero() { BigUint::zero() } else { &n - &one };
    let pairs_t = &t * &t_minus / &two;
    let k = &alpha * &t_minus * &a + &two * &n * &n_minus + &two * &n * &t_minus + pairs_t;
    let h = BigUint::from(4u32) * (&alpha * &c + &n + &k);
    let h_prime = &h - (&alpha * &c + &two * &n + &one);
    let vertices = &t + &t * &h_prime + &alpha * &a + &two * &n;
    SplitParameters {
        alpha,
        k,
        h,
        h_prime,
        vertices,
    }
}

/// The split graph construction: bin vertices `X`, pendant sets `P_j` of
/// `h'` vertices on `v_j`, and per item a set `A_i` of `alpha * a_i`
/// vertices joined to `X` and to a pair `B_i`. `X` and all `B_i` form a clique.
pub fn gen_split(bp: &BinPackingInstance, alpha_override: Option<u64>) -> Result<Instance, HardnessError> {
    bp.validate()?;
    let n = bp.sizes.len() as u64;
    if let Some(alpha) = alpha_override {
        let min = 2 * n * n;
        if alpha < min {
            return Err(HardnessError::AlphaTooSmall { alpha, min });
        }
    }
    let params = split_parameters(bp, alpha_override);
    let too_large = || HardnessError::TooLarge {
        vertices: params.vertices.to_string(),
    };
    let total = params.vertices.to_usize().filter(|&v| v <= VERTEX_CAP).ok_or_else(too_large)?;
    let alpha = params.alpha.to_usize().ok_or_else(too_large)?;
    let k = params.k.to_usize().ok_or_else(too_large)?;
    let h = params.h.to_usize().ok_or_else(too_large)?;
    let h_prime = params.h_prime.to_usize().ok_or_else(too_large)?;

    let t = bp.bins;
    let mut edges = Vec::new();
    let mut next = t;
    for j in 0..t {
        edges.extend((next..next + h_prime).map(|v| (j, v)));
        next += h_prime;
    }
    let mut clique: Vec<usize> = (0..t).collect();
    for &size in &bp.sizes {
        let a_block = next..next + alpha * size;
        let b_pair = [a_block.end, a_block.end + 1];
        for v in a_block.clone() {
            edges.extend((0..t).map(|x| (x, v)));
            edges.extend(b_pair.iter().map(|&b| (b, v)));
        }
        clique.extend(b_pair);
        next = a_block.end + 2;
    }
    debug_assert_eq!(next, total);
    for (i, &u) in clique.iter().enumerate() {
        edges.extend(clique[i + 1..].iter().map(|&v| (u, v)));
    }
    let graph = Graph::from_edges(total, edges).expect("construction edges are valid");
    Ok(Instance { graph, k, h })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSetInstance {
    pub universe: usize,
    pub family: Vec<Vec<usize>>,
    pub k: usize,
}

impl HittingSetInstance {
    pub fn validate(&self) -> Result<(), HardnessError> {
        for set in &self.family {
            if set.is_empty() {
                return Err(HardnessError::InvalidInstance("empty family member".into()));
            }
            if set.iter().any(|&x| x >= self.universe) {
                return Err(HardnessError::InvalidInstance("element outside the universe".into()));
            }
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() {
                return Err(HardnessError::InvalidInstance("repeated element in a set".into()));
            }
        }
        Ok(())
    }
}

/// Whether some set of at most `k` elements meets every family member.
pub fn hitting_decide(hs: &HittingSetInstance) -> Result<bool, HardnessError> {
    hs.validate()?;
    if hs.universe > HITTING_UNIVERSE_CAP {
        return Err(HardnessError::CapExceeded {
            what: "universe size",
            size: hs.universe,
            cap: HITTING_UNIVERSE_CAP,
        });
    }
    let masks: Vec<u32> = hs
        .family
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &x| m | 1 << x))
        .collect();
    Ok((0u32..1 << hs.universe)
        .filter(|b| b.count_ones() as usize <= hs.k)
        .any(|b| masks.iter().all(|&m| m & b != 0)))
}

/// Vertex layout of the hitting set construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingLayout {
    /// `(v_x, v'_x)` per element.
    pub element: Vec<(usize, usize)>,
    /// `v_F` per family member.
    pub set: Vec<usize>,
    pub h: usize,
    /// Sinks hanging off each `v'_x`.
    pub per_element: usize,
}

/// Elements become arcs `v_x -> v'_x`, each `v'_x` gets `n^(c-1)` sinks, and
/// each set `F` becomes a vertex `v_F` with arcs to its elements and to
/// `h + 1 - |F| n^(c-1)` sinks of its own, where `h = n^c`.
pub fn hitting_dag_layout(hs: &HittingSetInstance, c: u32) -> Result<(DiGraph, HittingLayout), HardnessError> {
    hs.validate()?;
    let n = hs.universe;
    if n < 2 || c < 2 {
        return Err(HardnessError::ParameterTooSmall { c });
    }
    let too_large = || HardnessError::TooLarge {
        vertices: format!("more than {VERTEX_CAP}"),
    };
    let h = n.checked_pow(c).filter(|&h| h <= VERTEX_CAP).ok_or_else(too_large)?;
    let per_element = h / n;
    let element: Vec<(usize, usize)> = (0..n).map(|x| (2 * x, 2 * x + 1)).collect();
    let set: Vec<usize> = (0..hs.family.len()).map(|i| 2 * n + i).collect();
    let mut next = 2 * n + hs.family.len();
    let mut arcs = Vec::new();
    for &(vx, vpx) in &element {
        arcs.push((vx, vpx));
        arcs.extend((next..next + per_element).map(|s| (vpx, s)));
        next += per_element;
    }
    for (f, members) in hs.family.iter().enumerate() {
        let vf = set[f];
        arcs.extend(members.iter().map(|&x| (vf, element[x].0)));
        let own = h + 1 - members.len() * per_element;
        arcs.extend((next..next + own).map(|s| (vf, s)));
        next += own;
        if next > VERTEX_CAP {
            return Err(too_large());
        }
    }
    let d = DiGraph::from_arcs(next, arcs).expect("construction arcs are valid");
    Ok((
        d,
        HittingLayout {
            element,
            set,
            h,
            per_element,
        },
    ))
}

/// The hitting set construction with `k' = k` and `h = n^c`.
///
/// Equivalence is certain once `n^(c-1) >= 1 + 2 max |F|`: cutting `v_x -> v'_x`
/// then removes enough of every `v_F` reach containing `x`. Below that the
/// instance is solved exactly and compared with [`hitting_decide`]; a
/// mismatch, or an instance too large to check, gives `ParameterTooSmall`.
pub fn gen_hitting_dag(hs: &HittingSetInstance, c: u32) -> Result<DiInstance, HardnessError> {
    let (digraph, layout) = hitting_dag_layout(hs, c)?;
    let inst = DiInstance {
        digraph,
        k: hs.k,
        h: layout.h,
    };
    let widest = hs.family.iter().map(Vec::len).max().unwrap_or(0);
    if layout.per_element > 2 * widest {
        return Ok(inst);
    }
    let expected = hitting_decide(hs)?;
    match solve_arcs(&inst) {
        Ok(out) if out.yes == expected => Ok(inst),
        _ => Err(HardnessError::ParameterTooSmall { c }),
    }
}

/// Smallest `c` in `2..=max_c` accepted by [`gen_hitting_dag`].
pub fn smallest_accepted_c(hs: &HittingSetInstance, max_c: u32) -> Option<(u32, DiInstance)> {
    (2..=max_c).find_map(|c| gen_hitting_dag(hs, c).ok().map(|d| (c, d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::reach_counts;

    fn bp(sizes: &[usize], bins: usize, capacity: usize) -> BinPackingInstance {
        BinPackingInstance {
            sizes: sizes.to_vec(),
            bins,
            capacity,
        }
    }

    #[test]
    fn binpack_oracle() {
        assert!(binpack_decide(&bp(&[1, 1], 2, 1)).unwrap());
        assert!(!binpack_decide(&bp(&[1, 1], 1, 1)).unwrap());
        assert!(binpack_decide(&bp(&[2, 2, 3], 2, 4)).unwrap());
        assert!(!binpack_decide(&bp(&[3, 3, 3], 2, 4)).unwrap());
        assert!(binpack_decide(&bp(&[5, 4, 3, 3, 2, 1], 3, 6)).unwrap());
        assert!(matches!(
            binpack_decide(&bp(&[1; 13], 13, 1)),
            Err(HardnessError::CapExceeded { .. })
        ));
        assert!(binpack_decide(&bp(&[0], 1, 1)).is_err());
    }

    #[test]
    fn binpack_layout() {
        let inst = gen_binpack(&bp(&[1, 1], 2, 1), GadgetFamily::Clique).unwrap();
        assert_eq!((inst.k, inst.h), (2, 12));
        assert_eq!(inst.graph.n(), 2 + 2 + 2 * 10);
        // Item vertices see both bins, host vertices only their own.
        assert!(inst.graph.has_edge(0, 2) && inst.graph.has_edge(1, 3));
        assert!(inst.graph.has_edge(0, 4) && !inst.graph.has_edge(1, 4));
        assert!(inst.graph.is_clique(&(4..14).collect::<Vec<_>>()));
        let no = gen_binpack(&bp(&[1, 1], 1, 1), GadgetFamily::Path).unwrap();
        assert_eq!((no.k, no.h), (0, 10));
        assert_eq!(no.graph.max_component_size(), 11);
    }

    #[test]
    fn split_layout() {
        let b = bp(&[1, 1], 2, 1);
        assert!(matches!(gen_split(&b, Some(7)), Err(HardnessError::AlphaTooSmall { min: 8, .. })));
        let inst = gen_split(&b, Some(8)).unwrap();
        let p = split_parameters(&b, Some(8));
        assert_eq!(p.k, BigUint::from(25u32));
        assert_eq!(inst.k, 25);
        assert_eq!(inst.h, 4 * (8 + 2 + 25));
        assert!(crate::split::recognize_split(&inst.graph).is_some());
        let default = split_parameters(&b, None);
        assert_eq!(default.alpha, BigUint::from(2u32).pow(100));
        assert!(matches!(gen_split(&b, None), Err(HardnessError::TooLarge { .. })));
    }

    #[test]
    fn hitting_oracle() {
        let hs = |family: Vec<Vec<usize>>, k| HittingSetInstance {
            universe: 3,
            family,
            k,
        };
        assert!(!hitting_decide(&hs(vec![vec![0], vec![1]], 1)).unwrap());
        assert!(hitting_decide(&hs(vec![vec![0, 1], vec![1, 2]], 1)).unwrap());
        assert!(hitting_decide(&hs(vec![], 0)).unwrap());
        assert!(hitting_decide(&hs(vec![vec![]], 1)).is_err());
    }

    #[test]
    fn hitting_dag_example() {
        let hs = HittingSetInstance {
            universe: 2,
            family: vec![vec![0]],
            k: 1,
        };
        let inst = gen_hitting_dag(&hs, 2).unwrap();
        assert_eq!(inst.h, 4);
        assert_eq!(inst.digraph.n(), 12);
        assert!(inst.digraph.is_acyclic());
        assert_eq!(reach_counts(&inst.digraph)[4], 8);
        assert!(solve_arcs(&inst).unwrap().yes);
        let two = HittingSetInstance {
            universe: 2,
            family: vec![vec![0], vec![1]],
            k: 1,
        };
        let (_, inst) = smallest_accepted_c(&two, 4).unwrap();
        assert!(!solve_arcs(&inst).unwrap().yes);
        let empty = HittingSetInstance {
            universe: 2,
            family: vec![],
            k: 0,
        };
        let inst = gen_hitting_dag(&empty, 2).unwrap();
        assert!(solve_arcs(&inst).unwrap().deleted.is_empty());
        assert!(matches!(gen_hitting_dag(&empty, 1), Err(HardnessError::ParameterTooSmall { c: 1 })));
    }
}
