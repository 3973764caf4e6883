//! Bounded integer programs: the model type, an exact branch-and-bound solver,
//! a plain-text model format, and the neighborhood-diversity formulation.
//!
//! # Model text format
//!
//! ```text
//! \ comment
//! minimize
//! obj: <constant> [<sign> <coef> <var>]... [+ [ <sign> <coef> <var> * <var> ... ]]
//! subject to
//! <row>: <sign> <coef> <var> ... (<= | >= | =) <rhs>
//! bounds
//! <lower> <= <var> <= <upper>
//! general
//! <var> <var> ...
//! end
//! ```
//!
//! Coefficients are always written explicitly and signs are separate tokens.
//! A row without terms is written with the single term `0`. Variables are
//! declared, in order, by the `bounds` section; `general` lists them all
//! because every variable is integral.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, TwinClassification, TwinKind, VertexPartition};
use crate::oracle::PartitionSolution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IlpError {
    #[error("the program is infeasible")]
    Infeasible,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("model text line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

/// Minimize `constant + Σ c·x + Σ q·x·y` subject to linear rows and bounds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegerProgramModel {
    pub variables: Vec<Variable>,
    pub constraints: Vec<LinearConstraint>,
    pub constant: i64,
    pub linear: Vec<(usize, i64)>,
    pub quadratic: Vec<(usize, usize, i64)>,
}

impl IntegerProgramModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, lower: i64, upper: i64) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, i64)>,
        relation: Relation,
        rhs: i64,
    ) {
        self.constraints.push(LinearConstraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn evaluate(&self, values: &[i64]) -> i64 {
        self.constant
            + self.linear.iter().map(|&(j, c)| c * values[j]).sum::<i64>()
            + self
                .quadratic
                .iter()
                .map(|&(a, b, q)| q * values[a] * values[b])
                .sum::<i64>()
    }

    pub fn is_feasible(&self, values: &[i64]) -> bool {
        values.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(values)
                .all(|(var, &x)| var.lower <= x && x <= var.upper)
            && self.constraints.iter().all(|row| {
                let lhs: i64 = row.terms.iter().map(|&(j, a)| a * values[j]).sum();
                row.relation.holds(lhs, row.rhs)
            })
    }

    /// Largest absolute coefficient over all constraint rows.
    pub fn max_constraint_coefficient(&self) -> i64 {
        self.constraints
            .iter()
            .flat_map(|r| r.terms.iter().map(|&(_, a)| a.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
            && self.constraints.is_empty()
            && self.constant == 0
            && self.linear.is_empty()
            && self.quadratic.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpSolution {
    pub values: Vec<i64>,
    pub objective: i64,
    /// Search nodes visited.
    pub nodes: usize,
}

/// Exact minimization by depth-first branch and bound.
///
/// Each node tightens bounds by propagating every row to a fixpoint, then
/// compares a lower bound on the objective with the incumbent. Branching
/// takes the first unfixed variable and tries its values in ascending order.
/// Worst-case time is exponential in the number of variables.
pub fn solve_ip(model: &IntegerProgramModel) -> Result<IpSolution, IlpError> {
    solve_ip_below(model, None)
}

/// Like [`solve_ip`], but only looks for objective values strictly below
/// `cutoff`; `Infeasible` then also covers "nothing better than the cutoff".
pub fn solve_ip_below(model: &IntegerProgramModel, cutoff: Option<i64>) -> Result<IpSolution, IlpError> {
    let mut solver = Solver::new(model);
    solver.cutoff = cutoff;
    let lo: Vec<i64> = model.variables.iter().map(|v| v.lower).collect();
    let hi: Vec<i64> = model.variables.iter().map(|v| v.upper).collect();
    solver.search(lo, hi);
    match solver.best {
        Some((objective, values)) => Ok(IpSolution {
            values,
            objective,
            nodes: solver.nodes,
        }),
        None => Err(IlpError::Infeasible),
    }
}

struct Solver<'a> {
    model: &'a IntegerProgramModel,
    cost: Vec<i64>,
    /// Aggregate of the nonnegative equality rows, used for a ratio bound.
    surrogate: Option<(Vec<i64>, i64)>,
    /// Pairwise disjoint equality rows with nonnegative coefficients.
    blocks: Vec<usize>,
    best: Option<(i64, Vec<i64>)>,
    cutoff: Option<i64>,
    nodes: usize,
}

impl<'a> Solver<'a> {
    fn new(model: &'a IntegerProgramModel) -> Self {
        let n = model.variables.len();
        let mut cost = vec![0i64; n];
        for &(j, c) in &model.linear {
            cost[j] += c;
        }
        let mut weights = vec![0i64; n];
        let mut total = 0i64;
        let mut any = false;
        let mut blocks = Vec::new();
        let mut in_block = vec![false; n];
        for (ri, row) in model.constraints.iter().enumerate() {
            let usable = row.relation == Relation::Eq
                && row
                    .terms
                    .iter()
                    .all(|&(j, a)| a >= 0 && model.variables[j].lower >= 0);
            if usable && row.terms.iter().all(|&(j, _)| !in_block[j]) {
                blocks.push(ri);
                for &(j, _) in &row.terms {
                    in_block[j] = true;
                }
            }
            if usable {
                any = true;
                for &(j, a) in &row.terms {
                    weights[j] += a;
                }
                total += row.rhs;
            }
        }
        Solver {
            model,
            cost,
            surrogate: any.then_some((weights, total)),
            blocks,
            best: None,
            cutoff: None,
            nodes: 0,
        }
    }

    fn search(&mut self, mut lo: Vec<i64>, mut hi: Vec<i64>) {
        self.nodes += 1;
        if !self.propagate(&mut lo, &mut hi) {
            return;
        }
        let bound = self.lower_bound(&lo, &hi);
        if let Some(best) = self.incumbent() {
            if bound >= best {
                return;
            }
        }
        let Some(j) = (0..lo.len()).find(|&j| lo[j] < hi[j]) else {
            let value = self.model.evaluate(&lo);
            if self.incumbent().is_none_or(|b| value < b) {
                self.best = Some((value, lo));
            }
            return;
        };
        for v in lo[j]..=hi[j] {
            let mut l = lo.clone();
            let mut h = hi.clone();
            l[j] = v;
            h[j] = v;
            self.search(l, h);
        }
    }

    fn incumbent(&self) -> Option<i64> {
        match (&self.best, self.cutoff) {
            (Some((b, _)), _) => Some(*b),
            (None, c) => c,
        }
    }

    /// Tightens bounds until no row changes them; false on infeasibility.
    fn propagate(&self, lo: &mut [i64], hi: &mut [i64]) -> bool {
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return false;
        }
        loop {
            let mut changed = false;
            for row in &self.model.constraints {
                let le = matches!(row.relation, Relation::Le | Relation::Eq);
                let ge = matches!(row.relation, Relation::Ge | Relation::Eq);
                if le && !tighten_le(&row.terms, 1, row.rhs, lo, hi, &mut changed) {
                    return false;
                }
                if ge && !tighten_le(&row.terms, -1, -row.rhs, lo, hi, &mut changed) {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Quadratic terms with a fixed factor become linear costs on the other
    /// factor; terms with two free factors take their smallest corner value.
    /// Free variables with nonnegative cost that share a disjoint equality
    /// row must absorb the row's residual at the cheapest rate, and
    /// negative costs are bounded through the aggregate row.
    fn lower_bound(&self, lo: &[i64], hi: &[i64]) -> i64 {
        let fixed = |j: usize| lo[j] == hi[j];
        let mut bound = self.model.constant;
        let mut cost = self.cost.clone();
        for &(a, b, q) in &self.model.quadratic {
            if a == b {
                bound += if fixed(a) {
                    q * lo[a] * lo[a]
                } else if q >= 0 {
                    let m = if lo[a] <= 0 && 0 <= hi[a] { 0 } else { (lo[a] * lo[a]).min(hi[a] * hi[a]) };
                    q * m
                } else {
                    q * (lo[a] * lo[a]).max(hi[a] * hi[a])
                };
                continue;
            }
            match (fixed(a), fixed(b)) {
                (true, true) => bound += q * lo[a] * lo[b],
                (true, false) => cost[b] += q * lo[a],
                (false, true) => cost[a] += q * lo[b],
                (false, false) => {
                    bound += [lo[a] * lo[b], lo[a] * hi[b], hi[a] * lo[b], hi[a] * hi[b]]
                        .into_iter()
                        .map(|p| q * p)
                        .min()
                        .expect("four corners")
                }
            }
        }

        let mut covered = vec![false; lo.len()];
        for &ri in &self.blocks {
            let row = &self.model.constraints[ri];
            if row.terms.iter().any(|&(j, _)| !fixed(j) && cost[j] < 0) {
                continue;
            }
            let mut residual = row.rhs;
            let mut ratio: Option<(i64, i64)> = None;
            for &(j, a) in &row.terms {
                covered[j] = true;
                bound += cost[j] * lo[j];
                residual -= a * lo[j];
                if !fixed(j) && a > 0 && ratio.is_none_or(|(c, d)| cost[j] * d < c * a) {
                    ratio = Some((cost[j], a));
                }
            }
            if let Some((c, d)) = ratio {
                bound += residual.max(0) * c / d;
            }
        }

        let mut corner = 0i64;
        let mut negative = Vec::new();
        for j in 0..lo.len() {
            if covered[j] {
                continue;
            }
            let c = cost[j];
            if c >= 0 {
                bound += c * lo[j];
            } else {
                corner += c * hi[j];
                negative.push(j);
            }
        }
        let mut linear_neg = corner;
        if let Some((w, total)) = &self.surrogate {
            if negative.iter().all(|&j| w[j] > 0 || fixed(j)) {
                // x_j = lo_j + d_j with Σ w_j d_j bounded by the residual.
                let residual = total - (0..lo.len()).map(|j| w[j] * lo[j]).sum::<i64>();
                let mut base = 0i64;
                let mut ratio: Option<(i64, i64)> = None;
                for &j in &negative {
                    base += cost[j] * lo[j];
                    if !fixed(j) {
                        let r = (cost[j], w[j]);
                        if ratio.is_none_or(|(c, d)| (r.0 as i128) * (d as i128) < (c as i128) * (r.1 as i128)) {
                            ratio = Some(r);
                        }
                    }
                }
                let extra = match ratio {
                    // ceil(residual * c / d) with c < 0 < d.
                    Some((c, d)) => -((residual.max(0) * -c) / d),
                    None => 0,
                };
                linear_neg = linear_neg.max(base + extra);
            }
        }
        bound + linear_neg
    }
}

/// Propagates `sign * Σ a·x <= rhs`.
fn tighten_le(
    terms: &[(usize, i64)],
    sign: i64,
    rhs: i64,
    lo: &mut [i64],
    hi: &mut [i64],
    changed: &mut bool,
) -> bool {
    let min_act: i64 = terms
        .iter()
        .map(|&(j, a)| {
            let a = a * sign;
            if a > 0 {
                a * lo[j]
            } else {
                a * hi[j]
            }
        })
        .sum();
    let slack = rhs - min_act;
    if slack < 0 {
        return false;
    }
    for &(j, a) in terms {
        let a = a * sign;
        if a > 0 {
            let cap = lo[j] + slack / a;
            if cap < hi[j] {
                hi[j] = cap;
                *changed = true;
            }
        } else if a < 0 {
            let floor = hi[j] - slack / -a;
            if floor > lo[j] {
                lo[j] = floor;
                *changed = true;
            }
        }
    }
    true
}

fn write_term(out: &mut String, coef: i64, body: &str) {
    let sign = if coef < 0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {} {body}", coef.unsigned_abs());
}

/// Deterministic text form of `model`; see the module documentation.
pub fn emit_model_file(model: &IntegerProgramModel) -> String {
    let mut out = String::from("\\ integer program\nminimize\n");
    let name = |j: usize| model.variables[j].name.as_str();
    if !model.is_empty() {
        let mut line = format!("obj: {}", model.constant);
        for &(j, c) in &model.linear {
            write_term(&mut line, c, name(j));
        }
        if !model.quadratic.is_empty() {
            line.push_str(" + [");
            for &(a, b, q) in &model.quadratic {
                write_term(&mut line, q, &format!("{} * {}", name(a), name(b)));
            }
            line.push_str(" ]");
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("subject to\n");
    for row in &model.constraints {
        let mut line = format!("{}:", row.name);
        if row.terms.is_empty() {
            line.push_str(" 0");
        }
        for &(j, a) in &row.terms {
            write_term(&mut line, a, name(j));
        }
        let _ = writeln!(out, "{line} {} {}", row.relation.symbol(), row.rhs);
    }
    out.push_str("bounds\n");
    for v in &model.variables {
        let _ = writeln!(out, "{} <= {} <= {}", v.lower, v.name, v.upper);
    }
    out.push_str("general\n");
    if !model.variables.is_empty() {
        let names: Vec<&str> = model.variables.iter().map(|v| v.name.as_str()).collect();
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    General,
    End,
}

struct PendingRow {
    line: usize,
    name: String,
    terms: Vec<(i64, String)>,
    relation: Relation,
    rhs: i64,
}

/// Parses the format written by [`emit_model_file`].
pub fn parse_model_file(text: &str) -> Result<IntegerProgramModel, IlpError> {
    let mut section = Section::Start;
    let mut objective: Option<(usize, i64, Vec<(i64, String)>, Vec<(i64, String, String)>)> = None;
    let mut rows: Vec<PendingRow> = Vec::new();
    let mut model = IntegerProgramModel::new();
    let mut general: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| IlpError::Parse {
            line: line_no,
            reason,
        };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('\\') {
            continue;
        }
        match line {
            "minimize" => {
                section = Section::Objective;
                continue;
            }
            "subject to" => {
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "general" => {
                section = Section::General;
                continue;
            }
            "end" => {
                section = Section::End;
                continue;
            }
            _ => {}
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Objective => {
                if tokens.first() != Some(&"obj:") || objective.is_some() {
                    return Err(err("expected a single 'obj:' line".into()));
                }
                let constant = parse_int(tokens.get(1).copied(), line_no)?;
                let mut pos = 2;
                let mut linear = Vec::new();
                let mut quad = Vec::new();
                while pos < tokens.len() {
                    if tokens[pos] == "+" && tokens.get(pos + 1) == Some(&"[") {
                        pos += 2;
                        while tokens.get(pos) != Some(&"]") {
                            let (c, next) = parse_signed(&tokens, pos, line_no)?;
                            let (a, star, b) = (tokens.get(next), tokens.get(next + 1), tokens.get(next + 2));
                            match (a, star, b) {
                                (Some(a), Some(&"*"), Some(b)) => {
                                    quad.push((c, a.to_string(), b.to_string()))
                                }
                                _ => return Err(err("malformed product term".into())),
                            }
                            pos = next + 3;
                        }
                        pos += 1;
                    } else {
                        let (c, next) = parse_signed(&tokens, pos, line_no)?;
                        let name = tokens
                            .get(next)
                            .ok_or_else(|| err("missing variable name".into()))?;
                        linear.push((c, name.to_string()));
                        pos = next + 1;
                    }
                }
                objective = Some((line_no, constant, linear, quad));
            }
            Section::Constraints => {
                let name = tokens[0]
                    .strip_suffix(':')
                    .ok_or_else(|| err("row name must end with ':'".into()))?;
                if tokens.len() < 4 {
                    return Err(err("row is too short".into()));
                }
                let rel = match tokens[tokens.len() - 2] {
                    "<=" => Relation::Le,
                    ">=" => Relation::Ge,
                    "=" => Relation::Eq,
                    other => return Err(err(format!("unknown relation '{other}'"))),
                };
                let rhs = parse_int(tokens.last().copied(), line_no)?;
                let body = &tokens[1..tokens.len() - 2];
                let mut terms = Vec::new();
                if body != ["0"] {
                    let mut pos = 0;
                    while pos < body.len() {
                        let (c, next) = parse_signed(body, pos, line_no)?;
                        let var = body.get(next).ok_or_else(|| err("missing variable name".into()))?;
                        terms.push((c, var.to_string()));
                        pos = next + 1;
                    }
                }
                rows.push(PendingRow {
                    line: line_no,
                    name: name.to_string(),
                    terms,
                    relation: rel,
                    rhs,
                });
            }
            Section::Bounds => {
                if tokens.len() != 5 || tokens[1] != "<=" || tokens[3] != "<=" {
                    return Err(err("expected '<lower> <= <var> <= <upper>'".into()));
                }
                let lower = parse_int(Some(tokens[0]), line_no)?;
                let upper = parse_int(Some(tokens[4]), line_no)?;
                if model.variables.iter().any(|v| v.name == tokens[2]) {
                    return Err(err(format!("variable '{}' declared twice", tokens[2])));
                }
                model.add_variable(tokens[2], lower, upper);
            }
            Section::General => general.extend(tokens.iter().map(|t| t.to_string())),
            Section::Start | Section::End => {
                return Err(err(format!("unexpected content '{line}'")));
            }
        }
    }
    let index = |name: &str, line: usize| {
        model
            .variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| IlpError::Parse {
                line,
                reason: format!("undeclared variable '{name}'"),
            })
    };
    let mut linear_out = Vec::new();
    let mut quad_out = Vec::new();
    let mut constant = 0;
    if let Some((line, c, linear, quad)) = &objective {
        constant = *c;
        for (coef, name) in linear {
            linear_out.push((index(name, *line)?, *coef));
        }
        for (coef, a, b) in quad {
            quad_out.push((index(a, *line)?, index(b, *line)?, *coef));
        }
    }
    let mut constraints = Vec::new();
    for row in &rows {
        let terms = row
            .terms
            .iter()
            .map(|(c, name)| Ok((index(name, row.line)?, *c)))
            .collect::<Result<Vec<_>, IlpError>>()?;
        constraints.push(LinearConstraint {
            name: row.name.clone(),
            terms,
            relation: row.relation,
            rhs: row.rhs,
        });
    }
    let declared: Vec<&str> = model.variables.iter().map(|v| v.name.as_str()).collect();
    if general.iter().map(String::as_str).ne(declared.iter().copied()) {
        return Err(IlpError::Parse {
            line: text.lines().count(),
            reason: "'general' must list every variable in declaration order".into(),
        });
    }
    model.constant = constant;
    model.linear = linear_out;
    model.quadratic = quad_out;
    model.constraints = constraints;
    Ok(model)
}

fn parse_int(token: Option<&str>, line: usize) -> Result<i64, IlpError> {
    let t = token.ok_or_else(|| IlpError::Parse {
        line,
        reason: "missing number".into(),
    })?;
    t.parse().map_err(|_| IlpError::Parse {
        line,
        reason: format!("'{t}' is not an integer"),
    })
}

/// Reads `<sign> <coef>` starting at `pos`; returns the value and next position.
fn parse_signed(tokens: &[&str], pos: usize, line: usize) -> Result<(i64, usize), IlpError> {
    let sign = match tokens.get(pos) {
        Some(&"+") => 1,
        Some(&"-") => -1,
        other => {
            return Err(IlpError::Parse {
                line,
                reason: format!("expected a sign, found {other:?}"),
            })
        }
    };
    Ok((sign * parse_int(tokens.get(pos + 1).copied(), line)?, pos + 2))
}

/// Per-class vertex counts of one component.
pub type TypeVector = Vec<usize>;

/// Every vector with `0 <= a_i <= sizes[i]` and `1 <= Σ a_i <= h`, in
/// lexicographic order.
pub fn enumerate_types(sizes: &[usize], h: usize) -> Vec<TypeVector> {
    fn rec(sizes: &[usize], h: usize, cur: &mut Vec<usize>, sum: usize, out: &mut Vec<TypeVector>) {
        if cur.len() == sizes.len() {
            if sum >= 1 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = sizes[cur.len()].min(h - sum);
        for a in 0..=cap {
            cur.push(a);
            rec(sizes, h, cur, sum + a, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(sizes, h, &mut Vec::with_capacity(sizes.len()), 0, &mut out);
    out
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = match acc.checked_mul(n as u128 - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// The neighborhood-diversity program together with what is needed to turn
/// a solution back into a partition.
#[derive(Debug, Clone)]
pub struct NdModel {
    pub model: IntegerProgramModel,
    pub types: Vec<TypeVector>,
    pub classes: TwinClassification,
    /// Kept edges inside one component of each type.
    pub kept: Vec<i64>,
}

/// Checks that `classes` partition `V(g)` into cliques or independent sets
/// that are pairwise either fully joined or fully separated.
pub fn check_type_partition(g: &Graph, classes: &TwinClassification) -> Result<(), IlpError> {
    let all: Vec<usize> = (0..g.n()).collect();
    classes
        .partition()
        .validate(&all)
        .map_err(|e| IlpError::InvalidPartition(e.to_string()))?;
    for (i, c) in classes.classes.iter().enumerate() {
        if !g.is_clique(&c.vertices) && !g.is_independent(&c.vertices) {
            return Err(IlpError::InvalidPartition(format!(
                "class {i} is neither a clique nor independent"
            )));
        }
        if (c.kind == TwinKind::True) != g.is_clique(&c.vertices) {
            return Err(IlpError::InvalidPartition(format!("class {i} has the wrong kind")));
        }
        for (j, d) in classes.classes.iter().enumerate().skip(i + 1) {
            let joined = c
                .vertices
                .iter()
                .filter(|&&u| d.vertices.iter().all(|&v| g.has_edge(u, v)))
                .count();
            let separated = c
                .vertices
                .iter()
                .filter(|&&u| d.vertices.iter().all(|&v| !g.has_edge(u, v)))
                .count();
            if joined != c.vertices.len() && separated != c.vertices.len() {
                return Err(IlpError::InvalidPartition(format!(
                    "classes {i} and {j} are partially joined"
                )));
            }
        }
    }
    Ok(())
}

pub fn build_nd_model(g: &Graph, classes: &TwinClassification, h: usize) -> Result<NdModel, IlpError> {
    check_type_partition(g, classes)?;
    let sizes = classes.sizes();
    let t = sizes.len();
    let types = enumerate_types(&sizes, h);
    assert!(
        types.len() as u128 <= binomial(h + t, t),
        "type count exceeds the binomial bound"
    );
    let clique: Vec<bool> = classes.classes.iter().map(|c| c.kind == TwinKind::True).collect();
    let joined: Vec<Vec<bool>> = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| i != j && g.has_edge(classes.classes[i].vertices[0], classes.classes[j].vertices[0]))
                .collect()
        })
        .collect();

    let mut model = IntegerProgramModel::new();
    let mut kept = Vec::with_capacity(types.len());
    for a in &types {
        let upper = (0..t)
            .filter(|&i| a[i] > 0)
            .map(|i| sizes[i] / a[i])
            .min()
            .expect("type vectors are nonzero")
            .min(g.n());
        let name: Vec<String> = a.iter().map(usize::to_string).collect();
        let j = model.add_variable(format!("x_{}", name.join("_")), 0, upper as i64);
        let mut k = 0usize;
        for i in 0..t {
            if clique[i] {
                k += a[i] * a[i].saturating_sub(1) / 2;
            }
            for l in i + 1..t {
                if joined[i][l] {
                    k += a[i] * a[l];
                }
            }
        }
        kept.push(k as i64);
        if k > 0 {
            model.linear.push((j, -(k as i64)));
        }
    }
    for i in 0..t {
        let terms = types
            .iter()
            .enumerate()
            .filter(|(_, a)| a[i] > 0)
            .map(|(j, a)| (j, a[i] as i64))
            .collect();
        model.add_constraint(format!("class_{i}"), terms, Relation::Eq, sizes[i] as i64);
    }
    model.constant = g.m() as i64;
    Ok(NdModel {
        model,
        types,
        classes: classes.clone(),
        kept,
    })
}

impl NdModel {
    /// Realizes `values` as a partition: each component of type `a` takes the
    /// next `a_i` unused vertices of class `i`, in identifier order.
    pub fn materialize(&self, g: &Graph, values: &[i64]) -> PartitionSolution {
        let mut next = vec![0usize; self.classes.len()];
        let mut parts = Vec::new();
        for (a, &count) in self.types.iter().zip(values) {
            for _ in 0..count {
                let mut part = Vec::new();
                for (i, &ai) in a.iter().enumerate() {
                    part.extend_from_slice(&self.classes.classes[i].vertices[next[i]..next[i] + ai]);
                    next[i] += ai;
                }
                parts.push(part);
            }
        }
        PartitionSolution::from_partition(g, VertexPartition::from_parts(parts))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NdOutcome {
    pub yes: bool,
    pub cost: usize,
    pub solution: PartitionSolution,
    pub diversity: usize,
    pub variables: usize,
    pub nodes: usize,
}

/// Solves the instance through the neighborhood-diversity program.
pub fn solve_nd(g: &Graph, k: usize, h: usize) -> Result<NdOutcome, IlpError> {
    assert!(h >= 1, "component bound must be positive");
    let (diversity, classes) = crate::graph::neighborhood_diversity(g);
    let nd = build_nd_model(g, &classes, h)?;
    let sol = solve_ip(&nd.model)?;
    let solution = nd.materialize(g, &sol.values);
    debug_assert_eq!(solution.cost as i64, sol.objective);
    Ok(NdOutcome {
        yes: solution.cost <= k,
        cost: solution.cost,
        solution,
        diversity,
        variables: nd.model.variables.len(),
        nodes: sol.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::neighborhood_diversity;
    use crate::oracle::{opt_h2, opt_partition};
    use crate::random::{nd_graph, random_graph, rng};
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn type_enumeration_examples() {
        assert_eq!(enumerate_types(&[4], 2), vec![vec![1], vec![2]]);
        assert_eq!(
            enumerate_types(&[2, 2], 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]
        );
        assert_eq!(enumerate_types(&[1], 5), vec![vec![1]]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn k4_model() {
        let g = Graph::complete(4);
        let (_, classes) = neighborhood_diversity(&g);
        let nd = build_nd_model(&g, &classes, 2).unwrap();
        assert_eq!(nd.types, vec![vec![1], vec![2]]);
        assert_eq!(nd.kept, vec![0, 1]);
        assert_eq!(nd.model.constraints.len(), 1);
        assert_eq!(nd.model.constraints[0].terms, vec![(0, 1), (1, 2)]);
        assert_eq!(nd.model.constraints[0].rhs, 4);
        let sol = solve_ip(&nd.model).unwrap();
        assert_eq!(sol.values, vec![0, 2]);
        assert_eq!(sol.objective, 4);
        assert_eq!(sol.objective as usize, opt_h2(&g).unwrap());
        let text = emit_model_file(&nd.model);
        let body = text.split("subject to\n").nth(1).unwrap().split("bounds").next().unwrap();
        assert_eq!(body.lines().filter(|l| l.contains(" = ")).count(), 1);
    }

    #[test]
    fn c4_model() {
        let g = Graph::cycle(4);
        let (t, classes) = neighborhood_diversity(&g);
        assert_eq!(t, 2);
        let nd = build_nd_model(&g, &classes, 4).unwrap();
        let kept = |a: &[usize]| nd.kept[nd.types.iter().position(|x| x == a).unwrap()];
        assert_eq!(kept(&[1, 1]), 1);
        assert_eq!(kept(&[2, 2]), 4);
        let nd2 = build_nd_model(&g, &classes, 2).unwrap();
        assert!(!nd2.types.contains(&vec![2, 2]));
        assert_eq!(solve_ip(&nd2.model).unwrap().objective, 2);
    }

    #[test]
    fn edgeless_objective_is_zero() {
        let g = Graph::new(3);
        let out = solve_nd(&g, 0, 2).unwrap();
        assert_eq!(out.cost, 0);
        let (_, classes) = neighborhood_diversity(&g);
        assert_eq!(build_nd_model(&g, &classes, 2).unwrap().model.constant, 0);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut m = IntegerProgramModel::new();
        let x = m.add_variable("x", 0, 5);
        m.add_constraint("a", vec![(x, 1)], Relation::Eq, 1);
        m.add_constraint("b", vec![(x, 1)], Relation::Eq, 2);
        assert_eq!(solve_ip(&m), Err(IlpError::Infeasible));
    }

    #[test]
    fn quadratic_objective() {
        // min (x - y)^2 style: x*x - 2 x*y + y*y with x + y = 5.
        let mut m = IntegerProgramModel::new();
        let x = m.add_variable("x", 0, 5);
        let y = m.add_variable("y", 0, 5);
        m.add_constraint("s", vec![(x, 1), (y, 1)], Relation::Eq, 5);
        m.quadratic = vec![(x, x, 1), (x, y, -2), (y, y, 1)];
        let sol = solve_ip(&m).unwrap();
        assert_eq!(sol.objective, 1);
        assert_eq!(sol.values, vec![2, 3]);
        m.quadratic = vec![(x, y, 1)];
        assert_eq!(solve_ip(&m).unwrap().objective, 0);
    }

    #[test]
    fn solve_nd_examples() {
        let k4 = Graph::complete(4);
        assert!(solve_nd(&k4, 4, 2).unwrap().yes);
        assert_eq!(solve_nd(&k4, 4, 2).unwrap().cost, 4);
        assert!(!solve_nd(&k4, 3, 2).unwrap().yes);
        assert_eq!(solve_nd(&Graph::cycle(6), 0, 6).unwrap().cost, 0);
    }

    #[test]
    fn rejects_non_type_partition() {
        let g = Graph::path(3);
        let (_, mut classes) = neighborhood_diversity(&g);
        let merged: Vec<usize> = classes.classes.iter().flat_map(|c| c.vertices.clone()).collect();
        classes.classes.truncate(1);
        classes.classes[0].vertices = merged;
        classes.classes[0].vertices.sort_unstable();
        assert!(matches!(
            build_nd_model(&g, &classes, 2),
            Err(IlpError::InvalidPartition(_))
        ));
    }

    #[test]
    fn solve_nd_matches_oracle() {
        let mut r = rng(41);
        for round in 0..120 {
            let g = if round % 2 == 0 {
                let n = r.gen_range(1..=9);
                let t = r.gen_range(1..=4);
                nd_graph(&mut r, n, t)
            } else {
                random_graph(&mut r, 7, 0.4)
            };
            for h in 1..=g.n() {
                let out = solve_nd(&g, usize::MAX, h).unwrap();
                assert_eq!(out.cost, opt_partition(&g, h).cost, "{g:?} h={h}");
                assert!(out.solution.verify(&g, h));
            }
        }
    }

    #[test]
    fn objective_identity_for_feasible_assignments() {
        let mut r = rng(42);
        for _ in 0..60 {
            let n = r.gen_range(1..=10);
            let t = r.gen_range(1..=3);
            let g = nd_graph(&mut r, n, t);
            let (_, classes) = neighborhood_diversity(&g);
            let h = r.gen_range(1..=n);
            let nd = build_nd_model(&g, &classes, h).unwrap();
            // Walk every feasible assignment for small models.
            let mut values = vec![0i64; nd.model.variables.len()];
            let mut checked = 0;
            enumerate_assignments(&nd.model, 0, &mut values, &mut |vals| {
                let sol = nd.materialize(&g, vals);
                assert_eq!(sol.cost as i64, nd.model.evaluate(vals));
                assert!(sol.partition.parts().iter().all(|p| p.len() <= h));
                checked += 1;
            });
            assert!(checked >= 1);
        }
    }

    fn enumerate_assignments(
        m: &IntegerProgramModel,
        j: usize,
        values: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        if j == values.len() {
            if m.is_feasible(values) {
                f(values);
            }
            return;
        }
        // Prune on partial class sums.
        for v in m.variables[j].lower..=m.variables[j].upper {
            values[j] = v;
            let over = m.constraints.iter().any(|row| {
                row.terms.iter().filter(|&&(i, _)| i <= j).map(|&(i, a)| a * values[i]).sum::<i64>() > row.rhs
            });
            if over {
                break;
            }
            enumerate_assignments(m, j + 1, values, f);
        }
        values[j] = 0;
    }

    #[test]
    fn model_text_examples() {
        let empty = emit_model_file(&IntegerProgramModel::new());
        assert_eq!(empty, "\\ integer program\nminimize\nsubject to\nbounds\ngeneral\nend\n");
        assert_eq!(parse_model_file(&empty).unwrap(), IntegerProgramModel::new());
        let mut m = IntegerProgramModel::new();
        let a = m.add_variable("a", 0, 3);
        let b = m.add_variable("b", -2, 2);
        m.constant = 6;
        m.linear = vec![(a, -1), (b, 2)];
        m.quadratic = vec![(a, b, 1)];
        m.add_constraint("r0", vec![(a, 1), (b, -1)], Relation::Le, 1);
        m.add_constraint("r1", vec![], Relation::Ge, -4);
        let text = emit_model_file(&m);
        assert!(text.contains("obj: 6 - 1 a + 2 b + [ + 1 a * b ]"));
        assert!(text.contains("r1: 0 >= -4"));
        assert_eq!(parse_model_file(&text).unwrap(), m);
        assert!(parse_model_file("minimize\nobj: 1 + 2 zz\nend\n").is_err());
    }

    proptest! {
        #[test]
        fn nd_model_round_trips(seed in any::<u64>()) {
            let mut r = rng(seed);
            let n = r.gen_range(1..=8);
            let g = nd_graph(&mut r, n, 3);
            let (_, classes) = neighborhood_diversity(&g);
            let nd = build_nd_model(&g, &classes, r.gen_range(1..=n)).unwrap();
            let text = emit_model_file(&nd.model);
            prop_assert_eq!(emit_model_file(&parse_model_file(&text).unwrap()), text.clone());
            prop_assert_eq!(parse_model_file(&text).unwrap(), nd.model);
        }
    }
}
