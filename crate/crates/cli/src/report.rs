use std::fmt::Write as _;

use tfed_core::Edge;

/// Summary of one invocation, printed as `key: value` lines in a fixed order.
/// Absent fields are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub file: Option<String>,
    pub kind: Option<&'static str>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub h: Option<usize>,
    pub algorithm: Option<String>,
    pub decision: Option<&'static str>,
    pub cost: Option<usize>,
    pub solution: Option<Vec<Edge>>,
    pub components_before: Option<Vec<usize>>,
    pub components_after: Option<Vec<usize>>,
    pub nd: Option<usize>,
    /// Size of a cluster deletion set found within the budget, or `none`.
    pub cvd_size: Option<String>,
    /// Further `key: value` pairs specific to the command.
    pub details: Vec<(String, String)>,
    pub trace: Vec<String>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    pub timings: Vec<(String, u128)>,
}

pub fn decision(yes: bool) -> &'static str {
    if yes {
        "yes"
    } else {
        "no"
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn edge_list(edges: &[Edge]) -> String {
    edges.iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(" ")
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.push((key.to_string(), value.to_string()));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |key: &str, value: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{key}: {value}");
        };
        line("command", &self.command);
        if let Some(v) = &self.file {
            line("file", v);
        }
        if let Some(v) = self.kind {
            line("kind", &v);
        }
        for (key, v) in [("n", self.n), ("m", self.m), ("k", self.k), ("h", self.h)] {
            if let Some(v) = v {
                line(key, &v);
            }
        }
        if let Some(v) = &self.algorithm {
            line("algorithm", v);
        }
        if let Some(v) = self.decision {
            line("decision", &v);
        }
        if let Some(v) = self.cost {
            line("cost", &v);
        }
        if let Some(v) = &self.solution {
            line("solution", &edge_list(v));
        }
        if let Some(v) = &self.components_before {
            line("components_before", &join(v));
        }
        if let Some(v) = &self.components_after {
            line("components_after", &join(v));
        }
        if let Some(v) = self.nd {
            line("nd", &v);
        }
        if let Some(v) = &self.cvd_size {
            line("cvd_size", v);
        }
        for (key, v) in &self.details {
            line(key, v);
        }
        for v in &self.trace {
            line("trace", v);
        }
        for v in &self.warnings {
            line("warning", v);
        }
        if let Some(v) = &self.error {
            line("error", v);
        }
        for (key, ms) in &self.timings {
            line(&format!("time_{key}_us"), ms);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_key_order() {
        let mut r = RunReport::new("solve");
        r.h = Some(2);
        r.n = Some(3);
        r.decision = Some("yes");
        r.solution = Some(vec![(0, 1), (1, 2)]);
        r.detail("nodes", 4);
        r.warnings.push("careful".into());
        assert_eq!(
            r.to_text(),
            "command: solve\nn: 3\nh: 2\ndecision: yes\nsolution: 0-1 1-2\nnodes: 4\nwarning: careful\n"
        );
    }
}
