//! Text formats for instances and interval models.
//!
//! An instance file starts with a header `p tfed <n> <m> <k> <h> <kind>`,
//! where kind is `undirected` or `directed`, followed by exactly `m` lines
//! `e u v` (edges) or `a u v` (arcs). Lines starting with `c` are comments
//! and blank lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::arcs::DiInstance;
use crate::decomp::Rational;
use crate::graph::{DiGraph, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    Semantic { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: usize,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    Undirected(Instance),
    Directed(DiInstance),
}

impl ParsedInstance {
    pub fn to_text(&self) -> String {
        match self {
            ParsedInstance::Undirected(i) => serialize_instance(i),
            ParsedInstance::Directed(d) => serialize_di_instance(d),
        }
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        reason: reason.into(),
    }
}

fn semantic(line: usize, reason: impl Into<String>) -> IoError {
    IoError::Semantic {
        line,
        reason: reason.into(),
    }
}

fn number(token: &str, line: usize, what: &str) -> Result<usize, IoError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("{what} '{token}' is not a nonnegative integer")))
}

struct Header {
    n: usize,
    m: usize,
    k: usize,
    h: usize,
    directed: bool,
    line: usize,
}

fn parse_header(tokens: &[&str], line: usize) -> Result<Header, IoError> {
    if tokens.len() != 7 || tokens[1] != "tfed" {
        return Err(parse_err(line, "expected 'p tfed <n> <m> <k> <h> <undirected|directed>'"));
    }
    let directed = match tokens[6] {
        "undirected" => false,
        "directed" => true,
        other => return Err(parse_err(line, format!("unknown graph kind '{other}'"))),
    };
    let header = Header {
        n: number(tokens[2], line, "vertex count")?,
        m: number(tokens[3], line, "edge count")?,
        k: number(tokens[4], line, "budget")?,
        h: number(tokens[5], line, "component bound")?,
        directed,
        line,
    };
    if header.h == 0 {
        return Err(semantic(line, "component bound must be positive"));
    }
    Ok(header)
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance, IoError> {
    let mut header: Option<Header> = None;
    let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = tokens.first() else {
            continue;
        };
        match first {
            "c" => continue,
            _ if first.starts_with('c') => continue,
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "second header line"));
                }
                header = Some(parse_header(&tokens, line)?);
            }
            "e" | "a" => {
                let Some(hd) = &header else {
                    return Err(parse_err(line, "edge line before the header"));
                };
                if tokens.len() != 3 {
                    return Err(parse_err(line, format!("expected '{first} u v'")));
                }
                let u = number(tokens[1], line, "identifier")?;
                let v = number(tokens[2], line, "identifier")?;
                if (first == "a") != hd.directed {
                    let kind = if hd.directed { "directed" } else { "undirected" };
                    return Err(semantic(line, format!("'{first}' line in a {kind} instance")));
                }
                if u >= hd.n || v >= hd.n {
                    return Err(semantic(line, format!("identifier out of range [0, {})", hd.n)));
                }
                if u == v {
                    return Err(semantic(line, format!("self-loop at {u}")));
                }
                pairs.push((u, v, line));
            }
            other => return Err(parse_err(line, format!("unknown line type '{other}'"))),
        }
    }
    let Some(hd) = header else {
        return Err(parse_err(last_line.max(1), "missing header line"));
    };
    if pairs.len() != hd.m {
        return Err(semantic(
            hd.line,
            format!("header declares {} edges but {} were listed", hd.m, pairs.len()),
        ));
    }
    let duplicate = |line: usize| semantic(line, "duplicate edge");
    if hd.directed {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, line) in &pairs {
            if !seen.insert((u, v)) {
                return Err(duplicate(line));
            }
        }
        if hd.k > pairs.len() {
            return Err(semantic(hd.line, "budget exceeds the arc count"));
        }
        let digraph = DiGraph::from_arcs(hd.n, pairs.iter().map(|&(u, v, _)| (u, v)))
            .map_err(|e| semantic(hd.line, e.to_string()))?;
        Ok(ParsedInstance::Directed(DiInstance {
            digraph,
            k: hd.k,
            h: hd.h,
        }))
    } else {
        let mut seen = std::collections::HashSet::new();
        for &(u, v, line) in &pairs {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(duplicate(line));
            }
        }
        let graph = Graph::from_edges(hd.n, pairs.iter().map(|&(u, v, _)| (u, v)))
            .map_err(|e: GraphError| semantic(hd.line, e.to_string()))?;
        Ok(ParsedInstance::Undirected(Instance {
            graph,
            k: hd.k,
            h: hd.h,
        }))
    }
}

pub fn serialize_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = format!("p tfed {} {} {} {} undirected\n", g.n(), g.m(), inst.k, inst.h);
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

pub fn serialize_di_instance(inst: &DiInstance) -> String {
    let d = &inst.digraph;
    let mut out = format!("p tfed {} {} {} {} directed\n", d.n(), d.arc_count(), inst.k, inst.h);
    for &(u, v) in d.arcs() {
        let _ = writeln!(out, "a {u} {v}");
    }
    out
}

/// One closed interval per line, `low high`, each endpoint an integer or a
/// fraction `p/q`. Comment and blank lines are skipped.
pub fn parse_intervals(text: &str) -> Result<Vec<(Rational, Rational)>, IoError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() || tokens[0].starts_with('c') {
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(line, "expected 'low high'"));
        }
        let parse = |t: &str| {
            t.parse::<Rational>()
                .map_err(|_| parse_err(line, format!("'{t}' is not a rational number")))
        };
        let (lo, hi) = (parse(tokens[0])?, parse(tokens[1])?);
        if lo > hi {
            return Err(semantic(line, "interval with low > high"));
        }
        out.push((lo, hi));
    }
    Ok(out)
}

pub fn serialize_intervals(intervals: &[(Rational, Rational)]) -> String {
    intervals.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: &str = "c triangle\np tfed 3 3 2 2 undirected\ne 0 1\ne 1 2\ne 0 2\n";

    #[test]
    fn parses_triangle() {
        let ParsedInstance::Undirected(inst) = parse_instance(K3).unwrap() else {
            panic!("expected an undirected instance");
        };
        assert_eq!(inst.graph, Graph::complete(3));
        assert_eq!((inst.k, inst.h), (2, 2));
        assert_eq!(serialize_instance(&inst), "p tfed 3 3 2 2 undirected\ne 0 1\ne 0 2\ne 1 2\n");
    }

    #[test]
    fn rejects_bad_input() {
        let semantic_line = |text: &str| match parse_instance(text) {
            Err(IoError::Semantic { line, .. }) => line,
            other => panic!("expected a semantic error, got {other:?}"),
        };
        assert_eq!(semantic_line("p tfed 3 2 0 1 undirected\ne 0 1\ne 1 0\n"), 3);
        assert_eq!(semantic_line("p tfed 3 1 0 1 undirected\na 0 1\n"), 2);
        assert_eq!(semantic_line("p tfed 3 1 0 1 undirected\ne 0 3\n"), 2);
        assert_eq!(semantic_line("p tfed 3 1 0 1 undirected\ne 1 1\n"), 2);
        assert_eq!(semantic_line("p tfed 3 2 0 1 undirected\ne 0 1\n"), 1);
        assert_eq!(semantic_line("p tfed 3 1 0 0 undirected\ne 0 1\n"), 1);
        assert_eq!(semantic_line("p tfed 3 1 2 1 directed\na 0 1\n"), 1);
        assert!(matches!(parse_instance("e 0 1\n"), Err(IoError::Parse { line: 1, .. })));
        assert!(matches!(parse_instance(""), Err(IoError::Parse { .. })));
        assert!(matches!(
            parse_instance("p tfed 3 1 0 1 sideways\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("p tfed 3 1 0 1 undirected\ne x 1\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn directed_round_trip() {
        let text = "p tfed 3 2 1 2 directed\na 1 0\na 0 2\n";
        let parsed = parse_instance(text).unwrap();
        let ParsedInstance::Directed(d) = &parsed else {
            panic!("expected a directed instance");
        };
        assert!(d.digraph.has_arc(1, 0) && !d.digraph.has_arc(0, 1));
        assert_eq!(parse_instance(&parsed.to_text()).unwrap(), parsed);
    }

    #[test]
    fn intervals() {
        let iv = parse_intervals("0 1/2\nc skip\n1/3 2\n").unwrap();
        assert_eq!(iv.len(), 2);
        assert_eq!(iv[0].1, Rational::new(1, 2));
        assert_eq!(parse_intervals(&serialize_intervals(&iv)).unwrap(), iv);
        assert!(matches!(parse_intervals("2 1\n"), Err(IoError::Semantic { line: 1, .. })));
        assert!(matches!(parse_intervals("a b\n"), Err(IoError::Parse { line: 1, .. })));
    }
}
