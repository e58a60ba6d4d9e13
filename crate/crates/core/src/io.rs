//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! p tpdag 4 4
//! s 0
//! t 3
//! k 1
//! e 0 1
//! e 0 2
//! e 1 3
//! e 2 3
//! ```
//!
//! Edges are ordered pairs for `tpdag` and unordered for `tsp`. Labels lie in
//! `[0, n)`. The canonical form written by [`write_instance`] has no comments,
//! the header followed by `s`, `t`, `k`, and edges in ascending order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{reachable_set, Direction, Graph, Vertex};
use crate::instance::{Instance, Mode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected a `p <tsp|tpdag> <n> <m>` header first")]
    MissingHeader,
    #[error("malformed header")]
    MalformedHeader,
    #[error("unknown record type `{0}`")]
    UnknownRecord(String),
    #[error("malformed `{0}` record")]
    MalformedRecord(char),
    #[error("repeated `{0}` record")]
    RepeatedRecord(char),
    #[error("missing `{0}` record")]
    MissingRecord(char),
    #[error("label {label} is outside [0, {n})")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self-loop at {0}")]
    SelfLoop(Vertex),
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("edge ({0}, {1}) closes a directed cycle")]
    Cyclic(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn fail<T>(line: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, kind })
}

fn numbers<const N: usize>(fields: &[&str]) -> Option<[usize; N]> {
    if fields.len() != N {
        return None;
    }
    let mut out = [0; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f.parse().ok()?;
    }
    Some(out)
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(Mode, usize, usize)> = None;
    let mut header_line = 0;
    let mut scalars: BTreeMap<char, usize> = BTreeMap::new();
    let mut edges: Vec<(usize, Vertex, Vertex)> = Vec::new();
    let mut seen_edges = BTreeSet::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        last_line = line;
        let fields: Vec<&str> = body.split_whitespace().collect();
        let tag = fields[0];
        let Some((mode, n, _)) = header else {
            if tag != "p" {
                return fail(line, ParseErrorKind::MissingHeader);
            }
            let parsed = (fields.len() == 4)
                .then(|| fields[1].parse::<Mode>().ok())
                .flatten()
                .zip(numbers::<2>(&fields[2..]));
            match parsed {
                Some((mode, [n, m])) => header = Some((mode, n, m)),
                None => return fail(line, ParseErrorKind::MalformedHeader),
            }
            header_line = line;
            continue;
        };
        let check_label = |label: usize| {
            if label < n {
                Ok(label)
            } else {
                fail(line, ParseErrorKind::LabelOutOfRange { label, n })
            }
        };
        match tag {
            "p" => return fail(line, ParseErrorKind::RepeatedRecord('p')),
            "s" | "t" | "k" => {
                let c = tag.chars().next().expect("nonempty tag");
                let Some([value]) = numbers::<1>(&fields[1..]) else {
                    return fail(line, ParseErrorKind::MalformedRecord(c));
                };
                let value = if c == 'k' { value } else { check_label(value)? };
                if scalars.insert(c, value).is_some() {
                    return fail(line, ParseErrorKind::RepeatedRecord(c));
                }
            }
            "e" => {
                let Some([u, v]) = numbers::<2>(&fields[1..]) else {
                    return fail(line, ParseErrorKind::MalformedRecord('e'));
                };
                check_label(u)?;
                check_label(v)?;
                if u == v {
                    return fail(line, ParseErrorKind::SelfLoop(u));
                }
                let key = match mode {
                    Mode::Tpdag => (u, v),
                    Mode::Tsp => (u.min(v), u.max(v)),
                };
                if !seen_edges.insert(key) {
                    return fail(line, ParseErrorKind::DuplicateEdge(u, v));
                }
                edges.push((line, u, v));
            }
            other => return fail(line, ParseErrorKind::UnknownRecord(other.to_string())),
        }
    }

    let Some((mode, n, m)) = header else {
        return fail(last_line.max(1), ParseErrorKind::MissingHeader);
    };
    if edges.len() != m {
        return fail(
            last_line,
            ParseErrorKind::EdgeCountMismatch {
                declared: m,
                found: edges.len(),
            },
        );
    }
    let mut get = |c: char| {
        scalars.remove(&c).ok_or(ParseError {
            line: header_line,
            kind: ParseErrorKind::MissingRecord(c),
        })
    };
    let (s, t, k) = (get('s')?, get('t')?, get('k')?);

    let mut graph = Graph::new(mode == Mode::Tpdag);
    for v in 0..n {
        graph.add_vertex(v);
    }
    for &(line, u, v) in &edges {
        if mode == Mode::Tpdag
            && reachable_set(&graph, v, Direction::Forward, &BTreeSet::new())
                .expect("labels checked")
                .contains(&u)
        {
            return fail(line, ParseErrorKind::Cyclic(u, v));
        }
        graph.add_edge(u, v).expect("duplicates and loops checked");
    }
    Ok(Instance {
        graph,
        s,
        t,
        k,
        mode,
    })
}

/// Canonical relabelling: the i-th smallest label becomes i.
pub fn compact_labels(g: &Graph) -> BTreeMap<Vertex, Vertex> {
    g.vertices().enumerate().map(|(i, v)| (v, i)).collect()
}

/// Writes the canonical text form. Labels are compacted to `[0, n)` in
/// ascending order (see [`compact_labels`]).
pub fn write_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let map = compact_labels(g);
    let mut edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (map[&u], map[&v]);
            match inst.mode {
                Mode::Tpdag => (a, b),
                Mode::Tsp => (a.min(b), a.max(b)),
            }
        })
        .collect();
    edges.sort_unstable();
    let mut out = String::new();
    let _ = writeln!(out, "p {} {} {}", inst.mode, g.vertex_count(), edges.len());
    let _ = writeln!(out, "s {}", map[&inst.s]);
    let _ = writeln!(out, "t {}", map[&inst.t]);
    let _ = writeln!(out, "k {}", inst.k);
    for (u, v) in edges {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// Hex SHA-256 of the canonical text form.
pub fn instance_hash(inst: &Instance) -> String {
    Sha256::digest(write_instance(inst).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "p tpdag 2 1\ns 0\nt 1\nk 0\ne 0 1\n";

    #[test]
    fn minimal_file_roundtrip() {
        let inst = parse_instance(MINIMAL).unwrap();
        assert_eq!(inst.graph.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!((inst.s, inst.t, inst.k, inst.mode), (0, 1, 0, Mode::Tpdag));
        assert_eq!(write_instance(&inst), MINIMAL);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn comments_and_edge_order_normalise() {
        let text = "# two paths\np tsp 4 4\ns 0\nt 3\nk 1\ne 3 2 # back\ne 0 1\ne 2 0\ne 1 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(
            write_instance(&inst),
            "p tsp 4 4\ns 0\nt 3\nk 1\ne 0 1\ne 0 2\ne 1 3\ne 2 3\n"
        );
    }

    fn kind(text: &str) -> (usize, ParseErrorKind) {
        let e = parse_instance(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert_eq!(
            kind("p tpdag 2 2\ns 0\nt 1\nk 0\ne 0 1\ne 0 1\n"),
            (6, ParseErrorKind::DuplicateEdge(0, 1))
        );
        assert_eq!(
            kind("p tsp 2 2\ns 0\nt 1\nk 0\ne 0 1\ne 1 0\n"),
            (6, ParseErrorKind::DuplicateEdge(1, 0))
        );
        assert_eq!(kind("s 0\n"), (1, ParseErrorKind::MissingHeader));
        assert_eq!(kind("p dag 2 1\n"), (1, ParseErrorKind::MalformedHeader));
        assert_eq!(
            kind("p tpdag 2 1\ns 0\nt 2\n"),
            (3, ParseErrorKind::LabelOutOfRange { label: 2, n: 2 })
        );
        assert_eq!(
            kind("p tpdag 2 2\ns 0\nt 1\nk 0\ne 0 1\n"),
            (
                5,
                ParseErrorKind::EdgeCountMismatch {
                    declared: 2,
                    found: 1
                }
            )
        );
        assert_eq!(
            kind("p tpdag 3 3\ns 0\nt 2\nk 0\ne 0 1\ne 1 2\ne 2 0\n"),
            (7, ParseErrorKind::Cyclic(2, 0))
        );
        assert_eq!(
            kind("p tpdag 2 1\ns 0\nk 0\ne 0 1\n"),
            (1, ParseErrorKind::MissingRecord('t'))
        );
        assert_eq!(
            kind("p tpdag 2 0\nx 1\n"),
            (2, ParseErrorKind::UnknownRecord("x".into()))
        );
        assert_eq!(
            kind("p tpdag 2 1\ns 0\ns 1\n"),
            (3, ParseErrorKind::RepeatedRecord('s'))
        );
        assert_eq!(
            kind("p tpdag 2 1\ne 1 1\n"),
            (2, ParseErrorKind::SelfLoop(1))
        );
        assert_eq!(
            kind("p tpdag 2 1\nk -1\n"),
            (2, ParseErrorKind::MalformedRecord('k'))
        );
    }

    #[test]
    fn writing_is_deterministic_and_compacts_labels() {
        let mut g = Graph::from_edges(true, &[(2, 5), (5, 9), (2, 9)]).unwrap();
        g.add_vertex(7);
        let inst = Instance::new(g, 2, 9, 1, Mode::Tpdag).unwrap();
        let a = write_instance(&inst);
        assert_eq!(a, write_instance(&inst.clone()));
        assert_eq!(a, "p tpdag 4 3\ns 0\nt 3\nk 1\ne 0 1\ne 0 3\ne 1 3\n");
        assert_eq!(instance_hash(&inst).len(), 64);
    }
}
