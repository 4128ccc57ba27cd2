//! Text formats: the canonical edge list, DIMACS, and weight files.
//!
//! Canonical format: `#` comment lines, one `n m` header, then `m` lines
//! `u v` with 0-based ids. DIMACS (`c` comments, `p edge n m`, `e u v`
//! with 1-based ids) is detected automatically and converted on load.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    InvalidGraph { line: usize, source: GraphError },
    #[error("no graph data found")]
    Empty,
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| malformed(line, format!("invalid {what} `{tok}`")))
}

/// Parses a graph, auto-detecting canonical vs DIMACS format.
pub fn parse_graph(input: &str) -> Result<Graph, ParseError> {
    for line in input.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        return if t.starts_with('p') || t.starts_with('c') || t.starts_with('e') {
            parse_dimacs(input)
        } else {
            parse_canonical(input)
        };
    }
    Err(ParseError::Empty)
}

fn parse_canonical(input: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if toks.len() != 2 {
                    return Err(malformed(lineno, "expected header `n m`"));
                }
                let n = parse_usize(toks[0], lineno, "vertex count")?;
                let m = parse_usize(toks[1], lineno, "edge count")?;
                header = Some((n, m));
            }
            Some((_, m)) => {
                if edges.len() == m {
                    return Err(malformed(lineno, format!("unexpected data after {m} edges")));
                }
                if toks.len() != 2 {
                    return Err(malformed(lineno, "expected edge `u v`"));
                }
                let u = parse_usize(toks[0], lineno, "endpoint")?;
                let v = parse_usize(toks[1], lineno, "endpoint")?;
                edges.push((u, v));
                last_line = lineno;
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::Empty)?;
    if edges.len() != m {
        return Err(malformed(
            last_line.max(1),
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges).map_err(|source| ParseError::InvalidGraph {
        line: last_line.max(1),
        source,
    })
}

fn parse_dimacs(input: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(malformed(lineno, "duplicate problem line"));
                }
                if toks.len() != 4 {
                    return Err(malformed(lineno, "expected `p edge n m`"));
                }
                let n = parse_usize(toks[2], lineno, "vertex count")?;
                let m = parse_usize(toks[3], lineno, "edge count")?;
                header = Some((n, m));
            }
            "e" => {
                if header.is_none() {
                    return Err(malformed(lineno, "edge before problem line"));
                }
                if toks.len() != 3 {
                    return Err(malformed(lineno, "expected `e u v`"));
                }
                let u = parse_usize(toks[1], lineno, "endpoint")?;
                let v = parse_usize(toks[2], lineno, "endpoint")?;
                if u == 0 || v == 0 {
                    return Err(malformed(lineno, "DIMACS ids are 1-based"));
                }
                edges.push((u - 1, v - 1));
                last_line = lineno;
            }
            other => {
                return Err(malformed(lineno, format!("unknown line type `{other}`")));
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::Empty)?;
    if edges.len() != m {
        return Err(malformed(
            last_line.max(1),
            format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges).map_err(|source| ParseError::InvalidGraph {
        line: last_line.max(1),
        source,
    })
}

/// Renders a graph in the canonical format.
pub fn format_canonical(g: &Graph, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for e in g.edges() {
        let (u, v) = e.endpoints();
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses a weight file: `u v w` triples, whitespace-separated, 0-based,
/// order-insensitive. Lines that do not start with a digit are ignored,
/// so a full certificate document is accepted as-is.
pub fn parse_weights(input: &str) -> Result<BTreeMap<Edge, i32>, ParseError> {
    let mut weights = BTreeMap::new();
    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if !line.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(malformed(lineno, "expected weight line `u v w`"));
        }
        let u = parse_usize(toks[0], lineno, "endpoint")?;
        let v = parse_usize(toks[1], lineno, "endpoint")?;
        let w: i32 = toks[2]
            .parse()
            .map_err(|_| malformed(lineno, format!("invalid weight `{}`", toks[2])))?;
        if w < 1 {
            return Err(malformed(lineno, format!("weight must be positive, got {w}")));
        }
        if u == v {
            return Err(malformed(lineno, format!("self-loop at vertex {u}")));
        }
        if weights.insert(Edge::new(u, v), w).is_some() {
            return Err(malformed(lineno, format!("duplicate weight for edge {{{u},{v}}}")));
        }
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = format_canonical(&g, Some("c4"));
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.vertex_count(), 4);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn dimacs_is_detected_and_converted() {
        let text = "c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("3 2\n0 1\nbogus line\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Malformed {
                line: 3,
                message: "invalid endpoint `bogus`".into()
            }
        );
        let err = parse_graph("2 1\n0 5\n").unwrap_err();
        assert!(matches!(err, ParseError::InvalidGraph { line: 2, .. }));
        let err = parse_graph("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 2, .. }));
    }

    #[test]
    fn weights_parser_skips_non_numeric_lines() {
        let text = "certificate v1\n# comment\n0 1 2\nvertex 0 wdeg 2 color 2\n1 2 3\n";
        let w = parse_weights(text).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w[&Edge::new(0, 1)], 2);
        assert_eq!(w[&Edge::new(1, 2)], 3);
    }

    #[test]
    fn weights_parser_rejects_bad_lines() {
        assert!(parse_weights("0 1\n").is_err());
        assert!(parse_weights("0 1 0\n").is_err());
        assert!(parse_weights("0 1 2\n1 0 3\n").is_err());
    }
}
