//! Text and JSON formats for hypergraphs and colorings. Vertex ids are
//! 1-based in every external format.
//!
//! Text hypergraph format: a header line `n k m`, then `m` lines of `k`
//! strictly increasing vertex ids. Blank lines and lines starting with `#`
//! are skipped. JSON mirror: `{"n": .., "k": .., "edges": [[..], ..]}`.
//!
//! Coloring format: one `R` or `B` token per vertex, whitespace separated.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Hypergraph, Vertex};

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphJson {
    n: u32,
    k: u32,
    edges: Vec<Vec<u32>>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("expected an integer, found {tok:?}") })
}

pub fn parse_text(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "missing `n k m` header".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse { line: hline, msg: "header must be `n k m`".into() });
    }
    let n: u32 = parse_num(fields[0], hline)?;
    let k: u32 = parse_num(fields[1], hline)?;
    let m: usize = parse_num(fields[2], hline)?;

    let mut flat = Vec::with_capacity(m.saturating_mul(k as usize).min(1 << 24));
    let mut seen = 0usize;
    for (line, l) in lines {
        if seen == m {
            return Err(Error::Parse { line, msg: format!("more than {m} edges") });
        }
        let start = flat.len();
        for tok in l.split_whitespace() {
            let v: u32 = parse_num(tok, line)?;
            if v == 0 || v > n {
                return Err(Error::Parse { line, msg: format!("vertex {v} outside 1..={n}") });
            }
            flat.push(v - 1);
        }
        let e = &flat[start..];
        if e.len() != k as usize {
            return Err(Error::Parse { line, msg: format!("expected {k} vertices, found {}", e.len()) });
        }
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse { line, msg: "edge vertices must be strictly increasing".into() });
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse { line: hline, msg: format!("header promises {m} edges, found {seen}") });
    }
    Hypergraph::from_flat(n, k, flat)
}

pub fn write_text(h: &Hypergraph) -> String {
    let mut out = String::with_capacity(16 + h.num_edges() * h.k() as usize * 4);
    let _ = writeln!(out, "{} {} {}", h.n(), h.k(), h.num_edges());
    for e in h.edges() {
        for (i, v) in e.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", v + 1);
        }
        out.push('\n');
    }
    out
}

pub fn parse_json(text: &str) -> Result<Hypergraph> {
    let j: HypergraphJson = serde_json::from_str(text)?;
    let mut edges = Vec::with_capacity(j.edges.len());
    for (i, e) in j.edges.into_iter().enumerate() {
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::input(format!("edge {i}: vertices must be strictly increasing")));
        }
        let e = e
            .into_iter()
            .map(|v| {
                if v == 0 || v > j.n {
                    Err(Error::input(format!("edge {i}: vertex {v} outside 1..={}", j.n)))
                } else {
                    Ok(v - 1)
                }
            })
            .collect::<Result<Vec<Vertex>>>()?;
        edges.push(e);
    }
    Hypergraph::new(j.n, j.k, edges)
}

pub fn write_json(h: &Hypergraph) -> String {
    let j = HypergraphJson {
        n: h.n(),
        k: h.k(),
        edges: h.edges().map(|e| e.iter().map(|v| v + 1).collect()).collect(),
    };
    serde_json::to_string(&j).expect("plain data serializes")
}

/// Parses either format, choosing JSON when the first non-space byte is `{`.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn parse_coloring(text: &str) -> Result<Coloring> {
    let mut colors = Vec::new();
    for (line, l) in content_lines(text) {
        for tok in l.split_whitespace() {
            colors.push(match tok {
                "R" | "r" => Color::Red,
                "B" | "b" => Color::Blue,
                _ => return Err(Error::Parse { line, msg: format!("expected R or B, found {tok:?}") }),
            });
        }
    }
    Ok(Coloring::new(colors))
}

pub fn write_coloring(c: &Coloring) -> String {
    let mut out: String = c
        .as_slice()
        .iter()
        .map(|&col| if col == Color::Red { "R" } else { "B" })
        .collect::<Vec<_>>()
        .join(" ");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_keeps_order_and_multi_edges() {
        let src = "6 3 3\n1 2 3\n4 5 6\n1 2 3\n";
        let h = parse_text(src).unwrap();
        assert_eq!(h.num_edges(), 3);
        assert_eq!(h.edge(1), &[3, 4, 5]);
        assert!(h.has_duplicate_edges());
        assert_eq!(write_text(&h), src);
    }

    #[test]
    fn json_mirror() {
        let h = parse_hypergraph(r#"{"n": 4, "k": 2, "edges": [[1, 2], [3, 4]]}"#).unwrap();
        assert_eq!(h.edge(1), &[2, 3]);
        assert_eq!(write_json(&h), r#"{"n":4,"k":2,"edges":[[1,2],[3,4]]}"#);
        assert_eq!(parse_json(&write_json(&h)).unwrap(), h);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = parse_text("4 2 2\n1 2\n3 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(matches!(parse_text("4 2 2\n1 2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_text("4 2 1\n1 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_text("4 2 1\n2 1\n"), Err(Error::Parse { .. })));
        assert!(parse_text("").is_err());
        assert!(parse_json(r#"{"n": 4, "k": 2, "edges": [[2, 1]]}"#).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let h = parse_text("# fixture\n4 2 1\n\n1 4\n").unwrap();
        assert_eq!(h.edge(0), &[0, 3]);
    }

    #[test]
    fn coloring_round_trip() {
        let c = Coloring::from_red_set(4, [0, 3]).unwrap();
        let s = write_coloring(&c);
        assert_eq!(s, "R B B R\n");
        assert_eq!(parse_coloring(&s).unwrap(), c);
        assert!(parse_coloring("R X").is_err());
    }
}
