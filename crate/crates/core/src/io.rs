//! Text formats: a plain edge list and McKay's graph6.
//!
//! Edge list: first line `n m`, then `m` lines `u v` with 0-based labels.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(Format::EdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("byte {byte}: {msg}")]
    Byte { byte: usize, msg: String },
}

fn line_err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

fn byte_err(byte: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Byte { byte, msg: msg.into() }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => {
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| byte_err(0, "empty input"))?;
            parse_graph6(line)
        }
    }
}

pub fn emit_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => emit_edge_list(g),
        Format::Graph6 => {
            let mut s = emit_graph6(g);
            s.push('\n');
            s
        }
    }
}

/// Guesses the format: an edge list starts with two whitespace-separated
/// integers, anything else is treated as graph6.
pub fn detect_format(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.split_whitespace().count() == 2 => Format::EdgeList,
        _ => Format::Graph6,
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| line_err(1, "missing `n m` header"))?;
    let (n, m) = parse_pair(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        if edges.len() == m {
            return Err(line_err(ln, format!("more than the declared {m} edges")));
        }
        let (u, v) = parse_pair(ln, l)?;
        edges.push((ln, u, v));
    }
    if edges.len() != m {
        return Err(line_err(
            hl,
            format!("header declares {m} edges but {} were given", edges.len()),
        ));
    }
    let mut seen = HashSet::with_capacity(m);
    for &(ln, u, v) in &edges {
        let err = if u >= n || v >= n {
            Some(GraphError::InvalidVertex { vertex: u.max(v), n })
        } else if u == v {
            Some(GraphError::SelfLoop(u))
        } else if !seen.insert((u.min(v), u.max(v))) {
            Some(GraphError::DuplicateEdge(u.min(v), u.max(v)))
        } else {
            None
        };
        if let Some(e) = err {
            return Err(line_err(ln, e.to_string()));
        }
    }
    Ok(Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
        .expect("edges validated above"))
}

fn parse_pair(line: usize, s: &str) -> Result<(usize, usize), ParseError> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| line_err(line, "expected two integers"))?;
        tok.parse()
            .map_err(|_| line_err(line, format!("`{tok}` is not a nonnegative integer")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(line_err(line, "expected exactly two integers"));
    }
    Ok(pair)
}

fn emit_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.size());
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

const G6_HEADER: &str = ">>graph6<<";

/// Parses a single graph6 string (optional `>>graph6<<` prefix).
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let body = line.strip_prefix(G6_HEADER).unwrap_or(line);
    let off = line.len() - body.len();
    let bytes = body.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        if !(63..=126).contains(&c) {
            return Err(byte_err(off + i, format!("byte {c:#04x} outside graph6 range")));
        }
    }
    let sextet = |i: usize| -> Result<usize, ParseError> {
        bytes
            .get(i)
            .map(|&c| (c - 63) as usize)
            .ok_or_else(|| byte_err(off + i, "truncated size header"))
    };
    let (n, mut pos) = if bytes.first() != Some(&126) {
        (sextet(0)?, 1)
    } else if bytes.get(1) != Some(&126) {
        ((1..4).try_fold(0, |acc, i| Ok::<_, ParseError>(acc << 6 | sextet(i)?))?, 4)
    } else {
        ((2..8).try_fold(0, |acc, i| Ok::<_, ParseError>(acc << 6 | sextet(i)?))?, 8)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(byte_err(
            off + pos,
            format!("expected {need} data bytes for n={n}, found {}", bytes.len() - pos),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let c = (bytes[pos + k / 6] - 63) >> (5 - k % 6) & 1;
            if c == 1 {
                edges.push((i, j));
            }
            k += 1;
            if k == nbits {
                break 'outer;
            }
        }
    }
    pos += need;
    if need > 0 {
        let pad = need * 6 - nbits;
        if (bytes[pos - 1] - 63) & ((1u8 << pad) - 1) != 0 {
            return Err(byte_err(off + pos - 1, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_edges(n, edges).expect("graph6 upper triangle is simple"))
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// One graph per non-empty line; errors carry the 1-based line number.
pub fn parse_graph6_corpus(text: &str) -> Result<Vec<Graph>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_graph6(l.trim()).map_err(|e| line_err(i + 1, e.to_string()))
        })
        .collect()
}
