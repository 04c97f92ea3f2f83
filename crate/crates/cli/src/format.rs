//! Line-oriented instance files.
//!
//! ```text
//! # directed triangle
//! digraph 3
//! arc 0 1
//! arc 1 2
//! arc 2 0
//! ```
//!
//! Bipartite files start with `bipartite <n>` (both sides of size `n`) and
//! list `edge <x> <y>` and `match <x> <y>` records. Every matching record
//! must name an edge.

use difactor::{BipartiteGraph, Digraph, GraphError, Matching};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("missing header: expected `digraph <n>` or `bipartite <n>`")]
    MissingHeader,
    #[error("{0}")]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceFile {
    Digraph(Digraph),
    Bipartite(BipartiteGraph, Matching),
}

enum Kind {
    Digraph,
    Bipartite,
}

fn line_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line { line, message: message.into() }
}

fn index(tok: Option<&str>, line: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| line_err(line, "missing vertex index"))?;
    tok.parse().map_err(|_| line_err(line, format!("bad index `{tok}`")))
}

fn pair(mut toks: std::str::SplitWhitespace<'_>, n: usize, line: usize) -> Result<(usize, usize), ParseError> {
    let a = index(toks.next(), line)?;
    let b = index(toks.next(), line)?;
    if let Some(extra) = toks.next() {
        return Err(line_err(line, format!("unexpected `{extra}`")));
    }
    if a >= n || b >= n {
        return Err(line_err(line, format!("index out of range for n = {n}")));
    }
    Ok((a, b))
}

pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
    let mut header: Option<(Kind, usize)> = None;
    let mut arcs = Vec::new();
    let mut edges = Vec::new();
    let mut matched = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let word = toks.next().unwrap_or("");
        let Some((kind, n)) = &header else {
            let kind = match word {
                "digraph" => Kind::Digraph,
                "bipartite" => Kind::Bipartite,
                _ => return Err(ParseError::MissingHeader),
            };
            let n = index(toks.next(), line)?;
            if let Some(extra) = toks.next() {
                return Err(line_err(line, format!("unexpected `{extra}`")));
            }
            header = Some((kind, n));
            continue;
        };
        let n = *n;
        match (kind, word) {
            (Kind::Digraph, "arc") => {
                let (u, v) = pair(toks, n, line)?;
                if u == v {
                    return Err(line_err(line, format!("loop at {u}")));
                }
                if !seen.insert((u, v)) {
                    return Err(line_err(line, format!("duplicate arc {u} {v}")));
                }
                arcs.push((u, v));
            }
            (Kind::Bipartite, "edge") => {
                let e = pair(toks, n, line)?;
                if !seen.insert(e) {
                    return Err(line_err(line, format!("duplicate edge {} {}", e.0, e.1)));
                }
                edges.push(e);
            }
            (Kind::Bipartite, "match") => matched.push((pair(toks, n, line)?, line)),
            (_, "digraph" | "bipartite") => return Err(line_err(line, "second header")),
            _ => return Err(line_err(line, format!("unknown record `{word}`"))),
        }
    }
    match header {
        None => Err(ParseError::MissingHeader),
        Some((Kind::Digraph, n)) => Ok(InstanceFile::Digraph(Digraph::new(n, arcs)?)),
        Some((Kind::Bipartite, n)) => {
            for &(e, line) in &matched {
                if !seen.contains(&e) {
                    return Err(line_err(line, format!("matching edge absent: {} {}", e.0, e.1)));
                }
            }
            let g = BipartiteGraph::new(n, n, edges)?;
            let m = Matching::new(&g, matched.iter().map(|&(e, _)| e))?;
            Ok(InstanceFile::Bipartite(g, m))
        }
    }
}

/// Canonical text: header, then records in lexicographic order.
pub fn serialize(inst: &InstanceFile) -> String {
    let mut out = String::new();
    match inst {
        InstanceFile::Digraph(d) => {
            out.push_str(&format!("digraph {}\n", d.order()));
            let mut arcs: Vec<(usize, usize)> = d.arcs().collect();
            arcs.sort_unstable();
            for (u, v) in arcs {
                out.push_str(&format!("arc {u} {v}\n"));
            }
        }
        InstanceFile::Bipartite(g, m) => {
            out.push_str(&format!("bipartite {}\n", g.half_order()));
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            edges.sort_unstable();
            for (x, y) in edges {
                out.push_str(&format!("edge {x} {y}\n"));
            }
            let mut pairs: Vec<(usize, usize)> = m.edges().collect();
            pairs.sort_unstable();
            for (x, y) in pairs {
                out.push_str(&format!("match {x} {y}\n"));
            }
        }
    }
    out
}
