//! Independent checkers for candidate solutions.
//!
//! Verifiers never trust the producer: a factor may be arbitrary garbage and
//! every defect is reported as a [`Violation`] instead of an error.

use serde::Serialize;

use crate::error::Result;
use crate::graph::{require_perfect, BipartiteGraph, Digraph, Matching, Vertex, VertexSet};
use crate::structures::{DirectedTwoFactor, MTwoFactor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> VerificationReport {
        VerificationReport { passed: violations.is_empty(), violations }
    }

    pub fn has(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

fn push(out: &mut Vec<Violation>, rule: &'static str, detail: String) {
    out.push(Violation { rule, detail });
}

/// Checks that `factor` partitions `V(d)` into exactly `k` directed cycles
/// of length at least `min_len`, using only arcs of `d`.
pub fn verify_directed_2factor(
    d: &Digraph,
    factor: &DirectedTwoFactor,
    k: usize,
    min_len: usize,
) -> VerificationReport {
    let n = d.order();
    let mut out = Vec::new();
    let mut seen = vec![false; n];
    for (ci, cycle) in factor.cycles.iter().enumerate() {
        if cycle.len() < min_len.max(2) {
            push(&mut out, "cycle-length", format!("cycle {ci} has length {} < {}", cycle.len(), min_len.max(2)));
        }
        for &v in cycle {
            if v >= n {
                push(&mut out, "vertex-range", format!("cycle {ci} uses vertex {v} >= {n}"));
            } else if seen[v] {
                push(&mut out, "disjointness", format!("vertex {v} appears more than once"));
            } else {
                seen[v] = true;
            }
        }
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if cycle.len() >= 2 && !d.has_arc(u, v) {
                push(&mut out, "arc-missing", format!("cycle {ci} uses non-arc ({u}, {v})"));
            }
        }
    }
    let missing: Vec<usize> = (0..n).filter(|&v| !seen[v]).collect();
    if !missing.is_empty() {
        push(&mut out, "coverage", format!("uncovered vertices {missing:?}"));
    }
    if factor.cycles.len() != k {
        push(&mut out, "cycle-count", format!("{} cycles, expected {k}", factor.cycles.len()));
    }
    VerificationReport::from_violations(out)
}

/// Checks that `factor` is a spanning 2-factor of `g` made of exactly `k`
/// alternating cycles of length at least `min_len` containing every edge of `m`.
pub fn verify_m_2factor(
    g: &BipartiteGraph,
    m: &Matching,
    factor: &MTwoFactor,
    k: usize,
    min_len: usize,
) -> Result<VerificationReport> {
    require_perfect(g, m)?;
    let mut out = Vec::new();
    let mut seen = VertexSet::empty(g.id_bound());
    let mut m_edges_used = 0usize;
    for (ci, cycle) in factor.cycles.iter().enumerate() {
        let len = cycle.len();
        if len < min_len.max(4) || len % 2 != 0 {
            push(&mut out, "cycle-length", format!("cycle {ci} has length {len}, need even >= {}", min_len.max(4)));
        }
        for &v in cycle {
            if !g.contains(v) {
                push(&mut out, "vertex-range", format!("cycle {ci} uses foreign vertex {v}"));
            } else if !seen.insert(v) {
                push(&mut out, "disjointness", format!("vertex {v} appears more than once"));
            }
        }
        if len < 2 {
            continue;
        }
        let mut flags = Vec::with_capacity(len);
        for i in 0..len {
            let (a, b) = (cycle[i], cycle[(i + 1) % len]);
            if !g.adjacent(a, b) {
                push(&mut out, "edge-missing", format!("cycle {ci} uses non-edge {a}{b}"));
            }
            let in_m = m.contains(a, b);
            if in_m {
                m_edges_used += 1;
            }
            flags.push(in_m);
        }
        let alternates = len % 2 == 0 && (0..len).all(|i| flags[i] != flags[(i + 1) % len]);
        if !alternates {
            push(&mut out, "alternation", format!("cycle {ci} does not alternate between M and non-M edges"));
        }
    }
    let missing: Vec<Vertex> = g.vertices().filter(|&v| !seen.contains(v)).collect();
    if !missing.is_empty() {
        push(&mut out, "coverage", format!("uncovered vertices {missing:?}"));
    }
    if m_edges_used != m.len() {
        push(
            &mut out,
            "matching-coverage",
            format!("{m_edges_used} of {} matching edges lie on the cycles", m.len()),
        );
    }
    if factor.cycles.len() != k {
        push(&mut out, "cycle-count", format!("{} cycles, expected {k}", factor.cycles.len()));
    }
    Ok(VerificationReport::from_violations(out))
}

/// `(out-degree, in-degree)` for every vertex.
pub fn degree_profile(d: &Digraph) -> Vec<(usize, usize)> {
    (0..d.order()).map(|v| (d.out_degree(v), d.in_degree(v))).collect()
}
