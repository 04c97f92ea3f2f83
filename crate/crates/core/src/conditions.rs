//! Degree-sum conditions: σ₂ for graphs, the Woodall pair condition for
//! digraphs, σ₁,₁ for balanced bipartite graphs, and a gate reporting which
//! of the known existence results apply to an instance.

use std::fmt;

use serde::Serialize;

use crate::error::{GraphError, Result};
use crate::graph::{BipartiteGraph, Digraph, Graph, Vertex};

/// A degree-sum value; `Unbounded` when there is no non-adjacent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Bound {
    Finite(i64),
    Unbounded,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    pub fn at_least(self, threshold: i64) -> bool {
        match self {
            Bound::Finite(v) => v >= threshold,
            Bound::Unbounded => true,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub value: Bound,
    pub threshold: i64,
    pub satisfied: bool,
    /// A pair realizing `value`. For σ₁,₁ this is `(x index, y index)`.
    pub witness: Option<(usize, usize)>,
}

impl ConditionReport {
    fn new(best: Option<(i64, (usize, usize))>, threshold: i64) -> ConditionReport {
        let (value, witness) = match best {
            Some((v, w)) => (Bound::Finite(v), Some(w)),
            None => (Bound::Unbounded, None),
        };
        ConditionReport { value, threshold, satisfied: value.at_least(threshold), witness }
    }
}

fn keep_min(best: &mut Option<(i64, (usize, usize))>, value: i64, pair: (usize, usize)) {
    if best.map_or(true, |(b, _)| value < b) {
        *best = Some((value, pair));
    }
}

pub fn sigma2(g: &Graph) -> ConditionReport {
    let n = g.order();
    let mut best = None;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                keep_min(&mut best, (g.degree(u) + g.degree(v)) as i64, (u, v));
            }
        }
    }
    ConditionReport::new(best, n as i64)
}

/// Minimum of `d⁺(u) + d⁻(v)` over ordered non-arcs `(u, v)`, `u ≠ v`.
pub fn woodall_value(d: &Digraph) -> Result<ConditionReport> {
    let n = d.order();
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("Woodall condition needs n >= 2, got {n}")));
    }
    let mut best = None;
    for u in 0..n {
        for v in 0..n {
            if u != v && !d.has_arc(u, v) {
                keep_min(&mut best, (d.out_degree(u) + d.in_degree(v)) as i64, (u, v));
            }
        }
    }
    Ok(ConditionReport::new(best, n as i64))
}

/// Minimum of `d(x) + d(y)` over non-adjacent `x ∈ X`, `y ∈ Y`; threshold `n + 2`.
pub fn sigma11(g: &BipartiteGraph) -> Result<ConditionReport> {
    if !g.is_balanced() {
        return Err(GraphError::Unbalanced { x_count: g.x_count(), y_count: g.y_count() });
    }
    let n = g.half_order();
    let mut best = None;
    for x in 0..n {
        let dx = g.degree(Vertex::x(x));
        for y in 0..n {
            if !g.has_edge(x, y) {
                keep_min(&mut best, (dx + g.degree(Vertex::y(y))) as i64, (x, y));
            }
        }
    }
    Ok(ConditionReport::new(best, n as i64 + 2))
}

#[derive(Debug, Clone, Copy)]
pub enum Instance<'a> {
    Digraph(&'a Digraph),
    Bipartite(&'a BipartiteGraph),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// Directed Hamilton cycle under the pair condition, `n >= 2`.
    WoodallHamilton,
    /// Directed 2-factor with exactly `k` cycles of length >= 3, `n >= 12k + 3`.
    DirectedKFactor,
    /// `k` disjoint alternating cycles of length 6 or 8, `n >= 12k - 9`.
    ShortCyclePacking,
    /// From `k + 1` disjoint alternating cycles to an alternating 2-factor with `k` cycles, `2n > 6(k + 1)`.
    CyclesToKFactor,
    /// Alternating Hamilton cycle under σ₁,₁ >= n + 2, `2n >= 4`.
    LasVergnasHamilton,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::WoodallHamilton,
        TheoremId::DirectedKFactor,
        TheoremId::ShortCyclePacking,
        TheoremId::CyclesToKFactor,
        TheoremId::LasVergnasHamilton,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::WoodallHamilton => "woodall-hamilton",
            TheoremId::DirectedKFactor => "directed-k-factor",
            TheoremId::ShortCyclePacking => "short-cycle-packing",
            TheoremId::CyclesToKFactor => "cycles-to-k-factor",
            TheoremId::LasVergnasHamilton => "las-vergnas-hamilton",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub theorem: TheoremId,
    pub met: bool,
    /// Empty when `met`; otherwise the failed hypotheses.
    pub missing: String,
}

/// Evaluates every known existence result against the instance.
///
/// Digraphs and bipartite graphs are compared through the split
/// correspondence, under which the pair condition and σ₁,₁ >= n + 2 coincide.
pub fn applicability(instance: Instance<'_>, k: usize) -> Vec<Applicability> {
    let (n, degree_ok, degree_note) = match instance {
        Instance::Digraph(d) => match woodall_value(d) {
            Ok(r) => (d.order(), r.satisfied, format!("pair degree sum {} < {}", r.value, r.threshold)),
            Err(e) => (d.order(), false, e.to_string()),
        },
        Instance::Bipartite(g) => match sigma11(g) {
            Ok(r) => (g.half_order(), r.satisfied, format!("sigma11 {} < {}", r.value, r.threshold)),
            Err(e) => (g.half_order(), false, e.to_string()),
        },
    };
    TheoremId::ALL
        .iter()
        .map(|&theorem| {
            let mut missing = Vec::new();
            if !degree_ok {
                missing.push(degree_note.clone());
            }
            if k == 0 && theorem != TheoremId::WoodallHamilton && theorem != TheoremId::LasVergnasHamilton {
                missing.push("k must be positive".to_string());
            }
            let order_ok = match theorem {
                TheoremId::WoodallHamilton | TheoremId::LasVergnasHamilton => n >= 2,
                TheoremId::DirectedKFactor => n >= 12 * k + 3,
                TheoremId::ShortCyclePacking => n + 9 >= 12 * k,
                TheoremId::CyclesToKFactor => 2 * n > 6 * (k + 1),
            };
            if !order_ok {
                let need = match theorem {
                    TheoremId::WoodallHamilton | TheoremId::LasVergnasHamilton => "n >= 2".to_string(),
                    TheoremId::DirectedKFactor => format!("n >= {}", 12 * k + 3),
                    TheoremId::ShortCyclePacking => format!("n >= {}", (12 * k).saturating_sub(9)),
                    TheoremId::CyclesToKFactor => format!("2n > {}", 6 * (k + 1)),
                };
                missing.push(format!("order n = {n}, need {need}"));
            }
            Applicability { theorem, met: missing.is_empty(), missing: missing.join("; ") }
        })
        .collect()
}

/// Whether the named result applies.
pub fn theorem_met(instance: Instance<'_>, k: usize, theorem: TheoremId) -> bool {
    applicability(instance, k).iter().any(|a| a.theorem == theorem && a.met)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{digraph_to_bipartite, symmetrize};

    #[test]
    fn sigma2_examples() {
        assert_eq!(sigma2(&Graph::complete(4)).value, Bound::Unbounded);
        assert!(sigma2(&Graph::complete(4)).satisfied);
        let c5 = sigma2(&Graph::cycle(5));
        assert_eq!((c5.value, c5.threshold, c5.satisfied), (Bound::Finite(4), 5, false));
        let k33 = sigma2(&Graph::complete_bipartite(3, 3));
        assert_eq!((k33.value, k33.satisfied), (Bound::Finite(6), true));
    }

    #[test]
    fn woodall_examples() {
        assert_eq!(woodall_value(&Digraph::complete(3)).unwrap().value, Bound::Unbounded);
        let sharp = woodall_value(&symmetrize(&Graph::complete_bipartite(3, 4))).unwrap();
        assert_eq!((sharp.value, sharp.threshold, sharp.satisfied), (Bound::Finite(6), 7, false));
        let tri = woodall_value(&Digraph::directed_cycle(3)).unwrap();
        assert_eq!((tri.value, tri.satisfied), (Bound::Finite(2), false));
        assert!(woodall_value(&Digraph::empty(1)).is_err());
    }

    #[test]
    fn woodall_witness_realizes_value() {
        let d = symmetrize(&Graph::complete_bipartite(3, 4));
        let r = woodall_value(&d).unwrap();
        let (u, v) = r.witness.unwrap();
        assert!(!d.has_arc(u, v));
        assert_eq!(Bound::Finite((d.out_degree(u) + d.in_degree(v)) as i64), r.value);
    }

    #[test]
    fn sigma11_examples() {
        assert_eq!(sigma11(&BipartiteGraph::complete(4, 4)).unwrap().value, Bound::Unbounded);
        let (g, _, _) = digraph_to_bipartite(&symmetrize(&Graph::complete_bipartite(3, 4)));
        let r = sigma11(&g).unwrap();
        assert_eq!((r.value, r.threshold, r.satisfied), (Bound::Finite(8), 9, false));
        let hex = BipartiteGraph::new(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap();
        let r = sigma11(&hex).unwrap();
        assert_eq!((r.value, r.threshold, r.satisfied), (Bound::Finite(4), 5, false));
        assert!(sigma11(&BipartiteGraph::complete(2, 3)).is_err());
    }

    fn met(list: &[Applicability], id: TheoremId) -> bool {
        list.iter().find(|a| a.theorem == id).unwrap().met
    }

    #[test]
    fn applicability_examples() {
        let a = applicability(Instance::Digraph(&Digraph::complete(15)), 1);
        assert!(met(&a, TheoremId::DirectedKFactor));
        let a = applicability(Instance::Digraph(&Digraph::complete(14)), 1);
        assert!(!met(&a, TheoremId::DirectedKFactor));
        assert!(met(&a, TheoremId::WoodallHamilton));
        let a = applicability(Instance::Digraph(&Digraph::complete(27)), 2);
        assert!(met(&a, TheoremId::DirectedKFactor));
        let sharp = symmetrize(&Graph::complete_bipartite(13, 14));
        let a = applicability(Instance::Digraph(&sharp), 2);
        assert!(!met(&a, TheoremId::DirectedKFactor));
        assert!(a.iter().find(|x| x.theorem == TheoremId::DirectedKFactor).unwrap().missing.contains("pair degree"));
    }

    #[test]
    fn applicability_on_bipartite() {
        let g = BipartiteGraph::complete(4, 4);
        let a = applicability(Instance::Bipartite(&g), 1);
        assert!(met(&a, TheoremId::LasVergnasHamilton));
        assert!(met(&a, TheoremId::ShortCyclePacking));
        assert!(!met(&a, TheoremId::CyclesToKFactor));
    }
}
