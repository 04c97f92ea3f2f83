//! Correspondences between undirected graphs, digraphs, and balanced
//! bipartite graphs carrying a perfect matching.
//!
//! Splitting sends vertex `v` of a digraph to the matched pair `x_v y_v` and
//! arc `(u, v)` to the edge `x_u y_v`. Contraction is the inverse; for a
//! general perfect matching the digraph vertex `v` is the matching edge at
//! `x_v`. Alternating `2l`-cycles correspond to directed `l`-cycles.

use serde::Serialize;

use crate::error::{GraphError, Result};
use crate::graph::{require_perfect, BipartiteGraph, Digraph, Graph, Matching, Vertex};
use crate::structures::{DirectedTwoFactor, MTwoFactor};
use crate::verify::verify_m_2factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Symmetrize,
    Split,
    Contract,
}

/// Which correspondence produced an image, plus the vertex table.
///
/// For `Split` and `Contract`, `pairs[v] = (x, y)` lists the matching edge
/// `x_x y_y` standing for digraph vertex `v`. For `Symmetrize` the pairs are
/// `(v, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceTag {
    pub direction: Direction,
    pub pairs: Vec<(usize, usize)>,
}

impl CorrespondenceTag {
    /// The same vertex table read in the opposite direction.
    pub fn inverse(&self) -> CorrespondenceTag {
        let direction = match self.direction {
            Direction::Split => Direction::Contract,
            Direction::Contract => Direction::Split,
            Direction::Symmetrize => Direction::Symmetrize,
        };
        CorrespondenceTag { direction, pairs: self.pairs.clone() }
    }
}

/// Replaces every edge `uv` by the arcs `(u, v)` and `(v, u)`.
pub fn symmetrize(g: &Graph) -> Digraph {
    let arcs = g.edges().flat_map(|(u, v)| [(u, v), (v, u)]);
    Digraph::new(g.order(), arcs).expect("a simple graph symmetrizes to a simple digraph")
}

/// Like [`symmetrize`], but from a raw edge list; loops and repeated edges are rejected.
pub fn symmetrize_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Digraph> {
    Ok(symmetrize(&Graph::new(n, edges)?))
}

pub fn digraph_to_bipartite(d: &Digraph) -> (BipartiteGraph, Matching, CorrespondenceTag) {
    let n = d.order();
    let edges = (0..n).map(|v| (v, v)).chain(d.arcs());
    let g = BipartiteGraph::new(n, n, edges).expect("arcs never coincide with split edges");
    let m = Matching::new(&g, (0..n).map(|v| (v, v))).expect("split edges form a matching");
    let tag = CorrespondenceTag { direction: Direction::Split, pairs: (0..n).map(|v| (v, v)).collect() };
    (g, m, tag)
}

pub fn bipartite_to_digraph(g: &BipartiteGraph, m: &Matching) -> Result<(Digraph, CorrespondenceTag)> {
    require_perfect(g, m)?;
    let n = g.x_count();
    let pairs: Vec<(usize, usize)> = m.edges().collect();
    // y index -> digraph vertex
    let mut owner = vec![0usize; n];
    for &(x, y) in &pairs {
        owner[y] = x;
    }
    let arcs = g
        .edges()
        .filter(|&(x, y)| !m.contains(Vertex::x(x), Vertex::y(y)))
        .map(|(x, y)| (x, owner[y]));
    let d = Digraph::new(n, arcs)?;
    Ok((d, CorrespondenceTag { direction: Direction::Contract, pairs }))
}

/// Maps an alternating 2-factor to the directed 2-factor it encodes.
///
/// The factor is verified against the host first; each alternating `2l`-cycle
/// becomes a directed `l`-cycle.
pub fn translate_m2factor(
    g: &BipartiteGraph,
    m: &Matching,
    factor: &MTwoFactor,
    tag: &CorrespondenceTag,
) -> Result<DirectedTwoFactor> {
    if tag.direction != Direction::Contract {
        return Err(GraphError::Precondition("translation needs a contraction tag".into()));
    }
    let report = verify_m_2factor(g, m, factor, factor.len(), 4)?;
    if !report.passed {
        return Err(GraphError::Precondition(format!("factor does not verify: {:?}", report.violations)));
    }
    let n = g.x_count();
    let mut vertex_of_x = vec![usize::MAX; n];
    for (v, &(x, _)) in tag.pairs.iter().enumerate() {
        vertex_of_x[x] = v;
    }
    let mut cycles = Vec::with_capacity(factor.len());
    for seq in &factor.cycles {
        let order = x_first(m, seq);
        // x_a y_a' x_b: the edge y_a' x_b is the arc (b, a), so the X order runs backwards.
        let mut cycle: Vec<usize> = order.iter().step_by(2).map(|x| vertex_of_x[x.index()]).collect();
        cycle.reverse();
        cycles.push(cycle);
    }
    let mut out = DirectedTwoFactor::new(cycles);
    out.canonicalize();
    Ok(out)
}

/// Lifts a directed 2-factor to the alternating 2-factor of the split graph.
pub fn lift_directed_factor(factor: &DirectedTwoFactor, tag: &CorrespondenceTag) -> MTwoFactor {
    let mut cycles = Vec::with_capacity(factor.cycles.len());
    for c in &factor.cycles {
        let len = c.len();
        let mut seq = Vec::with_capacity(2 * len);
        for i in 0..len {
            let (a, b) = (c[i], c[(i + 1) % len]);
            seq.push(Vertex::x(tag.pairs[a].0));
            seq.push(Vertex::y(tag.pairs[b].1));
        }
        cycles.push(seq);
    }
    MTwoFactor { cycles }
}

/// Rotates/reverses an alternating sequence so that it starts at an `X`
/// vertex followed by its matching partner.
fn x_first(m: &Matching, seq: &[Vertex]) -> Vec<Vertex> {
    let len = seq.len();
    let start = (0..len)
        .find(|&i| seq[i].side() == crate::graph::Side::X && m.contains(seq[i], seq[(i + 1) % len]))
        .map(|i| (i, true))
        .or_else(|| {
            (0..len)
                .find(|&i| seq[i].side() == crate::graph::Side::X)
                .map(|i| (i, false))
        })
        .expect("alternating cycle has X vertices");
    match start {
        (i, true) => (0..len).map(|j| seq[(i + j) % len]).collect(),
        (i, false) => (0..len).map(|j| seq[(i + len - j) % len]).collect(),
    }
}
