//! Alternating paths and cycles with respect to a matching, and the solution
//! containers built from them.

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};
use crate::graph::{BipartiteGraph, Matching, Vertex, VertexSet};

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidStructure(msg.into())
}

fn check_vertices(g: &BipartiteGraph, seq: &[Vertex]) -> Result<()> {
    let mut seen = VertexSet::empty(g.id_bound());
    for &v in seq {
        if !g.contains(v) {
            return Err(invalid(format!("{v} is not a vertex of the host")));
        }
        if !seen.insert(v) {
            return Err(invalid(format!("{v} repeated")));
        }
    }
    Ok(())
}

/// An alternating path `v_1 .. v_2l` whose first and last edges lie in the matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MPath {
    vertices: Vec<Vertex>,
}

impl MPath {
    pub fn new(g: &BipartiteGraph, m: &Matching, vertices: Vec<Vertex>) -> Result<MPath> {
        if vertices.len() < 2 || vertices.len() % 2 != 0 {
            return Err(invalid(format!("M-path order {} is not even and >= 2", vertices.len())));
        }
        check_vertices(g, &vertices)?;
        for (i, w) in vertices.windows(2).enumerate() {
            if !g.adjacent(w[0], w[1]) {
                return Err(invalid(format!("{}{} is not an edge", w[0], w[1])));
            }
            if m.contains(w[0], w[1]) != (i % 2 == 0) {
                return Err(invalid(format!("edge {}{} breaks alternation", w[0], w[1])));
            }
        }
        Ok(MPath { vertices })
    }

    /// The single matching edge `a b` as an order-2 path.
    pub fn edge(g: &BipartiteGraph, m: &Matching, a: Vertex) -> Result<MPath> {
        let b = m.mate(a).ok_or_else(|| invalid(format!("{a} is unmatched")))?;
        MPath::new(g, m, vec![a, b])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> MPath {
        let mut v = self.vertices.clone();
        v.reverse();
        MPath { vertices: v }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Non-matching edges `(v_{2i+1}, v_{2i+2})` in path order.
    pub fn non_m_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices
            .windows(2)
            .enumerate()
            .filter(|(i, _)| i % 2 == 1)
            .map(|(_, w)| (w[0], w[1]))
    }
}

/// An alternating cycle, stored in rotation-canonical form: the smallest
/// vertex first, followed by its matching partner.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MCycle {
    vertices: Vec<Vertex>,
}

impl MCycle {
    pub fn new(g: &BipartiteGraph, m: &Matching, vertices: Vec<Vertex>) -> Result<MCycle> {
        let len = vertices.len();
        if len < 4 || len % 2 != 0 {
            return Err(invalid(format!("M-cycle length {len} is not even and >= 4")));
        }
        check_vertices(g, &vertices)?;
        let first_in_m = m.contains(vertices[0], vertices[1]);
        for i in 0..len {
            let (a, b) = (vertices[i], vertices[(i + 1) % len]);
            if !g.adjacent(a, b) {
                return Err(invalid(format!("{a}{b} is not an edge")));
            }
            if m.contains(a, b) != ((i % 2 == 0) == first_in_m) {
                return Err(invalid(format!("edge {a}{b} breaks alternation")));
            }
        }
        Ok(MCycle { vertices: canonical_cycle(vertices, |a, b| m.contains(a, b)) })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }

    /// Matching edges `(v_{2i}, v_{2i+1})`.
    pub fn m_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices.chunks(2).map(|c| (c[0], c[1]))
    }

    /// Non-matching edges `(v_{2i+1}, v_{2i+2})`, wrapping around.
    pub fn non_m_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let len = self.vertices.len();
        (0..len / 2).map(move |i| (self.vertices[2 * i + 1], self.vertices[(2 * i + 2) % len]))
    }

    /// The vertex sequence traversed so that each vertex in `X` is followed
    /// by its matching partner.
    pub fn x_first_order(&self) -> Vec<Vertex> {
        let v = &self.vertices;
        if v[0].side() == crate::graph::Side::X {
            return v.clone();
        }
        // v[0] in Y with v[1] its partner in X: walk backwards from v[1].
        let len = v.len();
        (0..len).map(|i| v[(1 + len - i) % len]).collect()
    }
}

/// Rotates to the minimal vertex and orients so that its matching edge leaves forward.
pub(crate) fn canonical_cycle(mut vertices: Vec<Vertex>, in_m: impl Fn(Vertex, Vertex) -> bool) -> Vec<Vertex> {
    let len = vertices.len();
    let pos = (0..len).min_by_key(|&i| vertices[i]).unwrap_or(0);
    vertices.rotate_left(pos);
    if len > 1 && !in_m(vertices[0], vertices[1]) {
        vertices[1..].reverse();
    }
    vertices
}

/// Directed cycles as vertex sequences; each consecutive pair (and last to first) is an arc.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DirectedTwoFactor {
    pub cycles: Vec<Vec<usize>>,
}

impl DirectedTwoFactor {
    pub fn new(cycles: Vec<Vec<usize>>) -> DirectedTwoFactor {
        DirectedTwoFactor { cycles }
    }

    /// Rotates each cycle to its minimal vertex and sorts the cycles.
    pub fn canonicalize(&mut self) {
        for c in &mut self.cycles {
            if let Some(pos) = (0..c.len()).min_by_key(|&i| c[i]) {
                c.rotate_left(pos);
            }
        }
        self.cycles.sort();
    }
}

/// Alternating cycles as raw vertex sequences. Produced by the solvers from
/// validated [`MCycle`]s; the verifier accepts arbitrary contents.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MTwoFactor {
    pub cycles: Vec<Vec<Vertex>>,
}

impl MTwoFactor {
    pub fn from_cycles(cycles: impl IntoIterator<Item = MCycle>) -> MTwoFactor {
        let mut cycles: Vec<Vec<Vertex>> = cycles.into_iter().map(MCycle::into_vertices).collect();
        cycles.sort();
        MTwoFactor { cycles }
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Alternating hexagon x0 y0 x1 y1 x2 y2 with M = {x_i y_i}.
    fn hexagon() -> (BipartiteGraph, Matching) {
        let g = BipartiteGraph::new(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap();
        let m = Matching::new(&g, [(0, 0), (1, 1), (2, 2)]).unwrap();
        (g, m)
    }

    #[test]
    fn cycle_canonical_form_is_rotation_invariant() {
        let (g, m) = hexagon();
        let a = MCycle::new(&g, &m, vec![Vertex::x(1), Vertex::y(1), Vertex::x(2), Vertex::y(2), Vertex::x(0), Vertex::y(0)]).unwrap();
        let b = MCycle::new(&g, &m, vec![Vertex::y(2), Vertex::x(2), Vertex::y(1), Vertex::x(1), Vertex::y(0), Vertex::x(0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.vertices()[0], Vertex::x(0));
        assert_eq!(a.vertices()[1], Vertex::y(0));
        assert_eq!(a.m_edges().count(), 3);
        assert!(a.m_edges().all(|(p, q)| m.contains(p, q)));
        assert!(a.non_m_edges().all(|(p, q)| !m.contains(p, q) && g.adjacent(p, q)));
    }

    #[test]
    fn cycle_rejects_broken_alternation() {
        let g = BipartiteGraph::complete(2, 2);
        let m = Matching::new(&g, [(0, 0), (1, 1)]).unwrap();
        // x0 y1 x1 y0: M edges at the odd positions, still alternating
        assert!(MCycle::new(&g, &m, vec![Vertex::x(0), Vertex::y(1), Vertex::x(1), Vertex::y(0)]).is_ok());
        let g3 = BipartiteGraph::complete(3, 3);
        let m3 = Matching::new(&g3, [(0, 0), (1, 1), (2, 2)]).unwrap();
        // x0 y0 x1 y2 x2 y1: edges x1y2 and x2y1 both non-M in a row
        let bad = vec![Vertex::x(0), Vertex::y(0), Vertex::x(1), Vertex::y(2), Vertex::x(2), Vertex::y(1)];
        assert!(MCycle::new(&g3, &m3, bad).is_err());
        assert!(MCycle::new(&g3, &m3, vec![Vertex::x(0), Vertex::y(0)]).is_err());
    }

    #[test]
    fn x_first_order_follows_matching() {
        let (g, m) = hexagon();
        let c = MCycle::new(&g, &m, vec![Vertex::x(0), Vertex::y(0), Vertex::x(1), Vertex::y(1), Vertex::x(2), Vertex::y(2)]).unwrap();
        let order = c.x_first_order();
        for pair in order.chunks(2) {
            assert_eq!(pair[0].side(), crate::graph::Side::X);
            assert!(m.contains(pair[0], pair[1]));
        }
        // a cycle whose smallest vertex is in Y
        let g2 = BipartiteGraph::new(2, 2, [(0, 1), (1, 1), (1, 0), (0, 0)]).unwrap();
        let m2 = Matching::new(&g2, [(1, 0), (0, 1)]).unwrap();
        let c2 = MCycle::new(&g2, &m2, vec![Vertex::x(1), Vertex::y(0), Vertex::x(0), Vertex::y(1)]).unwrap();
        let order = c2.x_first_order();
        assert_eq!(order[0].side(), crate::graph::Side::X);
        for i in 0..4 {
            assert!(g2.adjacent(order[i], order[(i + 1) % 4]));
        }
        for pair in order.chunks(2) {
            assert!(m2.contains(pair[0], pair[1]));
        }
    }

    #[test]
    fn path_validation() {
        let (g, m) = hexagon();
        let p = MPath::new(&g, &m, vec![Vertex::x(0), Vertex::y(0), Vertex::x(1), Vertex::y(1)]).unwrap();
        assert_eq!(p.start(), Vertex::x(0));
        assert_eq!(p.end(), Vertex::y(1));
        assert_eq!(p.non_m_edges().collect::<Vec<_>>(), vec![(Vertex::y(0), Vertex::x(1))]);
        assert!(MPath::new(&g, &m, vec![Vertex::y(0), Vertex::x(1)]).is_err());
        assert!(MPath::new(&g, &m, vec![Vertex::x(0)]).is_err());
        assert_eq!(p.reversed().start(), Vertex::y(1));
    }
}
