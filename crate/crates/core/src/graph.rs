//! Plain graph containers: simple undirected graphs, digraphs, bipartite
//! graphs and matchings.
//!
//! Vertices are dense indices. In a bipartite graph both partite sets are
//! indexed from zero and a [`Vertex`] carries the side tag, packed into one
//! integer as `2 * index + side` so that vertex masks and orderings work on a
//! single id space.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// A vertex of a bipartite graph: partite side plus index within that side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex(u32);

impl Vertex {
    pub fn new(side: Side, index: usize) -> Vertex {
        let tag = match side {
            Side::X => 0,
            Side::Y => 1,
        };
        Vertex((index as u32) * 2 + tag)
    }

    pub fn x(index: usize) -> Vertex {
        Vertex::new(Side::X, index)
    }

    pub fn y(index: usize) -> Vertex {
        Vertex::new(Side::Y, index)
    }

    pub fn side(self) -> Side {
        if self.0 & 1 == 0 {
            Side::X
        } else {
            Side::Y
        }
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// Dense id in `0..2 * max(x_count, y_count)`.
    pub fn id(self) -> usize {
        self.0 as usize
    }

    pub fn from_id(id: usize) -> Vertex {
        Vertex(id as u32)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side() {
            Side::X => write!(f, "x{}", self.index()),
            Side::Y => write!(f, "y{}", self.index()),
        }
    }
}

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<bool>,
    nbrs: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut g = Graph {
            n,
            adj: vec![false; n * n],
            nbrs: vec![Vec::new(); n],
            edge_count: 0,
        };
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.adj[u * n + v] {
                return Err(GraphError::Duplicate(u.min(v), u.max(v)));
            }
            g.adj[u * n + v] = true;
            g.adj[v * n + u] = true;
            g.nbrs[u].push(v);
            g.nbrs[v].push(u);
            g.edge_count += 1;
        }
        for list in &mut g.nbrs {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
        Graph::new(a + b, edges).expect("complete bipartite graph is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle needs n >= 3")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.nbrs[u]
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

/// Digraph on `0..n` without loops or parallel arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    arc_count: usize,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Digraph> {
        let mut d = Digraph {
            n,
            adj: vec![false; n * n],
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            arc_count: 0,
        };
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if d.adj[u * n + v] {
                return Err(GraphError::Duplicate(u, v));
            }
            d.adj[u * n + v] = true;
            d.out[u].push(v);
            d.inn[v].push(u);
            d.arc_count += 1;
        }
        for list in d.out.iter_mut().chain(d.inn.iter_mut()) {
            list.sort_unstable();
        }
        Ok(d)
    }

    pub fn empty(n: usize) -> Digraph {
        Digraph::new(n, []).expect("empty digraph")
    }

    pub fn complete(n: usize) -> Digraph {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::new(n, arcs).expect("complete digraph")
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Digraph {
        Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("directed cycle needs n >= 2")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |&v| (u, v)))
    }
}

/// Bipartite graph with partite sets `X = {x_0..}` and `Y = {y_0..}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    x_count: usize,
    y_count: usize,
    adj: Vec<bool>,
    x_nbrs: Vec<Vec<usize>>,
    y_nbrs: Vec<Vec<usize>>,
    edge_count: usize,
}

impl BipartiteGraph {
    /// Builds the graph from `(x_index, y_index)` pairs.
    pub fn new(
        x_count: usize,
        y_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BipartiteGraph> {
        let mut g = BipartiteGraph {
            x_count,
            y_count,
            adj: vec![false; x_count * y_count],
            x_nbrs: vec![Vec::new(); x_count],
            y_nbrs: vec![Vec::new(); y_count],
            edge_count: 0,
        };
        for (x, y) in edges {
            if x >= x_count {
                return Err(GraphError::VertexOutOfRange { vertex: x, order: x_count });
            }
            if y >= y_count {
                return Err(GraphError::VertexOutOfRange { vertex: y, order: y_count });
            }
            if g.adj[x * y_count + y] {
                return Err(GraphError::Duplicate(x, y));
            }
            g.adj[x * y_count + y] = true;
            g.x_nbrs[x].push(y);
            g.y_nbrs[y].push(x);
            g.edge_count += 1;
        }
        for list in g.x_nbrs.iter_mut().chain(g.y_nbrs.iter_mut()) {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn complete(x_count: usize, y_count: usize) -> BipartiteGraph {
        let edges = (0..x_count).flat_map(|x| (0..y_count).map(move |y| (x, y)));
        BipartiteGraph::new(x_count, y_count, edges).expect("complete bipartite graph")
    }

    pub fn x_count(&self) -> usize {
        self.x_count
    }

    pub fn y_count(&self) -> usize {
        self.y_count
    }

    pub fn is_balanced(&self) -> bool {
        self.x_count == self.y_count
    }

    /// Size of one side of a balanced graph (half the order).
    pub fn half_order(&self) -> usize {
        self.x_count.max(self.y_count)
    }

    pub fn order(&self) -> usize {
        self.x_count + self.y_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Upper bound (exclusive) on [`Vertex::id`] for vertices of this graph.
    pub fn id_bound(&self) -> usize {
        2 * self.half_order()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v.side() {
            Side::X => v.index() < self.x_count,
            Side::Y => v.index() < self.y_count,
        }
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.x_count && y < self.y_count && self.adj[x * self.y_count + y]
    }

    /// Adjacency test on tagged vertices; vertices on the same side are never adjacent.
    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        match (a.side(), b.side()) {
            (Side::X, Side::Y) => self.has_edge(a.index(), b.index()),
            (Side::Y, Side::X) => self.has_edge(b.index(), a.index()),
            _ => false,
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        match v.side() {
            Side::X => self.x_nbrs[v.index()].len(),
            Side::Y => self.y_nbrs[v.index()].len(),
        }
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let (list, side) = match v.side() {
            Side::X => (&self.x_nbrs[v.index()], Side::Y),
            Side::Y => (&self.y_nbrs[v.index()], Side::X),
        };
        list.iter().map(move |&i| Vertex::new(side, i))
    }

    /// All vertices in id order (`x0, y0, x1, y1, ...`).
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.id_bound())
            .map(Vertex::from_id)
            .filter(move |&v| self.contains(v))
    }

    /// Edges as `(x_index, y_index)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.x_count).flat_map(move |x| self.x_nbrs[x].iter().map(move |&y| (x, y)))
    }
}

/// A matching inside a host [`BipartiteGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    x_mate: Vec<Option<usize>>,
    y_mate: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn new(g: &BipartiteGraph, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Matching> {
        let mut m = Matching {
            x_mate: vec![None; g.x_count()],
            y_mate: vec![None; g.y_count()],
            size: 0,
        };
        for (x, y) in edges {
            if !g.has_edge(x, y) {
                return Err(GraphError::MatchingEdgeAbsent(x, y));
            }
            if m.x_mate[x].is_some() {
                return Err(GraphError::MatchingConflict(Vertex::x(x)));
            }
            if m.y_mate[y].is_some() {
                return Err(GraphError::MatchingConflict(Vertex::y(y)));
            }
            m.x_mate[x] = Some(y);
            m.y_mate[y] = Some(x);
            m.size += 1;
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_perfect(&self, g: &BipartiteGraph) -> bool {
        g.is_balanced()
            && self.x_mate.len() == g.x_count()
            && self.y_mate.len() == g.y_count()
            && self.size == g.x_count()
    }

    /// Matched partner of `v`, if any.
    pub fn mate(&self, v: Vertex) -> Option<Vertex> {
        match v.side() {
            Side::X => self.x_mate.get(v.index()).copied().flatten().map(Vertex::y),
            Side::Y => self.y_mate.get(v.index()).copied().flatten().map(Vertex::x),
        }
    }

    /// Partner of `v` under a perfect matching.
    ///
    /// Panics when `v` is unmatched; callers check perfection at their entry point.
    pub fn partner(&self, v: Vertex) -> Vertex {
        self.mate(v).unwrap_or_else(|| panic!("{v} is unmatched"))
    }

    pub fn contains(&self, a: Vertex, b: Vertex) -> bool {
        self.mate(a) == Some(b)
    }

    /// Matching edges as `(x_index, y_index)`, sorted by `x_index`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x_mate
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
    }
}

/// Rejects anything but a balanced host with a perfect matching.
pub fn require_perfect(g: &BipartiteGraph, m: &Matching) -> Result<()> {
    if !g.is_balanced() {
        return Err(GraphError::Unbalanced { x_count: g.x_count(), y_count: g.y_count() });
    }
    if !m.is_perfect(g) {
        return Err(GraphError::NotPerfect);
    }
    Ok(())
}

/// Dense vertex set over [`Vertex::id`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(id_bound: usize) -> VertexSet {
        VertexSet { bits: vec![false; id_bound], len: 0 }
    }

    pub fn all(g: &BipartiteGraph) -> VertexSet {
        let mut s = VertexSet::empty(g.id_bound());
        for v in g.vertices() {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(id_bound: usize, vs: impl IntoIterator<Item = Vertex>) -> VertexSet {
        let mut s = VertexSet::empty(id_bound);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.get(v.id()).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        let slot = &mut self.bits[v.id()];
        let fresh = !*slot;
        if fresh {
            *slot = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.bits.get_mut(v.id()) {
            Some(slot) if *slot => {
                *slot = false;
                self.len -= 1;
                true
            }
            _ => false,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Vertex::from_id(i))
    }

    pub fn to_btree(&self) -> BTreeSet<Vertex> {
        self.iter().collect()
    }
}
