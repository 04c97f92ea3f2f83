//! Primitives on alternating paths and cycles: the cycle-length menu, the
//! forced 6-cycle, insertion edges and splicing, two-cycle merging, maximal
//! path growth, and enumeration of short alternating cycles.
//!
//! All scans run in canonical vertex order and return the first witness.

use serde::Serialize;

use crate::error::{GraphError, Result};
use crate::graph::{require_perfect, BipartiteGraph, Matching, Vertex, VertexSet};
use crate::structures::{MCycle, MPath};

/// `e_G(S, T)`: the number of edges from vertices of `s` into `t`.
pub fn edges_into(g: &BipartiteGraph, s: &[Vertex], t: &[Vertex]) -> usize {
    s.iter().map(|&a| t.iter().filter(|&&b| g.adjacent(a, b)).count()).sum()
}

/// Vertices of `c` traversed from `start` in direction `forward`.
pub(crate) fn walk(c: &[Vertex], start: usize, forward: bool) -> impl Iterator<Item = Vertex> + '_ {
    let len = c.len();
    (0..len).map(move |i| if forward { c[(start + i) % len] } else { c[(start + len - i) % len] })
}

/// The cycle read as an M-path starting at `v` and its partner.
pub fn open_cycle_at(m: &Matching, c: &MCycle, v: Vertex) -> Vec<Vertex> {
    let vs = c.vertices();
    let p = c.position(v).expect("vertex on cycle");
    let forward = m.contains(v, vs[(p + 1) % vs.len()]);
    walk(vs, p, forward).collect()
}

/// The cycle read as an M-path ending at `v`, preceded by its partner.
pub fn open_cycle_ending_at(m: &Matching, c: &MCycle, v: Vertex) -> Vec<Vertex> {
    let mut p = open_cycle_at(m, c, v);
    p.reverse();
    p
}

/// Searches for an alternating cycle of length `|P| + 2i` made of `P` and a
/// stretch of `2i` consecutive vertices of `C`.
///
/// Every start vertex on `C` and both directions around `C` are tried.
pub fn lemma1_cycle(g: &BipartiteGraph, m: &Matching, c: &MCycle, p: &MPath, i: usize) -> Option<MCycle> {
    let len = c.len();
    if i == 0 || 2 * i > len {
        return None;
    }
    let (x, y) = (p.start(), p.end());
    let vs = c.vertices();
    for a in 0..len {
        if !g.adjacent(y, vs[a]) {
            continue;
        }
        for forward in [true, false] {
            let stretch: Vec<Vertex> = walk(vs, a, forward).take(2 * i).collect();
            if !m.contains(stretch[0], stretch[1]) || !g.adjacent(stretch[2 * i - 1], x) {
                continue;
            }
            let mut seq = p.vertices().to_vec();
            seq.extend(stretch);
            if let Ok(cycle) = MCycle::new(g, m, seq) {
                return Some(cycle);
            }
        }
    }
    None
}

/// Finds an alternating 6-cycle `x y' x' y'' x'' y` if one exists.
///
/// Vertices `y` are taken in order of decreasing degree; with every
/// `X`-degree at least `(n+3)/2` the first such `y` already succeeds.
pub fn lemma2_six_cycle(g: &BipartiteGraph, m: &Matching) -> Result<Option<MCycle>> {
    require_perfect(g, m)?;
    Ok(six_cycle_within(g, m, None))
}

pub(crate) fn six_cycle_within(g: &BipartiteGraph, m: &Matching, mask: Option<&VertexSet>) -> Option<MCycle> {
    let inside = |v: Vertex| mask.map_or(true, |s| s.contains(v));
    let mut ys: Vec<Vertex> = (0..g.y_count()).map(Vertex::y).filter(|&y| inside(y)).collect();
    ys.sort_by_key(|&y| std::cmp::Reverse(g.degree(y)));
    for y in ys {
        let Some(x) = m.mate(y) else { continue };
        if !inside(x) {
            continue;
        }
        for y1 in g.neighbors(x) {
            if y1 == y || !inside(y1) {
                continue;
            }
            let Some(x1) = m.mate(y1) else { continue };
            if !inside(x1) {
                continue;
            }
            for x2 in g.neighbors(y) {
                if x2 == x || x2 == x1 || !inside(x2) {
                    continue;
                }
                let Some(y2) = m.mate(x2) else { continue };
                if inside(y2) && g.adjacent(x1, y2) {
                    return MCycle::new(g, m, vec![x, y1, x1, y2, x2, y]).ok();
                }
            }
        }
    }
    None
}

/// Lazily yields every alternating cycle inside `h` whose length is in
/// `lengths`, each exactly once and in canonical form.
///
/// A cycle is a cyclic sequence of matching edges, each traversed from its
/// `X` end; the sequence is anchored at the edge with the smallest `X`
/// index, so every cycle has exactly one representation.
pub fn enumerate_short_m_cycles<'a>(
    g: &'a BipartiteGraph,
    m: &'a Matching,
    h: &'a VertexSet,
    lengths: &[usize],
) -> impl Iterator<Item = MCycle> + 'a {
    let mut depths: Vec<usize> = lengths.iter().filter(|&&l| l >= 4 && l % 2 == 0).map(|l| l / 2).collect();
    depths.sort_unstable();
    depths.dedup();
    let max_depth = depths.last().copied().unwrap_or(0);
    let edges: Vec<(Vertex, Vertex)> = m
        .edges()
        .map(|(x, y)| (Vertex::x(x), Vertex::y(y)))
        .filter(|&(x, y)| h.contains(x) && h.contains(y))
        .collect();
    edges.clone().into_iter().flat_map(move |start| {
        let mut found = Vec::new();
        if max_depth >= 2 {
            let mut chain = vec![start];
            extend_chain(g, m, h, &mut chain, &depths, max_depth, &mut found);
        }
        found.into_iter()
    })
}

fn extend_chain(
    g: &BipartiteGraph,
    m: &Matching,
    h: &VertexSet,
    chain: &mut Vec<(Vertex, Vertex)>,
    depths: &[usize],
    max_depth: usize,
    found: &mut Vec<MCycle>,
) {
    let (x0, _) = chain[0];
    let (_, y_last) = *chain.last().expect("non-empty chain");
    let depth = chain.len();
    if depth >= 2 && depths.contains(&depth) && g.adjacent(y_last, x0) {
        let seq: Vec<Vertex> = chain.iter().flat_map(|&(x, y)| [x, y]).collect();
        if let Ok(c) = MCycle::new(g, m, seq) {
            found.push(c);
        }
    }
    if depth == max_depth {
        return;
    }
    for x in g.neighbors(y_last) {
        if x.index() <= x0.index() || !h.contains(x) || chain.iter().any(|&(cx, _)| cx == x) {
            continue;
        }
        let Some(y) = m.mate(x) else { continue };
        if !h.contains(y) || y == y_last {
            continue;
        }
        chain.push((x, y));
        extend_chain(g, m, h, chain, depths, max_depth, found);
        chain.pop();
    }
}

/// A non-matching host edge `u v` (consecutive in host order, `u` first)
/// into which a path `Q[x, y]` can be spliced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InsertionEdge {
    pub u: Vertex,
    pub v: Vertex,
    /// Position of `u` in the host sequence.
    pub host_pos: usize,
    /// `false`: `x ~ u` and `y ~ v`, so `Q` is spliced as is. `true`: `y ~ u`, `x ~ v`.
    pub reversed: bool,
}

#[derive(Debug, Clone, Copy)]
pub enum Host<'a> {
    Cycle(&'a MCycle),
    Path(&'a MPath),
}

impl<'a> Host<'a> {
    fn vertices(&self) -> &'a [Vertex] {
        match self {
            Host::Cycle(c) => c.vertices(),
            Host::Path(p) => p.vertices(),
        }
    }

    /// Positions `p` such that `(seq[p], seq[p+1])` is a non-matching host edge.
    fn non_m_positions(&self) -> impl Iterator<Item = usize> {
        let len = self.vertices().len();
        let cyclic = matches!(self, Host::Cycle(_));
        // the canonical cycle and every M-path put matching edges at even offsets
        (0..len / 2).map(|i| 2 * i + 1).filter(move |&p| cyclic || p + 1 < len)
    }
}

fn splice_orientation(g: &BipartiteGraph, u: Vertex, v: Vertex, x: Vertex, y: Vertex) -> Option<bool> {
    if g.adjacent(x, u) && g.adjacent(y, v) {
        Some(false)
    } else if g.adjacent(y, u) && g.adjacent(x, v) {
        Some(true)
    } else {
        None
    }
}

/// Scans the non-matching host edges for one whose ends are joined to both ends of `q`.
pub fn find_insertion_edge(g: &BipartiteGraph, host: Host<'_>, q: &MPath) -> Option<InsertionEdge> {
    let seq = host.vertices();
    let len = seq.len();
    let (x, y) = (q.start(), q.end());
    host.non_m_positions().find_map(|p| {
        let (u, v) = (seq[p], seq[(p + 1) % len]);
        splice_orientation(g, u, v, x, y).map(|reversed| InsertionEdge { u, v, host_pos: p, reversed })
    })
}

fn check_witness(g: &BipartiteGraph, m: &Matching, seq: &[Vertex], cyclic: bool, q: &MPath, w: &InsertionEdge) -> Result<()> {
    let bad = |msg: &str| GraphError::InvalidWitness(msg.to_string());
    let len = seq.len();
    if w.host_pos >= len || (!cyclic && w.host_pos + 1 >= len) {
        return Err(bad("position outside the host"));
    }
    if seq[w.host_pos] != w.u || seq[(w.host_pos + 1) % len] != w.v {
        return Err(bad("edge is not at the stated host position"));
    }
    if m.contains(w.u, w.v) {
        return Err(bad("insertion edge lies in the matching"));
    }
    if q.vertices().iter().any(|v| seq.contains(v)) {
        return Err(bad("path meets the host"));
    }
    let (a, b) = if w.reversed { (q.end(), q.start()) } else { (q.start(), q.end()) };
    if !g.adjacent(w.u, a) || !g.adjacent(b, w.v) {
        return Err(bad("cross edge missing"));
    }
    Ok(())
}

fn spliced(seq: &[Vertex], q: &MPath, w: &InsertionEdge) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(seq.len() + q.len());
    out.extend_from_slice(&seq[..=w.host_pos]);
    if w.reversed {
        out.extend(q.vertices().iter().rev());
    } else {
        out.extend_from_slice(q.vertices());
    }
    out.extend_from_slice(&seq[w.host_pos + 1..]);
    out
}

/// Replaces the insertion edge `u v` of `host` by `u Q v`.
pub fn insert_path(g: &BipartiteGraph, m: &Matching, host: &MCycle, q: &MPath, w: &InsertionEdge) -> Result<MCycle> {
    check_witness(g, m, host.vertices(), true, q, w)?;
    MCycle::new(g, m, spliced(host.vertices(), q, w)).map_err(|e| GraphError::InvalidWitness(e.to_string()))
}

/// Like [`insert_path`] for a path host; the ends of `host` are kept.
pub fn insert_path_into_path(g: &BipartiteGraph, m: &Matching, host: &MPath, q: &MPath, w: &InsertionEdge) -> Result<MPath> {
    check_witness(g, m, host.vertices(), false, q, w)?;
    MPath::new(g, m, spliced(host.vertices(), q, w)).map_err(|e| GraphError::InvalidWitness(e.to_string()))
}

/// Two non-matching edges, one per cycle, replaced by two cross edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MergeWitness {
    pub c1_edge: (Vertex, Vertex),
    pub c2_edge: (Vertex, Vertex),
    pub cross: [(Vertex, Vertex); 2],
}

/// Merges two disjoint alternating cycles into one on their union, if a
/// pair of non-matching edges admits completing cross edges.
pub fn merge_two_cycles(g: &BipartiteGraph, m: &Matching, c1: &MCycle, c2: &MCycle) -> Option<(MCycle, MergeWitness)> {
    let vs = c1.vertices();
    let len = vs.len();
    for i in 0..len / 2 {
        let (a, b) = (vs[2 * i + 1], vs[(2 * i + 2) % len]);
        // C1 cut at ab, read from b around to a
        let seq: Vec<Vertex> = walk(vs, (2 * i + 2) % len, true).collect();
        let path = MPath::new(g, m, seq).expect("cycle cut at a non-M edge is an M-path");
        if let Some(w) = find_insertion_edge(g, Host::Cycle(c2), &path) {
            let merged = insert_path(g, m, c2, &path, &w).expect("scanned witness is valid");
            let (first, last) = if w.reversed { (a, b) } else { (b, a) };
            let witness = MergeWitness { c1_edge: (a, b), c2_edge: (w.u, w.v), cross: [(w.u, first), (last, w.v)] };
            return Some((merged, witness));
        }
    }
    None
}

/// Grows `seed` inside `h` until neither end can be extended by a
/// non-matching edge followed by a matching edge.
///
/// Besides end extensions, outside matching edges are spliced into path
/// edges, and a path whose ends are adjacent is closed and reopened at a
/// vertex with a neighbor outside.
pub fn grow_maximal_m_path(g: &BipartiteGraph, m: &Matching, h: &VertexSet, seed: MPath) -> MPath {
    let mut path = seed.into_vertices();
    let mut on_path = VertexSet::from_vertices(g.id_bound(), path.iter().copied());
    loop {
        if extend_end(g, m, h, &mut path, &mut on_path) {
            continue;
        }
        path.reverse();
        if extend_end(g, m, h, &mut path, &mut on_path) {
            continue;
        }
        if splice_outside_edge(g, m, h, &mut path, &mut on_path) {
            continue;
        }
        if reopen_closed_path(g, m, h, &mut path, &mut on_path) {
            continue;
        }
        break;
    }
    MPath::new(g, m, path).expect("growth preserves alternation")
}

fn extend_end(g: &BipartiteGraph, m: &Matching, h: &VertexSet, path: &mut Vec<Vertex>, on: &mut VertexSet) -> bool {
    let y = *path.last().expect("non-empty path");
    let next = g.neighbors(y).find(|&z| h.contains(z) && !on.contains(z) && m.mate(z).is_some_and(|w| h.contains(w)));
    if let Some(z) = next {
        let w = m.partner(z);
        path.push(z);
        path.push(w);
        on.insert(z);
        on.insert(w);
        return true;
    }
    false
}

fn splice_outside_edge(g: &BipartiteGraph, m: &Matching, h: &VertexSet, path: &mut Vec<Vertex>, on: &mut VertexSet) -> bool {
    let len = path.len();
    for p in (1..len.saturating_sub(1)).step_by(2) {
        let (u, v) = (path[p], path[p + 1]);
        let hit = g.neighbors(u).find_map(|a| {
            if !h.contains(a) || on.contains(a) {
                return None;
            }
            let b = m.mate(a)?;
            (h.contains(b) && g.adjacent(b, v)).then_some((a, b))
        });
        if let Some((a, b)) = hit {
            path.splice(p + 1..p + 1, [a, b]);
            on.insert(a);
            on.insert(b);
            return true;
        }
    }
    false
}

fn reopen_closed_path(g: &BipartiteGraph, m: &Matching, h: &VertexSet, path: &mut Vec<Vertex>, on: &mut VertexSet) -> bool {
    let len = path.len();
    if len < 4 || !g.adjacent(path[0], path[len - 1]) {
        return false;
    }
    for i in 0..len {
        let c = path[i];
        let outside = g.neighbors(c).find(|&a| h.contains(a) && !on.contains(a) && m.mate(a).is_some_and(|b| h.contains(b)));
        if let Some(a) = outside {
            // the closed cycle read from c through its partner
            let forward = m.contains(c, path[(i + 1) % len]);
            let cycle: Vec<Vertex> = walk(path, i, forward).collect();
            let b = m.partner(a);
            let mut grown = vec![b, a];
            grown.extend(cycle);
            *path = grown;
            on.insert(a);
            on.insert(b);
            return true;
        }
    }
    false
}
