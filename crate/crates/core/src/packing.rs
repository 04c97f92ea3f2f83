//! Packing disjoint alternating cycles of length 6 or 8.
//!
//! The engine keeps `t` disjoint short cycles with remainder `H` and applies
//! three moves, cheapest first, each raising `(t, -Σ|C_i|)` lexicographically:
//!
//! - `augment`: a new 6-cycle (else 8-cycle) inside `H`;
//! - `shrink`: an 8-cycle replaced by a 6-cycle through a path of `H`;
//! - `path-pair`: two order-4 paths of `H` and two matching edges of a
//!   6-cycle rebuilt into two 6-cycles.
//!
//! When the moves stall, or the graph is small, an exact backtracking search
//! over short cycles takes over.

use serde::Serialize;

use crate::alternating::{edges_into, enumerate_short_m_cycles, lemma1_cycle};
use crate::conditions::sigma11;
use crate::error::Result;
use crate::graph::{require_perfect, BipartiteGraph, Matching, Vertex, VertexSet};
use crate::structures::{MCycle, MPath};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub cycles: Vec<MCycle>,
    pub remainder: VertexSet,
}

impl Packing {
    pub fn empty(g: &BipartiteGraph) -> Packing {
        Packing { cycles: Vec::new(), remainder: VertexSet::all(g) }
    }

    pub fn total_length(&self) -> usize {
        self.cycles.iter().map(MCycle::len).sum()
    }

    fn push(&mut self, c: MCycle) {
        for &v in c.vertices() {
            self.remainder.remove(v);
        }
        self.cycles.push(c);
    }

    fn replace(&mut self, i: usize, c: MCycle) {
        for &v in self.cycles[i].vertices() {
            self.remainder.insert(v);
        }
        for &v in c.vertices() {
            self.remainder.remove(v);
        }
        self.cycles[i] = c;
    }

    /// Checks disjointness, lengths, alternation, and the remainder.
    pub fn is_valid(&self, g: &BipartiteGraph, m: &Matching) -> bool {
        let mut seen = VertexSet::empty(g.id_bound());
        for c in &self.cycles {
            if !(c.len() == 6 || c.len() == 8) || MCycle::new(g, m, c.vertices().to_vec()).is_err() {
                return false;
            }
            if !c.vertices().iter().all(|&v| seen.insert(v)) {
                return false;
            }
        }
        g.vertices().all(|v| seen.contains(v) != self.remainder.contains(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackMove {
    Augment,
    Shrink,
    PathPair,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PackStatus {
    Success,
    Stalled,
    HypothesisUnmet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackReport {
    pub achieved: usize,
    pub target: usize,
    pub moves_log: Vec<PackMove>,
    pub iterations: usize,
    pub status: PackStatus,
    pub hypothesis_met: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct PackConfig {
    /// Graphs with at most this many vertices go straight to exact search.
    pub exact_threshold: usize,
    /// Node budget for the exact search.
    pub exact_budget: u64,
}

impl Default for PackConfig {
    fn default() -> Self {
        PackConfig { exact_threshold: 24, exact_budget: 2_000_000 }
    }
}

pub fn pack_short_cycles(g: &BipartiteGraph, m: &Matching, k: usize) -> Result<(Packing, PackReport)> {
    pack_short_cycles_with(g, m, k, &PackConfig::default())
}

pub fn pack_short_cycles_with(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    config: &PackConfig,
) -> Result<(Packing, PackReport)> {
    require_perfect(g, m)?;
    let n = g.half_order();
    let hypothesis_met = sigma11(g)?.satisfied && n + 9 >= 12 * k && n >= 3;
    let mut state = Packing::empty(g);
    let mut moves_log = Vec::new();
    let mut iterations = 0;
    if g.order() > config.exact_threshold {
        while state.cycles.len() < k {
            iterations += 1;
            match improve_packing(g, m, &state) {
                Some((next, mv)) => {
                    debug_assert!(next.is_valid(g, m));
                    state = next;
                    moves_log.push(mv);
                }
                None => break,
            }
        }
        if state.cycles.len() < k && hypothesis_met {
            log::warn!("packing moves stalled at {} of {k} cycles with the hypotheses met", state.cycles.len());
        }
    }
    if state.cycles.len() < k {
        let mut budget = config.exact_budget;
        if let Some(cycles) = exact_packing(g, m, k, &mut budget) {
            state = Packing::empty(g);
            for c in cycles {
                state.push(c);
            }
            moves_log.push(PackMove::Exact);
        }
    }
    let achieved = state.cycles.len();
    let status = if achieved >= k {
        PackStatus::Success
    } else if hypothesis_met {
        PackStatus::Stalled
    } else {
        PackStatus::HypothesisUnmet
    };
    log::debug!("packing: {achieved}/{k} after {iterations} iterations, moves {moves_log:?}");
    Ok((state, PackReport { achieved, target: k, moves_log, iterations, status, hypothesis_met }))
}

/// One improving move, or `None` when every move is stuck.
pub fn improve_packing(g: &BipartiteGraph, m: &Matching, state: &Packing) -> Option<(Packing, PackMove)> {
    if let Some(c) = augment(g, m, &state.remainder) {
        let mut next = state.clone();
        next.push(c);
        return Some((next, PackMove::Augment));
    }
    if let Some((i, c)) = shrink(g, m, state) {
        let mut next = state.clone();
        next.replace(i, c);
        return Some((next, PackMove::Shrink));
    }
    if let Some((i, a, b)) = path_pair(g, m, state) {
        let mut next = state.clone();
        next.replace(i, a);
        next.push(b);
        return Some((next, PackMove::PathPair));
    }
    None
}

fn augment(g: &BipartiteGraph, m: &Matching, h: &VertexSet) -> Option<MCycle> {
    enumerate_short_m_cycles(g, m, h, &[6]).next().or_else(|| enumerate_short_m_cycles(g, m, h, &[8]).next())
}

/// Matching edges of `h` as order-2 paths, `X` end first.
fn h_edges(g: &BipartiteGraph, m: &Matching, h: &VertexSet) -> Vec<MPath> {
    h.iter()
        .filter(|v| v.side() == crate::graph::Side::X)
        .filter_map(|x| MPath::edge(g, m, x).ok())
        .filter(|p| h.contains(p.end()))
        .collect()
}

/// All order-4 alternating paths `a ā b b̄` inside `h`, each listed once.
fn order4_paths(g: &BipartiteGraph, m: &Matching, h: &VertexSet) -> Vec<MPath> {
    let mut out = Vec::new();
    for a in h.iter() {
        let Some(a2) = m.mate(a) else { continue };
        if !h.contains(a2) {
            continue;
        }
        for b in g.neighbors(a2) {
            if b == a || !h.contains(b) {
                continue;
            }
            let Some(b2) = m.mate(b) else { continue };
            if !h.contains(b2) || b2 == a2 {
                continue;
            }
            // each path appears from both ends; keep the one starting at the smaller end
            if a < b2 {
                if let Ok(p) = MPath::new(g, m, vec![a, a2, b, b2]) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn shrink(g: &BipartiteGraph, m: &Matching, state: &Packing) -> Option<(usize, MCycle)> {
    let h = &state.remainder;
    let edges = h_edges(g, m, h);
    for (i, c) in state.cycles.iter().enumerate() {
        if c.len() != 8 {
            continue;
        }
        for p in &edges {
            if edges_into(g, &[p.start(), p.end()], c.vertices()) > 4 {
                if let Some(six) = lemma1_cycle(g, m, c, p, 2) {
                    return Some((i, six));
                }
            }
        }
    }
    let paths = order4_paths(g, m, h);
    for (i, c) in state.cycles.iter().enumerate() {
        if c.len() != 8 {
            continue;
        }
        for p in &paths {
            if edges_into(g, &[p.start(), p.end()], c.vertices()) > 4 {
                if let Some(six) = lemma1_cycle(g, m, c, p, 1) {
                    return Some((i, six));
                }
            }
        }
    }
    None
}

/// A family of disjoint order-4 paths in `h`, preferring paths whose ends
/// have degree sum at least σ₁,₁, then as many paths as possible.
fn path_family(g: &BipartiteGraph, m: &Matching, h: &VertexSet, sigma: Option<i64>) -> Vec<MPath> {
    let starred = |p: &MPath| sigma.map_or(true, |s| (g.degree(p.start()) + g.degree(p.end())) as i64 >= s);
    let mut candidates = order4_paths(g, m, h);
    candidates.sort_by_key(|p| !starred(p));
    let mut used = VertexSet::empty(g.id_bound());
    let mut family: Vec<MPath> = Vec::new();
    let fill = |family: &mut Vec<MPath>, used: &mut VertexSet| {
        for p in &candidates {
            if p.vertices().iter().all(|&v| !used.contains(v)) {
                for &v in p.vertices() {
                    used.insert(v);
                }
                family.push(p.clone());
            }
        }
    };
    fill(&mut family, &mut used);
    // exchanges on pairs of unstarred paths until none raises the starred count
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;
        let plain: Vec<usize> = (0..family.len()).filter(|&i| !starred(&family[i])).collect();
        'outer: for &i in &plain {
            let p1 = family[i].vertices().to_vec();
            // reading the same four vertices as x1' y1 x1 y1'
            if g.adjacent(p1[0], p1[3]) {
                if let Ok(r) = MPath::new(g, m, vec![p1[2], p1[3], p1[0], p1[1]]) {
                    if starred(&r) {
                        family[i] = r;
                        changed = true;
                        break 'outer;
                    }
                }
            }
            for &j in &plain {
                if i == j {
                    continue;
                }
                let p2 = family[j].vertices().to_vec();
                if g.adjacent(p1[0], p2[3]) {
                    if let Ok(q) = MPath::new(g, m, vec![p1[1], p1[0], p2[3], p2[2]]) {
                        if starred(&q) {
                            for &v in p1.iter().chain(p2.iter()) {
                                used.remove(v);
                            }
                            for &v in q.vertices() {
                                used.insert(v);
                            }
                            let (hi, lo) = (i.max(j), i.min(j));
                            family.remove(hi);
                            family.remove(lo);
                            family.push(q);
                            fill(&mut family, &mut used);
                            changed = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !changed || rounds > 4 * family.len() + 4 {
            break;
        }
    }
    family.sort_by_key(|p| !starred(p));
    family
}

/// The 6-cycle `P a b` for a path `P[x, y]` and a matching edge `ab`, if closable.
fn close_with_edge(g: &BipartiteGraph, m: &Matching, p: &MPath, a: Vertex, b: Vertex) -> Option<MCycle> {
    for (s, t) in [(a, b), (b, a)] {
        if g.adjacent(p.end(), s) && g.adjacent(t, p.start()) {
            let mut seq = p.vertices().to_vec();
            seq.extend([s, t]);
            if let Ok(c) = MCycle::new(g, m, seq) {
                return Some(c);
            }
        }
    }
    None
}

fn path_pair(g: &BipartiteGraph, m: &Matching, state: &Packing) -> Option<(usize, MCycle, MCycle)> {
    let sigma = sigma11(g).ok().and_then(|r| r.value.finite());
    let family = path_family(g, m, &state.remainder, sigma);
    for (ci, c) in state.cycles.iter().enumerate() {
        if c.len() != 6 {
            continue;
        }
        let heavy: Vec<&MPath> =
            family.iter().filter(|p| edges_into(g, &[p.start(), p.end()], c.vertices()) >= 5).collect();
        let medges: Vec<(Vertex, Vertex)> = c.m_edges().collect();
        for (i, p) in heavy.iter().enumerate() {
            for q in &heavy[i + 1..] {
                for (e1, &(a, b)) in medges.iter().enumerate() {
                    let Some(first) = close_with_edge(g, m, p, a, b) else { continue };
                    for (e2, &(a2, b2)) in medges.iter().enumerate() {
                        if e1 == e2 {
                            continue;
                        }
                        if let Some(second) = close_with_edge(g, m, q, a2, b2) {
                            return Some((ci, first, second));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Exact search for `k` disjoint alternating 6- or 8-cycles.
pub(crate) fn exact_packing(g: &BipartiteGraph, m: &Matching, k: usize, budget: &mut u64) -> Option<Vec<MCycle>> {
    let mut avail = VertexSet::all(g);
    let mut chosen = Vec::new();
    if exact_rec(g, m, k, &mut avail, &mut chosen, None, budget) {
        Some(chosen)
    } else {
        None
    }
}

fn exact_rec(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    avail: &mut VertexSet,
    chosen: &mut Vec<MCycle>,
    floor: Option<&MCycle>,
    budget: &mut u64,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    if avail.len() < 6 * (k - chosen.len()) || *budget == 0 {
        return false;
    }
    let candidates: Vec<MCycle> =
        enumerate_short_m_cycles(g, m, avail, &[6, 8]).filter(|c| floor.map_or(true, |f| c > f)).collect();
    for c in candidates {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        for &v in c.vertices() {
            avail.remove(v);
        }
        chosen.push(c.clone());
        if exact_rec(g, m, k, avail, chosen, Some(&c), budget) {
            return true;
        }
        chosen.pop();
        for &v in c.vertices() {
            avail.insert(v);
        }
    }
    false
}
