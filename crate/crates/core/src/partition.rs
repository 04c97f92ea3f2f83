//! From disjoint alternating cycles to an alternating 2-factor with exactly
//! `k` cycles: the crossing step on a maximal path, the absorbing build,
//! the reduction from `k + 1` cycles to `k`, and the end-to-end solvers.

use serde::Serialize;

use crate::alternating::{
    edges_into, find_insertion_edge, grow_maximal_m_path, insert_path, merge_two_cycles, open_cycle_at,
    open_cycle_ending_at, Host,
};
use crate::conditions::{theorem_met, Instance, TheoremId};
use crate::error::{GraphError, Result};
use crate::graph::{require_perfect, BipartiteGraph, Digraph, Matching, Side, Vertex, VertexSet};
use crate::oracle::{oracle_directed_2factor, oracle_m_2factor, OracleBudget, OracleResult};
use crate::packing::{pack_short_cycles_with, PackConfig, PackStatus};
use crate::structures::{DirectedTwoFactor, MCycle, MPath, MTwoFactor};
use crate::transforms::{digraph_to_bipartite, translate_m2factor};
use crate::verify::{verify_directed_2factor, verify_m_2factor};

fn inconclusive(msg: impl Into<String>) -> GraphError {
    GraphError::Inconclusive(msg.into())
}

/// Vertices of the cycles; errors if two cycles meet.
fn cover(g: &BipartiteGraph, cycles: &[MCycle]) -> Result<VertexSet> {
    let mut on = VertexSet::empty(g.id_bound());
    for c in cycles {
        for &v in c.vertices() {
            if !on.insert(v) {
                return Err(GraphError::Precondition(format!("cycles share vertex {v}")));
            }
        }
    }
    Ok(on)
}

fn complement(g: &BipartiteGraph, on: &VertexSet) -> VertexSet {
    VertexSet::from_vertices(g.id_bound(), g.vertices().filter(|&v| !on.contains(v)))
}

/// Cycle vertices from index `from` forward to index `to`, inclusive.
fn arc(seq: &[Vertex], from: usize, to: usize) -> Vec<Vertex> {
    let len = seq.len();
    let steps = (to + len - from) % len;
    (0..=steps).map(|i| seq[(from + i) % len]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossingOutcome {
    /// `|P₀| = 2` (no cycle), or an alternating Hamilton cycle on `V(P₀)`.
    SmallOrHamiltonian(Option<MCycle>),
    /// `D₀` and `D_i'` partition `V(P₀ ∪ D_i)` and `V(D_i) ⊊ V(D_i')`.
    TwoFactorAbsorb { index: usize, d0: MCycle, d_i: MCycle },
    /// `edges = e({x, y}, G - H)` with `2 * edges >= outside + 2`.
    HighOutsideDegree { edges: usize, outside: usize },
    /// No outcome realized; only possible when the degree hypothesis fails.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    /// The analyzed path; grown beyond the input when it was not maximal.
    pub path: MPath,
    pub outcome: CrossingOutcome,
    pub steps: usize,
}

/// `D₀` as a cyclic sequence starting at `u` with `u u⁺ ∉ M`, the position
/// `j` of `v` on it, and the path `Q₀ = w .. z` with `wu, zv ∈ E`.
#[derive(Debug, Clone)]
struct Split {
    d0: Vec<Vertex>,
    j: usize,
    q0: Vec<Vertex>,
}

impl Split {
    /// The same configuration read against the opposite orientation, with
    /// the roles of `(u, w)` and `(v, z)` exchanged.
    fn mirrored(&self) -> Split {
        let len = self.d0.len();
        let d0 = (0..len).map(|i| self.d0[(self.j + len - i) % len]).collect();
        let q0 = self.q0.iter().rev().copied().collect();
        Split { d0, j: self.j, q0 }
    }

    /// `R = v → D₀ → u`.
    fn r(&self) -> Vec<Vertex> {
        let mut r = self.d0[self.j..].to_vec();
        r.push(self.d0[0]);
        r
    }

    /// `D₀' = R u w Q₀ z v`.
    fn d0_prime(&self) -> Vec<Vertex> {
        let mut s = self.r();
        s.extend_from_slice(&self.q0);
        s
    }
}

enum Exchange {
    Found(CrossingOutcome),
    Longer(Vec<Vertex>),
    Stuck,
}

fn initial_split(g: &BipartiteGraph, seq: &[Vertex]) -> Option<Split> {
    let l = seq.len();
    let (x, y) = (seq[0], seq[l - 1]);
    // last neighbor of x first, first neighbor of y first
    let us: Vec<usize> = (1..l).step_by(2).rev().filter(|&i| g.adjacent(x, seq[i])).collect();
    let vs: Vec<usize> = (0..l).step_by(2).filter(|&i| g.adjacent(y, seq[i])).collect();
    for &iu in &us {
        if let Some(&iv) = vs.iter().find(|&&iv| iv + 3 <= iu) {
            let mut d0 = vec![seq[iu]];
            d0.extend_from_slice(&seq[..iu]);
            return Some(Split { d0, j: iv + 1, q0: seq[iu + 1..].to_vec() });
        }
    }
    None
}

fn exchange(
    g: &BipartiteGraph,
    m: &Matching,
    cycles: &[MCycle],
    h: &VertexSet,
    mut s: Split,
    steps: &mut usize,
    limit: usize,
) -> Result<Exchange> {
    let hamiltonian = |seq: Vec<Vertex>| -> Result<Exchange> {
        Ok(Exchange::Found(CrossingOutcome::SmallOrHamiltonian(Some(MCycle::new(g, m, seq)?))))
    };
    let mut mirrored_once = false;
    while *steps < limit {
        *steps += 1;
        let (u, up) = (s.d0[0], s.d0[1]);
        let (w, z) = (s.q0[0], *s.q0.last().expect("non-empty Q0"));
        debug_assert!(g.adjacent(u, w) && g.adjacent(s.d0[s.j], z) && !m.contains(u, up));
        if s.j == 1 {
            return hamiltonian(s.d0_prime());
        }
        let d0 = MCycle::new(g, m, s.d0.clone())?;
        let d0p = MCycle::new(g, m, s.d0_prime())?;
        let q0 = MPath::new(g, m, s.q0.clone())?;
        let q0p = MPath::new(g, m, s.d0[1..s.j].to_vec())?;
        if let Some(e) = find_insertion_edge(g, Host::Cycle(&d0), &q0) {
            return hamiltonian(insert_path(g, m, &d0, &q0, &e)?.into_vertices());
        }
        if let Some(e) = find_insertion_edge(g, Host::Cycle(&d0p), &q0p) {
            return hamiltonian(insert_path(g, m, &d0p, &q0p, &e)?.into_vertices());
        }
        for (index, di) in cycles.iter().enumerate() {
            for (kept, moved) in [(&d0, &q0), (&d0p, &q0p)] {
                if kept.len() < 6 {
                    continue;
                }
                if let Some(e) = find_insertion_edge(g, Host::Cycle(di), moved) {
                    let d_i = insert_path(g, m, di, moved, &e)?;
                    return Ok(Exchange::Found(CrossingOutcome::TwoFactorAbsorb { index, d0: kept.clone(), d_i }));
                }
            }
        }
        // w or z sees Q0': a closer pair (u, v)
        if let Some(t) = (2..s.j).step_by(2).find(|&t| g.adjacent(w, s.d0[t])) {
            s.d0.rotate_left(t);
            s.j -= t;
            mirrored_once = false;
            continue;
        }
        if let Some(t) = (1..s.j).step_by(2).find(|&t| g.adjacent(z, s.d0[t])) {
            s.j = t;
            mirrored_once = false;
            continue;
        }
        // u⁺ sees Q0: a longer D0
        if let Some(i) = (1..s.q0.len()).step_by(2).find(|&i| g.adjacent(up, s.q0[i])) {
            if i == s.q0.len() - 1 {
                let mut seq = s.q0.clone();
                seq.extend_from_slice(&s.d0[1..]);
                seq.push(u);
                return hamiltonian(seq);
            }
            let mut d0 = vec![s.q0[i]];
            d0.extend_from_slice(&s.d0[1..]);
            d0.push(u);
            d0.extend_from_slice(&s.q0[..i]);
            s = Split { d0, j: s.j, q0: s.q0[i + 1..].to_vec() };
            mirrored_once = false;
            continue;
        }
        let on = VertexSet::from_vertices(g.id_bound(), s.d0.iter().chain(&s.q0).copied());
        let outside = |e: Vertex| g.neighbors(e).find(|&a| h.contains(a) && !on.contains(a));
        if let Some(a) = outside(w) {
            let mut p = vec![m.partner(a), a];
            p.extend_from_slice(&s.q0);
            p.extend(s.r());
            p.extend_from_slice(&s.d0[1..s.j]);
            return Ok(Exchange::Longer(p));
        }
        if let Some(a) = outside(up) {
            let mut p = vec![m.partner(a), a];
            p.extend_from_slice(&s.d0[1..s.j]);
            p.extend(s.r());
            p.extend_from_slice(&s.q0);
            return Ok(Exchange::Longer(p));
        }
        if mirrored_once {
            return Ok(Exchange::Stuck);
        }
        s = s.mirrored();
        mirrored_once = true;
    }
    Ok(Exchange::Stuck)
}

/// Analyzes a maximal alternating path `p0` of `H = G - ∪ D_i` against the
/// cycles `D_i` and realizes one of the three outcomes.
///
/// The path is first grown inside `H`; whenever an exchange exposes a
/// longer path, the analysis restarts on it.
pub fn crossing_analysis(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle], p0: &MPath) -> Result<CrossingReport> {
    require_perfect(g, m)?;
    let outside_set = cover(g, cycles)?;
    if p0.vertices().iter().any(|&v| outside_set.contains(v)) {
        return Err(GraphError::Precondition("path meets the cycles".into()));
    }
    let h = complement(g, &outside_set);
    let outside: Vec<Vertex> = outside_set.iter().collect();
    let mut path = grow_maximal_m_path(g, m, &h, p0.clone());
    let mut steps = 0;
    let limit = 8 * g.order() * g.order() + 64;
    loop {
        let seq = path.vertices().to_vec();
        let l = seq.len();
        let (x, y) = (seq[0], seq[l - 1]);
        let done = |path: MPath, outcome, steps| Ok(CrossingReport { path, outcome, steps });
        if l == 2 {
            return done(path, CrossingOutcome::SmallOrHamiltonian(None), steps);
        }
        if g.adjacent(x, y) {
            let c = MCycle::new(g, m, seq)?;
            return done(path, CrossingOutcome::SmallOrHamiltonian(Some(c)), steps);
        }
        let edges = edges_into(g, &[x, y], &outside);
        let high = 2 * edges >= outside.len() + 2;
        let inner = edges_into(g, &[x, y], &seq);
        if 2 * inner < l + 4 && high {
            return done(path, CrossingOutcome::HighOutsideDegree { edges, outside: outside.len() }, steps);
        }
        if let Some(split) = initial_split(g, &seq) {
            match exchange(g, m, cycles, &h, split, &mut steps, limit)? {
                Exchange::Found(outcome) => return done(path, outcome, steps),
                Exchange::Longer(p) => {
                    path = grow_maximal_m_path(g, m, &h, MPath::new(g, m, p)?);
                    continue;
                }
                Exchange::Stuck => {}
            }
        }
        let outcome = if high {
            CrossingOutcome::HighOutsideDegree { edges, outside: outside.len() }
        } else {
            CrossingOutcome::Inconclusive
        };
        return done(path, outcome, steps);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub edge_insertions: usize,
    pub path_insertions: usize,
    pub absorptions: usize,
    pub crossings: usize,
}

fn check_seed(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle]) -> Result<()> {
    require_perfect(g, m)?;
    cover(g, cycles)?;
    if let Some(c) = cycles.iter().find(|c| c.len() < 6) {
        return Err(GraphError::Precondition(format!("cycle of length {} < 6", c.len())));
    }
    Ok(())
}

/// Extends `k + 1` disjoint alternating cycles of length at least 6 to an
/// alternating 2-factor with `k + 1` or `k` cycles.
pub fn build_k_or_k1_2factor(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    seed: Vec<MCycle>,
) -> Result<(Vec<MCycle>, BuildReport)> {
    check_seed(g, m, &seed)?;
    let n = g.half_order();
    if k == 0 || 2 * n <= 6 * (k + 1) {
        return Err(GraphError::Precondition(format!("need 2n > 6(k+1), got n = {n}, k = {k}")));
    }
    if seed.len() != k + 1 {
        return Err(GraphError::Precondition(format!("seed has {} cycles, expected {}", seed.len(), k + 1)));
    }
    let mut cycles = seed;
    let mut report = BuildReport::default();
    loop {
        let h = complement(g, &cover(g, &cycles)?);
        if h.is_empty() {
            return Ok((cycles, report));
        }
        if insert_h_edge(g, m, &h, &mut cycles)? {
            report.edge_insertions += 1;
            continue;
        }
        let mut progressed = false;
        let mut spanning: Option<Vec<Vertex>> = None;
        let mut tried = VertexSet::empty(g.id_bound());
        for x in h.iter().filter(|v| v.side() == Side::X) {
            if tried.contains(x) {
                continue;
            }
            let start = MPath::edge(g, m, x)?;
            let r = crossing_analysis(g, m, &cycles, &start)?;
            report.crossings += 1;
            for &v in r.path.vertices() {
                tried.insert(v);
            }
            match r.outcome {
                CrossingOutcome::TwoFactorAbsorb { index, d_i, .. } => {
                    cycles[index] = d_i;
                    report.absorptions += 1;
                    progressed = true;
                }
                CrossingOutcome::HighOutsideDegree { .. } => {
                    if let Some((i, c)) = insert_anywhere(g, m, &cycles, &r.path)? {
                        cycles[i] = c;
                        report.path_insertions += 1;
                        progressed = true;
                    }
                }
                CrossingOutcome::SmallOrHamiltonian(c) if r.path.len() == h.len() => {
                    spanning = Some(c.map_or_else(|| r.path.vertices().to_vec(), MCycle::into_vertices));
                }
                _ => {}
            }
            if progressed {
                break;
            }
        }
        if progressed {
            continue;
        }
        let Some(hc) = spanning else {
            return Err(inconclusive("leftover vertices have no alternating Hamilton cycle"));
        };
        return attach_leftover(g, m, cycles, hc, &mut report).map(|c| (c, report));
    }
}

fn insert_h_edge(g: &BipartiteGraph, m: &Matching, h: &VertexSet, cycles: &mut [MCycle]) -> Result<bool> {
    for x in h.iter().filter(|v| v.side() == Side::X) {
        let p = MPath::edge(g, m, x)?;
        if let Some((i, c)) = insert_anywhere(g, m, cycles, &p)? {
            cycles[i] = c;
            return Ok(true);
        }
    }
    Ok(false)
}

fn insert_anywhere(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle], p: &MPath) -> Result<Option<(usize, MCycle)>> {
    for (i, c) in cycles.iter().enumerate() {
        if let Some(e) = find_insertion_edge(g, Host::Cycle(c), p) {
            return Ok(Some((i, insert_path(g, m, c, p, &e)?)));
        }
    }
    Ok(None)
}

/// Joins the leftover cycle `hc` (or single matching edge) to a cycle it
/// touches and runs the crossing step on the resulting Hamilton path.
fn attach_leftover(
    g: &BipartiteGraph,
    m: &Matching,
    cycles: Vec<MCycle>,
    hc: Vec<Vertex>,
    report: &mut BuildReport,
) -> Result<Vec<MCycle>> {
    let hcycle = if hc.len() >= 4 { Some(MCycle::new(g, m, hc.clone())?) } else { None };
    let mut attempts = 0;
    for (i, ci) in cycles.iter().enumerate() {
        for &a in &hc {
            for &c in ci.vertices() {
                if !g.adjacent(a, c) {
                    continue;
                }
                attempts += 1;
                if attempts > 256 {
                    return Err(inconclusive("leftover attachment attempts exhausted"));
                }
                let mut seq = match &hcycle {
                    Some(hcy) => open_cycle_ending_at(m, hcy, a),
                    None => vec![m.partner(a), a],
                };
                seq.extend(open_cycle_at(m, ci, c));
                let p = MPath::new(g, m, seq)?;
                let others: Vec<MCycle> = cycles.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect();
                let r = crossing_analysis(g, m, &others, &p)?;
                report.crossings += 1;
                match r.outcome {
                    CrossingOutcome::SmallOrHamiltonian(Some(c)) if c.len() == r.path.len() && r.path.len() == p.len() => {
                        let mut out = others;
                        out.push(c);
                        return Ok(out);
                    }
                    CrossingOutcome::TwoFactorAbsorb { index, d0, d_i } if r.path.len() == p.len() => {
                        let mut out = others;
                        out[index] = d_i;
                        out.push(d0);
                        return Ok(out);
                    }
                    CrossingOutcome::HighOutsideDegree { .. } if r.path.len() == p.len() => {
                        if let Some((h, c)) = insert_anywhere(g, m, &others, &r.path)? {
                            let mut out = others;
                            out[h] = c;
                            return Ok(out);
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    Err(inconclusive("leftover could not be attached"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReduceStrategy {
    /// Two cycles merged through a pair of non-matching edges.
    Merge,
    /// A crossing edge between two cycles turned into a Hamilton path of their union.
    CrossingPath,
    /// One cycle cut into two paths, each inserted elsewhere.
    SplitInsert,
    /// Three cycles rebuilt into two.
    ThreeCycle,
    /// Exhaustive search on the union of two or three cycles.
    Exact,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub steps: Vec<ReduceStrategy>,
}

#[derive(Debug, Clone, Copy)]
pub struct ReduceConfig {
    /// Crossing-path attempts per reduction step.
    pub crossing_attempts: usize,
    /// Node budget of each exhaustive search on a union of cycles.
    pub exact_nodes: u64,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { crossing_attempts: 400, exact_nodes: 200_000 }
    }
}

/// Reduces an alternating 2-factor to exactly `k` cycles of length at
/// least 6, one cycle at a time.
pub fn reduce_to_k(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    factor: Vec<MCycle>,
    config: &ReduceConfig,
) -> Result<(Vec<MCycle>, ReduceReport)> {
    check_seed(g, m, &factor)?;
    if cover(g, &factor)?.len() != g.order() {
        return Err(GraphError::Precondition("cycles do not span the graph".into()));
    }
    if k == 0 || factor.len() < k {
        return Err(GraphError::Precondition(format!("cannot reach {k} cycles from {}", factor.len())));
    }
    let mut cycles = factor;
    let mut report = ReduceReport::default();
    while cycles.len() > k {
        let (next, strategy) = reduce_once(g, m, &cycles, config)?
            .ok_or_else(|| inconclusive(format!("no reduction found from {} cycles", cycles.len())))?;
        debug_assert_eq!(next.len() + 1, cycles.len());
        log::debug!("reduced {} -> {} cycles by {strategy:?}", cycles.len(), next.len());
        cycles = next;
        report.steps.push(strategy);
    }
    Ok((cycles, report))
}

fn without(cycles: &[MCycle], drop: &[usize]) -> Vec<MCycle> {
    cycles.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, c)| c.clone()).collect()
}

fn reduce_once(
    g: &BipartiteGraph,
    m: &Matching,
    cycles: &[MCycle],
    config: &ReduceConfig,
) -> Result<Option<(Vec<MCycle>, ReduceStrategy)>> {
    let t = cycles.len();
    for a in 0..t {
        for b in a + 1..t {
            if let Some((c, _)) = merge_two_cycles(g, m, &cycles[a], &cycles[b]) {
                let mut out = without(cycles, &[a, b]);
                out.push(c);
                return Ok(Some((out, ReduceStrategy::Merge)));
            }
        }
    }
    if let Some(out) = crossing_paths(g, m, cycles, config.crossing_attempts)? {
        return Ok(Some((out, ReduceStrategy::CrossingPath)));
    }
    if let Some(out) = split_insert(g, m, cycles)? {
        return Ok(Some((out, ReduceStrategy::SplitInsert)));
    }
    if let Some(out) = three_cycle_patterns(g, m, cycles, config.crossing_attempts)? {
        return Ok(Some((out, ReduceStrategy::ThreeCycle)));
    }
    if let Some(out) = exact_unions(g, m, cycles, config.exact_nodes)? {
        return Ok(Some((out, ReduceStrategy::Exact)));
    }
    Ok(None)
}

/// For a cross edge `y₁ x₂` (`y₁` on `C_a`, `x₂` on `C_b`), the Hamilton
/// path `y₁⁺ → C_a → y₁ x₂ → C_b → x₂⁻` of their union, analyzed against
/// the remaining cycles.
fn crossing_paths(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle], attempts: usize) -> Result<Option<Vec<MCycle>>> {
    let mut tried = 0;
    let t = cycles.len();
    for a in 0..t {
        for b in 0..t {
            if a == b {
                continue;
            }
            let sa = cycles[a].x_first_order();
            let sb = cycles[b].x_first_order();
            for (p, &y1) in sa.iter().enumerate().filter(|(_, v)| v.side() == Side::Y) {
                for (q, &x2) in sb.iter().enumerate().filter(|(_, v)| v.side() == Side::X) {
                    if !g.adjacent(y1, x2) {
                        continue;
                    }
                    tried += 1;
                    if tried > attempts {
                        return Ok(None);
                    }
                    let mut seq = arc(&sa, (p + 1) % sa.len(), p);
                    seq.extend(arc(&sb, q, (q + sb.len() - 1) % sb.len()));
                    let path = MPath::new(g, m, seq)?;
                    let others = without(cycles, &[a, b]);
                    let r = crossing_analysis(g, m, &others, &path)?;
                    if r.path.len() != path.len() {
                        continue;
                    }
                    match r.outcome {
                        CrossingOutcome::SmallOrHamiltonian(Some(c)) => {
                            let mut out = others;
                            out.push(c);
                            return Ok(Some(out));
                        }
                        CrossingOutcome::TwoFactorAbsorb { index, d0, d_i } => {
                            let mut out = others;
                            out[index] = d_i;
                            out.push(d0);
                            return Ok(Some(out));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Cuts a cycle at two non-matching edges and inserts the two resulting
/// paths into other cycles (the same one or two different ones).
fn split_insert(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle]) -> Result<Option<Vec<MCycle>>> {
    let t = cycles.len();
    for a in 0..t {
        let s = cycles[a].vertices();
        let len = s.len();
        // non-matching edges of the canonical cycle sit at odd offsets
        for p in (1..len).step_by(2) {
            for q in (p + 2..len).step_by(2) {
                let first = MPath::new(g, m, s[p + 1..=q].to_vec())?;
                let second = MPath::new(g, m, arc(s, (q + 1) % len, p))?;
                for b in (0..t).filter(|&b| b != a) {
                    let Some(e1) = find_insertion_edge(g, Host::Cycle(&cycles[b]), &first) else { continue };
                    let cb = insert_path(g, m, &cycles[b], &first, &e1)?;
                    if let Some(e2) = find_insertion_edge(g, Host::Cycle(&cb), &second) {
                        let mut out = without(cycles, &[a, b]);
                        out.push(insert_path(g, m, &cb, &second, &e2)?);
                        return Ok(Some(out));
                    }
                    for c in (0..t).filter(|&c| c != a && c != b) {
                        if let Some(e2) = find_insertion_edge(g, Host::Cycle(&cycles[c]), &second) {
                            let cc = insert_path(g, m, &cycles[c], &second, &e2)?;
                            let mut out = without(cycles, &[a, b, c]);
                            out.push(cb);
                            out.push(cc);
                            return Ok(Some(out));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Three cycles rebuilt into two, following the endgame patterns.
///
/// With `y₁ x₂` a cross edge, `x₁ = y₁⁻`, `u₁ = y₁⁺`, `v₁ = x₁⁻`,
/// `y₂ = x₂⁺`, `v₂ = x₂⁻`, and a non-matching edge `y₃ u₃` of the third
/// cycle with `x₁ y₃, v₂ u₃ ∈ E`, the cycle
/// `D₀ = x₁ y₁ x₂ → C₂ → v₂ u₃ → C₃ → y₃ x₁` leaves the path
/// `P₀ = u₁ → C₁ → v₁`, which is analyzed against `D₀` and the rest; two
/// explicit two-cycle rebuilds are tried as well.
fn three_cycle_patterns(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle], attempts: usize) -> Result<Option<Vec<MCycle>>> {
    let t = cycles.len();
    let mut tried = 0;
    for i1 in 0..t {
        let s1 = cycles[i1].x_first_order();
        let l1 = s1.len();
        for i2 in (0..t).filter(|&i| i != i1) {
            let s2 = cycles[i2].x_first_order();
            let l2 = s2.len();
            for p1 in (1..l1).step_by(2) {
                for p2 in (0..l2).step_by(2) {
                    let (y1, x2) = (s1[p1], s2[p2]);
                    if !g.adjacent(y1, x2) {
                        continue;
                    }
                    let x1 = s1[p1 - 1];
                    let pv2 = (p2 + l2 - 1) % l2;
                    let v2 = s2[pv2];
                    for i3 in (0..t).filter(|&i| i != i1 && i != i2) {
                        let s3 = cycles[i3].x_first_order();
                        let l3 = s3.len();
                        for p3 in (1..l3).step_by(2) {
                            let (y3, u3) = (s3[p3], s3[(p3 + 1) % l3]);
                            if !g.adjacent(x1, y3) || !g.adjacent(v2, u3) {
                                continue;
                            }
                            tried += 1;
                            if tried > attempts {
                                return Ok(None);
                            }
                            let rest = without(cycles, &[i1, i2, i3]);
                            let x3 = s3[p3 - 1];
                            // D0 and the path left on C1
                            let mut d0 = vec![x1, y1];
                            d0.extend(arc(&s2, p2, pv2));
                            d0.extend(arc(&s3, (p3 + 1) % l3, p3));
                            let d0 = MCycle::new(g, m, d0)?;
                            if l1 >= 8 {
                                let p0 = MPath::new(g, m, arc(&s1, (p1 + 1) % l1, (p1 + l1 - 2) % l1))?;
                                let mut against = vec![d0.clone()];
                                against.extend(rest.iter().cloned());
                                let r = crossing_analysis(g, m, &against, &p0)?;
                                if r.path.len() == p0.len() {
                                    match r.outcome {
                                        CrossingOutcome::SmallOrHamiltonian(Some(c)) if c.len() >= 6 => {
                                            let mut out = rest.clone();
                                            out.push(d0.clone());
                                            out.push(c);
                                            return Ok(Some(out));
                                        }
                                        CrossingOutcome::TwoFactorAbsorb { index, d0: kept, d_i } => {
                                            let mut out = against;
                                            out[index] = d_i;
                                            out.push(kept);
                                            return Ok(Some(out));
                                        }
                                        _ => {}
                                    }
                                }
                            }
                            // x3 joined to some b2 on C2 other than v2
                            for pb in (1..l2).step_by(2) {
                                let b2 = s2[pb];
                                if b2 == v2 || !g.adjacent(x3, b2) {
                                    continue;
                                }
                                let mut a = arc(&s1, (p1 + 1) % l1, (p1 + l1 - 2) % l1);
                                a.extend(arc(&s2, (pb + 1) % l2, pv2));
                                a.extend(arc(&s3, (p3 + 1) % l3, (p3 + l3 - 2) % l3));
                                let mut b = vec![x1, y1];
                                b.extend(arc(&s2, p2, pb));
                                b.extend([x3, y3]);
                                if let Some(out) = two_cycles(g, m, &rest, a, b) {
                                    return Ok(Some(out));
                                }
                            }
                            // y2 joined to some a3 on C3 other than u3
                            let y2 = s2[p2 + 1];
                            for pa in (0..l3).step_by(2) {
                                let a3 = s3[pa];
                                if a3 == u3 || !g.adjacent(y2, a3) {
                                    continue;
                                }
                                let mut a = arc(&s1, (p1 + 1) % l1, (p1 + l1 - 2) % l1);
                                a.extend(arc(&s2, (p2 + 2) % l2, pv2));
                                a.extend(arc(&s3, (p3 + 1) % l3, (pa + l3 - 1) % l3));
                                let mut b = vec![x1, y1, x2, y2];
                                b.extend(arc(&s3, pa, p3));
                                if let Some(out) = two_cycles(g, m, &rest, a, b) {
                                    return Ok(Some(out));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn two_cycles(g: &BipartiteGraph, m: &Matching, rest: &[MCycle], a: Vec<Vertex>, b: Vec<Vertex>) -> Option<Vec<MCycle>> {
    if a.len() < 6 || b.len() < 6 {
        return None;
    }
    let ca = MCycle::new(g, m, a).ok()?;
    let cb = MCycle::new(g, m, b).ok()?;
    let mut out = rest.to_vec();
    out.push(ca);
    out.push(cb);
    cover(g, &out).ok()?;
    Some(out)
}

/// The subgraph induced by `vs` (closed under `M`), with the maps from
/// local `X` and `Y` indices back to vertices of `g`.
pub(crate) fn induced(
    g: &BipartiteGraph,
    m: &Matching,
    vs: &[Vertex],
) -> Result<(BipartiteGraph, Matching, Vec<Vertex>, Vec<Vertex>)> {
    let xs: Vec<Vertex> = vs.iter().copied().filter(|v| v.side() == Side::X).collect();
    let ys: Vec<Vertex> = vs.iter().copied().filter(|v| v.side() == Side::Y).collect();
    let local = |v: Vertex, list: &[Vertex]| list.iter().position(|&w| w == v);
    let mut edges = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            if g.adjacent(x, y) {
                edges.push((i, j));
            }
        }
    }
    let sub = BipartiteGraph::new(xs.len(), ys.len(), edges)?;
    let pairs: Vec<(usize, usize)> = xs
        .iter()
        .enumerate()
        .filter_map(|(i, &x)| m.mate(x).and_then(|y| local(y, &ys)).map(|j| (i, j)))
        .collect();
    let sm = Matching::new(&sub, pairs)?;
    Ok((sub, sm, xs, ys))
}

fn exact_unions(g: &BipartiteGraph, m: &Matching, cycles: &[MCycle], nodes: u64) -> Result<Option<Vec<MCycle>>> {
    let t = cycles.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for a in 0..t {
        for b in a + 1..t {
            groups.push(vec![a, b]);
            for c in b + 1..t {
                groups.push(vec![a, b, c]);
            }
        }
    }
    groups.sort_by_key(|grp| (grp.len(), grp.iter().map(|&i| cycles[i].len()).sum::<usize>()));
    let budget = OracleBudget { max_nodes: nodes, ..OracleBudget::default() };
    for grp in groups {
        let vs: Vec<Vertex> = grp.iter().flat_map(|&i| cycles[i].vertices().iter().copied()).collect();
        let (sub, sm, xs, ys) = induced(g, m, &vs)?;
        if let Ok(OracleResult::Feasible(f)) = oracle_m_2factor(&sub, &sm, grp.len() - 1, 6, &budget) {
            let mut out = without(cycles, &grp);
            for c in f.cycles {
                let lifted: Vec<Vertex> = c
                    .into_iter()
                    .map(|v| match v.side() {
                        Side::X => xs[v.index()],
                        Side::Y => ys[v.index()],
                    })
                    .collect();
                out.push(MCycle::new(g, m, lifted)?);
            }
            return Ok(Some(out));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Solved,
    HypothesisUnmet,
    FallbackExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Maximal path closed into an alternating Hamilton cycle (`k = 1`).
    Hamiltonian,
    /// Packing, build, and reduction.
    Pipeline,
    /// Exhaustive search.
    Exact,
    None,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Minimum cycle length; defaults to 3 for digraphs and 6 for bipartite graphs.
    pub min_len: Option<usize>,
    pub exact_fallback: bool,
    pub budget: OracleBudget,
    pub pack: PackConfig,
    pub reduce: ReduceConfig,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            min_len: None,
            exact_fallback: true,
            budget: OracleBudget::default(),
            pack: PackConfig::default(),
            reduce: ReduceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveOutcome<F> {
    pub status: SolveStatus,
    pub factor: Option<F>,
    pub k: usize,
    /// Whether a known existence result covers the instance.
    pub gate_met: bool,
    pub route: Route,
    /// The exhaustive search proved that no factor exists.
    pub certified_infeasible: bool,
    pub notes: Vec<String>,
}

impl<F> SolveOutcome<F> {
    fn unsolved(k: usize, gate_met: bool, notes: Vec<String>, certified_infeasible: bool) -> SolveOutcome<F> {
        SolveOutcome {
            status: if gate_met { SolveStatus::FallbackExhausted } else { SolveStatus::HypothesisUnmet },
            factor: None,
            k,
            gate_met,
            route: Route::None,
            certified_infeasible,
            notes,
        }
    }

    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

fn hamiltonian_route(g: &BipartiteGraph, m: &Matching) -> Result<Option<MCycle>> {
    if g.half_order() < 2 {
        return Ok(None);
    }
    let start = MPath::edge(g, m, Vertex::x(0))?;
    let r = crossing_analysis(g, m, &[], &start)?;
    Ok(match r.outcome {
        CrossingOutcome::SmallOrHamiltonian(Some(c)) if c.len() == g.order() => Some(c),
        _ => None,
    })
}

fn pipeline_route(g: &BipartiteGraph, m: &Matching, k: usize, opts: &SolveOptions, notes: &mut Vec<String>) -> Result<Option<Vec<MCycle>>> {
    let (packing, pack_report) = pack_short_cycles_with(g, m, k + 1, &opts.pack)?;
    if pack_report.status != PackStatus::Success {
        notes.push(format!("packing reached {} of {} short cycles", pack_report.achieved, k + 1));
        return Ok(None);
    }
    let (cycles, _) = build_k_or_k1_2factor(g, m, k, packing.cycles)?;
    if cycles.len() == k {
        return Ok(Some(cycles));
    }
    let (cycles, _) = reduce_to_k(g, m, k, cycles, &opts.reduce)?;
    Ok(Some(cycles))
}

/// Alternating 2-factor with exactly `k` cycles containing the perfect matching `m`.
pub fn solve_m_2factor(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    opts: &SolveOptions,
) -> Result<SolveOutcome<MTwoFactor>> {
    require_perfect(g, m)?;
    let min_len = opts.min_len.unwrap_or(6).max(4);
    let n = g.half_order();
    let theorem = if k == 1 { TheoremId::LasVergnasHamilton } else { TheoremId::DirectedKFactor };
    let gate_met = k >= 1 && theorem_met(Instance::Bipartite(g), k, theorem) && k * min_len <= 2 * n;
    let mut notes = Vec::new();
    if k == 0 {
        return Ok(if n == 0 {
            SolveOutcome { status: SolveStatus::Solved, factor: Some(MTwoFactor::default()), k, gate_met, route: Route::Exact, certified_infeasible: false, notes }
        } else {
            SolveOutcome::unsolved(k, gate_met, notes, true)
        });
    }
    let accept = |cycles: Vec<MCycle>, route: Route, notes: &mut Vec<String>| -> Result<Option<SolveOutcome<MTwoFactor>>> {
        let f = MTwoFactor::from_cycles(cycles);
        let check = verify_m_2factor(g, m, &f, k, min_len)?;
        if check.passed {
            return Ok(Some(SolveOutcome { status: SolveStatus::Solved, factor: Some(f), k, gate_met, route, certified_infeasible: false, notes: notes.clone() }));
        }
        notes.push(format!("{route:?} output rejected: {:?}", check.violations));
        Ok(None)
    };
    if k == 1 {
        match hamiltonian_route(g, m) {
            Ok(Some(c)) => {
                if let Some(out) = accept(vec![c], Route::Hamiltonian, &mut notes)? {
                    return Ok(out);
                }
            }
            Ok(None) => notes.push("no alternating Hamilton cycle from the crossing step".into()),
            Err(e) => notes.push(format!("hamiltonian route: {e}")),
        }
    }
    if 2 * n > 6 * (k + 1) {
        match pipeline_route(g, m, k, opts, &mut notes) {
            Ok(Some(cycles)) => {
                if let Some(out) = accept(cycles, Route::Pipeline, &mut notes)? {
                    return Ok(out);
                }
            }
            Ok(None) => {}
            Err(e) => notes.push(format!("pipeline: {e}")),
        }
    } else {
        notes.push(format!("pipeline skipped: 2n = {} <= 6(k+1)", 2 * n));
    }
    if gate_met {
        log::warn!("constructive routes failed on an instance covered by the existence results (n = {n}, k = {k})");
    }
    if !opts.exact_fallback {
        return Ok(SolveOutcome::unsolved(k, gate_met, notes, false));
    }
    match oracle_m_2factor(g, m, k, min_len, &opts.budget)? {
        OracleResult::Feasible(f) => {
            let cycles = f.cycles.into_iter().map(|c| MCycle::new(g, m, c)).collect::<Result<Vec<_>>>()?;
            if let Some(out) = accept(cycles, Route::Exact, &mut notes)? {
                return Ok(out);
            }
            Ok(SolveOutcome::unsolved(k, gate_met, notes, false))
        }
        OracleResult::Infeasible => Ok(SolveOutcome::unsolved(k, gate_met, notes, true)),
        OracleResult::Budget => {
            notes.push("exact search ran out of budget".into());
            Ok(SolveOutcome::unsolved(k, gate_met, notes, false))
        }
    }
}

/// Directed 2-factor with exactly `k` cycles, via the split correspondence.
pub fn solve(d: &Digraph, k: usize, opts: &SolveOptions) -> SolveOutcome<DirectedTwoFactor> {
    let min_len = opts.min_len.unwrap_or(3).max(2);
    let n = d.order();
    let theorem = if k == 1 { TheoremId::WoodallHamilton } else { TheoremId::DirectedKFactor };
    let gate_met = k >= 1 && theorem_met(Instance::Digraph(d), k, theorem) && k * min_len <= n;
    let (g, m, tag) = digraph_to_bipartite(d);
    let inner_opts = SolveOptions { min_len: Some(2 * min_len), ..opts.clone() };
    let inner = match solve_m_2factor(&g, &m, k, &inner_opts) {
        Ok(o) => o,
        Err(e) => return SolveOutcome::unsolved(k, gate_met, vec![e.to_string()], false),
    };
    let mut notes = inner.notes;
    if let Some(f) = inner.factor {
        match translate_m2factor(&g, &m, &f, &tag.inverse()) {
            Ok(df) if verify_directed_2factor(d, &df, k, min_len).passed => {
                return SolveOutcome { status: SolveStatus::Solved, factor: Some(df), k, gate_met, route: inner.route, certified_infeasible: false, notes };
            }
            Ok(_) => notes.push("translated factor failed verification".into()),
            Err(e) => notes.push(format!("translation: {e}")),
        }
        if opts.exact_fallback {
            if let OracleResult::Feasible(df) = oracle_directed_2factor(d, k, min_len, &opts.budget) {
                return SolveOutcome { status: SolveStatus::Solved, factor: Some(df), k, gate_met, route: Route::Exact, certified_infeasible: false, notes };
            }
        }
    }
    SolveOutcome::unsolved(k, gate_met, notes, inner.certified_infeasible)
}
