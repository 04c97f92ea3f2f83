//! Exhaustive solvers for small instances and the random explorer for the
//! disjoint-cycle questions.
//!
//! The search engine covers the nodes of a successor structure by cycles,
//! growing one cycle at a time from the smallest uncovered node. Candidate
//! successors are tried scarcest first, and a branch dies as soon as an
//! uncovered node loses every usable in- or out-neighbor or the leftover
//! nodes cannot hold the cycles still owed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::woodall_value;
use crate::error::{GraphError, Result};
use crate::generators::{gen_min_out_degree, gen_pair_degree};
use crate::graph::{require_perfect, BipartiteGraph, Digraph, Matching, Vertex};
use crate::structures::{DirectedTwoFactor, MTwoFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_vertices: 48, max_nodes: 10_000_000, time_limit: Duration::from_secs(30) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "kebab-case")]
pub enum OracleResult<W> {
    Feasible(W),
    Infeasible,
    Budget,
}

impl<W> OracleResult<W> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, OracleResult::Feasible(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            OracleResult::Feasible(w) => Some(w),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            OracleResult::Feasible(_) => "feasible",
            OracleResult::Infeasible => "infeasible",
            OracleResult::Budget => "budget",
        }
    }

    fn map<V>(self, f: impl FnOnce(W) -> V) -> OracleResult<V> {
        match self {
            OracleResult::Feasible(w) => OracleResult::Feasible(f(w)),
            OracleResult::Infeasible => OracleResult::Infeasible,
            OracleResult::Budget => OracleResult::Budget,
        }
    }
}

struct Search<'a> {
    succ: &'a [Vec<usize>],
    pred: Vec<Vec<usize>>,
    k: usize,
    min_nodes: usize,
    spanning: bool,
    used: Vec<bool>,
    free: usize,
    path: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    expanded: u64,
    budget: OracleBudget,
    started: Instant,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(succ: &'a [Vec<usize>], k: usize, min_nodes: usize, spanning: bool, budget: OracleBudget) -> Search<'a> {
        let n = succ.len();
        let mut pred = vec![Vec::new(); n];
        for (u, out) in succ.iter().enumerate() {
            for &v in out {
                pred[v].push(u);
            }
        }
        Search {
            succ,
            pred,
            k,
            min_nodes: min_nodes.max(1),
            spanning,
            used: vec![false; n],
            free: n,
            path: Vec::new(),
            cycles: Vec::new(),
            expanded: 0,
            budget,
            started: Instant::now(),
            aborted: false,
        }
    }

    fn run(mut self) -> OracleResult<Vec<Vec<usize>>> {
        let found = if self.spanning { self.open_spanning() } else { self.open_disjoint(0) };
        if found {
            OracleResult::Feasible(self.cycles)
        } else if self.aborted {
            OracleResult::Budget
        } else {
            OracleResult::Infeasible
        }
    }

    fn tick(&mut self) -> bool {
        self.expanded += 1;
        if self.expanded > self.budget.max_nodes
            || (self.expanded % 4096 == 0 && self.started.elapsed() > self.budget.time_limit)
        {
            self.aborted = true;
        }
        !self.aborted
    }

    fn take(&mut self, v: usize) {
        self.used[v] = true;
        self.free -= 1;
        self.path.push(v);
    }

    fn give_back(&mut self) {
        let v = self.path.pop().expect("non-empty path");
        self.used[v] = false;
        self.free += 1;
    }

    fn available_out(&self, v: usize) -> usize {
        self.succ[v].iter().filter(|&&w| !self.used[w]).count()
    }

    /// Every uncovered node keeps an in- and out-neighbor among the nodes it may still meet.
    fn spanning_alive(&self) -> bool {
        let start = self.path.first().copied();
        let end = self.path.last().copied();
        (0..self.used.len()).filter(|&v| !self.used[v]).all(|v| {
            let out_ok = self.succ[v].iter().any(|&w| !self.used[w] || Some(w) == start);
            let in_ok = self.pred[v].iter().any(|&w| !self.used[w] || Some(w) == end);
            out_ok && in_ok
        })
    }

    fn open_spanning(&mut self) -> bool {
        let owed = self.k - self.cycles.len().min(self.k);
        if self.free == 0 {
            return self.cycles.len() == self.k;
        }
        if owed == 0 || self.free < owed * self.min_nodes || !self.tick() {
            return false;
        }
        let s = self.used.iter().position(|&u| !u).expect("a free node");
        self.take(s);
        let found = self.spanning_alive() && self.extend_spanning();
        if !found {
            self.give_back();
        }
        found
    }

    fn extend_spanning(&mut self) -> bool {
        if !self.tick() {
            return false;
        }
        let s = self.path[0];
        let cur = *self.path.last().expect("non-empty path");
        let owed_after = self.k - self.cycles.len() - 1;
        if self.path.len() >= self.min_nodes && self.succ[cur].contains(&s) {
            let closable = if owed_after == 0 { self.free == 0 } else { self.free >= owed_after * self.min_nodes };
            if closable {
                let cycle = std::mem::take(&mut self.path);
                self.cycles.push(cycle);
                if self.open_spanning() {
                    return true;
                }
                self.path = self.cycles.pop().expect("just pushed");
            }
        }
        if self.aborted {
            return false;
        }
        let mut next: Vec<usize> = self.succ[cur].iter().copied().filter(|&w| !self.used[w]).collect();
        next.sort_by_key(|&w| (self.available_out(w), w));
        for w in next {
            self.take(w);
            if self.spanning_alive() && self.extend_spanning() {
                return true;
            }
            self.give_back();
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn open_disjoint(&mut self, from: usize) -> bool {
        if self.cycles.len() == self.k {
            return true;
        }
        let owed = self.k - self.cycles.len();
        for s in from..self.used.len() {
            if self.used[s] {
                continue;
            }
            let room = (s..self.used.len()).filter(|&v| !self.used[v]).count();
            if room < owed * self.min_nodes || !self.tick() {
                return false;
            }
            self.take(s);
            if self.extend_disjoint(s) {
                return true;
            }
            self.give_back();
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn extend_disjoint(&mut self, s: usize) -> bool {
        if !self.tick() {
            return false;
        }
        let cur = *self.path.last().expect("non-empty path");
        if self.path.len() >= self.min_nodes && self.succ[cur].contains(&s) {
            let cycle = std::mem::take(&mut self.path);
            self.cycles.push(cycle);
            if self.open_disjoint(s + 1) {
                return true;
            }
            self.path = self.cycles.pop().expect("just pushed");
        }
        let next: Vec<usize> = self.succ[cur].iter().copied().filter(|&w| w > s && !self.used[w]).collect();
        for w in next {
            self.take(w);
            if self.extend_disjoint(s) {
                return true;
            }
            self.give_back();
            if self.aborted {
                return false;
            }
        }
        false
    }
}

fn out_lists(d: &Digraph) -> Vec<Vec<usize>> {
    (0..d.order()).map(|v| d.out_neighbors(v).to_vec()).collect()
}

/// Exhaustive search for a directed 2-factor with exactly `k` cycles of length at least `min_len`.
pub fn oracle_directed_2factor(
    d: &Digraph,
    k: usize,
    min_len: usize,
    budget: &OracleBudget,
) -> OracleResult<DirectedTwoFactor> {
    if d.order() > budget.max_vertices {
        return OracleResult::Budget;
    }
    if k == 0 {
        return if d.order() == 0 { OracleResult::Feasible(DirectedTwoFactor::default()) } else { OracleResult::Infeasible };
    }
    let succ = out_lists(d);
    Search::new(&succ, k, min_len.max(2), true, *budget).run().map(DirectedTwoFactor::new)
}

/// Exhaustive search for an M-2-factor with exactly `k` cycles of length at least `min_len`.
///
/// Nodes are the matching edges `x_i m(x_i)`; edge `i` may be followed by
/// edge `j` when `m(x_i)` is adjacent to `x_j`.
pub fn oracle_m_2factor(
    g: &BipartiteGraph,
    m: &Matching,
    k: usize,
    min_len: usize,
    budget: &OracleBudget,
) -> Result<OracleResult<MTwoFactor>> {
    require_perfect(g, m)?;
    let n = g.half_order();
    if n > budget.max_vertices {
        return Ok(OracleResult::Budget);
    }
    if k == 0 {
        return Ok(if n == 0 { OracleResult::Feasible(MTwoFactor::default()) } else { OracleResult::Infeasible });
    }
    let mate = |i: usize| m.partner(Vertex::x(i));
    let succ: Vec<Vec<usize>> =
        (0..n).map(|i| g.neighbors(mate(i)).map(Vertex::index).filter(|&j| j != i).collect()).collect();
    let min_nodes = min_len.div_ceil(2).max(2);
    let result = Search::new(&succ, k, min_nodes, true, *budget).run().map(|cycles| {
        let cycles = cycles.into_iter().map(|c| c.into_iter().flat_map(|i| [Vertex::x(i), mate(i)]).collect());
        let mut f = MTwoFactor { cycles: cycles.collect() };
        f.cycles.sort();
        f
    });
    Ok(result)
}

/// Exhaustive search for `k` vertex-disjoint directed cycles of length at least `min_len`.
pub fn oracle_disjoint_cycles(
    d: &Digraph,
    k: usize,
    min_len: usize,
    budget: &OracleBudget,
) -> OracleResult<Vec<Vec<usize>>> {
    if d.order() > budget.max_vertices {
        return OracleResult::Budget;
    }
    let succ = out_lists(d);
    Search::new(&succ, k, min_len.max(2), false, *budget).run()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExploreMode {
    /// Pair-degree sum at least `4k - 1`, `n >= 3k`; asks for `k` disjoint cycles of length >= 3.
    Problem1,
    /// Every out-degree at least `2k - 1`; asks for `k` disjoint cycles.
    BermondThomassen,
}

impl ExploreMode {
    pub fn min_len(self) -> usize {
        match self {
            ExploreMode::Problem1 => 3,
            ExploreMode::BermondThomassen => 2,
        }
    }

    fn min_order(self, k: usize) -> usize {
        match self {
            ExploreMode::Problem1 => 3 * k,
            ExploreMode::BermondThomassen => 2 * k,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExploreParams {
    pub mode: ExploreMode,
    pub n_min: usize,
    pub n_max: usize,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: OracleBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub sample: usize,
    pub seed: u64,
    pub n: usize,
    pub arcs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExploreReport {
    pub mode: ExploreMode,
    pub k: usize,
    pub samples: usize,
    pub feasible: usize,
    pub budget_hits: usize,
    pub violations: Vec<Counterexample>,
    /// Samples per order.
    pub orders: BTreeMap<usize, usize>,
    /// Mean arc count over all samples.
    pub mean_arcs: f64,
}

/// Seed of sample `i`, drawn from stream `i` of the master generator.
pub fn sample_seed(master: u64, i: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(i as u64);
    rng.next_u64()
}

pub fn explore(params: &ExploreParams) -> Result<ExploreReport> {
    let ExploreParams { mode, n_min, n_max, k, samples, seed, budget } = params.clone();
    if k == 0 {
        return Err(GraphError::InvalidParameter("k must be positive".into()));
    }
    if n_min > n_max || n_min < mode.min_order(k) {
        return Err(GraphError::InvalidParameter(format!(
            "order range {n_min}..={n_max} invalid; need n >= {}",
            mode.min_order(k)
        )));
    }
    if n_max > budget.max_vertices {
        return Err(GraphError::InvalidParameter(format!("n = {n_max} exceeds the oracle budget")));
    }
    let outcomes: Vec<(usize, u64, Digraph, OracleResult<Vec<Vec<usize>>>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(seed, i);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let n = rng.gen_range(n_min..=n_max);
            let d = match mode {
                ExploreMode::Problem1 => gen_pair_degree(n, 4 * k as i64 - 1, rng.next_u64()),
                ExploreMode::BermondThomassen => gen_min_out_degree(n, 2 * k - 1, rng.next_u64()),
            };
            debug_assert!(match mode {
                ExploreMode::Problem1 => woodall_value(&d).is_ok_and(|r| r.value.at_least(4 * k as i64 - 1)),
                ExploreMode::BermondThomassen => (0..n).all(|v| d.out_degree(v) >= 2 * k - 1),
            });
            let r = oracle_disjoint_cycles(&d, k, mode.min_len(), &budget);
            (i, s, d, r)
        })
        .collect();
    let mut report = ExploreReport {
        mode,
        k,
        samples,
        feasible: 0,
        budget_hits: 0,
        violations: Vec::new(),
        orders: BTreeMap::new(),
        mean_arcs: 0.0,
    };
    let mut arcs_total = 0usize;
    for (i, s, d, r) in outcomes {
        *report.orders.entry(d.order()).or_default() += 1;
        arcs_total += d.arc_count();
        match r {
            OracleResult::Feasible(_) => report.feasible += 1,
            OracleResult::Budget => report.budget_hits += 1,
            OracleResult::Infeasible => {
                report.violations.push(Counterexample { sample: i, seed: s, n: d.order(), arcs: d.arcs().collect() })
            }
        }
    }
    if samples > 0 {
        report.mean_arcs = arcs_total as f64 / samples as f64;
    }
    Ok(report)
}
