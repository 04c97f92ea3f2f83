//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with
//! timings. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use difactor::alternating::{find_insertion_edge, lemma1_cycle, lemma2_six_cycle, Host};
use difactor::conditions::{sigma11, woodall_value, Bound};
use difactor::generators::{gen_random_lasvergnas, gen_random_woodall, gen_sharpness_degree};
use difactor::oracle::{
    explore, oracle_directed_2factor, oracle_m_2factor, ExploreMode, ExploreParams, OracleBudget, OracleResult,
};
use difactor::packing::pack_short_cycles;
use difactor::partition::{solve, solve_m_2factor, SolveOptions, SolveStatus};
use difactor::transforms::{bipartite_to_digraph, digraph_to_bipartite};
use difactor::verify::{verify_directed_2factor, verify_m_2factor};
use difactor::{BipartiteGraph, Digraph, MCycle, MPath, Matching, Vertex, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn correspondence() -> Outcome {
    let mut r = rng(1);
    let mut satisfied = 0;
    for i in 0..500 {
        let n = 2 + i % 6;
        let p = r.gen_range(0.1..1.0);
        let d = common::random_digraph(n, p, &mut r);
        let (g, m, _) = digraph_to_bipartite(&d);
        let (back, _) = bipartite_to_digraph(&g, &m).map_err(|e| e.to_string())?;
        if back != d {
            return Err(format!("round trip changed digraph #{i}"));
        }
        for v in 0..n {
            if d.out_degree(v) + 1 != g.degree(Vertex::x(v)) || d.in_degree(v) + 1 != g.degree(Vertex::y(v)) {
                return Err(format!("degree identity fails at vertex {v} of digraph #{i}"));
            }
        }
        // pair condition and σ₁,₁ computed directly
        let non_arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v && !d.has_arc(u, v));
        let woodall = non_arcs.clone().all(|(u, v)| d.out_degree(u) + d.in_degree(v) >= n);
        let adj: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| g.has_edge(x, y)).collect()).collect();
        let s11 = common::sigma11_brute(n, &adj) >= n as i64 + 2;
        let lib_w = woodall_value(&d).map_err(|e| e.to_string())?.satisfied;
        let lib_s = sigma11(&g).map_err(|e| e.to_string())?.satisfied;
        if woodall != s11 || lib_w != woodall || lib_s != s11 {
            return Err(format!("condition equivalence fails on digraph #{i}"));
        }
        satisfied += usize::from(woodall);
    }
    Ok(format!("500 digraphs, {satisfied} satisfy the pair condition"))
}

fn sharpness() -> Outcome {
    let d = gen_sharpness_degree(7).map_err(|e| e.to_string())?;
    let w = woodall_value(&d).map_err(|e| e.to_string())?;
    if w.value != Bound::Finite(6) {
        return Err(format!("woodall value {:?}", w.value));
    }
    for k in 1..=7 {
        match oracle_directed_2factor(&d, k, 2, &OracleBudget::default()) {
            OracleResult::Infeasible => {}
            other => return Err(format!("k = {k}: oracle says {}", other.verdict())),
        }
        if common::brute_directed_2factor(&d, k, 2) {
            return Err(format!("k = {k}: brute force finds a factor"));
        }
    }
    Ok("value 6, infeasible for k = 1..7".into())
}

/// Alternating cycle on `x_i y_i` for `i` in `idx`, plus an alternating path on `pidx`.
fn planted(n: usize, density: f64, r: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    (0..n).map(|x| (0..n).map(|y| x == y || r.gen_bool(density)).collect()).collect()
}

fn build(n: usize, adj: &[Vec<bool>]) -> (BipartiteGraph, Matching) {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| adj[x][y]).collect();
    let g = BipartiteGraph::new(n, n, edges).unwrap();
    let m = Matching::new(&g, (0..n).map(|i| (i, i))).unwrap();
    (g, m)
}

/// `x_a y_a x_b y_b ...` over `idx`.
fn seq(idx: &[usize]) -> Vec<Vertex> {
    idx.iter().flat_map(|&i| [Vertex::x(i), Vertex::y(i)]).collect()
}

/// Forces `y_{idx[j]} ~ x_{idx[j+1]}` (cyclically when `closed`).
fn connect(adj: &mut [Vec<bool>], idx: &[usize], closed: bool) {
    let l = idx.len();
    let links = if closed { l } else { l - 1 };
    for j in 0..links {
        adj[idx[(j + 1) % l]][idx[j]] = true;
    }
}

/// Adds random edges from `x` and `y` into `host` until `e({x,y}, host) >= need`.
fn top_up(adj: &mut [Vec<bool>], x: usize, y: usize, host: &[usize], need: usize, r: &mut ChaCha8Rng) -> usize {
    let count = |adj: &[Vec<bool>]| host.iter().filter(|&&h| adj[x][h]).count() + host.iter().filter(|&&h| adj[h][y]).count();
    while count(adj) < need {
        let h = host[r.gen_range(0..host.len())];
        if r.gen_bool(0.5) {
            adj[x][h] = true;
        } else {
            adj[h][y] = true;
        }
    }
    count(adj)
}

fn alternating_primitives() -> Outcome {
    let mut r = rng(3);
    // menu of cycle lengths
    let mut realized = 0;
    for f in 0..1000 {
        let c = r.gen_range(2..=5);
        let p = r.gen_range(1..=8 - c);
        let n = c + p;
        let mut adj = planted(n, r.gen_range(0.0..0.4), &mut r);
        let cidx: Vec<usize> = (0..c).collect();
        let pidx: Vec<usize> = (c..n).collect();
        connect(&mut adj, &cidx, true);
        connect(&mut adj, &pidx, false);
        let (x, y) = (pidx[0], pidx[p - 1]);
        top_up(&mut adj, x, y, &cidx, c + 1, &mut r);
        let (g, m) = build(n, &adj);
        let cyc = MCycle::new(&g, &m, seq(&cidx)).map_err(|e| format!("fixture {f}: {e}"))?;
        let path = MPath::new(&g, &m, seq(&pidx)).map_err(|e| format!("fixture {f}: {e}"))?;
        let all: Vec<Vertex> = seq(&(0..n).collect::<Vec<_>>());
        for i in 1..=c {
            let want = 2 * p + 2 * i;
            if !common::brute_alternating_cycle(&g, &m, &all, want) {
                return Err(format!("menu fixture {f}: no cycle of length {want} exists"));
            }
            let got = lemma1_cycle(&g, &m, &cyc, &path, i).ok_or(format!("menu fixture {f}: i = {i} not found"))?;
            let valid = MCycle::new(&g, &m, got.vertices().to_vec()).is_ok();
            if !valid || got.len() != want || !path.vertices().iter().all(|&v| got.contains(v)) {
                return Err(format!("menu fixture {f}: bad cycle for i = {i}"));
            }
            realized += 1;
        }
    }
    // forced 6-cycle
    for f in 0..1000 {
        let n: usize = r.gen_range(3..=8);
        let floor = (n + 3).div_ceil(2);
        let mut adj = planted(n, r.gen_range(0.0..0.7), &mut r);
        for x in 0..n {
            let others: Vec<usize> = (0..n).filter(|&y| y != x).collect();
            while adj[x].iter().filter(|&&b| b).count() < floor {
                adj[x][others[r.gen_range(0..others.len())]] = true;
            }
        }
        let (g, m) = build(n, &adj);
        let all = seq(&(0..n).collect::<Vec<_>>());
        if !common::brute_alternating_cycle(&g, &m, &all, 6) {
            return Err(format!("six-cycle fixture {f}: no 6-cycle exists"));
        }
        let c = lemma2_six_cycle(&g, &m).map_err(|e| e.to_string())?.ok_or(format!("six-cycle fixture {f}: not found"))?;
        if c.len() != 6 || MCycle::new(&g, &m, c.vertices().to_vec()).is_err() {
            return Err(format!("six-cycle fixture {f}: bad cycle"));
        }
    }
    // insertion edges, cycle and path hosts
    for f in 0..1000 {
        let cyclic = f % 2 == 0;
        let h = r.gen_range(2..=5);
        let q = r.gen_range(1..=8 - h);
        let n = h + q;
        let mut adj = planted(n, r.gen_range(0.0..0.4), &mut r);
        let hidx: Vec<usize> = (0..h).collect();
        let qidx: Vec<usize> = (h..n).collect();
        connect(&mut adj, &hidx, cyclic);
        connect(&mut adj, &qidx, false);
        let (x, y) = (qidx[0], qidx[q - 1]);
        let need = if cyclic { h + 1 } else { h + 2 };
        top_up(&mut adj, x, y, &hidx, need, &mut r);
        let (g, m) = build(n, &adj);
        let hs = seq(&hidx);
        let qp = MPath::new(&g, &m, seq(&qidx)).map_err(|e| format!("fixture {f}: {e}"))?;
        // every non-matching host edge, scanned directly
        let len = hs.len();
        let edges = (0..len / 2).map(|i| 2 * i + 1).filter(|&p| cyclic || p + 1 < len);
        let exists = edges.clone().any(|p| {
            let (u, v) = (hs[p], hs[(p + 1) % len]);
            (g.adjacent(qp.start(), u) && g.adjacent(qp.end(), v)) || (g.adjacent(qp.end(), u) && g.adjacent(qp.start(), v))
        });
        if !exists {
            return Err(format!("insertion fixture {f}: no insertion edge exists"));
        }
        let found = if cyclic {
            let c = MCycle::new(&g, &m, hs.clone()).map_err(|e| e.to_string())?;
            find_insertion_edge(&g, Host::Cycle(&c), &qp)
        } else {
            let p = MPath::new(&g, &m, hs.clone()).map_err(|e| e.to_string())?;
            find_insertion_edge(&g, Host::Path(&p), &qp)
        };
        let w = found.ok_or(format!("insertion fixture {f}: not found"))?;
        let (a, b) = if w.reversed { (qp.end(), qp.start()) } else { (qp.start(), qp.end()) };
        if m.contains(w.u, w.v) || !g.adjacent(a, w.u) || !g.adjacent(b, w.v) {
            return Err(format!("insertion fixture {f}: invalid witness"));
        }
    }
    Ok(format!("3 x 1000 fixtures, {realized} menu lengths realized"))
}

fn hamiltonian_small() -> Outcome {
    let mut r = rng(4);
    let opts = SolveOptions { min_len: Some(4), ..SolveOptions::default() };
    let mut routes: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..300 {
        let n = 2 + i % 7;
        let (g, m) = if i % 2 == 0 {
            common::random_lasvergnas_instance(n, r.gen_range(0.0..0.8), &mut r)
        } else {
            gen_random_lasvergnas(n, r.gen_range(0..3), r.gen()).map_err(|e| e.to_string())?
        };
        if !sigma11(&g).map_err(|e| e.to_string())?.satisfied {
            return Err(format!("instance {i} misses the degree bound"));
        }
        let out = solve_m_2factor(&g, &m, 1, &opts).map_err(|e| format!("instance {i}: {e}"))?;
        let f = out.factor.as_ref().filter(|_| out.status == SolveStatus::Solved).ok_or(format!("instance {i} (n = {n}): {:?}", out.status))?;
        if !verify_m_2factor(&g, &m, f, 1, 2 * n).map_err(|e| e.to_string())?.passed {
            return Err(format!("instance {i}: witness fails verification"));
        }
        if !common::brute_m_2factor(&g, &m, 1, 4) {
            return Err(format!("instance {i}: brute force finds no Hamilton cycle"));
        }
        if !oracle_m_2factor(&g, &m, 1, 4, &OracleBudget::default()).map_err(|e| e.to_string())?.is_feasible() {
            return Err(format!("instance {i}: oracle disagrees"));
        }
        *routes.entry(format!("{:?}", out.route)).or_default() += 1;
    }
    Ok(format!("300 instances, routes {routes:?}"))
}

fn end_to_end() -> Outcome {
    let mut routes: BTreeMap<String, usize> = BTreeMap::new();
    let runs = (0..100).map(|i| (15 + i % 6, 1, i as u64)).chain((0..30).map(|i| (27 + i % 6, 2, 1000 + i as u64)));
    for (n, k, seed) in runs {
        let d = gen_random_woodall(n, 0, seed).map_err(|e| e.to_string())?;
        let out = solve(&d, k, &SolveOptions::default());
        let f = out.factor.as_ref().filter(|_| out.status == SolveStatus::Solved).ok_or(format!("n = {n}, k = {k}, seed {seed}: {:?} {:?}", out.status, out.notes))?;
        if !verify_directed_2factor(&d, f, k, 3).passed || f.cycles.len() != k {
            return Err(format!("n = {n}, k = {k}, seed {seed}: witness fails verification"));
        }
        *routes.entry(format!("k={k} {:?}", out.route)).or_default() += 1;
    }
    Ok(format!("130 instances, routes {routes:?}"))
}

fn oracle_equivalence() -> Outcome {
    let check = |d: &Digraph, label: &str| -> Result<(), String> {
        for k in 1..=2 {
            let solved = solve(d, k, &SolveOptions::default()).status == SolveStatus::Solved;
            let oracle = match oracle_directed_2factor(d, k, 3, &OracleBudget::default()) {
                OracleResult::Feasible(_) => true,
                OracleResult::Infeasible => false,
                OracleResult::Budget => return Err(format!("{label}: oracle budget")),
            };
            if solved != oracle || oracle != common::brute_directed_2factor(d, k, 3) {
                return Err(format!("{label}, k = {k}: solve {solved}, oracle {oracle}"));
            }
        }
        Ok(())
    };
    let mut count = 0;
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let arcs: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &a)| a).collect();
            let d = Digraph::new(n, arcs).map_err(|e| e.to_string())?;
            check(&d, &format!("n = {n}, mask {mask}"))?;
            count += 1;
        }
    }
    let mut r = rng(6);
    for i in 0..2000 {
        let n = 5 + i % 2;
        let d = common::random_digraph(n, r.gen_range(0.2..0.95), &mut r);
        check(&d, &format!("random #{i}, n = {n}"))?;
    }
    Ok(format!("{count} exhaustive + 2000 random digraphs"))
}

fn packing() -> Outcome {
    let mut r = rng(7);
    for i in 0..50 {
        let k = 1 + i % 2;
        let n = if k == 1 { 3 + i / 2 } else { 15 + i / 2 };
        let (g, m) = gen_random_lasvergnas(n, 0, r.gen()).map_err(|e| e.to_string())?;
        let (p, report) = pack_short_cycles(&g, &m, k).map_err(|e| format!("n = {n}, k = {k}: {e}"))?;
        if p.cycles.len() != k {
            return Err(format!("n = {n}, k = {k}: {} cycles, status {:?}", p.cycles.len(), report.status));
        }
        let mut seen = VertexSet::empty(g.id_bound());
        for c in &p.cycles {
            if c.len() != 6 && c.len() != 8 {
                return Err(format!("n = {n}, k = {k}: cycle of length {}", c.len()));
            }
            if MCycle::new(&g, &m, c.vertices().to_vec()).is_err() {
                return Err(format!("n = {n}, k = {k}: cycle is not alternating"));
            }
            if !c.vertices().iter().all(|&v| seen.insert(v)) {
                return Err(format!("n = {n}, k = {k}: cycles overlap"));
            }
        }
    }
    Ok("50 instances".into())
}

fn explorer() -> Outcome {
    let mut summary = Vec::new();
    for (mode, n_min) in [(ExploreMode::Problem1, 3), (ExploreMode::BermondThomassen, 2)] {
        let params = ExploreParams { mode, n_min, n_max: 7, k: 1, samples: 200, seed: 2024, budget: OracleBudget::default() };
        let rep = explore(&params).map_err(|e| e.to_string())?;
        if !rep.violations.is_empty() || rep.budget_hits > 0 {
            return Err(format!("{mode:?}: {} violations, {} budget hits", rep.violations.len(), rep.budget_hits));
        }
        summary.push(format!("{mode:?} {}/{} feasible", rep.feasible, rep.samples));
    }
    Ok(summary.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 correspondence", correspondence, Duration::from_secs(10)),
        ("2 sharpness", sharpness, Duration::from_secs(5)),
        ("3 alternating primitives", alternating_primitives, Duration::from_secs(60)),
        ("4 hamiltonian n<=8", hamiltonian_small, Duration::from_secs(60)),
        ("5 end-to-end", end_to_end, Duration::from_secs(600)),
        ("6 oracle equivalence", oracle_equivalence, Duration::from_secs(300)),
        ("7 packing", packing, Duration::from_secs(120)),
        ("8 explorer", explorer, Duration::from_secs(120)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s limit", limit.as_secs())),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} criterion {name} ({:.2}s): {detail}", if ok { "PASS" } else { "FAIL" }, took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
