//! Brute-force reference oracles and fixture builders shared by the
//! integration tests. Nothing here calls into the library's search code.

#![allow(dead_code)]

use difactor::{BipartiteGraph, Digraph, Matching, Side, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut a: Vec<usize> = (0..n).collect();
    if f(&a) {
        return true;
    }
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            if f(&a) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Cycle lengths of a permutation given as a successor map.
pub fn cycle_lengths(succ: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; succ.len()];
    let mut out = Vec::new();
    for s in 0..succ.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut v = s;
        while !seen[v] {
            seen[v] = true;
            v = succ[v];
            len += 1;
        }
        out.push(len);
    }
    out
}

/// A directed 2-factor is a successor permutation along arcs.
pub fn brute_directed_2factor(d: &Digraph, k: usize, min_len: usize) -> bool {
    let n = d.order();
    if n == 0 {
        return k == 0;
    }
    for_each_permutation(n, |succ| {
        (0..n).all(|v| succ[v] != v && d.has_arc(v, succ[v])) && {
            let lens = cycle_lengths(succ);
            lens.len() == k && lens.iter().all(|&l| l >= min_len)
        }
    })
}

/// An alternating 2-factor is a permutation `π` of the `X` side with
/// `mate(x_i) ~ x_{π(i)}`; a cycle of `π` of length `l` is an alternating
/// cycle of length `2l`.
pub fn brute_m_2factor(g: &BipartiteGraph, m: &Matching, k: usize, min_len: usize) -> bool {
    let n = g.half_order();
    let mate: Vec<Vertex> = (0..n).map(|i| m.mate(Vertex::x(i)).unwrap()).collect();
    for_each_permutation(n, |pi| {
        (0..n).all(|i| pi[i] != i && g.adjacent(mate[i], Vertex::x(pi[i]))) && {
            let lens = cycle_lengths(pi);
            lens.len() == k && lens.iter().all(|&l| 2 * l >= min_len)
        }
    })
}

/// Whether an alternating cycle of exactly `len` vertices lives inside
/// the vertex list `within` (closed under the matching).
pub fn brute_alternating_cycle(g: &BipartiteGraph, m: &Matching, within: &[Vertex], len: usize) -> bool {
    let xs: Vec<Vertex> = within.iter().copied().filter(|v| v.side() == Side::X).collect();
    let l = len / 2;
    if l < 2 || l > xs.len() {
        return false;
    }
    // chains of matching edges x -> mate(x) ~ next x, anchored at their first element
    fn extend(g: &BipartiteGraph, m: &Matching, xs: &[Vertex], chain: &mut Vec<Vertex>, l: usize) -> bool {
        let last = *chain.last().unwrap();
        let y = m.mate(last).unwrap();
        if chain.len() == l {
            return g.adjacent(y, chain[0]);
        }
        for &x in xs {
            if !chain.contains(&x) && g.adjacent(y, x) {
                chain.push(x);
                if extend(g, m, xs, chain, l) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    xs.iter().any(|&x0| extend(g, m, &xs, &mut vec![x0], l))
}

/// `X`-side index permutation used as a planted perfect matching.
pub fn random_matching_pairs(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut ys: Vec<usize> = (0..n).collect();
    ys.shuffle(rng);
    (0..n).map(|i| (i, ys[i])).collect()
}

pub fn sigma11_brute(n: usize, adj: &[Vec<bool>]) -> i64 {
    let dx: Vec<usize> = (0..n).map(|x| adj[x].iter().filter(|&&b| b).count()).collect();
    let dy: Vec<usize> = (0..n).map(|y| (0..n).filter(|&x| adj[x][y]).count()).collect();
    let mut best = i64::MAX;
    for x in 0..n {
        for y in 0..n {
            if !adj[x][y] {
                best = best.min((dx[x] + dy[y]) as i64);
            }
        }
    }
    best
}

/// Random balanced bipartite graph with a random planted perfect matching,
/// topped up with random edges until `σ₁,₁ >= n + 2`.
pub fn random_lasvergnas_instance(n: usize, density: f64, rng: &mut impl Rng) -> (BipartiteGraph, Matching) {
    let pairs = random_matching_pairs(n, rng);
    let mut adj = vec![vec![false; n]; n];
    for &(x, y) in &pairs {
        adj[x][y] = true;
    }
    for row in adj.iter_mut() {
        for cell in row.iter_mut() {
            if rng.gen_bool(density) {
                *cell = true;
            }
        }
    }
    let mut missing: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| !adj[x][y]).collect();
    missing.shuffle(rng);
    while sigma11_brute(n, &adj) < n as i64 + 2 {
        let (x, y) = missing.pop().expect("complete graph satisfies the bound");
        adj[x][y] = true;
    }
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| adj[x][y]).collect();
    let g = BipartiteGraph::new(n, n, edges).unwrap();
    let m = Matching::new(&g, pairs).unwrap();
    (g, m)
}

pub fn random_digraph(n: usize, p: f64, rng: &mut impl Rng) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Digraph::new(n, arcs).unwrap()
}
