//! Instance factories: the extremal families and random instances obtained
//! by monotone arc deletion from the complete digraph.
//!
//! Random generators shuffle the arc list with a seeded ChaCha8 stream and
//! delete each arc in turn unless the deletion would break the condition.
//! The result is biased toward minimal instances; it is not uniform.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GraphError, Result};
use crate::graph::{BipartiteGraph, Digraph, Graph, Matching};
use crate::transforms::{digraph_to_bipartite, symmetrize};

/// `symmetrize(K_{(n-1)/2,(n+1)/2})`: pair-degree sum `n - 1`, no directed 2-factor.
pub fn gen_sharpness_degree(n: usize) -> Result<Digraph> {
    if n < 3 || n % 2 == 0 {
        return Err(GraphError::InvalidParameter(format!("n must be odd and at least 3, got {n}")));
    }
    Ok(symmetrize(&Graph::complete_bipartite((n - 1) / 2, (n + 1) / 2)))
}

/// `symmetrize(K_{2k-1,2k-1})` on `4k - 2` vertices.
pub fn gen_sharpness_order(k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(GraphError::InvalidParameter("k must be positive".into()));
    }
    Ok(symmetrize(&Graph::complete_bipartite(2 * k - 1, 2 * k - 1)))
}

/// Adjacency-matrix digraph with degree counters, for deletion loops.
struct Dense {
    n: usize,
    arc: Vec<Vec<bool>>,
    out: Vec<usize>,
    inn: Vec<usize>,
}

impl Dense {
    fn complete(n: usize) -> Dense {
        let arc = (0..n).map(|u| (0..n).map(|v| u != v).collect()).collect();
        Dense { n, arc, out: vec![n.saturating_sub(1); n], inn: vec![n.saturating_sub(1); n] }
    }

    /// Whether the pair condition with `threshold` survives deleting `(a, b)`.
    fn pair_condition_survives(&self, a: usize, b: usize, threshold: i64) -> bool {
        let out_a = self.out[a] as i64 - 1;
        let in_b = self.inn[b] as i64 - 1;
        if out_a + in_b < threshold {
            return false;
        }
        for v in 0..self.n {
            if v != a && v != b && !self.arc[a][v] && out_a + (self.inn[v] as i64) < threshold {
                return false;
            }
            if v != a && v != b && !self.arc[v][b] && (self.out[v] as i64) + in_b < threshold {
                return false;
            }
        }
        true
    }

    fn delete(&mut self, a: usize, b: usize) {
        self.arc[a][b] = false;
        self.out[a] -= 1;
        self.inn[b] -= 1;
    }

    fn into_digraph(self) -> Digraph {
        let arcs = (0..self.n).flat_map(|u| (0..self.n).map(move |v| (u, v))).filter(|&(u, v)| self.arc[u][v]);
        Digraph::new(self.n, arcs.collect::<Vec<_>>()).expect("dense matrix has no loops")
    }
}

fn shuffled_arcs(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut arcs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v).collect();
    arcs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    arcs
}

/// Monotone deletion keeping `d⁺(u) + d⁻(v) >= threshold` on every non-arc.
pub fn gen_pair_degree(n: usize, threshold: i64, seed: u64) -> Digraph {
    let mut d = Dense::complete(n);
    for (a, b) in shuffled_arcs(n, seed) {
        if d.pair_condition_survives(a, b, threshold) {
            d.delete(a, b);
        }
    }
    d.into_digraph()
}

/// Monotone deletion keeping every out-degree at least `min_out`.
pub fn gen_min_out_degree(n: usize, min_out: usize, seed: u64) -> Digraph {
    let mut d = Dense::complete(n);
    for (a, b) in shuffled_arcs(n, seed) {
        if d.out[a] > min_out {
            d.delete(a, b);
        }
    }
    d.into_digraph()
}

/// Random digraph with pair-degree value at least `n + margin`.
pub fn gen_random_woodall(n: usize, margin: i64, seed: u64) -> Result<Digraph> {
    if n < 2 {
        return Err(GraphError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let threshold = n as i64 + margin;
    if threshold < 0 {
        return Err(GraphError::InvalidParameter(format!("margin {margin} gives a negative threshold")));
    }
    let d = gen_pair_degree(n, threshold, seed);
    debug_assert!(crate::conditions::woodall_value(&d).is_ok_and(|r| r.value.at_least(threshold)));
    Ok(d)
}

/// Random balanced bipartite graph with planted perfect matching
/// `{x_i y_i}` and σ₁,₁ at least `n + 2 + margin`.
///
/// Deleting the non-matching edge `x_u y_v` is accepted exactly when the
/// arc `(u, v)` would be, so this is the split of [`gen_random_woodall`].
pub fn gen_random_lasvergnas(n: usize, margin: i64, seed: u64) -> Result<(BipartiteGraph, Matching)> {
    let d = gen_random_woodall(n, margin, seed)?;
    let (g, m, _) = digraph_to_bipartite(&d);
    Ok((g, m))
}
