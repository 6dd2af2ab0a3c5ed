//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rstg_core::{TemporalGraph, TimeWindow, Vertex};

/// Random temporal graph with `1..=n_max` vertices and at most `m_max` edges,
/// stamps uniform on (0,1).
pub fn random_small_graph<R: Rng>(rng: &mut R, n_max: usize, m_max: usize) -> TemporalGraph {
    let n = rng.random_range(1..=n_max);
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = rng.random_range(0..=m_max.min(pairs.len()));
    let mut triples = Vec::with_capacity(m);
    for _ in 0..m {
        let (u, v) = pairs.swap_remove(rng.random_range(0..pairs.len()));
        let stamp: f64 = rng.random_range(0.001..0.999);
        triples.push((u, v, stamp));
    }
    TemporalGraph::from_triples(n, triples).unwrap()
}

/// Every vertex reachable from `s` by a simple path whose edge ranks strictly
/// increase, found by exhaustive depth-first enumeration.
pub fn brute_forward(g: &TemporalGraph, s: Vertex, w: &TimeWindow) -> BTreeSet<Vertex> {
    let edges: Vec<(usize, Vertex, Vertex)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| w.contains(e.stamp))
        .map(|(rank, e)| (rank, e.u, e.v))
        .collect();
    let mut found = BTreeSet::from([s]);
    let mut on_path = vec![false; g.n()];
    fn dfs(
        edges: &[(usize, Vertex, Vertex)],
        at: Vertex,
        last_rank: Option<usize>,
        on_path: &mut [bool],
        found: &mut BTreeSet<Vertex>,
    ) {
        on_path[at] = true;
        for &(rank, u, v) in edges {
            if last_rank.is_some_and(|r| rank <= r) {
                continue;
            }
            let next = if u == at {
                v
            } else if v == at {
                u
            } else {
                continue;
            };
            if on_path[next] {
                continue;
            }
            found.insert(next);
            dfs(edges, next, Some(rank), on_path, found);
        }
        on_path[at] = false;
    }
    dfs(&edges, s, None, &mut on_path, &mut found);
    found
}

/// Vertices with an increasing path to `t`, by running the forward oracle
/// from every vertex.
pub fn brute_backward(g: &TemporalGraph, t: Vertex, w: &TimeWindow) -> BTreeSet<Vertex> {
    (0..g.n()).filter(|&u| brute_forward(g, u, w).contains(&t)).collect()
}

/// Full brute-force reachability relation over the whole time axis.
pub fn brute_matrix(g: &TemporalGraph) -> Vec<BTreeSet<Vertex>> {
    (0..g.n()).map(|u| brute_forward(g, u, &TimeWindow::FULL)).collect()
}

/// Definition check: every ordered pair of `s` connected.
pub fn brute_is_temporal_clique(reach: &[BTreeSet<Vertex>], s: &[Vertex]) -> bool {
    s.iter().all(|&u| s.iter().all(|v| reach[u].contains(v)))
}

/// Size of the largest temporal clique by enumerating all vertex subsets.
pub fn brute_max_clique_size(g: &TemporalGraph) -> usize {
    let reach = brute_matrix(g);
    let n = g.n();
    (0u32..1 << n)
        .filter(|mask| {
            let s: Vec<Vertex> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            brute_is_temporal_clique(&reach, &s)
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// All subsets of `0..n` with at most `k` elements.
pub fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Mean and standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
