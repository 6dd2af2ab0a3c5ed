//! Temporal cliques.
//!
//! A set `S` is a temporal clique when every ordered pair of distinct members
//! is joined by an increasing path. Reachability is a property of the pair
//! alone, so temporal cliques of `G` are exactly the cliques of the *mutual
//! reachability graph* (`u ~ v` iff each reaches the other). Everything here
//! works on that graph.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::bitset::Bitset;
use crate::graph::{TemporalGraph, TimeWindow, Vertex};
use crate::reach::{forward_reach, reachability_matrix, reached_by_matrix};
use crate::{seeded_rng, Error, Result};

/// Symmetric, irreflexive adjacency over `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MutualGraph {
    rows: Vec<Bitset>,
}

impl MutualGraph {
    /// Graph on `n` vertices from an undirected edge list; self-loops are
    /// ignored. Mostly useful for testing the solvers on arbitrary graphs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut rows = alloc::vec![Bitset::new(n); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u != v {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
        Ok(MutualGraph { rows })
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Adjacency test.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u].contains(v)
    }

    /// Neighbourhood of `u`.
    pub fn neighbors(&self, u: Vertex) -> &Bitset {
        &self.rows[u]
    }

    /// Degree of `u`.
    pub fn degree(&self, u: Vertex) -> usize {
        self.rows[u].count()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bitset::count).sum::<usize>() / 2
    }

    /// `|E| / C(n, 2)`, zero for `n < 2`.
    pub fn density(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / ((n * (n - 1) / 2) as f64)
    }

    /// Complement graph (still irreflexive).
    pub fn complement(&self) -> MutualGraph {
        let n = self.n();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(u, row)| {
                let mut c = Bitset::full(n);
                c.difference_with(row);
                c.remove(u);
                c
            })
            .collect();
        MutualGraph { rows }
    }

    /// Whether the vertices are pairwise adjacent.
    pub fn is_clique(&self, s: &[Vertex]) -> bool {
        s.iter()
            .enumerate()
            .all(|(i, &u)| s[i + 1..].iter().all(|&v| u != v && self.adjacent(u, v)))
    }
}

/// Mutual reachability graph of `g` over the full time axis.
pub fn mutual_graph(g: &TemporalGraph) -> MutualGraph {
    let forward = reachability_matrix(g, &TimeWindow::FULL);
    let backward = reached_by_matrix(g, &TimeWindow::FULL);
    let rows = (0..g.n())
        .map(|u| {
            let mut row = forward.row(u).clone();
            row.intersect_with(backward.row(u));
            row.remove(u);
            row
        })
        .collect();
    MutualGraph { rows }
}

/// True iff every ordered pair of distinct vertices of `s` is joined by an
/// increasing path.
pub fn is_temporal_clique(g: &TemporalGraph, s: &[Vertex]) -> Result<bool> {
    for &v in s {
        g.check_vertex(v)?;
    }
    for &u in s {
        let reach = forward_reach(g, u, &TimeWindow::FULL)?;
        if !s.iter().all(|&v| reach.contains(v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solver selection for [`max_temporal_clique`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueMode {
    /// Branch and bound; errors out past the node budget.
    Exact,
    /// Repeated greedy passes; returns a maximal clique (a lower bound).
    Heuristic,
}

/// Knobs for the clique solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Search-node budget of the exact solver.
    pub node_budget: u64,
    /// Greedy passes of the heuristic.
    pub passes: usize,
    /// Seed for the heuristic's random orders.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            node_budget: 10_000_000,
            passes: 64,
            seed: 0,
        }
    }
}

/// Largest temporal clique of `g`, sorted ascending.
pub fn max_temporal_clique(g: &TemporalGraph, mode: CliqueMode, opts: &SolverOptions) -> Result<Vec<Vertex>> {
    max_clique(&mutual_graph(g), mode, opts)
}

/// Maximum (exact) or maximal (heuristic) clique of `mg`, sorted ascending.
pub fn max_clique(mg: &MutualGraph, mode: CliqueMode, opts: &SolverOptions) -> Result<Vec<Vertex>> {
    match mode {
        CliqueMode::Heuristic => Ok(heuristic_clique(mg, opts.passes, opts.seed)),
        CliqueMode::Exact => {
            if mg.density() > 0.5 {
                exact_via_vertex_cover(mg, opts.node_budget)
            } else {
                exact_by_coloring(mg, opts.node_budget)
            }
        }
    }
}

fn better(candidate: &[Vertex], incumbent: &[Vertex]) -> bool {
    candidate.len() > incumbent.len() || (candidate.len() == incumbent.len() && candidate < incumbent)
}

fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v
}

/// Greedy extension of `order` into a maximal clique.
fn greedy_in_order(mg: &MutualGraph, order: &[Vertex]) -> Vec<Vertex> {
    let mut cand = Bitset::full(mg.n());
    let mut clique = Vec::new();
    for &v in order {
        if cand.contains(v) {
            clique.push(v);
            cand.intersect_with(mg.neighbors(v));
        }
    }
    sorted(clique)
}

/// Greedy that always adds the candidate with most neighbours among the
/// remaining candidates (lowest id on ties).
fn greedy_adaptive(mg: &MutualGraph) -> Vec<Vertex> {
    let mut cand = Bitset::full(mg.n());
    let mut clique = Vec::new();
    while let Some(v) = cand
        .iter()
        .max_by_key(|&v| (mg.neighbors(v).intersection_count(&cand), core::cmp::Reverse(v)))
    {
        clique.push(v);
        cand.intersect_with(mg.neighbors(v));
    }
    sorted(clique)
}

/// Best maximal clique over an adaptive greedy pass plus `passes` greedy
/// passes over uniformly random vertex orders.
pub fn heuristic_clique(mg: &MutualGraph, passes: usize, seed: u64) -> Vec<Vertex> {
    let mut best = greedy_adaptive(mg);
    let mut rng = seeded_rng(seed);
    let mut order: Vec<Vertex> = (0..mg.n()).collect();
    for _ in 0..passes {
        order.shuffle(&mut rng);
        let c = greedy_in_order(mg, &order);
        if better(&c, &best) {
            best = c;
        }
    }
    best
}

struct ColoringSearch<'a> {
    mg: &'a MutualGraph,
    budget: u64,
    nodes: u64,
    best: Vec<Vertex>,
}

impl ColoringSearch<'_> {
    /// Greedy colour classes over `cand`; returns vertices in colour order
    /// with the colour number of each (an upper bound on the clique size
    /// within the prefix ending at that vertex).
    fn color_sort(&self, cand: &Bitset) -> (Vec<Vertex>, Vec<usize>) {
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = cand.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(self.mg.neighbors(v));
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn expand(&mut self, mut cand: Bitset, current: &mut Vec<Vertex>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CliqueBudgetExceeded {
                budget: self.budget,
                incumbent: self.best.clone(),
            });
        }
        let (order, colors) = self.color_sort(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + colors[idx] <= self.best.len() {
                return Ok(());
            }
            let v = order[idx];
            current.push(v);
            let mut next = cand.clone();
            next.intersect_with(self.mg.neighbors(v));
            if next.is_empty() {
                let found = sorted(current.clone());
                if better(&found, &self.best) {
                    self.best = found;
                }
            } else {
                self.expand(next, current)?;
            }
            current.pop();
            cand.remove(v);
        }
        Ok(())
    }
}

/// Exact maximum clique by branch and bound with greedy-colouring bounds.
pub fn exact_by_coloring(mg: &MutualGraph, node_budget: u64) -> Result<Vec<Vertex>> {
    let mut search = ColoringSearch {
        mg,
        budget: node_budget,
        nodes: 0,
        best: greedy_adaptive(mg),
    };
    search.expand(Bitset::full(mg.n()), &mut Vec::new())?;
    Ok(search.best)
}

struct CoverSearch<'a> {
    h: &'a MutualGraph,
    budget: u64,
    nodes: u64,
    best: Vec<Vertex>,
}

impl CoverSearch<'_> {
    fn live_degree(&self, v: Vertex, alive: &Bitset) -> usize {
        self.h.neighbors(v).intersection_count(alive)
    }

    /// Size of a greedy maximal matching among `alive`: every cover needs a
    /// distinct vertex per matched edge.
    fn matching_bound(&self, alive: &Bitset) -> usize {
        let mut free = alive.clone();
        let mut size = 0;
        while let Some(v) = free.first() {
            free.remove(v);
            let mut nb = self.h.neighbors(v).clone();
            nb.intersect_with(&free);
            if let Some(u) = nb.first() {
                free.remove(u);
                size += 1;
            }
        }
        size
    }

    fn incumbent_clique(&self) -> Vec<Vertex> {
        let mut keep = Bitset::full(self.h.n());
        self.best.iter().for_each(|&v| keep.remove(v));
        keep.iter().collect()
    }

    fn search(&mut self, mut alive: Bitset, cover: &mut Vec<Vertex>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::CliqueBudgetExceeded {
                budget: self.budget,
                incumbent: self.incumbent_clique(),
            });
        }
        let base = cover.len();
        // degree-0 vertices leave, degree-1 vertices force their neighbour
        loop {
            let mut changed = false;
            let snapshot: Vec<Vertex> = alive.iter().collect();
            for v in snapshot {
                if !alive.contains(v) {
                    continue;
                }
                let mut nb = self.h.neighbors(v).clone();
                nb.intersect_with(&alive);
                match nb.count() {
                    0 => {
                        alive.remove(v);
                        changed = true;
                    }
                    1 => {
                        let u = nb.first().unwrap_or(v);
                        cover.push(u);
                        alive.remove(u);
                        alive.remove(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let result = self.branch(alive, cover);
        cover.truncate(base);
        result
    }

    fn branch(&mut self, alive: Bitset, cover: &mut Vec<Vertex>) -> Result<()> {
        if cover.len() >= self.best.len() {
            return Ok(());
        }
        let pivot = alive
            .iter()
            .map(|v| (self.live_degree(v, &alive), core::cmp::Reverse(v)))
            .max();
        let v = match pivot {
            Some((d, core::cmp::Reverse(v))) if d > 0 => v,
            _ => {
                self.best = sorted(cover.clone());
                return Ok(());
            }
        };
        if cover.len() + self.matching_bound(&alive) >= self.best.len() {
            return Ok(());
        }
        let base = cover.len();

        let mut without_v = alive.clone();
        without_v.remove(v);
        cover.push(v);
        self.search(without_v, cover)?;
        cover.truncate(base);

        let mut nb = self.h.neighbors(v).clone();
        nb.intersect_with(&alive);
        let mut rest = alive;
        rest.remove(v);
        rest.difference_with(&nb);
        cover.extend(nb.iter());
        self.search(rest, cover)?;
        cover.truncate(base);
        Ok(())
    }
}

/// Exact maximum clique as the complement of a minimum vertex cover of the
/// complement graph. Suited to dense mutual graphs.
pub fn exact_via_vertex_cover(mg: &MutualGraph, node_budget: u64) -> Result<Vec<Vertex>> {
    let h = mg.complement();
    let start = greedy_adaptive(mg);
    let mut in_start = Bitset::new(mg.n());
    start.iter().for_each(|&v| in_start.insert(v));
    let initial_cover: Vec<Vertex> = (0..mg.n()).filter(|&v| !in_start.contains(v)).collect();
    let mut search = CoverSearch {
        h: &h,
        budget: node_budget,
        nodes: 0,
        best: initial_cover,
    };
    search.search(Bitset::full(mg.n()), &mut Vec::new())?;
    Ok(search.incumbent_clique())
}

/// Number of temporal cliques of size `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueCensus {
    /// Clique size.
    pub m: usize,
    /// Number of `m`-subsets that are temporal cliques.
    pub count: u64,
}

/// Number of `m`-cliques of `mg` (`1` for `m = 0`).
pub fn count_cliques(mg: &MutualGraph, m: usize) -> u64 {
    fn walk(mg: &MutualGraph, cand: &Bitset, k: usize) -> u64 {
        match k {
            0 => 1,
            1 => cand.count() as u64,
            _ => {
                let mut rest = cand.clone();
                let mut total = 0;
                for v in cand.iter() {
                    rest.remove(v);
                    let mut next = rest.clone();
                    next.intersect_with(mg.neighbors(v));
                    if next.count() + 1 >= k {
                        total += walk(mg, &next, k - 1);
                    }
                }
                total
            }
        }
    }
    walk(mg, &Bitset::full(mg.n()), m)
}

/// Counts the temporal cliques of size `m` in `g`.
pub fn count_temporal_cliques(g: &TemporalGraph, m: usize) -> CliqueCensus {
    CliqueCensus {
        m,
        count: count_cliques(&mutual_graph(g), m),
    }
}

/// `⌈1/(1−c) + 1⌉`, the high-probability ceiling on the largest temporal
/// clique of an RSTG with `p = c·ln(n)/n`, `c ∈ (0,1)`.
pub fn clique_size_bound(c: f64) -> Result<usize> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter("clique size bound needs c in (0, 1)"));
    }
    Ok(libm::ceil(1.0 / (1.0 - c) + 1.0) as usize)
}

/// Exponent `m − m(m−1) + c·m(m−1)` of `n` in the first-moment bound on the
/// number of temporal `m`-cliques.
pub fn census_exponent(m: usize, c: f64) -> f64 {
    let pairs = (m * m.saturating_sub(1)) as f64;
    m as f64 - pairs + c * pairs
}
