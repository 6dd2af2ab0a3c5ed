//! Stamped-edge temporal graphs, stamp windows and RSTG sampling.
//!
//! Edges are stored sorted by the strict total order `(stamp, id)`; the
//! position of an edge in that sequence is its rank, and "edge `e` precedes
//! edge `f`" means `rank(e) < rank(f)`. Stamps are kept as absolute values so
//! windows such as `[0, p/2]` select edges directly.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use rand::distr::Open01;
use rand::Rng;

use crate::bitset::Bitset;
use crate::{math, seeded_rng, Error, Result};

/// Vertex id, 0-based.
pub type Vertex = usize;

/// An undirected edge `{u, v}` with `u < v`, a time stamp in `(0,1)` and a
/// tie-break id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StampedEdge {
    /// Smaller endpoint.
    pub u: Vertex,
    /// Larger endpoint.
    pub v: Vertex,
    /// Appearance time.
    pub stamp: f64,
    /// Tie-break id; `(stamp, id)` is the order key.
    pub id: usize,
}

impl StampedEdge {
    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: Vertex) -> Option<Vertex> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    fn order_key(&self, other: &StampedEdge) -> Ordering {
        self.stamp
            .total_cmp(&other.stamp)
            .then(self.id.cmp(&other.id))
    }
}

/// Closed stamp interval `[lo, hi]` with `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    lo: f64,
    hi: f64,
}

impl TimeWindow {
    /// The whole time axis `[0, 1]`.
    pub const FULL: TimeWindow = TimeWindow { lo: 0.0, hi: 1.0 };

    /// Validated window.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidParameter("time window must satisfy 0 <= lo <= hi <= 1"));
        }
        Ok(TimeWindow { lo, hi })
    }

    /// Lower endpoint.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper endpoint.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Inclusive membership.
    pub fn contains(&self, stamp: f64) -> bool {
        self.lo <= stamp && stamp <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &TimeWindow) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Image of the window under `t -> 1 - t`.
    pub fn reversed(&self) -> TimeWindow {
        TimeWindow {
            lo: 1.0 - self.hi,
            hi: 1.0 - self.lo,
        }
    }

    /// The early half `[0, p/2]` used for forward sets.
    pub fn early_half(p: f64) -> Result<Self> {
        Self::new(0.0, p / 2.0)
    }

    /// The late half `[p/2, p]` used for backward sets.
    pub fn late_half(p: f64) -> Result<Self> {
        Self::new(p / 2.0, p)
    }
}

/// RSTG parameters: `n` vertices and edge probability `p`, optionally given
/// through `p = c·ln(n)/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    n: usize,
    p: f64,
    c: Option<f64>,
}

impl GraphParams {
    /// Parameters with an explicit edge probability.
    pub fn from_p(n: usize, p: f64) -> Result<Self> {
        let params = GraphParams { n, p, c: None };
        params.validate()?;
        Ok(params)
    }

    /// Parameters on the `c·ln(n)/n` scale.
    pub fn from_c(n: usize, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter("c must be a positive real"));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive when p is given through c"));
        }
        let params = GraphParams {
            n,
            p: c * math::ln(n as f64) / n as f64,
            c: Some(c),
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters with both `p` and `c` supplied; they must agree.
    pub fn with_both(n: usize, p: f64, c: f64) -> Result<Self> {
        let params = GraphParams { n, p, c: Some(c) };
        params.validate()?;
        Ok(params)
    }

    /// Checks `p ∈ [0,1]` and, when `c` is present, `p = c·ln(n)/n`.
    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && (0.0..=1.0).contains(&self.p)) {
            return Err(Error::InvalidParameter("p must lie in [0, 1]"));
        }
        if let Some(c) = self.c {
            if !(c.is_finite() && c > 0.0) || self.n == 0 {
                return Err(Error::InvalidParameter("c must be a positive real"));
            }
            let expected = c * math::ln(self.n as f64) / self.n as f64;
            if (expected - self.p).abs() > 4.0 * f64::EPSILON * expected.abs().max(f64::MIN_POSITIVE) {
                return Err(Error::InvalidParameter("p does not equal c*ln(n)/n"));
            }
        }
        Ok(())
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge probability.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The `c` of `p = c·ln(n)/n`, when the parameters were built from it.
    pub fn c(&self) -> Option<f64> {
        self.c
    }
}

/// A temporal graph on vertices `0..n` with edges sorted by `(stamp, id)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    n: usize,
    edges: Vec<StampedEdge>,
}

impl TemporalGraph {
    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        TemporalGraph { n, edges: Vec::new() }
    }

    /// Validates the edges, stores each pair as `u < v` and sorts by
    /// `(stamp, id)`.
    pub fn new(n: usize, mut edges: Vec<StampedEdge>) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for (index, e) in edges.iter_mut().enumerate() {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { index, vertex: e.u });
            }
            if e.u > e.v {
                core::mem::swap(&mut e.u, &mut e.v);
            }
            if !(e.stamp.is_finite() && e.stamp > 0.0 && e.stamp < 1.0) {
                return Err(Error::StampOutOfRange { index, stamp: e.stamp });
            }
            if !pairs.insert((e.u, e.v)) {
                return Err(Error::DuplicatePair { index, u: e.u, v: e.v });
            }
            if !ids.insert(e.id) {
                return Err(Error::DuplicateEdgeId { index, id: e.id });
            }
        }
        edges.sort_unstable_by(StampedEdge::order_key);
        Ok(TemporalGraph { n, edges })
    }

    /// Builds a graph from `(u, v, stamp)` triples; ids follow input order.
    pub fn from_triples<I>(n: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, f64)>,
    {
        let edges = triples
            .into_iter()
            .enumerate()
            .map(|(id, (u, v, stamp))| StampedEdge { u, v, stamp, id })
            .collect();
        Self::new(n, edges)
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in ascending `(stamp, id)` order.
    pub fn edges(&self) -> &[StampedEdge] {
        &self.edges
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Checks that `x` is a vertex of this graph.
    pub fn check_vertex(&self, x: Vertex) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, n: self.n })
        }
    }

    /// Rank range of the edges whose stamps fall in `w`.
    pub fn window_range(&self, w: &TimeWindow) -> Range<usize> {
        let start = self.edges.partition_point(|e| e.stamp < w.lo);
        let end = self.edges.partition_point(|e| e.stamp <= w.hi);
        start..end.max(start)
    }

    /// Edges with stamps in `w`, in ascending order.
    pub fn window_edges(&self, w: &TimeWindow) -> &[StampedEdge] {
        &self.edges[self.window_range(w)]
    }

    /// Subgraph `G_[lo,hi]` on the same vertex set; ids and stamps preserved.
    pub fn restrict(&self, w: &TimeWindow) -> TemporalGraph {
        TemporalGraph {
            n: self.n,
            edges: self.window_edges(w).to_vec(),
        }
    }

    /// Replaces each stamp `t` by `1 - t` and remaps ids so that the edge
    /// order is exactly reversed.
    ///
    /// `1 - t` rounds to `1.0` for `t` below `2^-54`; such stamps are pinned to
    /// the largest double below one, which keeps the order reversed because
    /// ties are resolved by the remapped ids.
    pub fn reverse_time(&self) -> TemporalGraph {
        const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;
        let m = self.edges.len();
        let mut edges: Vec<StampedEdge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(rank, e)| StampedEdge {
                u: e.u,
                v: e.v,
                stamp: (1.0 - e.stamp).min(BELOW_ONE),
                id: m - 1 - rank,
            })
            .collect();
        edges.reverse();
        debug_assert!(edges.windows(2).all(|w| w[0].order_key(&w[1]) == Ordering::Less));
        TemporalGraph { n: self.n, edges }
    }

    /// Static (stamp-free) adjacency rows.
    pub fn static_adjacency(&self) -> Vec<Bitset> {
        let mut rows = alloc::vec![Bitset::new(self.n); self.n];
        for e in &self.edges {
            rows[e.u].insert(e.v);
            rows[e.v].insert(e.u);
        }
        rows
    }

    /// All static triangles `[a, b, c]` with `a < b < c`.
    pub fn triangles(&self) -> Vec<[Vertex; 3]> {
        let adj = self.static_adjacency();
        let mut out = Vec::new();
        for e in &self.edges {
            let mut common = adj[e.u].clone();
            common.intersect_with(&adj[e.v]);
            for w in common.iter().filter(|&w| w > e.v) {
                out.push([e.u, e.v, w]);
            }
        }
        out.sort_unstable();
        out
    }

    /// Sorts edges known to be valid (distinct canonical pairs, stamps in
    /// `(0,1)`) and assigns ids equal to ranks.
    fn from_generated(n: usize, mut edges: Vec<StampedEdge>) -> Self {
        debug_assert!(edges.iter().all(|e| e.u < e.v && e.v < n && e.stamp > 0.0 && e.stamp < 1.0));
        edges.sort_unstable_by(StampedEdge::order_key);
        TemporalGraph { n, edges }.relabel_by_rank()
    }

    fn relabel_by_rank(mut self) -> Self {
        for (rank, e) in self.edges.iter_mut().enumerate() {
            e.id = rank;
        }
        self
    }
}

/// Samples an RSTG: every pair of `K_n` is present independently with
/// probability `p` and present edges carry i.i.d. stamps uniform on `(0, p)`.
///
/// A pure function of `(params, seed)`. Edge ids equal ranks.
pub fn generate_rstg(params: &GraphParams, seed: u64) -> Result<TemporalGraph> {
    generate_rstg_with(params, &mut seeded_rng(seed))
}

/// [`generate_rstg`] drawing from a caller-supplied RNG.
///
/// Present pairs are located by geometric skipping over the lexicographic
/// pair sequence, so the cost is proportional to `n + |E|`.
pub fn generate_rstg_with<R: Rng + ?Sized>(params: &GraphParams, rng: &mut R) -> Result<TemporalGraph> {
    params.validate()?;
    let (n, p) = (params.n, params.p);
    let total_pairs = (n as u64) * (n.saturating_sub(1) as u64) / 2;
    let mut edges = Vec::new();
    if p > 0.0 && total_pairs > 0 {
        let log_q = math::ln(1.0 - p);
        let mut u = 0usize;
        // column offset inside row u, as a pair index relative to (u, u+1)
        let mut offset = 0u64;
        let skip = |rng: &mut R| -> u64 {
            if p >= 1.0 {
                return 0;
            }
            let x: f64 = rng.sample(Open01);
            let k = math::ln(x) / log_q;
            if k >= u64::MAX as f64 {
                u64::MAX
            } else {
                k as u64
            }
        };
        offset = offset.saturating_add(skip(rng));
        loop {
            // advance rows until offset lands inside row u
            while u < n - 1 && offset >= (n - 1 - u) as u64 {
                offset -= (n - 1 - u) as u64;
                u += 1;
            }
            if u >= n - 1 {
                break;
            }
            let v = u + 1 + offset as usize;
            let stamp = p * rng.sample::<f64, _>(Open01);
            edges.push(StampedEdge { u, v, stamp, id: edges.len() });
            offset = offset.saturating_add(1).saturating_add(skip(rng));
        }
    }
    Ok(TemporalGraph::from_generated(n, edges))
}

/// The direct construction: draw `U_e` uniform on `(0,1)` for every pair of
/// `K_n` and keep the edge iff `U_e <= p`, with stamp `U_e`. Θ(n²) draws.
///
/// Same law as [`generate_rstg`] (different sample paths for a given seed).
pub fn generate_rstg_dense(params: &GraphParams, seed: u64) -> Result<TemporalGraph> {
    params.validate()?;
    let mut rng = seeded_rng(seed);
    let n = params.n;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let x: f64 = rng.sample(Open01);
            if x <= params.p {
                edges.push(StampedEdge { u, v, stamp: x, id: edges.len() });
            }
        }
    }
    Ok(TemporalGraph::from_generated(n, edges))
}
