//! Increasing-path reachability.
//!
//! Single-anchor queries sweep the window edges once in `(stamp, id)` order:
//! when an edge touches the current set in exactly one endpoint, the other
//! endpoint joins. Because edges are visited in their global order, every
//! vertex already in the set was reached through strictly earlier edges, so
//! the sweep computes the foremost tree without a priority queue.
//!
//! All-pairs relations use the same idea on bitsets: scanning edges from
//! latest to earliest, both endpoints of `{u, v}` inherit the union of the
//! targets reachable from either, which yields every forward set in
//! `O(|E| · n / 64)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::Bitset;
use crate::graph::{TemporalGraph, TimeWindow, Vertex};
use crate::{Error, Result};

/// Direction of a reachability query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Vertices reachable *from* the anchor.
    Forward,
    /// Vertices that can reach the anchor.
    Backward,
}

/// Reachable set of one anchor within a stamp window.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachResult {
    anchor: Vertex,
    direction: Direction,
    window: TimeWindow,
    /// member -> stamp of the edge by which it joined (`None` for the anchor)
    entries: BTreeMap<Vertex, Option<f64>>,
}

impl ReachResult {
    /// Source (forward) or target (backward).
    pub fn anchor(&self) -> Vertex {
        self.anchor
    }

    /// Query direction.
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Stamp window the query was restricted to.
    pub fn window(&self) -> TimeWindow {
        self.window
    }

    /// Members in ascending order; always contains the anchor.
    pub fn members(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.entries.keys().copied()
    }

    /// Membership test.
    pub fn contains(&self, v: Vertex) -> bool {
        self.entries.contains_key(&v)
    }

    /// Number of members, anchor included.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Never true: the anchor is always a member.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stamp of the edge through which `v` joined the set. `Some(None)` for
    /// the anchor, `None` for non-members.
    pub fn stamp_of(&self, v: Vertex) -> Option<Option<f64>> {
        self.entries.get(&v).copied()
    }

    /// Members as a bitset over `n` vertices.
    pub fn to_bitset(&self, n: usize) -> Bitset {
        let mut b = Bitset::new(n);
        self.members().for_each(|v| b.insert(v));
        b
    }
}

fn sweep<'a, I>(n: usize, anchor: Vertex, edges: I) -> BTreeMap<Vertex, Option<f64>>
where
    I: Iterator<Item = &'a crate::graph::StampedEdge>,
{
    let mut inside = vec![false; n];
    inside[anchor] = true;
    let mut entries = BTreeMap::new();
    entries.insert(anchor, None);
    for e in edges {
        let joined = match (inside[e.u], inside[e.v]) {
            (true, false) => e.v,
            (false, true) => e.u,
            _ => continue,
        };
        inside[joined] = true;
        entries.insert(joined, Some(e.stamp));
    }
    entries
}

/// Vertices reachable from `source` by increasing paths using only stamps in
/// `w`.
pub fn forward_reach(g: &TemporalGraph, source: Vertex, w: &TimeWindow) -> Result<ReachResult> {
    g.check_vertex(source)?;
    Ok(ReachResult {
        anchor: source,
        direction: Direction::Forward,
        window: *w,
        entries: sweep(g.n(), source, g.window_edges(w).iter()),
    })
}

/// Vertices that reach `target` by increasing paths using only stamps in `w`.
pub fn backward_reach(g: &TemporalGraph, target: Vertex, w: &TimeWindow) -> Result<ReachResult> {
    g.check_vertex(target)?;
    Ok(ReachResult {
        anchor: target,
        direction: Direction::Backward,
        window: *w,
        entries: sweep(g.n(), target, g.window_edges(w).iter().rev()),
    })
}

/// Boolean `n × n` relation stored as bitset rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachMatrix {
    rows: Vec<Bitset>,
}

impl ReachMatrix {
    /// Vertex count.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Entry `(u, v)`.
    pub fn get(&self, u: Vertex, v: Vertex) -> bool {
        self.rows[u].contains(v)
    }

    /// Row `u` as a bitset.
    pub fn row(&self, u: Vertex) -> &Bitset {
        &self.rows[u]
    }

    /// All rows.
    pub fn rows(&self) -> &[Bitset] {
        &self.rows
    }

    /// Transposed relation.
    pub fn transpose(&self) -> ReachMatrix {
        let n = self.n();
        let mut rows = vec![Bitset::new(n); n];
        for (u, row) in self.rows.iter().enumerate() {
            for v in row.iter() {
                rows[v].insert(u);
            }
        }
        ReachMatrix { rows }
    }
}

fn identity_rows(n: usize) -> Vec<Bitset> {
    (0..n)
        .map(|x| {
            let mut b = Bitset::new(n);
            b.insert(x);
            b
        })
        .collect()
}

fn merge_endpoints(rows: &mut [Bitset], u: Vertex, v: Vertex) {
    let (lo, hi) = rows.split_at_mut(v);
    let (a, b) = (&mut lo[u], &mut hi[0]);
    a.union_with(b);
    b.clone_from(a);
}

/// Entry `(u, v)` is true iff `v` is in `forward_reach(g, u, w)`.
pub fn reachability_matrix(g: &TemporalGraph, w: &TimeWindow) -> ReachMatrix {
    let mut rows = identity_rows(g.n());
    for e in g.window_edges(w).iter().rev() {
        merge_endpoints(&mut rows, e.u, e.v);
    }
    ReachMatrix { rows }
}

/// Entry `(v, u)` is true iff `u` is in `backward_reach(g, v, w)`; this is the
/// transpose of [`reachability_matrix`], computed by an ascending sweep.
pub fn reached_by_matrix(g: &TemporalGraph, w: &TimeWindow) -> ReachMatrix {
    let mut rows = identity_rows(g.n());
    for e in g.window_edges(w) {
        merge_endpoints(&mut rows, e.u, e.v);
    }
    ReachMatrix { rows }
}

/// Forward sets `A_i` in `G_[0,p/2]` and backward sets `B_j` in `G_[p/2,p]`
/// for the given vertices.
pub fn split_sets(
    g: &TemporalGraph,
    vertices: &[Vertex],
    p: f64,
) -> Result<(Vec<ReachResult>, Vec<ReachResult>)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter("split point p must lie in (0, 1]"));
    }
    let mut seen = Bitset::new(g.n());
    for &v in vertices {
        g.check_vertex(v)?;
        if seen.contains(v) {
            return Err(Error::DuplicateVertex(v));
        }
        seen.insert(v);
    }
    let early = TimeWindow::early_half(p)?;
    let late = TimeWindow::late_half(p)?;
    let a = vertices
        .iter()
        .map(|&v| forward_reach(g, v, &early))
        .collect::<Result<Vec<_>>>()?;
    let b = vertices
        .iter()
        .map(|&v| backward_reach(g, v, &late))
        .collect::<Result<Vec<_>>>()?;
    Ok((a, b))
}

/// Whether `A_i ∩ B_j` is nonempty for every ordered pair `i != j`.
///
/// For graphs whose stamps all lie in `(0, p]`, this holds exactly when the
/// split vertices form a temporal clique.
pub fn witness_criterion(a: &[ReachResult], b: &[ReachResult]) -> bool {
    a.iter().enumerate().all(|(i, ai)| {
        b.iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .all(|(_, bj)| bj.members().any(|x| ai.contains(x)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn g(n: usize, t: &[(Vertex, Vertex, f64)]) -> TemporalGraph {
        TemporalGraph::from_triples(n, t.iter().copied()).unwrap()
    }

    fn members(r: &ReachResult) -> Vec<Vertex> {
        r.members().collect()
    }

    #[test]
    fn increasing_chain_reaches_all() {
        let graph = g(4, &[(1, 2, 0.2), (2, 3, 0.5), (1, 3, 0.9)]);
        let r = forward_reach(&graph, 1, &TimeWindow::FULL).unwrap();
        assert_eq!(members(&r), [1, 2, 3]);
        assert_eq!(r.stamp_of(1), Some(None));
        assert_eq!(r.stamp_of(3), Some(Some(0.5)));
        assert_eq!(r.stamp_of(0), None);
    }

    #[test]
    fn decreasing_chain_blocks() {
        let graph = g(4, &[(1, 2, 0.9), (2, 3, 0.1)]);
        let f = forward_reach(&graph, 1, &TimeWindow::FULL).unwrap();
        assert_eq!(members(&f), [1, 2]);
        let b = backward_reach(&graph, 1, &TimeWindow::FULL).unwrap();
        assert_eq!(members(&b), [1, 2, 3]);
        assert_eq!(b.direction(), Direction::Backward);
    }

    #[test]
    fn empty_graph_and_isolated() {
        let graph = TemporalGraph::empty(3);
        assert_eq!(members(&forward_reach(&graph, 2, &TimeWindow::FULL).unwrap()), [2]);
        assert_eq!(members(&backward_reach(&graph, 0, &TimeWindow::FULL).unwrap()), [0]);
        assert!(forward_reach(&graph, 3, &TimeWindow::FULL).is_err());
        assert!(backward_reach(&graph, 5, &TimeWindow::FULL).is_err());
        let m = reachability_matrix(&graph, &TimeWindow::FULL);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(m.get(u, v), u == v);
            }
        }
    }

    #[test]
    fn window_excludes_edges() {
        let graph = g(3, &[(0, 1, 0.2), (1, 2, 0.6)]);
        let w = TimeWindow::new(0.0, 0.5).unwrap();
        assert_eq!(members(&forward_reach(&graph, 0, &w).unwrap()), [0, 1]);
    }

    #[test]
    fn triangle_is_all_true() {
        for stamps in [[0.1, 0.2, 0.3], [0.3, 0.2, 0.1], [0.2, 0.9, 0.5]] {
            let graph = g(3, &[(0, 1, stamps[0]), (1, 2, stamps[1]), (0, 2, stamps[2])]);
            let m = reachability_matrix(&graph, &TimeWindow::FULL);
            assert!((0..3).all(|u| m.row(u).count() == 3));
        }
    }

    #[test]
    fn matrices_agree_with_sweeps() {
        let graph = g(5, &[(0, 1, 0.1), (1, 2, 0.2), (2, 3, 0.15), (3, 4, 0.4), (0, 4, 0.3)]);
        let w = TimeWindow::FULL;
        let fwd = reachability_matrix(&graph, &w);
        let bwd = reached_by_matrix(&graph, &w);
        assert_eq!(fwd.transpose(), bwd);
        for u in 0..5 {
            assert_eq!(*fwd.row(u), forward_reach(&graph, u, &w).unwrap().to_bitset(5));
            assert_eq!(*bwd.row(u), backward_reach(&graph, u, &w).unwrap().to_bitset(5));
        }
    }

    #[test]
    fn split_sets_windows() {
        let graph = g(4, &[(1, 2, 0.2), (2, 3, 0.6)]);
        let (a, b) = split_sets(&graph, &[1, 3], 1.0).unwrap();
        assert_eq!(members(&a[0]), [1, 2]);
        assert_eq!(members(&b[1]), [2, 3]);
        assert_eq!(a[0].window(), TimeWindow::new(0.0, 0.5).unwrap());
        assert_eq!(b[1].window(), TimeWindow::new(0.5, 1.0).unwrap());

        let single = TemporalGraph::empty(1);
        let (a, b) = split_sets(&single, &[0], 1.0).unwrap();
        assert_eq!(members(&a[0]), [0]);
        assert_eq!(members(&b[0]), [0]);

        assert!(matches!(split_sets(&graph, &[1, 1], 1.0), Err(Error::DuplicateVertex(1))));
        assert!(split_sets(&graph, &[9], 1.0).is_err());
        assert!(split_sets(&graph, &[1], 0.0).is_err());
    }

    #[test]
    fn stamp_at_split_point_is_in_both_halves() {
        let graph = g(2, &[(0, 1, 0.25)]);
        let (a, b) = split_sets(&graph, &[0, 1], 0.5).unwrap();
        assert!(a[0].contains(1) && a[1].contains(0));
        assert!(b[0].contains(1) && b[1].contains(0));
    }
}
