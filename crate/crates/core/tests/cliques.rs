mod common;

use common::*;
use rand::Rng;
use rstg_core::clique::{
    count_cliques, count_temporal_cliques, heuristic_clique, is_temporal_clique, max_clique, max_temporal_clique,
    mutual_graph, CliqueMode, MutualGraph, SolverOptions,
};
use rstg_core::{generate_rstg, seeded_rng, GraphParams, StampedEdge, TemporalGraph};

#[test]
fn exact_matches_subset_enumeration() {
    let mut rng = seeded_rng(11);
    let opts = SolverOptions::default();
    for _ in 0..300 {
        let g = random_small_graph(&mut rng, 10, 30);
        let exact = max_temporal_clique(&g, CliqueMode::Exact, &opts).unwrap();
        let heur = max_temporal_clique(&g, CliqueMode::Heuristic, &opts).unwrap();
        assert_eq!(exact.len(), brute_max_clique_size(&g), "{g:?}");
        assert!(heur.len() <= exact.len());
        assert!(is_temporal_clique(&g, &exact).unwrap());
        assert!(is_temporal_clique(&g, &heur).unwrap());
    }
}

#[test]
fn mutual_graph_matches_definition() {
    let mut rng = seeded_rng(12);
    for _ in 0..300 {
        let g = random_small_graph(&mut rng, 8, 20);
        let reach = brute_matrix(&g);
        let mg = mutual_graph(&g);
        for u in 0..g.n() {
            assert!(!mg.adjacent(u, u));
            for v in 0..g.n() {
                if u != v {
                    assert_eq!(mg.adjacent(u, v), reach[u].contains(&v) && reach[v].contains(&u));
                }
            }
        }
    }
}

#[test]
fn census_consistent_with_max() {
    let mut rng = seeded_rng(13);
    let opts = SolverOptions::default();
    for _ in 0..200 {
        let g = random_small_graph(&mut rng, 12, 40);
        let best = max_temporal_clique(&g, CliqueMode::Exact, &opts).unwrap().len();
        let reach = brute_matrix(&g);
        for m in 1..=5 {
            let census = count_temporal_cliques(&g, m);
            assert_eq!(census.count > 0, best >= m);
            if g.n() <= 10 {
                let brute = subsets_up_to(g.n(), m)
                    .into_iter()
                    .filter(|s| s.len() == m && brute_is_temporal_clique(&reach, s))
                    .count() as u64;
                assert_eq!(census.count, brute);
            }
        }
        assert_eq!(count_temporal_cliques(&g, 1).count, g.n() as u64);
    }
}

fn random_static_graph(rng: &mut impl Rng, n: usize, density: f64) -> MutualGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.random_bool(density))
        .collect();
    MutualGraph::from_edges(n, edges).unwrap()
}

#[test]
fn both_exact_routes_agree() {
    let mut rng = seeded_rng(14);
    let opts = SolverOptions::default();
    for _ in 0..200 {
        let n = rng.random_range(1..40);
        let d = rng.random_range(0.05..0.97);
        let mg = random_static_graph(&mut rng, n, d);
        let a = rstg_core::clique::exact_by_coloring(&mg, opts.node_budget).unwrap();
        let b = rstg_core::clique::exact_via_vertex_cover(&mg, opts.node_budget).unwrap();
        assert_eq!(a.len(), b.len(), "n={n} d={d}");
        assert!(mg.is_clique(&a) && mg.is_clique(&b));
        let chosen = max_clique(&mg, CliqueMode::Exact, &opts).unwrap();
        assert_eq!(chosen.len(), a.len());
        assert!(heuristic_clique(&mg, 16, 1).len() <= a.len());
        if !a.is_empty() {
            assert!(count_cliques(&mg, a.len()) > 0);
            assert_eq!(count_cliques(&mg, a.len() + 1), 0);
        }
    }
}

#[test]
fn triangles_are_temporal_cliques() {
    let opts = SolverOptions::default();
    for seed in 0..200 {
        let g = generate_rstg(&GraphParams::from_c(60, 0.9).unwrap(), seed).unwrap();
        let tris = g.triangles();
        for t in &tris {
            assert!(is_temporal_clique(&g, t).unwrap());
        }
        if !tris.is_empty() {
            assert!(max_temporal_clique(&g, CliqueMode::Exact, &opts).unwrap().len() >= 3);
        }
    }
}

#[test]
fn late_edge_only_adds_adjacency() {
    let mut rng = seeded_rng(15);
    for _ in 0..300 {
        let g = random_small_graph(&mut rng, 10, 25);
        if g.n() < 2 {
            continue;
        }
        let present: std::collections::BTreeSet<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let absent: Vec<(usize, usize)> = (0..g.n())
            .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
            .filter(|pair| !present.contains(pair))
            .collect();
        let Some(&(u, v)) = absent.first() else { continue };
        let mut edges = g.edges().to_vec();
        let id = edges.iter().map(|e| e.id).max().map_or(0, |m| m + 1);
        edges.push(StampedEdge { u, v, stamp: 0.9995, id });
        let bigger = TemporalGraph::new(g.n(), edges).unwrap();
        let (before, after) = (mutual_graph(&g), mutual_graph(&bigger));
        for a in 0..g.n() {
            assert!(before.neighbors(a).is_subset(after.neighbors(a)));
        }
    }
}
