//! Temporal branching process on the infinite `n`-ary tree.
//!
//! Every tree edge carries an i.i.d. uniform label; a node is reachable when
//! the labels on its root path are all at most the cutoff `θ` and strictly
//! increasing. The tree is never built: a node entered at label `t` has
//! `Binomial(n, θ − t)` reachable children whose labels are i.i.d. uniform on
//! `(t, θ]`, which is the exact conditional law.
//!
//! Also here: closed-form expectations and the non-asymptotic bounds on the
//! reachable set, the random walk that measures how long a walk follows one
//! of `q` fixed paths, and the pair of coupled foremost-tree chains comparing
//! an RSTG with the tree.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::{math, seeded_rng, Error, Result};

/// Default cap on explored nodes / chain steps.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Parameters of the process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TbpParams {
    branching_factor: u64,
    cutoff: f64,
    budget: u64,
}

impl TbpParams {
    /// Branching factor `n ≥ 1`, cutoff `θ ∈ [0,1]`, default budget.
    pub fn new(branching_factor: u64, cutoff: f64) -> Result<Self> {
        Self::with_budget(branching_factor, cutoff, DEFAULT_BUDGET)
    }

    /// As [`TbpParams::new`] with an explicit explored-node budget.
    pub fn with_budget(branching_factor: u64, cutoff: f64, budget: u64) -> Result<Self> {
        if branching_factor == 0 {
            return Err(Error::InvalidParameter("branching factor must be at least 1"));
        }
        if !(0.0..=1.0).contains(&cutoff) {
            return Err(Error::InvalidParameter("cutoff must lie in [0, 1]"));
        }
        if budget == 0 {
            return Err(Error::InvalidParameter("budget must be at least 1"));
        }
        Ok(TbpParams {
            branching_factor,
            cutoff,
            budget,
        })
    }

    /// `n`.
    pub fn branching_factor(&self) -> u64 {
        self.branching_factor
    }

    /// `θ`.
    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Explored-node budget.
    pub fn budget(&self) -> u64 {
        self.budget
    }
}

/// One realisation of the reachable subtree `T*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TbpSample {
    /// `|T*|`, root included.
    pub total: u64,
    /// `Z_0 = 1, Z_1, …, Z_depth`.
    pub gen_sizes: Vec<u64>,
    /// Largest `ℓ` with `Z_ℓ > 0`.
    pub depth: usize,
}

impl TbpSample {
    /// `Z_ℓ`, zero beyond the depth.
    pub fn generation(&self, l: usize) -> u64 {
        self.gen_sizes.get(l).copied().unwrap_or(0)
    }
}

/// Samples `T*` breadth first. Pure in `(params, seed)`.
pub fn sample_tbp(params: &TbpParams, seed: u64) -> Result<TbpSample> {
    sample_tbp_with(params, &mut seeded_rng(seed))
}

/// [`sample_tbp`] drawing from a caller-supplied RNG.
pub fn sample_tbp_with<R: Rng + ?Sized>(params: &TbpParams, rng: &mut R) -> Result<TbpSample> {
    let theta = params.cutoff;
    let mut gen_sizes = vec![1u64];
    let mut total = 1u64;
    let mut frontier = vec![0.0f64];
    let mut next = Vec::new();
    while !frontier.is_empty() {
        next.clear();
        for &t in &frontier {
            let room = theta - t;
            if room <= 0.0 {
                continue;
            }
            let children = Binomial::new(params.branching_factor, room.min(1.0))
                .map_err(|_| Error::InvalidParameter("binomial parameters"))?
                .sample(rng);
            total += children;
            if total > params.budget {
                return Err(Error::BudgetExceeded { budget: params.budget });
            }
            for _ in 0..children {
                let x: f64 = rng.random();
                next.push(t + room * (1.0 - x));
            }
        }
        if next.is_empty() {
            break;
        }
        gen_sizes.push(next.len() as u64);
        core::mem::swap(&mut frontier, &mut next);
    }
    let depth = gen_sizes.len() - 1;
    Ok(TbpSample { total, gen_sizes, depth })
}

fn check_rate(x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("rate must be a finite non-negative real"))
    }
}

fn check_order(q: u32) -> Result<()> {
    if q == 0 {
        Err(Error::InvalidParameter("moment order q must be at least 1"))
    } else {
        Ok(())
    }
}

/// `E[Z_ℓ] = (nθ)^ℓ / ℓ!`.
pub fn expected_generation_size(n: u64, theta: f64, l: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter("cutoff must lie in [0, 1]"));
    }
    let rate = n as f64 * theta;
    if l == 0 {
        return Ok(1.0);
    }
    if rate == 0.0 {
        return Ok(0.0);
    }
    Ok(math::exp(l as f64 * math::ln(rate) - math::ln_factorial(l)))
}

/// `E|T*| = Σ_ℓ (nθ)^ℓ/ℓ! = e^{nθ}`.
pub fn expected_total_progeny(n: u64, theta: f64) -> f64 {
    math::exp(n as f64 * theta)
}

/// `(q−1)!·e^{np·q}`, the bound on `E[Z_ℓ^q]` valid for every `ℓ`.
pub fn cor4_moment_bound(np_prod: f64, q: u32) -> Result<f64> {
    check_rate(np_prod)?;
    check_order(q)?;
    Ok(math::exp(math::ln_factorial(q as u64 - 1) + np_prod * q as f64))
}

/// `C·(np)^{2q}·e^{np·q}`, the bound shape for `E|T*|^q`; `C` is supplied by
/// the caller.
pub fn thm5_moment_bound(np_prod: f64, q: u32, constant: f64) -> Result<f64> {
    check_rate(np_prod)?;
    check_order(q)?;
    if !(constant.is_finite() && constant > 0.0) {
        return Err(Error::InvalidParameter("constant C must be positive"));
    }
    if np_prod == 0.0 {
        return Ok(0.0);
    }
    let q = q as f64;
    Ok(math::exp(math::ln(constant) + 2.0 * q * math::ln(np_prod) + np_prod * q))
}

/// `(q−1)!·e^{npq} / n^{ℓq}`, the bound on the probability that `q` uniform
/// generation-`ℓ` vertices are all reachable.
pub fn lemma3_survival_bound(n: u64, p: f64, l: u64, q: u32) -> Result<f64> {
    check_order(q)?;
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter("need n >= 1 and p in [0, 1]"));
    }
    let q = q as u64;
    let np = n as f64 * p;
    let log = math::ln_factorial(q - 1) + np * q as f64 - (l * q) as f64 * math::ln(n as f64);
    Ok(math::exp(log))
}

/// `q` distinct paths of the `n`-ary tree, as child-index sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPathSet {
    n: u64,
    paths: Vec<Vec<u64>>,
}

impl WalkPathSet {
    /// Validates indices (`< n`) and pairwise distinctness.
    pub fn new(n: u64, paths: Vec<Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("branching factor must be at least 1"));
        }
        if paths.is_empty() {
            return Err(Error::InvalidParameter("need at least one path"));
        }
        if paths.iter().flatten().any(|&c| c >= n) {
            return Err(Error::InvalidParameter("child index out of range"));
        }
        let distinct: BTreeSet<&Vec<u64>> = paths.iter().collect();
        if distinct.len() != paths.len() {
            return Err(Error::InvalidParameter("paths must be pairwise distinct"));
        }
        Ok(WalkPathSet { n, paths })
    }

    /// `q` distinct uniformly random paths of length `len`.
    pub fn random<R: Rng + ?Sized>(n: u64, q: usize, len: usize, rng: &mut R) -> Result<Self> {
        let room = (n as f64).powi(len as i32);
        if n == 0 || q == 0 || (q as f64) > room {
            return Err(Error::InvalidParameter("cannot draw that many distinct paths"));
        }
        let mut set = BTreeSet::new();
        let mut paths = Vec::with_capacity(q);
        while paths.len() < q {
            let path: Vec<u64> = (0..len).map(|_| rng.random_range(0..n)).collect();
            if set.insert(path.clone()) {
                paths.push(path);
            }
        }
        Self::new(n, paths)
    }

    /// Branching factor.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of paths `q`.
    pub fn q(&self) -> usize {
        self.paths.len()
    }

    /// The paths.
    pub fn paths(&self) -> &[Vec<u64>] {
        &self.paths
    }

    /// Length of the shortest path.
    pub fn min_len(&self) -> usize {
        self.paths.iter().map(Vec::len).min().unwrap_or(0)
    }
}

/// Prefix trie over a [`WalkPathSet`].
#[derive(Debug, Clone)]
pub struct PrefixTrie {
    children: Vec<BTreeMap<u64, usize>>,
    per_depth: Vec<u64>,
}

impl PrefixTrie {
    /// Builds the trie of all path prefixes.
    pub fn new(paths: &WalkPathSet) -> Self {
        let mut children = vec![BTreeMap::new()];
        let mut per_depth = vec![1u64];
        for path in paths.paths() {
            let mut node = 0;
            for (depth, &c) in path.iter().enumerate() {
                node = match children[node].get(&c) {
                    Some(&next) => next,
                    None => {
                        let id = children.len();
                        children.push(BTreeMap::new());
                        children[node].insert(c, id);
                        if per_depth.len() <= depth + 1 {
                            per_depth.push(0);
                        }
                        per_depth[depth + 1] += 1;
                        id
                    }
                };
            }
        }
        PrefixTrie { children, per_depth }
    }

    /// Number of distinct length-`l` prefixes.
    pub fn distinct_prefixes(&self, l: usize) -> u64 {
        self.per_depth.get(l).copied().unwrap_or(0)
    }

    /// Length of the longest prefix of `walk` that is a prefix of some path.
    pub fn matched_depth(&self, walk: &[u64]) -> usize {
        let mut node = 0;
        for (depth, c) in walk.iter().enumerate() {
            match self.children[node].get(c) {
                Some(&next) => node = next,
                None => return depth,
            }
        }
        walk.len()
    }
}

/// An exact probability `numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailProbability {
    /// Number of distinct prefixes `D_ℓ`.
    pub numerator: u64,
    /// `n^ℓ`.
    pub denominator: u64,
}

impl TailProbability {
    /// Floating-point value.
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// Whether `self ≤ q / n^ℓ` (exact integer comparison).
    pub fn within_union_bound(&self, q: usize) -> bool {
        self.numerator <= q as u64
    }
}

/// `P(τ ≥ ℓ) = D_ℓ / n^ℓ`, `D_ℓ` being the number of distinct length-`ℓ`
/// prefixes among the paths.
pub fn exact_tau_tail(paths: &WalkPathSet, l: usize) -> Result<TailProbability> {
    if l > paths.min_len() {
        return Err(Error::InvalidParameter("l exceeds the shortest path length"));
    }
    let denominator = paths
        .n()
        .checked_pow(l as u32)
        .ok_or(Error::InvalidParameter("n^l overflows 64 bits"))?;
    Ok(TailProbability {
        numerator: PrefixTrie::new(paths).distinct_prefixes(l),
        denominator,
    })
}

/// One sample of `τ` capped at `l_max`: a uniform random walk of `l_max`
/// steps and the length of its longest prefix shared with some path.
pub fn sample_walk_tau(paths: &WalkPathSet, l_max: usize, seed: u64) -> Result<usize> {
    let trie = PrefixTrie::new(paths);
    sample_walk_tau_with(paths, &trie, l_max, &mut seeded_rng(seed))
}

/// [`sample_walk_tau`] with a prebuilt trie and caller RNG.
pub fn sample_walk_tau_with<R: Rng + ?Sized>(
    paths: &WalkPathSet,
    trie: &PrefixTrie,
    l_max: usize,
    rng: &mut R,
) -> Result<usize> {
    if l_max > paths.min_len() {
        return Err(Error::InvalidParameter("l_max exceeds the shortest path length"));
    }
    let walk: Vec<u64> = (0..l_max).map(|_| rng.random_range(0..paths.n())).collect();
    Ok(trie.matched_depth(&walk))
}

/// One run of the coupled foremost-tree chains: the graph chain
/// `(τ_k, |E_k|)` and the tree chain `(τ*_k, |E*_k|)`. Vectors are indexed
/// by step `k`; entry `0` is the initial state (`τ_0 = 0`, no edges yet).
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledTrace {
    /// `τ_0, τ_1, …` up to the graph chain's stop.
    pub tau: Vec<f64>,
    /// `τ*_0, τ*_1, …` up to the tree chain's stop.
    pub tau_star: Vec<f64>,
    /// `|E_k|`.
    pub e_size: Vec<u64>,
    /// `|E*_k|`.
    pub e_star_size: Vec<u64>,
    /// Stopping index of the graph chain, the coupled `|A_1|`.
    pub a_size: u64,
    /// Stopping index of the tree chain, the coupled `|T*|`.
    pub tstar_size: u64,
}

impl CoupledTrace {
    /// Number of steps at which `τ*_k ≤ τ_k` or `|E_k| ≤ |E*_k|` fails, plus
    /// one if `a_size > tstar_size`.
    pub fn violations(&self) -> usize {
        let tau = self.tau.iter().zip(&self.tau_star).filter(|(t, s)| s > t).count();
        let edges = self.e_size.iter().zip(&self.e_star_size).filter(|(e, s)| e > s).count();
        tau + edges + usize::from(self.a_size > self.tstar_size)
    }
}

/// Coupled chains with the default step budget.
pub fn coupled_sample(n: u64, p: f64, seed: u64) -> Result<CoupledTrace> {
    coupled_sample_with(n, p, DEFAULT_BUDGET, &mut seeded_rng(seed))
}

/// Minimum of `count` i.i.d. uniforms (`count ≥ 1`).
fn min_of_uniforms<R: Rng + ?Sized>(count: u64, rng: &mut R) -> f64 {
    let v: f64 = rng.random();
    1.0 - libm::pow(v, 1.0 / count as f64)
}

/// Simulates both chains on shared randomness.
///
/// `|E_1| = n−1`, `|E*_1| = n`; for `k ≥ 2` the `n` uniforms `U_{k,i}` feed
/// `|E_k| = |E_{k−1}| + #{i ≤ n−k : U_{k,i} ≤ 1−τ_{k−1}}` and
/// `|E*_k| = |E*_{k−1}| + #{i ≤ n : U_{k,i} ≤ 1−τ*_{k−1}}`. The minimum of
/// the first `|E_k|` uniforms of a second stream drives `τ_k`; the minimum of
/// the first `|E*_k|` drives `τ*_k`. Each chain stops at its first `k` with
/// `τ_k > p/2`; the graph chain also stops at `k = n`.
pub fn coupled_sample_with<R: Rng + ?Sized>(n: u64, p: f64, budget: u64, rng: &mut R) -> Result<CoupledTrace> {
    if n < 2 {
        return Err(Error::InvalidParameter("coupling needs n >= 2"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter("p must lie in (0, 1]"));
    }
    let half = p / 2.0;
    let mut trace = CoupledTrace {
        tau: vec![0.0],
        tau_star: vec![0.0],
        e_size: vec![0],
        e_star_size: vec![0],
        a_size: 0,
        tstar_size: 0,
    };
    let mut graph_live = true;
    let mut tree_live = true;
    let mut draws = vec![0.0f64; n as usize];
    let mut k: u64 = 1;
    while graph_live || tree_live {
        if k > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        if graph_live && k >= n {
            trace.a_size = n;
            graph_live = false;
            if !tree_live {
                break;
            }
        }
        let prev_tau = *trace.tau.last().unwrap_or(&0.0);
        let prev_star = *trace.tau_star.last().unwrap_or(&0.0);
        let (graph_edges, tree_edges) = if k == 1 {
            (n - 1, n)
        } else {
            draws.iter_mut().for_each(|u| *u = rng.random());
            let fresh_graph = draws
                .iter()
                .take(n.saturating_sub(k) as usize)
                .filter(|&&u| u <= 1.0 - prev_tau)
                .count() as u64;
            let fresh_tree = draws.iter().filter(|&&u| u <= 1.0 - prev_star).count() as u64;
            (
                trace.e_size.last().unwrap_or(&0) + fresh_graph,
                trace.e_star_size.last().unwrap_or(&0) + fresh_tree,
            )
        };
        let tree_min = if graph_live {
            let graph_min = min_of_uniforms(graph_edges, rng);
            let tau = prev_tau + (1.0 - prev_tau) * graph_min;
            trace.tau.push(tau);
            trace.e_size.push(graph_edges);
            if tau > half {
                trace.a_size = k;
                graph_live = false;
            }
            if tree_edges > graph_edges {
                graph_min.min(min_of_uniforms(tree_edges - graph_edges, rng))
            } else {
                graph_min
            }
        } else {
            min_of_uniforms(tree_edges, rng)
        };
        if tree_live {
            let tau_star = prev_star + (1.0 - prev_star) * tree_min;
            trace.tau_star.push(tau_star);
            trace.e_star_size.push(tree_edges);
            if tau_star > half {
                trace.tstar_size = k;
                tree_live = false;
            }
        }
        k += 1;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_cutoff_is_root_only() {
        let params = TbpParams::new(10, 0.0).unwrap();
        for seed in 0..10 {
            let s = sample_tbp(&params, seed).unwrap();
            assert_eq!((s.total, s.depth), (1, 0));
            assert_eq!(s.gen_sizes, [1]);
        }
    }

    #[test]
    fn sample_invariants() {
        let params = TbpParams::new(20, 0.1).unwrap();
        for seed in 0..200 {
            let s = sample_tbp(&params, seed).unwrap();
            assert_eq!(s.gen_sizes[0], 1);
            assert_eq!(s.total, s.gen_sizes.iter().sum::<u64>());
            assert!(s.gen_sizes.windows(2).all(|w| w[1] <= 20 * w[0] && w[1] > 0));
            assert_eq!(s.depth + 1, s.gen_sizes.len());
        }
        assert_eq!(sample_tbp(&params, 3), sample_tbp(&params, 3));
    }

    #[test]
    fn budget_is_enforced() {
        let params = TbpParams::with_budget(50, 1.0, 10).unwrap();
        assert!(matches!(sample_tbp(&params, 1), Err(Error::BudgetExceeded { budget: 10 })));
        assert!(TbpParams::with_budget(5, 0.5, 0).is_err());
        assert!(TbpParams::new(0, 0.5).is_err());
        assert!(TbpParams::new(5, 1.5).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(expected_generation_size(10, 0.3, 0).unwrap(), 1.0);
        assert!((expected_generation_size(10, 0.1, 2).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(expected_generation_size(10, 0.0, 3).unwrap(), 0.0);
        let e = core::f64::consts::E;
        assert!((cor4_moment_bound(1.0, 1).unwrap() - e).abs() < 1e-12);
        assert!((cor4_moment_bound(1.0, 2).unwrap() - e * e).abs() < 1e-12);
        assert!((thm5_moment_bound(1.0, 1, 1.0).unwrap() - e).abs() < 1e-12);
        assert!((thm5_moment_bound(2.0, 1, 1.0).unwrap() - 4.0 * e * e).abs() < 1e-11);
        assert!((lemma3_survival_bound(10, 0.1, 0, 1).unwrap() - e).abs() < 1e-12);
        assert!((lemma3_survival_bound(10, 0.1, 1, 2).unwrap() - e * e / 100.0).abs() < 1e-14);
        assert!(cor4_moment_bound(1.0, 0).is_err());
        assert!(thm5_moment_bound(1.0, 1, 0.0).is_err());
    }

    #[test]
    fn bounds_monotone_in_rate() {
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        for q in 1..4 {
            for w in grid.windows(2) {
                assert!(cor4_moment_bound(w[0], q).unwrap() <= cor4_moment_bound(w[1], q).unwrap());
                assert!(thm5_moment_bound(w[0], q, 1.0).unwrap() <= thm5_moment_bound(w[1], q, 1.0).unwrap());
                let (p0, p1) = (w[0] / 50.0, w[1] / 50.0);
                assert!(lemma3_survival_bound(50, p0, 2, q).unwrap() <= lemma3_survival_bound(50, p1, 2, q).unwrap());
            }
        }
    }

    #[test]
    fn trie_counts() {
        let one = WalkPathSet::new(3, vec![vec![0, 1, 2]]).unwrap();
        for l in 0..=3 {
            let t = exact_tau_tail(&one, l).unwrap();
            assert_eq!((t.numerator, t.denominator), (1, 3u64.pow(l as u32)));
        }
        let shared = WalkPathSet::new(4, vec![vec![1, 2, 0], vec![1, 2, 3]]).unwrap();
        assert_eq!(exact_tau_tail(&shared, 2).unwrap().numerator, 1);
        assert_eq!(exact_tau_tail(&shared, 3).unwrap().numerator, 2);
        let split = WalkPathSet::new(5, vec![vec![0, 0], vec![1, 0], vec![4, 2]]).unwrap();
        let t = exact_tau_tail(&split, 1).unwrap();
        assert_eq!((t.numerator, t.denominator), (3, 5));
        assert!(t.within_union_bound(3));
        assert!(exact_tau_tail(&split, 3).is_err());
    }

    #[test]
    fn path_set_validation() {
        assert!(WalkPathSet::new(3, vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(WalkPathSet::new(3, vec![vec![0, 3]]).is_err());
        assert!(WalkPathSet::new(3, vec![]).is_err());
        let mut rng = seeded_rng(1);
        assert!(WalkPathSet::random(2, 5, 2, &mut rng).is_err());
        let r = WalkPathSet::random(2, 4, 2, &mut rng).unwrap();
        assert_eq!(r.q(), 4);
    }

    #[test]
    fn walk_tau_is_capped() {
        let paths = WalkPathSet::new(2, vec![vec![0, 0, 0]]).unwrap();
        for seed in 0..100 {
            assert!(sample_walk_tau(&paths, 3, seed).unwrap() <= 3);
        }
        assert!(sample_walk_tau(&paths, 4, 0).is_err());
        let trie = PrefixTrie::new(&paths);
        assert_eq!(trie.matched_depth(&[0, 0, 1]), 2);
        assert_eq!(trie.matched_depth(&[1, 0, 0]), 0);
    }

    #[test]
    fn coupling_is_pathwise_ordered() {
        for seed in 0..500 {
            let t = coupled_sample(50, 0.08, seed).unwrap();
            assert_eq!(t.violations(), 0, "seed {seed}: {t:?}");
            assert!(t.a_size >= 1 && t.a_size <= 50);
            assert_eq!(t.tau.len() as u64, t.a_size.min(49) + 1);
            assert_eq!(t.tau_star.len() as u64, t.tstar_size + 1);
            assert_eq!(t.e_size[1], 49);
            assert_eq!(t.e_star_size[1], 50);
        }
    }

    #[test]
    fn coupling_small_n_exhausts_graph() {
        for seed in 0..200 {
            let t = coupled_sample(2, 1.0, seed).unwrap();
            assert!(t.a_size <= 2);
            assert!(t.a_size <= t.tstar_size);
        }
        assert!(coupled_sample(1, 0.5, 0).is_err());
        assert!(coupled_sample(5, 0.0, 0).is_err());
    }
}
