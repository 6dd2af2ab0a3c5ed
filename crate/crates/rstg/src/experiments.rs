//! The Monte Carlo engine and the experiment kinds.
//!
//! Trials run on a bounded rayon pool in chunks; each chunk is collected in
//! trial order before it reaches the sink, so output never depends on the
//! worker count.

use rand::SeedableRng;
use rayon::prelude::*;
use rstg_core::branching::{
    coupled_sample_with, cor4_moment_bound, exact_tau_tail, expected_generation_size, expected_total_progeny,
    sample_tbp_with, sample_walk_tau_with, thm5_moment_bound, PrefixTrie, TbpParams, WalkPathSet,
};
use rstg_core::clique::{
    census_exponent, clique_size_bound, count_cliques, max_clique, mutual_graph, CliqueMode, SolverOptions,
};
use rstg_core::reach::{backward_reach, forward_reach};
use rstg_core::{generate_rstg, Error as CoreError, GraphParams, SeedRng, TemporalGraph, TimeWindow, Vertex};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind, ModeChoice, SweepPoint};
use crate::seed::{point_seed, stream, stream_seed, trial_seed};
use crate::stats::{covariance, ecdf_compare, summarize, CovarianceEstimate, EcdfComparison, SummaryStats};
use crate::{Error, Result};

/// Trials handed to the pool at once, per worker.
const CHUNK_PER_THREAD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Ok,
    /// The trial hit a work budget; its values are absent.
    Budget,
}

impl TrialStatus {
    pub fn name(self) -> &'static str {
        match self {
            TrialStatus::Ok => "ok",
            TrialStatus::Budget => "budget",
        }
    }
}

/// One trial's measurements, in the column order of [`columns`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Global index: `point index · trials + trial within point`.
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    /// Edge probability or cutoff; absent for walk-tau.
    pub p: Option<f64>,
    pub status: TrialStatus,
    pub values: Vec<Option<f64>>,
}

impl TrialRecord {
    pub fn value(&self, column: usize) -> Option<f64> {
        self.values.get(column).copied().flatten()
    }
}

/// Measured columns of `cfg`'s kind.
pub fn columns(cfg: &ExperimentConfig) -> Vec<String> {
    let gens = || (1..=cfg.l_max).map(|l| format!("z_{l}"));
    let fixed = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match cfg.kind {
        ExperimentKind::CliqueScaling => fixed(&["max_clique", "exact"]),
        ExperimentKind::CliqueCensus => fixed(&["census", "triangles", "witness_lhs", "witness_rhs"]),
        ExperimentKind::MomentCheck => fixed(&["total"]).into_iter().chain(gens()).collect(),
        ExperimentKind::Dominance => fixed(&["a_size", "tstar_size", "coupled_a", "coupled_tstar", "coupled_violations"]),
        ExperimentKind::NegativeCorr => fixed(&["a_size", "b_size"]),
        ExperimentKind::WalkTau => fixed(&["tau"]),
        ExperimentKind::BpStats => fixed(&["total", "depth"]).into_iter().chain(gens()).collect(),
    }
}

/// Read-only per-point state shared by the workers.
struct PointContext {
    point: SweepPoint,
    mode: ModeChoice,
    walk: Option<(WalkPathSet, PrefixTrie)>,
}

fn prepare(cfg: &ExperimentConfig, point: SweepPoint) -> Result<PointContext> {
    let walk = if cfg.kind == ExperimentKind::WalkTau {
        let n = point.n as u64;
        let set = match &cfg.paths {
            Some(paths) => WalkPathSet::new(n, paths.clone())?,
            None => {
                let mut rng = SeedRng::seed_from_u64(point_seed(cfg.master_seed, point.index as u64, stream::PATHS));
                WalkPathSet::random(n, cfg.path_count, cfg.l_max, &mut rng)?
            }
        };
        let trie = PrefixTrie::new(&set);
        Some((set, trie))
    } else {
        None
    };
    Ok(PointContext {
        point,
        mode: cfg.mode_at(&point),
        walk,
    })
}

fn rng(seed: u64, tag: u64) -> SeedRng {
    SeedRng::seed_from_u64(stream_seed(seed, tag))
}

fn graph(n: usize, p: f64, seed: u64, tag: u64) -> Result<TemporalGraph> {
    Ok(generate_rstg(&GraphParams::from_p(n, p)?, stream_seed(seed, tag))?)
}

/// Early and late halves `[0, p/2]`, `[p/2, p]`, valid for `p = 0` too.
fn halves(p: f64) -> Result<(TimeWindow, TimeWindow)> {
    Ok((TimeWindow::new(0.0, p / 2.0)?, TimeWindow::new(p / 2.0, p)?))
}

fn is_budget(e: &CoreError) -> bool {
    matches!(e, CoreError::BudgetExceeded { .. } | CoreError::CliqueBudgetExceeded { .. })
}

/// Values of one trial, `None` when a budget ran out.
fn measure(cfg: &ExperimentConfig, ctx: &PointContext, seed: u64) -> Result<Option<Vec<f64>>> {
    let SweepPoint { n, p, .. } = ctx.point;
    let budget = |r: std::result::Result<Vec<f64>, CoreError>| match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_budget(&e) => Ok(None),
        Err(e) => Err(Error::Core(e)),
    };
    match cfg.kind {
        ExperimentKind::CliqueScaling => {
            let g = graph(n, p, seed, stream::GRAPH)?;
            let opts = SolverOptions {
                node_budget: cfg.budgets.clique_nodes,
                passes: cfg.heuristic_passes,
                seed: stream_seed(seed, stream::SOLVER),
            };
            let mode = match ctx.mode {
                ModeChoice::Exact => CliqueMode::Exact,
                ModeChoice::Heuristic => CliqueMode::Heuristic,
            };
            let exact = f64::from(u8::from(mode == CliqueMode::Exact));
            budget(max_clique(&mutual_graph(&g), mode, &opts).map(|c| vec![c.len() as f64, exact]))
        }
        ExperimentKind::CliqueCensus => {
            let g = graph(n, p, seed, stream::GRAPH)?;
            let census = count_cliques(&mutual_graph(&g), cfg.m) as f64;
            let triangles = g.triangles().len() as f64;
            let (lhs, rhs) = witness_products(&g, cfg.m, p)?;
            Ok(Some(vec![census, triangles, lhs, rhs]))
        }
        ExperimentKind::MomentCheck | ExperimentKind::BpStats => {
            let params = TbpParams::with_budget(n as u64, p, cfg.budgets.tbp_nodes)?;
            budget(sample_tbp_with(&params, &mut rng(seed, stream::TREE)).map(|s| {
                let mut v = vec![s.total as f64];
                if cfg.kind == ExperimentKind::BpStats {
                    v.push(s.depth as f64);
                }
                v.extend((1..=cfg.l_max).map(|l| s.generation(l) as f64));
                v
            }))
        }
        ExperimentKind::Dominance => {
            let g = graph(n, p, seed, stream::GRAPH)?;
            let (early, _) = halves(p)?;
            let a = forward_reach(&g, 0, &early)?.len() as f64;
            let params = TbpParams::with_budget(n as u64, p / 2.0, cfg.budgets.tbp_nodes)?;
            let tree = sample_tbp_with(&params, &mut rng(seed, stream::TREE));
            let coupled = coupled_sample_with(n as u64, p, cfg.budgets.coupling_steps, &mut rng(seed, stream::COUPLING));
            budget(tree.and_then(|t| {
                coupled.map(|c| {
                    vec![a, t.total as f64, c.a_size as f64, c.tstar_size as f64, c.violations() as f64]
                })
            }))
        }
        ExperimentKind::NegativeCorr => {
            let g = graph(n, p, seed, stream::GRAPH)?;
            let (early, late) = halves(p)?;
            let a = forward_reach(&g, 0, &early)?.len() as f64;
            let b = if cfg.independent {
                let h = graph(n, p, seed, stream::SECOND_GRAPH)?;
                backward_reach(&h, 0, &late)?.len()
            } else {
                backward_reach(&g, 0, &late)?.len()
            } as f64;
            Ok(Some(vec![a, b]))
        }
        ExperimentKind::WalkTau => {
            let (set, trie) = ctx.walk.as_ref().expect("walk context");
            let tau = sample_walk_tau_with(set, trie, cfg.l_max, &mut rng(seed, stream::WALK))?;
            Ok(Some(vec![tau as f64]))
        }
    }
}

/// `∏_{i≠j} |A_i ∩ B_j| / n` and `∏_{i≠j} |A_i|·|B_j| / n²` over the split
/// sets of vertices `0..m`.
pub fn witness_products(g: &TemporalGraph, m: usize, p: f64) -> Result<(f64, f64)> {
    let n = g.n() as f64;
    let (early, late) = halves(p)?;
    let vertices: Vec<Vertex> = (0..m).collect();
    let a = vertices
        .iter()
        .map(|&v| Ok(forward_reach(g, v, &early)?.to_bitset(g.n())))
        .collect::<Result<Vec<_>>>()?;
    let b = vertices
        .iter()
        .map(|&v| Ok(backward_reach(g, v, &late)?.to_bitset(g.n())))
        .collect::<Result<Vec<_>>>()?;
    let (mut lhs, mut rhs) = (1.0, 1.0);
    for (i, ai) in a.iter().enumerate() {
        for (_, bj) in b.iter().enumerate().filter(|&(j, _)| j != i) {
            lhs *= ai.intersection_count(bj) as f64 / n;
            rhs *= (ai.count() * bj.count()) as f64 / (n * n);
        }
    }
    Ok((lhs, rhs))
}

/// Summaries of one sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct PointSummary {
    pub point: SweepPoint,
    pub ok: usize,
    /// Trials excluded because a budget ran out.
    pub budget_failures: usize,
    /// `(column, stats)` for every column, absent when no trial succeeded.
    pub columns: Vec<(String, Option<SummaryStats>)>,
}

impl PointSummary {
    pub fn stats(&self, column: &str) -> Option<&SummaryStats> {
        self.columns.iter().find(|(c, _)| c == column).and_then(|(_, s)| s.as_ref())
    }
}

/// Everything one run produces.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub columns: Vec<String>,
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<PointSummary>,
    pub report: Report,
}

impl ExperimentResult {
    /// Whether some point finished without a single successful trial.
    pub fn exhausted(&self) -> bool {
        self.summaries.iter().any(|s| s.ok == 0)
    }

    /// Successful values of `column` at point `point`.
    pub fn column(&self, point: usize, column: &str) -> Vec<f64> {
        let Some(idx) = self.columns.iter().position(|c| c == column) else {
            return Vec::new();
        };
        point_records(&self.records, self.config.trials, point)
            .iter()
            .filter_map(|r| r.value(idx))
            .collect()
    }
}

fn point_records(records: &[TrialRecord], trials: usize, point: usize) -> &[TrialRecord] {
    &records[point * trials..(point + 1) * trials]
}

/// Runs `cfg` and keeps every record.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(cfg, |_| Ok(()))
}

/// Runs `cfg`, passing each record to `sink` in trial order as soon as its
/// chunk completes.
pub fn run_experiment_with<F>(cfg: &ExperimentConfig, mut sink: F) -> Result<ExperimentResult>
where
    F: FnMut(&TrialRecord) -> Result<()>,
{
    cfg.validate()?;
    let contexts = cfg
        .points()
        .into_iter()
        .map(|pt| prepare(cfg, pt))
        .collect::<Result<Vec<_>>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let total = contexts.len() * cfg.trials;
    let chunk = CHUNK_PER_THREAD * cfg.threads;
    let mut records = Vec::with_capacity(total);
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        let batch: Vec<TrialRecord> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|index| {
                    let ctx = &contexts[index / cfg.trials];
                    let seed = trial_seed(cfg.master_seed, index as u64);
                    let values = measure(cfg, ctx, seed)?;
                    Ok(TrialRecord {
                        trial: index as u64,
                        seed,
                        n: ctx.point.n,
                        p: (cfg.kind != ExperimentKind::WalkTau).then_some(ctx.point.p),
                        status: if values.is_some() { TrialStatus::Ok } else { TrialStatus::Budget },
                        values: match values {
                            Some(v) => v.into_iter().map(Some).collect(),
                            None => vec![None; columns(cfg).len()],
                        },
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for r in &batch {
            sink(r)?;
        }
        records.extend(batch);
        start = end;
    }
    let columns = columns(cfg);
    let summaries = contexts
        .iter()
        .map(|ctx| summarize_point(&records, cfg, &columns, ctx.point))
        .collect::<Result<Vec<_>>>()?;
    let report = build_report(cfg, &contexts, &records, &columns)?;
    Ok(ExperimentResult {
        config: cfg.clone(),
        columns,
        records,
        summaries,
        report,
    })
}

fn summarize_point(
    records: &[TrialRecord],
    cfg: &ExperimentConfig,
    columns: &[String],
    point: SweepPoint,
) -> Result<PointSummary> {
    let recs = point_records(records, cfg.trials, point.index);
    let ok = recs.iter().filter(|r| r.status == TrialStatus::Ok).count();
    let columns = columns
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let values: Vec<f64> = recs.iter().filter_map(|r| r.value(i)).collect();
            let stats = if values.is_empty() { None } else { Some(summarize(&values)?) };
            Ok((name.clone(), stats))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSummary {
        point,
        ok,
        budget_failures: recs.len() - ok,
        columns,
    })
}

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Option<Self> {
        summarize(values).ok().map(|s| Estimate { mean: s.mean, se: s.se })
    }

    /// `(mean − target) / se`; zero when both sides agree exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.se
        }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.se
    }
}

fn difference_z(a: Estimate, b: Estimate) -> f64 {
    let d = a.mean - b.mean;
    if d == 0.0 {
        0.0
    } else {
        d / (a.se * a.se + b.se * b.se).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub n: usize,
    pub p: f64,
    pub c: Option<f64>,
    pub mode: ModeChoice,
    pub ok: usize,
    pub median: Option<f64>,
    pub max: Option<f64>,
    /// `⌈1/(1−c)+1⌉` for `c ∈ (0,1)`.
    pub size_bound: Option<usize>,
    /// Fraction of successful trials with size at most `size_bound`.
    pub frac_within_bound: Option<f64>,
    /// Fraction of successful trials with size at least `n/2`.
    pub frac_half_n: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusPoint {
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub census: Estimate,
    pub triangles: Estimate,
    /// `m − m(m−1) + c·m(m−1)`, when the point has a `c`.
    pub exponent: Option<f64>,
    /// `n` raised to `exponent`.
    pub bound_shape: Option<f64>,
    pub witness_lhs: Estimate,
    pub witness_rhs: Estimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub l: usize,
    /// `E[Z_ℓ^q]`.
    pub moment: Estimate,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentPoint {
    pub n: usize,
    pub theta: f64,
    pub q: u32,
    pub generations: Vec<MomentRow>,
    /// `E[|T*|^q]`.
    pub total_moment: Estimate,
    pub total_bound: f64,
    /// `mean − 3·se ≤ bound`.
    pub total_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominancePoint {
    pub n: usize,
    pub p: f64,
    pub ok: usize,
    pub coupled_violations: u64,
    pub pathwise_pass: bool,
    pub distributional: EcdfComparison,
    pub a_direct: Estimate,
    pub a_coupled: Estimate,
    /// Standardized difference of the two `|A_1|` means.
    pub a_marginal_z: f64,
    pub tstar_direct: Estimate,
    pub tstar_coupled: Estimate,
    pub tstar_marginal_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationPoint {
    pub n: usize,
    pub p: f64,
    pub q: u32,
    pub independent: bool,
    pub covariance: CovarianceEstimate,
    /// `estimate ≤ 3·se`.
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub l: usize,
    pub monte_carlo: Estimate,
    pub exact: f64,
    pub union_bound: f64,
    pub within_3se: bool,
    pub exact_within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkPoint {
    pub n: usize,
    pub paths: Vec<Vec<u64>>,
    pub tails: Vec<TailRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerationRow {
    pub l: usize,
    pub mean: Estimate,
    pub expected: f64,
    pub within_3se: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BpPoint {
    pub n: usize,
    pub theta: f64,
    pub total: Estimate,
    pub expected_total: f64,
    pub within_3se: bool,
    pub generations: Vec<GenerationRow>,
}

/// Kind-specific verdicts, one entry per sweep point with successful trials.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "points", rename_all = "kebab-case")]
pub enum Report {
    CliqueScaling(Vec<ScalingPoint>),
    CliqueCensus(Vec<CensusPoint>),
    MomentCheck(Vec<MomentPoint>),
    Dominance(Vec<DominancePoint>),
    NegativeCorr(Vec<CorrelationPoint>),
    WalkTau(Vec<WalkPoint>),
    BpStats(Vec<BpPoint>),
}

fn build_report(
    cfg: &ExperimentConfig,
    contexts: &[PointContext],
    records: &[TrialRecord],
    columns: &[String],
) -> Result<Report> {
    let col = |pt: usize, name: &str| -> Vec<f64> {
        let idx = columns.iter().position(|c| c == name).expect("known column");
        point_records(records, cfg.trials, pt)
            .iter()
            .filter_map(|r| r.value(idx))
            .collect()
    };
    let est = |v: &[f64]| Estimate::of(v);
    let pts = contexts.iter().map(|c| c.point);
    Ok(match cfg.kind {
        ExperimentKind::CliqueScaling => Report::CliqueScaling(
            contexts
                .iter()
                .map(|ctx| {
                    let pt = ctx.point;
                    let sizes = col(pt.index, "max_clique");
                    let stats = summarize(&sizes).ok();
                    let size_bound = pt.c.and_then(|c| clique_size_bound(c).ok());
                    let frac = |f: &dyn Fn(f64) -> bool| {
                        (!sizes.is_empty()).then(|| sizes.iter().filter(|&&s| f(s)).count() as f64 / sizes.len() as f64)
                    };
                    ScalingPoint {
                        n: pt.n,
                        p: pt.p,
                        c: pt.c,
                        mode: ctx.mode,
                        ok: sizes.len(),
                        median: stats.as_ref().map(|s| s.median()),
                        max: stats.as_ref().map(|s| s.max),
                        size_bound,
                        frac_within_bound: size_bound.and_then(|b| frac(&|s| s <= b as f64)),
                        frac_half_n: frac(&|s| 2.0 * s >= pt.n as f64),
                    }
                })
                .collect(),
        ),
        ExperimentKind::CliqueCensus => Report::CliqueCensus(
            pts.filter_map(|pt| {
                let exponent = pt.c.map(|c| census_exponent(cfg.m, c));
                Some(CensusPoint {
                    n: pt.n,
                    p: pt.p,
                    m: cfg.m,
                    census: est(&col(pt.index, "census"))?,
                    triangles: est(&col(pt.index, "triangles"))?,
                    exponent,
                    bound_shape: exponent.map(|e| (pt.n as f64).powf(e)),
                    witness_lhs: est(&col(pt.index, "witness_lhs"))?,
                    witness_rhs: est(&col(pt.index, "witness_rhs"))?,
                })
            })
            .collect(),
        ),
        ExperimentKind::MomentCheck => {
            let mut out = Vec::new();
            for pt in pts {
                let rate = pt.n as f64 * pt.p;
                let pow = |v: Vec<f64>| v.into_iter().map(|x| x.powi(cfg.q as i32)).collect::<Vec<_>>();
                let Some(total_moment) = est(&pow(col(pt.index, "total"))) else {
                    continue;
                };
                let bound = cor4_moment_bound(rate, cfg.q)?;
                let generations = (1..=cfg.l_max)
                    .filter_map(|l| {
                        let moment = est(&pow(col(pt.index, &format!("z_{l}"))))?;
                        Some(MomentRow {
                            l,
                            moment,
                            bound,
                            pass: moment.mean - 3.0 * moment.se <= bound,
                        })
                    })
                    .collect();
                let total_bound = thm5_moment_bound(rate, cfg.q, cfg.bound_constant)?;
                out.push(MomentPoint {
                    n: pt.n,
                    theta: pt.p,
                    q: cfg.q,
                    generations,
                    total_moment,
                    total_bound,
                    total_pass: total_moment.mean - 3.0 * total_moment.se <= total_bound,
                });
            }
            Report::MomentCheck(out)
        }
        ExperimentKind::Dominance => {
            let mut out = Vec::new();
            for pt in pts {
                let a = col(pt.index, "a_size");
                let t = col(pt.index, "tstar_size");
                if a.is_empty() {
                    continue;
                }
                let ca = col(pt.index, "coupled_a");
                let ct = col(pt.index, "coupled_tstar");
                let violations = col(pt.index, "coupled_violations").iter().sum::<f64>() as u64;
                let (a_direct, a_coupled) = (est(&a).expect("non-empty"), est(&ca).expect("non-empty"));
                let (tstar_direct, tstar_coupled) = (est(&t).expect("non-empty"), est(&ct).expect("non-empty"));
                out.push(DominancePoint {
                    n: pt.n,
                    p: pt.p,
                    ok: a.len(),
                    coupled_violations: violations,
                    pathwise_pass: violations == 0,
                    distributional: ecdf_compare(&a, &t, cfg.alpha)?,
                    a_direct,
                    a_coupled,
                    a_marginal_z: difference_z(a_coupled, a_direct),
                    tstar_direct,
                    tstar_coupled,
                    tstar_marginal_z: difference_z(tstar_coupled, tstar_direct),
                });
            }
            Report::Dominance(out)
        }
        ExperimentKind::NegativeCorr => Report::NegativeCorr(
            pts.map(|pt| {
                let pow = |v: Vec<f64>| v.into_iter().map(|x| x.powi(cfg.q as i32)).collect::<Vec<_>>();
                let a = pow(col(pt.index, "a_size"));
                let b = pow(col(pt.index, "b_size"));
                let cov = covariance(&a, &b).unwrap_or(CovarianceEstimate { estimate: 0.0, se: 0.0 });
                CorrelationPoint {
                    n: pt.n,
                    p: pt.p,
                    q: cfg.q,
                    independent: cfg.independent,
                    covariance: cov,
                    pass: cov.estimate <= 3.0 * cov.se,
                }
            })
            .collect(),
        ),
        ExperimentKind::WalkTau => {
            let mut out = Vec::new();
            for ctx in contexts {
                let (set, _) = ctx.walk.as_ref().expect("walk context");
                let taus = col(ctx.point.index, "tau");
                let mut tails = Vec::new();
                for l in 1..=cfg.l_max {
                    let hits: Vec<f64> = taus.iter().map(|&t| f64::from(u8::from(t >= l as f64))).collect();
                    let Some(monte_carlo) = est(&hits) else { continue };
                    let exact = exact_tau_tail(set, l)?;
                    let union_bound = set.q() as f64 / (set.n() as f64).powi(l as i32);
                    tails.push(TailRow {
                        l,
                        monte_carlo,
                        exact: exact.value(),
                        union_bound,
                        within_3se: monte_carlo.within(exact.value(), 3.0),
                        exact_within_bound: exact.within_union_bound(set.q()),
                    });
                }
                out.push(WalkPoint {
                    n: ctx.point.n,
                    paths: set.paths().to_vec(),
                    tails,
                });
            }
            Report::WalkTau(out)
        }
        ExperimentKind::BpStats => {
            let mut out = Vec::new();
            for pt in pts {
                let Some(total) = est(&col(pt.index, "total")) else { continue };
                let expected_total = expected_total_progeny(pt.n as u64, pt.p);
                let generations = (1..=cfg.l_max)
                    .map(|l| {
                        let mean = est(&col(pt.index, &format!("z_{l}"))).expect("non-empty");
                        let expected = expected_generation_size(pt.n as u64, pt.p, l as u64)?;
                        Ok(GenerationRow {
                            l,
                            mean,
                            expected,
                            within_3se: mean.within(expected, 3.0),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(BpPoint {
                    n: pt.n,
                    theta: pt.p,
                    total,
                    expected_total,
                    within_3se: total.within(expected_total, 3.0),
                    generations,
                });
            }
            Report::BpStats(out)
        }
    })
}

fn sweep(kind: ExperimentKind, n: &[usize], trials: usize, master_seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, n.to_vec(), trials);
    cfg.master_seed = master_seed;
    cfg.threads = rayon::current_num_threads().max(1);
    cfg
}

/// Max temporal clique sizes over `n` at fixed `c`.
pub fn exp_clique_scaling(n: &[usize], c: f64, trials: usize, master_seed: u64) -> Result<ExperimentResult> {
    run_experiment(&sweep(ExperimentKind::CliqueScaling, n, trials, master_seed).with_c(vec![c]))
}

/// Census of temporal `m`-cliques at one `(n, c)`.
pub fn exp_clique_census(n: usize, c: f64, m: usize, trials: usize, master_seed: u64) -> Result<ExperimentResult> {
    let mut cfg = sweep(ExperimentKind::CliqueCensus, &[n], trials, master_seed).with_c(vec![c]);
    cfg.m = m;
    run_experiment(&cfg)
}

/// Pathwise and distributional comparison of `|A_1|` with `|T*|`.
pub fn exp_dominance(n: usize, p: f64, trials: usize, master_seed: u64) -> Result<ExperimentResult> {
    run_experiment(&sweep(ExperimentKind::Dominance, &[n], trials, master_seed).with_p(vec![p]))
}

/// Covariance of `|A_1|^q` and `|B_1|^q`.
pub fn exp_negative_corr(n: usize, p: f64, q: u32, trials: usize, master_seed: u64) -> Result<ExperimentResult> {
    let mut cfg = sweep(ExperimentKind::NegativeCorr, &[n], trials, master_seed).with_p(vec![p]);
    cfg.q = q;
    run_experiment(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind, vec![30], 40).with_p(vec![0.1]);
        cfg.master_seed = 11;
        cfg
    }

    #[test]
    fn every_kind_runs() {
        for kind in ExperimentKind::ALL {
            let mut cfg = small(kind);
            if kind == ExperimentKind::WalkTau {
                cfg.p = None;
                cfg.n = vec![3];
            }
            let res = run_experiment(&cfg).unwrap();
            assert_eq!(res.records.len(), 40, "{kind}");
            assert!(res.records.iter().all(|r| r.values.len() == res.columns.len()));
            assert!(!res.exhausted());
        }
    }

    #[test]
    fn threads_do_not_matter() {
        for kind in [ExperimentKind::CliqueScaling, ExperimentKind::Dominance, ExperimentKind::BpStats] {
            let mut cfg = small(kind);
            cfg.trials = 700;
            let one = run_experiment(&cfg).unwrap().records;
            cfg.threads = 4;
            assert_eq!(run_experiment(&cfg).unwrap().records, one);
        }
    }

    #[test]
    fn budget_is_recorded_per_trial() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::BpStats, vec![50], 30).with_p(vec![0.08]);
        cfg.budgets.tbp_nodes = 20;
        let res = run_experiment(&cfg).unwrap();
        let failed = res.records.iter().filter(|r| r.status == TrialStatus::Budget).count();
        assert!(failed > 0 && failed < 30);
        assert_eq!(res.summaries[0].budget_failures, failed);
        assert_eq!(res.summaries[0].stats("total").unwrap().count, 30 - failed);
        assert!(res.records.iter().filter(|r| r.status == TrialStatus::Budget).all(|r| r.values.iter().all(Option::is_none)));
    }

    #[test]
    fn p_zero_cases() {
        let scaling = run_experiment(&ExperimentConfig::new(ExperimentKind::CliqueScaling, vec![20], 5).with_p(vec![0.0])).unwrap();
        assert!(scaling.column(0, "max_clique").iter().all(|&s| s == 1.0));
        let corr = run_experiment(&ExperimentConfig::new(ExperimentKind::NegativeCorr, vec![20], 50).with_p(vec![0.0])).unwrap();
        let Report::NegativeCorr(points) = &corr.report else { panic!() };
        assert_eq!(points[0].covariance.estimate, 0.0);
        assert!(points[0].pass);
    }

    #[test]
    fn census_of_single_vertices() {
        let res = exp_clique_census(40, 0.5, 1, 20, 3).unwrap();
        let s = res.summaries[0].stats("census").unwrap();
        assert_eq!((s.mean, s.se), (40.0, 0.0));
        let Report::CliqueCensus(points) = &res.report else { panic!() };
        assert_eq!(points[0].exponent, Some(1.0));
    }

    #[test]
    fn witness_products_on_a_path() {
        // 0 -(0.1)- 1 -(0.2)- 2, 2 -(0.7)- 0 with p = 1: A_0 = A_1 = {0,1,2},
        // B_0 = {0,2}, B_1 = {1}.
        let g = TemporalGraph::from_triples(3, [(0, 1, 0.1), (1, 2, 0.2), (0, 2, 0.7)]).unwrap();
        let (lhs, rhs) = witness_products(&g, 2, 1.0).unwrap();
        assert!((lhs - (1.0 / 3.0) * (2.0 / 3.0)).abs() < 1e-15);
        assert!((rhs - (3.0 * 1.0 / 9.0) * (3.0 * 2.0 / 9.0)).abs() < 1e-15);
    }
}
