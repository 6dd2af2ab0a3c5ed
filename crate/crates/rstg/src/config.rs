//! Declarative experiment sweeps.

use std::fs;
use std::path::{Path, PathBuf};

use rstg_core::branching::DEFAULT_BUDGET;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// What an experiment measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    CliqueScaling,
    CliqueCensus,
    MomentCheck,
    Dominance,
    NegativeCorr,
    WalkTau,
    BpStats,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::CliqueScaling,
        ExperimentKind::CliqueCensus,
        ExperimentKind::MomentCheck,
        ExperimentKind::Dominance,
        ExperimentKind::NegativeCorr,
        ExperimentKind::WalkTau,
        ExperimentKind::BpStats,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::CliqueScaling => "clique-scaling",
            ExperimentKind::CliqueCensus => "clique-census",
            ExperimentKind::MomentCheck => "moment-check",
            ExperimentKind::Dominance => "dominance",
            ExperimentKind::NegativeCorr => "negative-corr",
            ExperimentKind::WalkTau => "walk-tau",
            ExperimentKind::BpStats => "bp-stats",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Clique solver requested by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Per-trial work limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Search nodes of the exact clique solver.
    pub clique_nodes: u64,
    /// Explored nodes of one branching-process sample.
    pub tbp_nodes: u64,
    /// Steps of one coupled run.
    pub coupling_steps: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            clique_nodes: 10_000_000,
            tbp_nodes: DEFAULT_BUDGET,
            coupling_steps: DEFAULT_BUDGET,
        }
    }
}

/// One sweep: every `n` crossed with every `c` (or every `p`), each point
/// run for `trials` independent trials.
///
/// For the branching-process kinds `p` is the cutoff `θ` (`theta` is
/// accepted as a key) and `n` the branching factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, alias = "theta", skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Clique size of the census.
    #[serde(default = "default_m")]
    pub m: usize,
    /// Moment order.
    #[serde(default = "default_q")]
    pub q: u32,
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default)]
    pub budgets: Budgets,
    /// Clique solver; by default exact when `c < 1`, heuristic otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeChoice>,
    /// Deepest generation (bp kinds) or walk length (walk-tau).
    #[serde(default = "default_l_max")]
    pub l_max: usize,
    /// Explicit walk paths; random ones are drawn per point when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<u64>>>,
    /// Number of random walk paths when `paths` is absent.
    #[serde(default = "default_path_count")]
    pub path_count: usize,
    /// Level of the DKW bands.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Constant of the total-progeny moment bound.
    #[serde(default = "default_bound_constant")]
    pub bound_constant: f64,
    /// negative-corr: take `B_1` from an independent second graph.
    #[serde(default)]
    pub independent: bool,
    #[serde(default = "default_passes")]
    pub heuristic_passes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

fn default_m() -> usize {
    3
}
fn default_q() -> u32 {
    1
}
fn default_threads() -> usize {
    1
}
fn default_l_max() -> usize {
    4
}
fn default_path_count() -> usize {
    2
}
fn default_alpha() -> f64 {
    0.01
}
fn default_bound_constant() -> f64 {
    1.0
}
fn default_passes() -> usize {
    64
}

/// One `(n, p)` point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub index: usize,
    pub n: usize,
    pub p: f64,
    /// The `c` the point came from, if any.
    pub c: Option<f64>,
}

impl ExperimentConfig {
    /// Minimal config with defaults for everything but the sweep.
    pub fn new(kind: ExperimentKind, n: Vec<usize>, trials: usize) -> Self {
        ExperimentConfig {
            kind,
            n,
            c: None,
            p: None,
            m: default_m(),
            q: default_q(),
            trials,
            master_seed: 0,
            threads: default_threads(),
            budgets: Budgets::default(),
            mode: None,
            l_max: default_l_max(),
            paths: None,
            path_count: default_path_count(),
            alpha: default_alpha(),
            bound_constant: default_bound_constant(),
            independent: false,
            heuristic_passes: default_passes(),
            output: None,
            format: None,
        }
    }

    pub fn with_c(mut self, c: Vec<f64>) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_p(mut self, p: Vec<f64>) -> Self {
        self.p = Some(p);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        if self.n.is_empty() {
            return bad("n must list at least one value".into());
        }
        if self.q == 0 {
            return bad("q must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha {} outside (0,1)", self.alpha));
        }
        if !(self.bound_constant > 0.0 && self.bound_constant.is_finite()) {
            return bad("bound_constant must be positive".into());
        }
        let walk = self.kind == ExperimentKind::WalkTau;
        match (&self.c, &self.p) {
            (Some(_), Some(_)) => return bad("give either c or p, not both".into()),
            (None, None) if !walk => return bad("one of c or p is required".into()),
            (Some(c), None) if c.is_empty() => return bad("c must list at least one value".into()),
            (None, Some(p)) if p.is_empty() => return bad("p must list at least one value".into()),
            _ => {}
        }
        let min_n = match self.kind {
            ExperimentKind::CliqueCensus | ExperimentKind::NegativeCorr | ExperimentKind::Dominance => 2,
            _ => 1,
        };
        if let Some(&n) = self.n.iter().find(|&&n| n < min_n) {
            return bad(format!("n = {n} is too small for {}", self.kind));
        }
        if let Some(c) = &self.c {
            for &n in &self.n {
                for &ci in c {
                    let p = ci * (n as f64).ln() / n as f64;
                    if !(ci > 0.0 && p > 0.0 && p < 1.0) {
                        return bad(format!("n = {n}, c = {ci} gives p = {p} outside (0,1)"));
                    }
                }
            }
        }
        if let Some(p) = &self.p {
            if let Some(&x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return bad(format!("p = {x} outside [0,1]"));
            }
            if self.kind == ExperimentKind::Dominance && p.contains(&0.0) {
                return bad("dominance needs p > 0".into());
            }
        }
        match self.kind {
            ExperimentKind::CliqueCensus => {
                if self.m == 0 {
                    return bad("m must be at least 1".into());
                }
                if let Some(&n) = self.n.iter().find(|&&n| n < self.m) {
                    return bad(format!("n = {n} is smaller than m = {}", self.m));
                }
            }
            ExperimentKind::NegativeCorr if self.q > 2 => {
                return bad("negative-corr supports q in {1, 2}".into());
            }
            ExperimentKind::WalkTau => {
                if self.l_max == 0 {
                    return bad("l_max must be at least 1".into());
                }
                match &self.paths {
                    Some(paths) => {
                        for &n in &self.n {
                            rstg_core::branching::WalkPathSet::new(n as u64, paths.clone())?;
                        }
                        if paths.iter().any(|path| path.len() < self.l_max) {
                            return bad("every path must be at least l_max long".into());
                        }
                    }
                    None if self.path_count == 0 => return bad("path_count must be at least 1".into()),
                    None => {
                        for &n in &self.n {
                            if (n as f64).powi(self.l_max as i32) < self.path_count as f64 {
                                return bad(format!("n = {n} has fewer than path_count distinct paths"));
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Sweep points in order: `n` outer, `c`/`p` inner.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &n in &self.n {
            match (&self.c, &self.p) {
                (Some(cs), _) => {
                    for &c in cs {
                        let p = c * (n as f64).ln() / n as f64;
                        out.push(SweepPoint { index: out.len(), n, p, c: Some(c) });
                    }
                }
                (None, Some(ps)) => {
                    for &p in ps {
                        out.push(SweepPoint { index: out.len(), n, p, c: None });
                    }
                }
                (None, None) => out.push(SweepPoint { index: out.len(), n, p: 0.0, c: None }),
            }
        }
        out
    }

    /// Solver used at `point`.
    pub fn mode_at(&self, point: &SweepPoint) -> ModeChoice {
        self.mode.unwrap_or(match point.c {
            Some(c) if c >= 1.0 => ModeChoice::Heuristic,
            Some(_) => ModeChoice::Exact,
            None => {
                let n = point.n as f64;
                if point.p * n >= n.ln() {
                    ModeChoice::Heuristic
                } else {
                    ModeChoice::Exact
                }
            }
        })
    }
}
