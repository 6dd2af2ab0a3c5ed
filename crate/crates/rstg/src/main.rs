use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rstg::config::{ExperimentConfig, ExperimentKind, OutputFormat};
use rstg::experiments::{run_experiment, run_experiment_with};
use rstg::output::{write_json, CsvSink};
use rstg::seed::trial_seed;
use rstg::{io as graph_io, Error};
use rstg_core::branching::coupled_sample;
use rstg_core::clique::{count_temporal_cliques, max_temporal_clique, CliqueMode, SolverOptions};
use rstg_core::reach::{backward_reach, forward_reach};
use rstg_core::{generate_rstg, GraphParams, TimeWindow};
use serde_json::json;

#[derive(Parser)]
#[command(name = "rstg", version, about = "Random simple temporal graphs: generation, reachability, cliques, branching experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an RSTG and write it to a file.
    Gen(GenArgs),
    /// Vertices reachable from (or reaching) a vertex by increasing paths.
    Reach(ReachArgs),
    /// Largest temporal clique, or a census of m-cliques.
    Clique(CliqueArgs),
    /// Total progeny of the temporal branching process.
    Bp(BpArgs),
    /// Walk prefix lengths against a set of paths.
    Walk(WalkArgs),
    /// Coupled foremost-tree chains.
    Couple(CoupleArgs),
    /// Run an experiment sweep from a JSON config.
    Exp(ExpArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "c", required_unless_present = "c")]
    p: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReachArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    source: usize,
    /// Inclusive stamp window `lo,hi`.
    #[arg(long, value_parser = parse_window)]
    window: Option<TimeWindow>,
    #[arg(long)]
    backward: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct CliqueArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Count temporal cliques of this size instead.
    #[arg(long)]
    census: Option<usize>,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BpArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    n: usize,
    /// One path per line, child indices separated by spaces.
    #[arg(long)]
    paths: PathBuf,
    #[arg(long)]
    lmax: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct CoupleArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ExpArgs {
    /// clique-scaling, clique-census, moment-check, dominance,
    /// negative-corr, walk-tau or bp-stats.
    kind: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn parse_window(s: &str) -> Result<TimeWindow, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    TimeWindow::new(lo, hi).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Io(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let text = e.to_string();
        match e {
            Error::Config(_) => Failure::Usage(text),
            Error::Core(core) => core_failure(core),
            Error::Io { .. } | Error::Stream(_) | Error::Parse { .. } | Error::Json(_) => Failure::Io(text),
        }
    }
}

impl From<rstg_core::Error> for Failure {
    fn from(e: rstg_core::Error) -> Self {
        core_failure(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn core_failure(e: rstg_core::Error) -> Failure {
    match e {
        rstg_core::Error::BudgetExceeded { .. } | rstg_core::Error::CliqueBudgetExceeded { .. } => {
            Failure::Budget(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    }
}

type Outcome = Result<(), Failure>;

fn print_json(value: &impl serde::Serialize) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn gen(a: GenArgs) -> Outcome {
    let params = match (a.p, a.c) {
        (Some(p), _) => GraphParams::from_p(a.n, p)?,
        (None, Some(c)) => GraphParams::from_c(a.n, c)?,
        (None, None) => unreachable!("clap requires one of --p, --c"),
    };
    let g = generate_rstg(&params, a.seed)?;
    graph_io::save_graph(&g, &a.out)?;
    eprintln!("wrote {} vertices, {} edges to {}", g.n(), g.edge_count(), a.out.display());
    Ok(())
}

fn reach(a: ReachArgs) -> Outcome {
    let g = graph_io::load_graph(&a.graph)?;
    let w = a.window.unwrap_or(TimeWindow::FULL);
    let r = if a.backward {
        backward_reach(&g, a.source, &w)?
    } else {
        forward_reach(&g, a.source, &w)?
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for v in r.members() {
        match r.stamp_of(v).flatten() {
            Some(t) => writeln!(out, "{v} {}", graph_io::format_g17(t))?,
            None => writeln!(out, "{v} -")?,
        }
    }
    out.flush()?;
    Ok(())
}

fn clique(a: CliqueArgs) -> Outcome {
    let g = graph_io::load_graph(&a.graph)?;
    if let Some(m) = a.census {
        let census = count_temporal_cliques(&g, m);
        return print_json(&json!({ "m": census.m, "count": census.count }));
    }
    let mode = match a.mode {
        ModeArg::Exact => CliqueMode::Exact,
        ModeArg::Heuristic => CliqueMode::Heuristic,
    };
    let opts = SolverOptions {
        node_budget: a.budget,
        seed: a.seed,
        ..SolverOptions::default()
    };
    match max_temporal_clique(&g, mode, &opts) {
        Ok(c) => print_json(&json!({ "size": c.len(), "vertices": c })),
        Err(rstg_core::Error::CliqueBudgetExceeded { budget, incumbent }) => {
            print_json(&json!({ "budget_exceeded": budget, "incumbent": incumbent }))?;
            Err(Failure::Budget(format!("clique search exceeded {budget} nodes")))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_and_report(cfg: ExperimentConfig) -> Outcome {
    let result = run_experiment(&cfg)?;
    print_json(&json!({ "summaries": result.summaries, "report": result.report }))?;
    if result.exhausted() {
        return Err(Failure::Budget("every trial of some point exceeded its budget".into()));
    }
    Ok(())
}

fn bp(a: BpArgs) -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::BpStats, vec![a.n], a.trials).with_p(vec![a.theta]);
    cfg.master_seed = a.seed;
    cfg.threads = a.threads;
    run_and_report(cfg)
}

/// Paths file: one path per line, `#` starts a comment.
fn read_paths(path: &Path) -> Result<Vec<Vec<u64>>, Error> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut paths = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let text = line.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let steps = text
            .split_whitespace()
            .map(|s| s.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: idx + 1,
                message: format!("bad child index: {e}"),
            })?;
        paths.push(steps);
    }
    Ok(paths)
}

fn walk(a: WalkArgs) -> Outcome {
    let mut cfg = ExperimentConfig::new(ExperimentKind::WalkTau, vec![a.n], a.trials);
    cfg.paths = Some(read_paths(&a.paths)?);
    cfg.l_max = a.lmax;
    cfg.master_seed = a.seed;
    cfg.threads = a.threads;
    run_and_report(cfg)
}

fn couple(a: CoupleArgs) -> Outcome {
    let (mut violations, mut a_sum, mut t_sum) = (0u64, 0u64, 0u64);
    for i in 0..a.trials {
        let trace = coupled_sample(a.n, a.p, trial_seed(a.seed, i))?;
        violations += trace.violations() as u64;
        a_sum += trace.a_size;
        t_sum += trace.tstar_size;
    }
    let k = a.trials.max(1) as f64;
    print_json(&json!({
        "trials": a.trials,
        "violations": violations,
        "mean_a_size": a_sum as f64 / k,
        "mean_tstar_size": t_sum as f64 / k,
    }))
}

fn exp(a: ExpArgs) -> Outcome {
    let kind = ExperimentKind::parse(&a.kind).ok_or_else(|| Failure::Usage(format!("unknown experiment kind `{}`", a.kind)))?;
    let mut cfg = ExperimentConfig::load(&a.config)?;
    if cfg.kind != kind {
        return Err(Failure::Usage(format!("config describes {}, not {kind}", cfg.kind)));
    }
    if let Some(t) = a.threads {
        cfg.threads = t;
    }
    let format = match a.format {
        Some(FormatArg::Csv) => OutputFormat::Csv,
        Some(FormatArg::Json) => OutputFormat::Json,
        None => cfg.format.unwrap_or(OutputFormat::Csv),
    };
    let out_path = a
        .out
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| Failure::Usage("no output path: pass --out or set `output`".into()))?;
    cfg.validate()?;
    let file = File::create(&out_path).map_err(|e| Error::Io {
        path: out_path.clone(),
        source: e,
    })?;
    let result = match format {
        OutputFormat::Csv => {
            let mut sink = CsvSink::new(BufWriter::new(file), &rstg::experiments::columns(&cfg))?;
            let result = run_experiment_with(&cfg, |r| sink.write(r))?;
            sink.finish()?;
            result
        }
        OutputFormat::Json => {
            let result = run_experiment(&cfg)?;
            let mut out = BufWriter::new(file);
            write_json(&result, &mut out)?;
            out.flush()?;
            result
        }
    };
    for s in &result.summaries {
        eprintln!(
            "n={} p={} ok={} budget={}",
            s.point.n,
            graph_io::format_g17(s.point.p),
            s.ok,
            s.budget_failures
        );
    }
    if result.exhausted() {
        return Err(Failure::Budget("every trial of some point exceeded its budget".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Reach(a) => reach(a),
        Command::Clique(a) => clique(a),
        Command::Bp(a) => bp(a),
        Command::Walk(a) => walk(a),
        Command::Couple(a) => couple(a),
        Command::Exp(a) => exp(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exhausted: {m}");
            ExitCode::from(3)
        }
    }
}
