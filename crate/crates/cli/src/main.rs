use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclerls::experiments::{equivalence_sweep, run_experiment, ExperimentConfig, ScalingResult};
use cyclerls::markov::absorbing::{
    absorption_analysis_exact, simulate_retries, trial_matrix_exact, trial_summary, B, G, S,
};
use cyclerls::markov::grids::{square_grid, triangle_grid, triangle_index, triangle_points};
use cyclerls::markov::resistance::{resistances_from, triangle_resistance_check};
use cyclerls::markov::Network;
use cyclerls::oracle::{census, min_dominating_size};
use cyclerls::particles::coupling::{couple_many, CouplingConfig};
use cyclerls::particles::fixed_arc::DELTAS;
use cyclerls::particles::triangle::{corners, triangle_hitting_time, triangle_hitting_times_exact};
use cyclerls::rls::{run_seeded, EventLog, RunOptions, Stop, SwapMode};
use cyclerls::{CycleGraph, TriangleWalkConfig};

#[derive(Parser)]
#[command(name = "cyclerls", version, about = "Random local search for dominating sets on cycles")]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Swap {
    FromSet,
    FromVertices,
}

impl From<Swap> for SwapMode {
    fn from(s: Swap) -> Self {
        match s {
            Swap::FromSet => SwapMode::FromSet,
            Swap::FromVertices => SwapMode::FromVertices,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// One seeded RLS trajectory, reported as JSON.
    Run(RunArgs),
    /// A scaling study from a config file and overrides.
    Experiment(ExperimentArgs),
    /// Dominating-set counts from the exhaustive oracle, as CSV.
    Census {
        #[arg(long)]
        n: usize,
        /// Only this cardinality (all by default).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Effective resistances from one vertex, as CSV.
    Resistance(ResistanceArgs),
    /// Hitting times of the triangle walk, or coupled fixed arc runs.
    FixedArc(FixedArcArgs),
    /// Absorption analysis of the trial chain.
    TrialChain {
        #[arg(long)]
        n: usize,
        /// Monte Carlo runs of the retry count.
        #[arg(long, default_value_t = 0)]
        runs: u64,
    },
    /// Exhaustive redundancy-criterion and reducibility sweep.
    Equivalence {
        #[arg(long, default_value_t = 14)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Feasible,
    Half,
    Optimum,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "optimum")]
    target: Target,
    #[arg(long, default_value_t = 100_000_000)]
    cap: u64,
    #[arg(long, value_enum, default_value = "from-set")]
    swap: Swap,
    /// Include accepted step events.
    #[arg(long)]
    events: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set n=50,100`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Triangle,
    Square,
    Cycle,
    Path,
}

#[derive(Args)]
struct ResistanceArgs {
    #[arg(long, value_enum, conflicts_with = "edges")]
    family: Option<Family>,
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Edge list file with lines `u v conductance`.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    from: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ArcMode {
    Exact,
    Simulate,
    Couple,
}

#[derive(Args)]
struct FixedArcArgs {
    #[arg(long, value_enum, default_value = "exact")]
    mode: ArcMode,
    /// Triangle side (exact and simulate).
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// Laziness denominator (exact and simulate).
    #[arg(long, default_value_t = 24.0)]
    c: f64,
    /// Monte Carlo trials per start, or coupled runs.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, value_enum, default_value = "from-set")]
    swap: Swap,
}

/// Outcome of a command that checks something.
enum Verdict {
    Ok,
    Violated(String),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Violated(why)) => {
            eprintln!("check failed: {why}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<Verdict> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let verdict = match cli.command {
        Command::Run(a) => cmd_run(&a, cli.seed, &mut out)?,
        Command::Experiment(a) => cmd_experiment(&a, cli.seed, &mut out)?,
        Command::Census { n, k } => cmd_census(n, k, &mut out)?,
        Command::Resistance(a) => cmd_resistance(&a, &mut out)?,
        Command::FixedArc(a) => cmd_fixed_arc(&a, cli.seed, &mut out)?,
        Command::TrialChain { n, runs } => cmd_trial_chain(n, runs, cli.seed, &mut out)?,
        Command::Equivalence { max_n } => cmd_equivalence(max_n, &mut out)?,
    };
    out.flush()?;
    Ok(verdict)
}

fn cmd_run(a: &RunArgs, seed: u64, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let g = CycleGraph::new(a.n)?;
    let stop = match a.target {
        Target::Feasible => Stop::feasible(a.cap),
        Target::Half => Stop::cardinality(a.n / 2, a.cap),
        Target::Optimum => Stop::cardinality(a.n.div_ceil(3), a.cap),
    };
    let opts = RunOptions {
        swap: a.swap.into(),
        log: if a.events { EventLog::Accepted } else { EventLog::Off },
    };
    let traj = run_seeded(&g, seed, &stop, &opts)?;
    log::info!("n={} seed={seed}: {} iterations", a.n, traj.iterations);
    serde_json::to_writer_pretty(&mut *out, &traj)?;
    writeln!(out)?;
    Ok(Verdict::Ok)
}

fn cmd_experiment(a: &ExperimentArgs, seed: u64, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let mut cfg = match &a.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    cfg.seed = seed;
    for o in &a.overrides {
        let Some((k, v)) = o.split_once('=') else {
            bail!("override {o:?} is not KEY=VALUE");
        };
        cfg.set(k.trim(), v.trim())?;
    }
    cfg.validate()?;
    let (result, _) = run_experiment(&cfg)?;
    write_scaling(&result, out)?;
    Ok(if result.all_within_bound() {
        Verdict::Ok
    } else {
        Verdict::Violated(format!("{} mean above its bound or runs capped", cfg.kind))
    })
}

fn write_scaling(r: &ScalingResult, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "n,mean,se,bound,runs,capped")?;
    for row in &r.rows {
        writeln!(out, "{},{},{},{},{},{}", row.n, row.mean, row.se, row.bound, row.runs, row.capped)?;
    }
    if let Some(s) = r.slope {
        match s.ci {
            Some((lo, hi)) => writeln!(out, "# slope,{},{lo},{hi}", s.slope)?,
            None => writeln!(out, "# slope,{},,", s.slope)?,
        }
    }
    Ok(())
}

fn cmd_census(n: usize, k: Option<usize>, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let min = min_dominating_size(n)?;
    writeln!(out, "n,k,total,redundant,minimal")?;
    let ks = match k {
        Some(k) => k..=k,
        None => min..=n,
    };
    for k in ks {
        let c = census(n, k)?;
        writeln!(out, "{},{},{},{},{}", c.n, c.k, c.total, c.redundant, c.minimal)?;
    }
    Ok(if min == n.div_ceil(3) {
        Verdict::Ok
    } else {
        Verdict::Violated(format!("minimum dominating set of C_{n} has {min} vertices"))
    })
}

fn cmd_resistance(a: &ResistanceArgs, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let n = a.n;
    let net = match (a.family, &a.edges) {
        (_, Some(p)) => Network::from_edge_list(&std::fs::read_to_string(p)?)?,
        (Some(Family::Triangle) | None, None) => triangle_grid(n)?,
        (Some(Family::Square), None) => square_grid(n)?,
        (Some(Family::Cycle), None) => Network::unit(n, (0..n).map(|i| (i, (i + 1) % n)))?,
        (Some(Family::Path), None) => Network::unit(n, (1..n).map(|i| (i - 1, i)))?,
    };
    net.check_vertex(a.from)?;
    let r = resistances_from(&net, a.from)?;
    writeln!(out, "s,t,resistance")?;
    for (t, r) in r.iter().enumerate() {
        writeln!(out, "{},{t},{r}", a.from)?;
    }
    if matches!(a.family, Some(Family::Triangle) | None) && a.edges.is_none() && a.from == 0 && n >= 2 {
        let check = triangle_resistance_check(n)?;
        if !check.holds() {
            return Ok(Verdict::Violated(format!(
                "R(o, {:?}) = {} exceeds {}",
                check.argmax, check.max, check.bound
            )));
        }
    }
    Ok(Verdict::Ok)
}

fn cmd_fixed_arc(a: &FixedArcArgs, seed: u64, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    if let ArcMode::Couple = a.mode {
        let cfg = CouplingConfig {
            swap: a.swap.into(),
            ..CouplingConfig::standard()
        };
        let s = couple_many(&cfg, a.trials, seed)?;
        writeln!(out, "dx,dy,opportunities,hits,frequency,expected")?;
        for (c, (dx, dy)) in DELTAS.iter().enumerate() {
            writeln!(
                out,
                "{dx},{dy},{},{},{},{}",
                s.counts.opportunities[c],
                s.counts.hits[c],
                s.counts.frequency(c).unwrap_or(f64::NAN),
                s.expected_rate
            )?;
        }
        writeln!(out, "# runs,{},violations,{},capped,{}", s.runs.len(), s.violations(), s.capped())?;
        return Ok(if s.violations() == 0 && s.counts.deviations(s.expected_rate, 3.0).is_empty() {
            Verdict::Ok
        } else {
            Verdict::Violated("coupling dominance or transition rates".into())
        });
    }
    let cfg = TriangleWalkConfig::new(a.k, a.c)?;
    let targets = corners(a.k);
    writeln!(out, "x,y,hitting_time,se")?;
    match a.mode {
        ArcMode::Exact => {
            let times = triangle_hitting_times_exact(&cfg, &targets)?;
            for (p, t) in triangle_points(a.k).iter().zip(times) {
                writeln!(out, "{},{},{t},0", p.0, p.1)?;
            }
        }
        _ => {
            for p in triangle_points(a.k) {
                let stream = seed ^ triangle_index(a.k, p).expect("point of T_k") as u64;
                let est = triangle_hitting_time(&cfg, p, &targets, a.trials, stream)?;
                writeln!(out, "{},{},{},{}", p.0, p.1, est.mean, est.se)?;
            }
        }
    }
    Ok(Verdict::Ok)
}

fn cmd_trial_chain(n: usize, runs: u64, seed: u64, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let s = trial_summary(n)?;
    let exact = absorption_analysis_exact(&trial_matrix_exact(n, true)?, &[G, B])?;
    let no_b = absorption_analysis_exact(&trial_matrix_exact(n, false)?, &[G, B])?;
    writeln!(out, "quantity,value,exact")?;
    writeln!(out, "p_good,{},{}", s.p_good, exact.hit[S][0])?;
    writeln!(out, "absorption_time,{},{}", s.absorption_time, exact.times[S])?;
    writeln!(out, "f_s,{},{}", s.f_s, no_b.times[S])?;
    let mut verdict = Verdict::Ok;
    if runs > 0 {
        let est = simulate_retries(n, runs, seed)?;
        writeln!(out, "retries_mean,{},2", est.mean)?;
        writeln!(out, "retries_se,{},", est.se)?;
        if est.mean > 2.0 + 3.0 * est.se {
            verdict = Verdict::Violated(format!("mean retries {} above 2 + 3 se", est.mean));
        }
    }
    Ok(verdict)
}

fn cmd_equivalence(max_n: usize, out: &mut dyn Write) -> anyhow::Result<Verdict> {
    let r = equivalence_sweep(max_n)?;
    serde_json::to_writer_pretty(&mut *out, &r)?;
    writeln!(out)?;
    Ok(if r.success() {
        Verdict::Ok
    } else {
        Verdict::Violated(format!("counterexample {:?}", r.counterexample))
    })
}
