//! Seeded scaling studies, closed-form bound columns and exhaustive sweeps.
//!
//! All bounds use the natural logarithm.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::adjacency::{weights_from_set, weights_redundant, AdjacencyWeights};
use crate::graph::{CycleGraph, VertexSet};
use crate::markov::absorbing::sample_retries;
use crate::markov::resistance::{triangle_bound, triangle_resistance_check, Estimate};
use crate::oracle::{self, dominating_sets, min_dominating_size};
use crate::particles::coupling::{couple, CouplingConfig};
use crate::particles::triangle::first_redundancy_bound;
use crate::particles::{particles_from_weights, particles_redundant};
use crate::rls::{random_init, run, EventLog, RunOptions, Stop, SwapMode};
use crate::rng;
use crate::{Error, Result};

/// `2n(1 + ln(n/2))`.
pub fn feasibility_bound(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n * (1.0 + (n / 2.0).ln())
}

/// `2n(1 + ln(n − ⌊n/2⌋))`.
pub fn half_bound(n: usize) -> f64 {
    2.0 * n as f64 * (1.0 + ((n - n / 2) as f64).ln())
}

/// `2n + 2n ln n`, the looser form of [`half_bound`].
pub fn half_bound_loose(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n + 2.0 * n * n.ln()
}

/// `8n · ((k+1)(k+2)+2)/2 · (8 ln²k + 6(ln k + 1))`: expected time to leave
/// level `k`.
pub fn level_bound(n: usize, k: usize) -> f64 {
    let kf = k as f64;
    8.0 * n as f64 * ((kf + 1.0) * (kf + 2.0) + 2.0) / 2.0 * triangle_bound(k)
}

/// Feasibility and half phases plus every level from `⌊n/2⌋` down to `⌈n/3⌉ + 1`.
pub fn total_bound(n: usize) -> f64 {
    let levels: f64 = (n.div_ceil(3) + 1..=n / 2).map(|k| level_bound(n, k)).sum();
    feasibility_bound(n) + half_bound(n) + levels
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Feasibility,
    Half,
    Optimum,
    FixedArc,
    Resistance,
    Census,
    TrialChain,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::Feasibility,
        Self::Half,
        Self::Optimum,
        Self::FixedArc,
        Self::Resistance,
        Self::Census,
        Self::TrialChain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Feasibility => "feasibility",
            Self::Half => "half",
            Self::Optimum => "optimum",
            Self::FixedArc => "fixed-arc",
            Self::Resistance => "resistance",
            Self::Census => "census",
            Self::TrialChain => "trial-chain",
        }
    }

    /// Closed-form comparison value for size `n`.
    pub fn bound(self, n: usize) -> f64 {
        match self {
            Self::Feasibility => feasibility_bound(n),
            Self::Half => half_bound(n),
            Self::Optimum => total_bound(n),
            Self::FixedArc => fixed_arc_level(n).map_or(f64::NAN, |k| first_redundancy_bound(n, k)),
            Self::Resistance => triangle_bound(n),
            Self::Census => n.div_ceil(3) as f64,
            Self::TrialChain => 2.0,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind {s:?}")))
    }
}

fn parse_swap(s: &str) -> Result<SwapMode> {
    match s {
        "from-set" => Ok(SwapMode::FromSet),
        "from-vertices" => Ok(SwapMode::FromVertices),
        _ => Err(Error::Config(format!("unknown swap mode {s:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub ns: Vec<usize>,
    pub seeds: usize,
    /// Iteration cap per run.
    pub cap: u64,
    pub swap: SwapMode,
    /// Master seed.
    pub seed: u64,
    pub raw_out: Option<PathBuf>,
    pub plot_out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Feasibility,
            ns: vec![50, 100, 200, 400],
            seeds: 100,
            cap: 100_000_000,
            swap: SwapMode::FromSet,
            seed: 0,
            raw_out: None,
            plot_out: None,
        }
    }
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 8] = ["kind", "n", "seeds", "cap", "swap", "seed", "raw_out", "plot_out"];

    /// Parse `key = value` lines over the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Override one key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |e: &dyn fmt::Display| Error::Config(format!("{key} = {value:?}: {e}"));
        match key {
            "kind" => self.kind = value.parse()?,
            "n" => {
                self.ns = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|e| bad(&e)))
                    .collect::<Result<_>>()?
            }
            "seeds" => self.seeds = value.parse().map_err(|e| bad(&e))?,
            "cap" => self.cap = value.parse().map_err(|e| bad(&e))?,
            "swap" => self.swap = parse_swap(value)?,
            "seed" => self.seed = value.parse().map_err(|e| bad(&e))?,
            "raw_out" => self.raw_out = (!value.is_empty()).then(|| value.into()),
            "plot_out" => self.plot_out = (!value.is_empty()).then(|| value.into()),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::Config("n grid is empty".into()));
        }
        if self.seeds == 0 {
            return Err(Error::Config("seeds must be at least 1".into()));
        }
        if let Some(&n) = self.ns.iter().find(|&&n| n < 3) {
            return Err(Error::Config(format!("n = {n} is below 3")));
        }
        if self.ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("n grid must be strictly increasing".into()));
        }
        if self.kind == ExperimentKind::Census {
            if let Some(&n) = self.ns.iter().find(|&&n| n > oracle::DEFAULT_LIMIT) {
                return Err(Error::EnumerationLimit {
                    n,
                    limit: oracle::DEFAULT_LIMIT,
                });
            }
        }
        if self.kind == ExperimentKind::FixedArc {
            for &n in &self.ns {
                fixed_arc_start(n)?;
            }
        }
        Ok(())
    }
}

/// Level used by the fixed-arc experiment: about `5n/12`, strictly between
/// the optimum and `⌊n/2⌋`.
pub fn fixed_arc_level(n: usize) -> Option<usize> {
    let (lo, hi) = (n.div_ceil(3) + 1, n / 2);
    (lo <= hi).then(|| (5 * n / 12).clamp(lo, hi))
}

/// Irredundant start at [`fixed_arc_level`]: gaps of 2 and 3 with the 3s
/// spread evenly. Needs at least three gaps of 2 to host a triple.
pub fn fixed_arc_start(n: usize) -> Result<AdjacencyWeights> {
    let k = fixed_arc_level(n).ok_or_else(|| Error::Config(format!("n = {n} has no level above the optimum")))?;
    if 2 * k > n || 3 * k < n + 3 {
        return Err(Error::Config(format!("n = {n} has no level hosting three particles")));
    }
    let threes = n - 2 * k;
    let weights = (0..k).map(|i| if (i * threes) % k < threes { 3 } else { 2 }).collect();
    AdjacencyWeights::new(weights, 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    Capped,
    Exact,
}

/// One cell of the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub n: usize,
    pub seed_index: usize,
    pub stream: u64,
    pub value: Option<f64>,
    pub iterations: u64,
    pub status: RunStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub mean: f64,
    pub se: f64,
    pub bound: f64,
    pub runs: usize,
    pub capped: usize,
}

impl ScalingRow {
    /// No capped runs and `mean ≤ bound + z·se`.
    pub fn within_bound(&self, z: f64) -> bool {
        self.capped == 0 && self.mean <= self.bound + z * self.se
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    /// 95% Student-t interval; absent with fewer than three points.
    pub ci: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub kind: ExperimentKind,
    pub rows: Vec<ScalingRow>,
    pub slope: Option<SlopeFit>,
}

impl ScalingResult {
    /// Every row within its bound. Trial-chain rows estimate a mean equal
    /// to the bound, so they get three standard errors of slack.
    pub fn all_within_bound(&self) -> bool {
        let z = if self.kind == ExperimentKind::TrialChain { 3.0 } else { 0.0 };
        self.rows.iter().all(|r| r.within_bound(z))
    }
}

/// Least-squares slope of `ln y` on `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<SlopeFit> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let m = pts.len();
    if m < 2 {
        return None;
    }
    let mf = m as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let ci = (m > 2).then(|| {
        let intercept = my - slope * mx;
        let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
        let se = (sse / (mf - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, mf - 2.0)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        (slope - t * se, slope + t * se)
    });
    Some(SlopeFit { slope, ci })
}

fn rls_cell(cfg: &ExperimentConfig, n: usize, index: usize) -> Result<RawRow> {
    let stream = rng::cell_stream(n, index);
    let mut r = rng::stream(cfg.seed, stream);
    let g = CycleGraph::new(n)?;
    let stop = match cfg.kind {
        ExperimentKind::Feasibility => Stop::feasible(cfg.cap),
        ExperimentKind::Half => Stop::cardinality(n / 2, cfg.cap),
        _ => Stop::cardinality(n.div_ceil(3), cfg.cap),
    };
    let opts = RunOptions {
        swap: cfg.swap,
        log: EventLog::Off,
    };
    let x0 = random_init(n, &mut r);
    let traj = run(&g, &x0, &stop, &opts, &mut r)?;
    let c = &traj.checkpoints;
    let value = match cfg.kind {
        ExperimentKind::Feasibility => c.first_feasible,
        ExperimentKind::Half => c.first_half.zip(c.first_feasible).map(|(h, f)| h - f),
        _ => c.first_optimal,
    };
    Ok(RawRow {
        n,
        seed_index: index,
        stream,
        value: value.map(|v| v as f64),
        iterations: traj.iterations,
        status: if traj.capped { RunStatus::Capped } else { RunStatus::Ok },
    })
}

fn fixed_arc_cell(cfg: &ExperimentConfig, n: usize, index: usize) -> Result<RawRow> {
    let stream = rng::cell_stream(n, index);
    let coupling = CouplingConfig {
        weights: fixed_arc_start(n)?.weights().to_vec(),
        swap: cfg.swap,
        max_iters: cfg.cap,
        ..CouplingConfig::standard()
    };
    let run = couple(&coupling, &mut rng::stream(cfg.seed, stream))?;
    if run.dominated() == Some(false) {
        return Err(Error::InvalidState(format!(
            "n = {n}, run {index}: triple reached the target before the set became redundant"
        )));
    }
    Ok(RawRow {
        n,
        seed_index: index,
        stream,
        value: run.t_redundant.map(|t| t as f64),
        iterations: run.iterations,
        status: if run.t_redundant.is_none() {
            RunStatus::Capped
        } else {
            RunStatus::Ok
        },
    })
}

fn exact_row(n: usize, value: f64) -> RawRow {
    RawRow {
        n,
        seed_index: 0,
        stream: 0,
        value: Some(value),
        iterations: 0,
        status: RunStatus::Exact,
    }
}

fn aggregate(kind: ExperimentKind, n: usize, rows: &[RawRow]) -> ScalingRow {
    let values: Vec<f64> = rows.iter().filter_map(|r| r.value).collect();
    let est = if values.len() > 1 {
        Estimate::from_samples(&values)
    } else {
        Estimate {
            mean: values.first().copied().unwrap_or(f64::NAN),
            se: 0.0,
            trials: values.len() as u64,
        }
    };
    ScalingRow {
        n,
        mean: est.mean,
        se: est.se,
        bound: kind.bound(n),
        runs: rows.len(),
        capped: rows.iter().filter(|r| r.status == RunStatus::Capped).count(),
    }
}

/// Run the seed × n grid and aggregate one row per `n`.
///
/// Capped runs stay in the raw rows with status `capped` and are excluded
/// from the mean.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(ScalingResult, Vec<RawRow>)> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = cfg
        .ns
        .iter()
        .flat_map(|&n| (0..cfg.seeds).map(move |i| (n, i)))
        .collect();
    let raw: Vec<RawRow> = match cfg.kind {
        ExperimentKind::Feasibility | ExperimentKind::Half | ExperimentKind::Optimum => cells
            .par_iter()
            .map(|&(n, i)| rls_cell(cfg, n, i))
            .collect::<Result<_>>()?,
        ExperimentKind::FixedArc => cells
            .par_iter()
            .map(|&(n, i)| fixed_arc_cell(cfg, n, i))
            .collect::<Result<_>>()?,
        ExperimentKind::TrialChain => cells
            .par_iter()
            .map(|&(n, i)| {
                let stream = rng::cell_stream(n, i);
                let retries = sample_retries(n, &mut rng::stream(cfg.seed, stream));
                Ok(RawRow {
                    n,
                    seed_index: i,
                    stream,
                    value: Some(retries as f64),
                    iterations: retries,
                    status: RunStatus::Ok,
                })
            })
            .collect::<Result<_>>()?,
        ExperimentKind::Resistance => cfg
            .ns
            .iter()
            .map(|&n| Ok(exact_row(n, triangle_resistance_check(n)?.max)))
            .collect::<Result<_>>()?,
        ExperimentKind::Census => cfg
            .ns
            .iter()
            .map(|&n| Ok(exact_row(n, min_dominating_size(n)? as f64)))
            .collect::<Result<_>>()?,
    };
    let rows: Vec<ScalingRow> = cfg
        .ns
        .iter()
        .map(|&n| {
            let cell: Vec<RawRow> = raw.iter().filter(|r| r.n == n).cloned().collect();
            aggregate(cfg.kind, n, &cell)
        })
        .collect();
    let slope = log_log_slope(&rows.iter().map(|r| (r.n as f64, r.mean)).collect::<Vec<_>>());
    let result = ScalingResult {
        kind: cfg.kind,
        rows,
        slope,
    };
    if let Some(path) = &cfg.raw_out {
        write_raw(&raw, path)?;
    }
    if let Some(path) = &cfg.plot_out {
        emit_plotdata(&result, path)?;
    }
    Ok((result, raw))
}

pub fn write_raw(rows: &[RawRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "seed_index", "stream", "value", "iterations", "status"])?;
    for r in rows {
        let status = match r.status {
            RunStatus::Ok => "ok",
            RunStatus::Capped => "capped",
            RunStatus::Exact => "exact",
        };
        w.write_record([
            r.n.to_string(),
            r.seed_index.to_string(),
            r.stream.to_string(),
            r.value.map(|v| v.to_string()).unwrap_or_default(),
            r.iterations.to_string(),
            status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const PLOT_HEADER: &str = "n,mean,se,bound";

/// CSV `n,mean,se,bound` followed by a `# slope,<slope>,<lo>,<hi>` row.
pub fn emit_plotdata(result: &ScalingResult, path: &Path) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::Config("nothing to plot".into()));
    }
    let mut f = std::io::BufWriter::new(File::create(path)?);
    writeln!(f, "{PLOT_HEADER}")?;
    for r in &result.rows {
        writeln!(f, "{},{},{},{}", r.n, r.mean, r.se, r.bound)?;
    }
    let fmt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    let slope = result.slope;
    writeln!(
        f,
        "# slope,{},{},{}",
        fmt(slope.map(|s| s.slope)),
        fmt(slope.and_then(|s| s.ci).map(|c| c.0)),
        fmt(slope.and_then(|s| s.ci).map(|c| c.1)),
    )?;
    f.flush()?;
    Ok(())
}

/// `(n, mean, se, bound)`.
pub type PlotRow = (usize, f64, f64, f64);

/// Rows and slope of an [`emit_plotdata`] file.
pub fn read_plotdata(path: &Path) -> Result<(Vec<PlotRow>, Option<f64>)> {
    let mut rows = Vec::new();
    let mut slope = None;
    let lines = BufReader::new(File::open(path)?).lines();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if i == 0 {
            if line != PLOT_HEADER {
                return Err(Error::Parse(format!("unexpected header {line:?}")));
            }
            continue;
        }
        if let Some(meta) = line.strip_prefix("# slope,") {
            let first = meta.split(',').next().unwrap_or("");
            slope = (!first.is_empty())
                .then(|| first.parse().map_err(|e| Error::Parse(format!("slope: {e}"))))
                .transpose()?;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)));
        if f.len() != 4 {
            return Err(Error::Parse(format!("line {}: expected 4 fields", i + 1)));
        }
        let n = f[0].parse().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
        rows.push((n, num(f[1])?, num(f[2])?, num(f[3])?));
    }
    Ok((rows, slope))
}

/// Verdicts of the redundancy criteria for one dominating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub set: VertexSet,
    pub not_minimal: bool,
    pub has_redundant_vertex: bool,
    pub dense_arc: bool,
    pub weights_redundant: Option<bool>,
    pub particles_redundant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub max_n: usize,
    pub sets_checked: u64,
    pub counterexample: Option<Counterexample>,
    /// First `n` at which the reducibility lemma failed.
    pub reducibility_failure: Option<usize>,
}

impl EquivalenceReport {
    pub fn success(&self) -> bool {
        self.counterexample.is_none() && self.reducibility_failure.is_none()
    }
}

/// All criteria for one dominating set of `C_n`.
///
/// On `C_3` a two-member set is redundant yet has no dense arc, since three
/// members are needed; the arc criterion is only compared for `n ≥ 4`.
/// Single-member sets have no gap representation.
pub fn redundancy_verdicts(g: &CycleGraph, d: &VertexSet) -> Result<Counterexample> {
    let n = g.n();
    let not_minimal = !oracle::subset_minimal(n, d.to_mask());
    let has_redundant_vertex = !g.redundant_vertices(d)?.is_empty();
    let dense_arc = if n >= 4 {
        g.find_dense_arc(d)?.is_some()
    } else {
        has_redundant_vertex
    };
    let (wr, pr) = if d.len() >= 2 {
        let w = weights_from_set(g, d)?;
        (Some(weights_redundant(&w)), Some(particles_redundant(&particles_from_weights(&w))))
    } else {
        (None, None)
    };
    Ok(Counterexample {
        n,
        set: d.clone(),
        not_minimal,
        has_redundant_vertex,
        dense_arc,
        weights_redundant: wr,
        particles_redundant: pr,
    })
}

impl Counterexample {
    pub fn agree(&self) -> bool {
        let r = self.not_minimal;
        self.has_redundant_vertex == r
            && self.dense_arc == r
            && self.weights_redundant.is_none_or(|w| w == r)
            && self.particles_redundant.is_none_or(|p| p == r)
    }
}

/// Exhaustive criterion agreement and reducibility for every `3 ≤ n ≤ max_n`.
pub fn equivalence_sweep(max_n: usize) -> Result<EquivalenceReport> {
    if max_n > oracle::DEFAULT_LIMIT {
        return Err(Error::EnumerationLimit {
            n: max_n,
            limit: oracle::DEFAULT_LIMIT,
        });
    }
    let mut report = EquivalenceReport {
        max_n,
        sets_checked: 0,
        counterexample: None,
        reducibility_failure: None,
    };
    for n in 3..=max_n {
        let g = CycleGraph::new(n)?;
        let sets = dominating_sets(n)?;
        report.sets_checked += sets.len() as u64;
        let bad = sets
            .par_iter()
            .map(|&m| redundancy_verdicts(&g, &VertexSet::from_mask(m)))
            .find_first(|v| v.as_ref().map_or(true, |v| !v.agree()));
        if let Some(v) = bad {
            report.counterexample = Some(v?);
            return Ok(report);
        }
        if report.reducibility_failure.is_none() && !oracle::verify_reducibility_lemma(n)? {
            report.reducibility_failure = Some(n);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_formulas() {
        assert!((feasibility_bound(100) - 982.4046).abs() < 1e-3);
        assert_eq!(feasibility_bound(100).to_bits(), feasibility_bound(100).to_bits());
        assert!(half_bound(100) <= half_bound_loose(100));
        let lb = level_bound(30, 12);
        let expect = 8.0 * 30.0 * 92.0 * (8.0 * 12f64.ln().powi(2) + 6.0 * (12f64.ln() + 1.0));
        assert!((lb - expect).abs() < 1e-6 * expect);
        let t = total_bound(15);
        let want = feasibility_bound(15) + half_bound(15) + level_bound(15, 6) + level_bound(15, 7);
        assert_eq!(t, want);
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::parse(
            "# scaling\nkind = half\nn = 10, 20,40\nseeds = 3\nswap = from-vertices # override\nseed=7\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, ExperimentKind::Half);
        assert_eq!(cfg.ns, vec![10, 20, 40]);
        assert_eq!((cfg.seeds, cfg.seed), (3, 7));
        assert_eq!(cfg.swap, SwapMode::FromVertices);
        assert!(ExperimentConfig::parse("n =").is_err());
        assert!(ExperimentConfig::parse("n = 20, 10").is_err());
        assert!(ExperimentConfig::parse("n = 2").is_err());
        assert!(ExperimentConfig::parse("seeds = 0").is_err());
        assert!(ExperimentConfig::parse("colour = red").is_err());
        assert!(ExperimentConfig::parse("kind").is_err());
    }

    #[test]
    fn experiments_are_reproducible() {
        let mut cfg = ExperimentConfig {
            ns: vec![20, 30],
            seeds: 6,
            seed: 4,
            ..Default::default()
        };
        let (a, raw_a) = run_experiment(&cfg).unwrap();
        let (b, raw_b) = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(raw_a, raw_b);
        assert_eq!(raw_a.len(), 12);

        cfg.cap = 1;
        let (c, raw) = run_experiment(&cfg).unwrap();
        assert!(raw.iter().any(|r| r.status == RunStatus::Capped));
        assert!(!c.all_within_bound());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        let fit = log_log_slope(&pts).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        let (lo, hi) = fit.ci.unwrap();
        assert!(lo <= 2.0 + 1e-9 && hi >= 2.0 - 1e-9);
        assert!(log_log_slope(&pts[..2]).unwrap().ci.is_none());
        assert!(log_log_slope(&pts[..1]).is_none());
    }

    #[test]
    fn fixed_arc_levels() {
        assert_eq!(fixed_arc_level(30), Some(12));
        assert_eq!(fixed_arc_level(5), None);
        assert_eq!(fixed_arc_start(30).unwrap().weights().iter().filter(|&&w| w == 2).count(), 6);
        for n in [20, 45, 60] {
            let w = fixed_arc_start(n).unwrap();
            assert_eq!(w.n(), n);
            assert!(!weights_redundant(&w));
        }
        assert!(fixed_arc_start(5).is_err());
        assert!(fixed_arc_start(7).is_err());
    }

    #[test]
    fn plotdata_round_trip() {
        let cfg = ExperimentConfig {
            ns: vec![20, 40, 80],
            seeds: 4,
            ..Default::default()
        };
        let (result, _) = run_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plot.csv");
        emit_plotdata(&result, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("n,mean,se,bound\n"));
        assert!(text.ends_with('\n'));
        let (rows, slope) = read_plotdata(&path).unwrap();
        for (got, want) in rows.iter().zip(&result.rows) {
            assert_eq!(*got, (want.n, want.mean, want.se, want.bound));
        }
        assert_eq!(slope, result.slope.map(|s| s.slope));
        assert_eq!(rows[1].3, 2.0 * 40.0 * (1.0 + 20f64.ln()));

        assert!(emit_plotdata(&result, Path::new("/nonexistent/dir/plot.csv")).is_err());
        let empty = ScalingResult { rows: vec![], ..result };
        assert!(emit_plotdata(&empty, &path).is_err());
    }

    #[test]
    fn small_sweeps() {
        let r = equivalence_sweep(10).unwrap();
        assert!(r.success(), "{r:?}");
        assert!(matches!(equivalence_sweep(30), Err(Error::EnumerationLimit { .. })));
    }
}
