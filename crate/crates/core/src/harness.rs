//! Parameter sweeps: generate paired instances along one axis, run the
//! selected solvers on each, check every plan, and aggregate embedded counts,
//! remaining resources and wall time per (point, algorithm).

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use crate::error::{Error, Result};
use crate::generator::{generate, Degree, GeneratorConfig, Span};
use crate::group::NegativeRule;
use crate::model::{validate_plan, Topology, Units};
use crate::oracle::OracleBudget;
use crate::{solve, Algorithm, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    SubstrateNodes,
    VnfCount,
    SubstrateDegree,
    VnfDegree,
}

impl Axis {
    pub fn token(self) -> &'static str {
        match self {
            Axis::SubstrateNodes => "substrate_nodes",
            Axis::VnfCount => "vnf_count",
            Axis::SubstrateDegree => "substrate_degree",
            Axis::VnfDegree => "vnf_degree",
        }
    }

    fn code(self) -> u64 {
        match self {
            Axis::SubstrateNodes => 1,
            Axis::VnfCount => 2,
            Axis::SubstrateDegree => 3,
            Axis::VnfDegree => 4,
        }
    }

    /// `base` with this axis pinned to `point`.
    pub fn apply(self, base: &GeneratorConfig, point: i64) -> GeneratorConfig {
        let mut cfg = base.clone();
        match self {
            Axis::SubstrateNodes => cfg.n_substrate = Span::fixed(point),
            Axis::VnfCount => cfg.total_vnfs = Some(point as usize),
            Axis::SubstrateDegree => cfg.substrate_degree = Degree::Fixed(point as usize),
            Axis::VnfDegree => cfg.vnf_degree = Degree::Fixed(point as usize),
        }
        cfg
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

fn default_repeats() -> usize {
    5
}

/// A sweep file. Same JSON conventions as instance files; `base` accepts the
/// partial generator-config form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: Axis,
    pub points: Vec<i64>,
    pub trials_per_point: usize,
    pub base: GeneratorConfig,
    pub algorithms: Vec<Algorithm>,
    /// Each timing is the median of this many runs.
    #[serde(default = "default_repeats")]
    pub timing_repeats: usize,
    #[serde(default)]
    pub negative_rule: NegativeRule,
    #[serde(default)]
    pub budget: OracleBudget,
}

impl SweepSpec {
    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSweep(m.to_string()));
        if self.points.is_empty() {
            return bad("no sweep points");
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return bad("points must be strictly ascending");
        }
        if self.points[0] < 0 {
            return bad("points must be non-negative");
        }
        if self.trials_per_point == 0 {
            return bad("trials_per_point must be at least 1");
        }
        if self.timing_repeats == 0 {
            return bad("timing_repeats must be at least 1");
        }
        if self.algorithms.is_empty() {
            return bad("no algorithms selected");
        }
        if self.algorithms.contains(&Algorithm::Exact) {
            let last = *self.points.last().unwrap();
            let nodes = match self.axis {
                Axis::SubstrateNodes => last,
                _ => self.base.n_substrate.hi(),
            };
            let vnfs = match (self.axis, self.base.total_vnfs) {
                (Axis::VnfCount, _) => last,
                (_, Some(t)) => t as i64,
                (_, None) => self.base.n_slices.hi() * self.base.vnfs_per_slice.hi(),
            };
            if !self.budget.admits(vnfs as usize, nodes as usize) {
                return Err(Error::InvalidSweep(format!(
                    "exact needs at most {} VNFs and {} nodes, sweep allows {vnfs} and {nodes}",
                    self.budget.max_vnfs, self.budget.max_nodes
                )));
            }
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial, derived from the base seed and the trial's coordinates.
pub fn child_seed(base: u64, axis: Axis, point: i64, trial: usize) -> u64 {
    let mut s = splitmix64(base);
    s = splitmix64(s ^ axis.code());
    s = splitmix64(s ^ point as u64);
    splitmix64(s ^ trial as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub embedded: usize,
    pub remaining_resources: Units,
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub point: i64,
    pub trial: usize,
    pub seed: u64,
    pub nodes: usize,
    pub vnfs: usize,
    pub runs: Vec<AlgorithmRun>,
}

impl TrialRecord {
    pub fn run(&self, alg: Algorithm) -> Option<&AlgorithmRun> {
        self.runs.iter().find(|r| r.algorithm == alg)
    }
}

/// One report line. Column order is the CSV header order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub axis: Axis,
    pub point: i64,
    pub algorithm: Algorithm,
    pub trials: usize,
    pub mean_embedded: f64,
    pub min_embedded: usize,
    pub max_embedded: usize,
    pub mean_remaining_resources: f64,
    pub mean_ms: f64,
}

pub const REPORT_COLUMNS: [&str; 9] = [
    "axis",
    "point",
    "algorithm",
    "trials",
    "mean_embedded",
    "min_embedded",
    "max_embedded",
    "mean_remaining_resources",
    "mean_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub point: i64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<ReportRow>,
    pub trials: Vec<TrialRecord>,
    pub skipped: Vec<SkippedPoint>,
}

impl SweepResult {
    pub fn row(&self, point: i64, alg: Algorithm) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.point == point && r.algorithm == alg)
    }

    pub fn trials_at(&self, point: i64) -> impl Iterator<Item = &TrialRecord> {
        self.trials.iter().filter(move |t| t.point == point)
    }
}

fn run_trial(spec: &SweepSpec, point: i64, trial: usize) -> Result<TrialRecord> {
    let mut cfg = spec.axis.apply(&spec.base, point);
    cfg.seed = child_seed(spec.base.seed, spec.axis, point, trial);
    let inst = generate(&cfg)?;
    let topo = Topology::new(&inst)?;
    let opts = SolveOptions {
        negative_rule: spec.negative_rule,
        budget: spec.budget,
    };

    let mut runs = Vec::with_capacity(spec.algorithms.len());
    for &alg in &spec.algorithms {
        let mut times = Vec::with_capacity(spec.timing_repeats);
        let mut first = None;
        for _ in 0..spec.timing_repeats {
            let start = Instant::now();
            let sol = solve(alg, &topo, &opts)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            first.get_or_insert(sol);
        }
        let sol = first.expect("at least one repeat");

        let report = validate_plan(&inst.substrate, &inst.slices, &sol.plan);
        if !report.is_ok() {
            return Err(Error::InfeasiblePlan(report));
        }
        let remaining = sol.residual.total_node_residual();
        let hosted: Units = sol
            .plan
            .iter()
            .map(|(v, _)| inst.slices.demand_of(v).unwrap_or(0))
            .sum();
        if remaining != inst.substrate.total_capacity() - hosted {
            return Err(Error::Inconsistent(format!(
                "{alg} residual {remaining} disagrees with capacity minus hosted demand"
            )));
        }
        runs.push(AlgorithmRun {
            algorithm: alg,
            embedded: sol.embedded(),
            remaining_resources: remaining,
            ms: median(&mut times),
        });
    }
    Ok(TrialRecord {
        point,
        trial,
        seed: cfg.seed,
        nodes: topo.node_count(),
        vnfs: topo.vnf_count(),
        runs,
    })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut result = SweepResult::default();
    for &point in &spec.points {
        if let Err(e) = spec.axis.apply(&spec.base, point).validate() {
            result.skipped.push(SkippedPoint {
                point,
                reason: e.to_string(),
            });
            continue;
        }
        let trials: Result<Vec<TrialRecord>> = (0..spec.trials_per_point)
            .into_par_iter()
            .map(|t| run_trial(spec, point, t))
            .collect();
        match trials {
            Ok(trials) => {
                for &alg in &spec.algorithms {
                    result.rows.push(aggregate(spec.axis, point, alg, &trials));
                }
                result.trials.extend(trials);
            }
            Err(Error::InfeasibleConfig(reason)) => {
                result.skipped.push(SkippedPoint { point, reason })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(result)
}

/// [`run_sweep`] on a dedicated pool of `threads` workers.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: usize) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSweep(e.to_string()))?;
    pool.install(|| run_sweep(spec))
}

fn aggregate(axis: Axis, point: i64, alg: Algorithm, trials: &[TrialRecord]) -> ReportRow {
    let runs: Vec<&AlgorithmRun> = trials.iter().filter_map(|t| t.run(alg)).collect();
    let n = runs.len() as f64;
    ReportRow {
        axis,
        point,
        algorithm: alg,
        trials: runs.len(),
        mean_embedded: runs.iter().map(|r| r.embedded as f64).sum::<f64>() / n,
        min_embedded: runs.iter().map(|r| r.embedded).min().unwrap_or(0),
        max_embedded: runs.iter().map(|r| r.embedded).max().unwrap_or(0),
        mean_remaining_resources: runs
            .iter()
            .map(|r| r.remaining_resources as f64)
            .sum::<f64>()
            / n,
        mean_ms: runs.iter().map(|r| r.ms).sum::<f64>() / n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidSweep(format!("unknown report format `{s}`"))),
        }
    }
}

/// CSV carries one row per (point, algorithm) under [`REPORT_COLUMNS`]; JSON
/// carries the whole [`SweepResult`] including per-trial records.
pub fn emit_report(result: &SweepResult, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(result)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(REPORT_COLUMNS)?;
            for r in &result.rows {
                w.write_record([
                    r.axis.token().to_string(),
                    r.point.to_string(),
                    r.algorithm.token().to_string(),
                    r.trials.to_string(),
                    r.mean_embedded.to_string(),
                    r.min_embedded.to_string(),
                    r.max_embedded.to_string(),
                    r.mean_remaining_resources.to_string(),
                    format!("{:.4}", r.mean_ms),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

pub fn median(xs: &mut [f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Paired comparison of `a` against `b` over the given trials:
/// `(a wins, a loses, ties)` on embedded count.
pub fn paired_outcomes<'r>(
    trials: impl IntoIterator<Item = &'r TrialRecord>,
    a: Algorithm,
    b: Algorithm,
) -> (u64, u64, u64) {
    let (mut wins, mut losses, mut ties) = (0, 0, 0);
    for t in trials {
        let (Some(x), Some(y)) = (t.run(a), t.run(b)) else {
            continue;
        };
        match x.embedded.cmp(&y.embedded) {
            std::cmp::Ordering::Greater => wins += 1,
            std::cmp::Ordering::Less => losses += 1,
            std::cmp::Ordering::Equal => ties += 1,
        }
    }
    (wins, losses, ties)
}

/// One-sided sign test: probability of at least `wins` successes out of
/// `wins + losses` fair coin flips. Ties are dropped beforehand.
pub fn sign_test_p(wins: u64, losses: u64) -> f64 {
    let n = wins + losses;
    if n == 0 || wins == 0 {
        return 1.0;
    }
    let dist = Binomial::new(0.5, n).expect("valid binomial");
    dist.sf(wins - 1)
}
