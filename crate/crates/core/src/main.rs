use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use slice_embed::generator::{generate, Degree, GeneratorConfig, Regime, Span};
use slice_embed::group::NegativeRule;
use slice_embed::harness::{
    emit_report, run_sweep, run_sweep_with_threads, ReportFormat, SweepSpec,
};
use slice_embed::model::validate_plan;
use slice_embed::oracle::OracleBudget;
use slice_embed::{solve, Algorithm, Instance, MappingPlan, SolveOptions, Topology};

#[derive(Parser)]
#[command(
    name = "slice-embed",
    version,
    about = "Embed RAN-slice VNF graphs onto a substrate network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_parser = parse_regime, default_value = "normal")]
        regime: Regime,
        /// Generator config file; command-line flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Substrate node degree.
        #[arg(long)]
        k: Option<usize>,
        /// VNF degree within each slice.
        #[arg(long)]
        k_prime: Option<usize>,
        /// Number of substrate nodes.
        #[arg(long)]
        nodes: Option<usize>,
        /// Total number of VNFs across all slices.
        #[arg(long)]
        vnfs: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Solve an instance and print the embedded count.
    Solve {
        #[arg(long)]
        alg: Algorithm,
        #[arg(short, long)]
        input: PathBuf,
        /// Where to write the mapping plan.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_parser = parse_rule, default_value = "closest-to-zero")]
        negative_rule: NegativeRule,
    },
    /// Check a plan against an instance.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        plan: PathBuf,
    },
    /// Run a parameter sweep and write a report.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_parser = parse_format, default_value = "csv")]
        format: ReportFormat,
        /// Overrides the spec's base seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run every algorithm on one instance.
    Compare {
        #[arg(short, long)]
        input: PathBuf,
    },
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("unknown regime `{s}` (expected normal, shortage or custom)"))
}

fn parse_rule(s: &str) -> Result<NegativeRule, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| format!("unknown rule `{s}` (expected closest-to-zero or most-negative)"))
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: slice_embed::Error| e.to_string())
}

fn read_instance(path: &PathBuf) -> anyhow::Result<Instance> {
    Instance::read(path).with_context(|| format!("reading instance {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate {
            seed,
            regime,
            config,
            k,
            k_prime,
            nodes,
            vnfs,
            output,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading config {}", path.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing config {}", path.display()))?
                }
                None => GeneratorConfig::preset(regime, seed),
            };
            cfg.seed = seed;
            if let Some(k) = k {
                cfg.substrate_degree = Degree::Fixed(k);
            }
            if let Some(k) = k_prime {
                cfg.vnf_degree = Degree::Fixed(k);
            }
            if let Some(n) = nodes {
                cfg.n_substrate = Span::fixed(n as i64);
            }
            if vnfs.is_some() {
                cfg.total_vnfs = vnfs;
            }
            generate(&cfg)?.write(&output)?;
        }
        Command::Solve {
            alg,
            input,
            output,
            negative_rule,
        } => {
            let inst = read_instance(&input)?;
            let topo = Topology::new(&inst)?;
            let opts = SolveOptions {
                negative_rule,
                budget: OracleBudget::default(),
            };
            let sol = solve(alg, &topo, &opts)?;
            if let Some(path) = output {
                sol.plan.write(&path)?;
            }
            println!("{}", sol.embedded());
        }
        Command::Validate { input, plan } => {
            let inst = read_instance(&input)?;
            let plan = MappingPlan::read(&plan)
                .with_context(|| format!("reading plan {}", plan.display()))?;
            let report = validate_plan(&inst.substrate, &inst.slices, &plan);
            if !report.is_ok() {
                eprintln!("{report}");
                return Ok(ExitCode::FAILURE);
            }
            println!("ok: {} VNFs embedded", plan.len());
        }
        Command::Sweep {
            spec,
            output,
            format,
            seed,
            threads,
        } => {
            let mut spec = SweepSpec::read(&spec)
                .with_context(|| format!("reading sweep spec {}", spec.display()))?;
            if let Some(seed) = seed {
                spec.base.seed = seed;
            }
            let result = match threads {
                Some(0) => bail!("--threads must be at least 1"),
                Some(n) => run_sweep_with_threads(&spec, n)?,
                None => run_sweep(&spec)?,
            };
            for s in &result.skipped {
                eprintln!("skipped point {}: {}", s.point, s.reason);
            }
            std::fs::write(&output, emit_report(&result, format)?)?;
        }
        Command::Compare { input } => {
            let inst = read_instance(&input)?;
            let topo = Topology::new(&inst)?;
            let opts = SolveOptions::default();
            let mut parts = Vec::new();
            for alg in Algorithm::HEURISTICS {
                parts.push(format!("{alg}={}", solve(alg, &topo, &opts)?.embedded()));
            }
            if opts.budget.admits(topo.vnf_count(), topo.node_count()) {
                parts.push(format!(
                    "exact={}",
                    solve(Algorithm::Exact, &topo, &opts)?.embedded()
                ));
            }
            println!("{}", parts.join(" "));
            if !opts.budget.admits(topo.vnf_count(), topo.node_count()) {
                eprintln!(
                    "exact skipped: {} VNFs and {} nodes exceed the oracle budget ({} VNFs, {} nodes)",
                    topo.vnf_count(),
                    topo.node_count(),
                    opts.budget.max_vnfs,
                    opts.budget.max_nodes
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
