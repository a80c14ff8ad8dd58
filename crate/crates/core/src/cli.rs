//! Command-line front end: `run`, `bench` and `validate`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_matrix, BenchPlan, BenchReport, DEFAULT_SEEDS, DEFAULT_TIERS_BPS};
use crate::error::{Error, Result};
use crate::metering::Technique;
use crate::metrics::{describe_record, records_to_csv};
use crate::sim::{parse_bandwidth, run, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "pcn-sim", version, about = "Pre-congestion notification domain simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one scenario and print its metrics.
    Run(RunArgs),
    /// Run the technique x bandwidth x seed matrix.
    Bench(BenchArgs),
    /// Resolve the configuration and print it without simulating.
    Validate(ScenarioArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Table,
    Both,
}

fn parse_technique(s: &str) -> std::result::Result<Technique, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bw(s: &str) -> std::result::Result<u64, String> {
    parse_bandwidth(s).map_err(|e| e.to_string())
}

fn parse_config_path(s: &str) -> std::result::Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("config file `{s}` does not exist"))
    }
}

fn parse_override(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let mut probe = ScenarioConfig::default();
    probe.set(k, v).map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioArgs {
    /// Flat key=value scenario file.
    #[arg(long, value_parser = parse_config_path)]
    pub config: Option<PathBuf>,
    /// red, ecn, tb, bm or ab.
    #[arg(long, value_parser = parse_technique)]
    pub technique: Option<Technique>,
    /// Bandwidth such as 50mbps.
    #[arg(long, value_parser = parse_bw)]
    pub bandwidth: Option<u64>,
    /// Simulated seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Any config key, applied last. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE", value_parser = parse_override)]
    pub overrides: Vec<(String, String)>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value = "table")]
    pub output: OutputFormat,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_config_path)]
    pub config: Option<PathBuf>,
    /// Techniques to compare (default: all five).
    #[arg(long, value_delimiter = ',', value_parser = parse_technique)]
    pub technique: Vec<Technique>,
    /// Bandwidth tiers (default: 30mbps,40mbps,50mbps).
    #[arg(long, value_delimiter = ',', value_parser = parse_bw)]
    pub bandwidth: Vec<u64>,
    #[arg(long)]
    pub duration: Option<f64>,
    /// Seeds (default: 1,2,3,4,5).
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long = "override", value_name = "KEY=VALUE", value_parser = parse_override)]
    pub overrides: Vec<(String, String)>,
    #[arg(long, value_enum, default_value = "both")]
    pub output: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit non-zero when a ranking claim fails.
    #[arg(long)]
    pub strict: bool,
}

fn set_duration(cfg: &mut ScenarioConfig, secs: f64) -> Result<()> {
    cfg.set("duration_s", &secs.to_string())
}

fn load_base(config: &Option<PathBuf>) -> Result<ScenarioConfig> {
    match config {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig::default()),
    }
}

/// Defaults, then the config file, then explicit flags, then overrides.
pub fn resolve(args: &ScenarioArgs) -> Result<ScenarioConfig> {
    let mut cfg = load_base(&args.config)?;
    if let Some(t) = args.technique {
        cfg.technique = t;
    }
    if let Some(bw) = args.bandwidth {
        cfg.bandwidth_bps = bw;
    }
    if let Some(d) = args.duration {
        set_duration(&mut cfg, d)?;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    for (k, v) in &args.overrides {
        cfg.set(k, v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn bench_plan(args: &BenchArgs) -> Result<BenchPlan> {
    let mut base = load_base(&args.config)?;
    if let Some(d) = args.duration {
        set_duration(&mut base, d)?;
    }
    for (k, v) in &args.overrides {
        base.set(k, v)?;
    }
    base.validate()?;
    let pick = |given: &Vec<u64>, default: &[u64]| {
        if given.is_empty() {
            default.to_vec()
        } else {
            given.clone()
        }
    };
    Ok(BenchPlan {
        techniques: if args.technique.is_empty() {
            Technique::ALL.to_vec()
        } else {
            args.technique.clone()
        },
        tiers_bps: pick(&args.bandwidth, &DEFAULT_TIERS_BPS),
        seeds: pick(&args.seeds, &DEFAULT_SEEDS),
        base,
    })
}

fn emit_csv(csv: &str, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, csv).map_err(|e| Error::Io(format!("cannot write {}: {e}", p.display()))),
        None => Ok(stdout.write_all(csv.as_bytes())?),
    }
}

/// Executes a parsed command, writing results to `stdout`. Returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Validate(args) => {
            let cfg = resolve(args)?;
            stdout.write_all(cfg.render().as_bytes())?;
            Ok(0)
        }
        Command::Run(args) => {
            let cfg = resolve(&args.scenario)?;
            let out = run(&cfg)?;
            if args.output != OutputFormat::Csv {
                stdout.write_all(describe_record(&out.record).as_bytes())?;
            }
            if args.output != OutputFormat::Table {
                emit_csv(&records_to_csv(std::slice::from_ref(&out.record))?, &args.out, stdout)?;
            }
            Ok(0)
        }
        Command::Bench(args) => {
            let plan = bench_plan(args)?;
            let outputs = run_matrix(&plan)?;
            let report = BenchReport::build(&plan, &outputs)?;
            if args.output != OutputFormat::Csv {
                stdout.write_all(report.table.render_text().as_bytes())?;
                stdout.write_all(b"\n")?;
                stdout.write_all(report.render_claims().as_bytes())?;
            }
            if args.output != OutputFormat::Table {
                emit_csv(&records_to_csv(&report.records)?, &args.out, stdout)?;
            }
            Ok(if args.strict && !report.ranking_claims_pass() {
                1
            } else {
                0
            })
        }
    }
}
