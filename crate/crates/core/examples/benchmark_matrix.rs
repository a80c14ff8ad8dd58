//! Runs the technique × tier × seed matrix and prints the table, the ranking
//! claims and the CSV rows.
//!
//! Usage: `cargo run --release --example benchmark_matrix -- [duration_s] [seeds]`

use pcn_sim::bench::{run_matrix, BenchPlan, BenchReport};
use pcn_sim::metrics::records_to_csv;
use pcn_sim::sim::ScenarioConfig;

fn main() -> pcn_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut base = ScenarioConfig::default();
    base.set("duration_s", &args.next().unwrap_or_else(|| "20".into()))?;
    let seeds: Vec<u64> = match args.next() {
        Some(s) => s.split(',').map(|x| x.trim().parse().expect("seed list")).collect(),
        None => vec![1, 2, 3],
    };

    let plan = BenchPlan {
        seeds,
        ..BenchPlan::new(base)
    };
    let started = std::time::Instant::now();
    let outputs = run_matrix(&plan)?;
    let report = BenchReport::build(&plan, &outputs)?;
    println!("{} runs in {:.1?}\n", outputs.len(), started.elapsed());
    println!("{}", report.table.render_text());
    println!("{}", report.render_claims());
    print!("{}", records_to_csv(&report.records)?);
    Ok(())
}
