//! The technique × tier × seed benchmark matrix.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metering::Technique;
use crate::metrics::{aggregate, seed_wins, trend_check, BenchmarkTable, ClaimResult, Factor, MetricsRecord};
use crate::sim::{run, RunOutput, ScenarioConfig};

pub const DEFAULT_TIERS_BPS: [u64; 3] = [30_000_000, 40_000_000, 50_000_000];
pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "PCN_BENCH_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub base: ScenarioConfig,
    pub techniques: Vec<Technique>,
    pub tiers_bps: Vec<u64>,
    pub seeds: Vec<u64>,
}

impl BenchPlan {
    pub fn new(base: ScenarioConfig) -> Self {
        BenchPlan {
            base,
            techniques: Technique::ALL.to_vec(),
            tiers_bps: DEFAULT_TIERS_BPS.to_vec(),
            seeds: DEFAULT_SEEDS.to_vec(),
        }
    }

    /// Scenarios in (technique, tier, seed) order.
    pub fn scenarios(&self) -> Vec<ScenarioConfig> {
        let mut out = Vec::with_capacity(self.techniques.len() * self.tiers_bps.len() * self.seeds.len());
        for &technique in &self.techniques {
            for &bandwidth_bps in &self.tiers_bps {
                for &seed in &self.seeds {
                    out.push(ScenarioConfig {
                        technique,
                        bandwidth_bps,
                        seed,
                        ..self.base.clone()
                    });
                }
            }
        }
        out
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n: &usize| n > 0)
}

/// Runs every scenario of the plan, in parallel, returning outputs in plan order.
pub fn run_matrix(plan: &BenchPlan) -> Result<Vec<RunOutput>> {
    let scenarios = plan.scenarios();
    if scenarios.is_empty() {
        return Err(Error::IncompleteMatrix("the plan has no scenarios".into()));
    }
    let work = || -> Result<Vec<RunOutput>> {
        scenarios
            .par_iter()
            .map(|cfg| {
                run(cfg).map_err(|e| {
                    Error::InvalidScenario(format!(
                        "{} at {} bps seed {}: {e}",
                        cfg.technique.label(),
                        cfg.bandwidth_bps,
                        cfg.seed
                    ))
                })
            })
            .collect()
    };
    match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Per-seed readings of the two throughput-leadership claims. Each needs
/// the leader in at least four of five seeds (the same share for other
/// seed counts) at every tier it covers.
pub fn seed_claims(records: &[MetricsRecord]) -> Vec<ClaimResult> {
    let mut tiers: Vec<u64> = records.iter().map(|r| r.bandwidth_bps).collect();
    tiers.sort_unstable();
    tiers.dedup();
    let Some(&low) = tiers.first() else {
        return Vec::new();
    };
    let top_two: Vec<u64> = tiers.iter().rev().take(2).copied().collect();
    let enough = |(wins, n): (usize, usize)| n > 0 && wins * 5 >= n * 4;
    let describe = |tech: Technique, t: u64| {
        let (w, n) = seed_wins(records, t, tech, Factor::Throughput, true);
        format!("{} Mbps: {w}/{n}", t as f64 / 1e6)
    };
    vec![
        ClaimResult {
            id: "T1-seeds",
            claim: "RED leads throughput at the top two tiers in at least 4/5 seeds",
            pass: top_two
                .iter()
                .all(|&t| enough(seed_wins(records, t, Technique::Red, Factor::Throughput, true))),
            detail: top_two
                .iter()
                .map(|&t| describe(Technique::Red, t))
                .collect::<Vec<_>>()
                .join("; "),
        },
        ClaimResult {
            id: "T2-seeds",
            claim: "ECN leads throughput at the lowest tier in at least 4/5 seeds",
            pass: enough(seed_wins(records, low, Technique::Ecn, Factor::Throughput, true)),
            detail: describe(Technique::Ecn, low),
        },
    ]
}

/// Aggregated results of a benchmark run.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<MetricsRecord>,
    pub table: BenchmarkTable,
    pub claims: Vec<ClaimResult>,
    pub adjustments: Vec<(String, String, String)>,
}

impl BenchReport {
    pub fn build(plan: &BenchPlan, outputs: &[RunOutput]) -> Result<Self> {
        let records: Vec<MetricsRecord> = outputs.iter().map(|o| o.record.clone()).collect();
        let table = aggregate(&records)?;
        let mut claims = trend_check(&table);
        claims.extend(seed_claims(&records));
        Ok(BenchReport {
            records,
            table,
            claims,
            adjustments: plan.base.ledger_adjustments(),
        })
    }

    /// True when every ranking claim T1 to T5 holds. The two top-tier loss
    /// readings contradict each other and are informational only.
    pub fn ranking_claims_pass(&self) -> bool {
        self.claims.iter().filter(|c| !c.id.starts_with('L')).all(|c| c.pass)
    }

    pub fn render_claims(&self) -> String {
        let mut out = String::from("Ranking claims\n");
        for c in &self.claims {
            out.push_str(&format!("  {c}\n"));
        }
        out.push_str("Parameters changed from the baseline ledger\n");
        if self.adjustments.is_empty() {
            out.push_str("  none\n");
        }
        for (k, base, now) in &self.adjustments {
            out.push_str(&format!("  {k}: {base} -> {now}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimTime;

    #[test]
    fn plan_order_and_size() {
        let plan = BenchPlan::new(ScenarioConfig::default());
        let s = plan.scenarios();
        assert_eq!(s.len(), 75);
        assert_eq!(
            (s[0].technique, s[0].bandwidth_bps, s[0].seed),
            (Technique::AdditionalBuffer, 30_000_000, 1)
        );
        assert_eq!((s[1].technique, s[1].seed), (Technique::AdditionalBuffer, 2));
        assert_eq!(
            (s[74].technique, s[74].bandwidth_bps, s[74].seed),
            (Technique::Red, 50_000_000, 5)
        );
    }

    #[test]
    fn matrix_preserves_plan_order() {
        let base = ScenarioConfig {
            duration: SimTime::from_secs(2),
            ..Default::default()
        };
        let plan = BenchPlan {
            seeds: vec![3, 1],
            tiers_bps: vec![10_000_000],
            ..BenchPlan::new(base)
        };
        let out = run_matrix(&plan).unwrap();
        let keys: Vec<_> = out.iter().map(|o| (o.record.technique, o.record.seed)).collect();
        let want: Vec<_> = Technique::ALL.iter().flat_map(|&t| [(t, 3), (t, 1)]).collect();
        assert_eq!(keys, want);
        let report = BenchReport::build(&plan, &out).unwrap();
        assert!(report.render_claims().contains("none"));
    }
}
