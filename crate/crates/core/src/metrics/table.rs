use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::MetricsRecord;
use crate::error::{Error, Result};
use crate::metering::Technique;

#[derive(Debug, Clone, PartialEq)]
pub struct TableCell {
    pub tier_bps: u64,
    pub technique: Technique,
    pub avg_throughput_mbps: f64,
    pub avg_loss_pct: f64,
    pub avg_sessions: f64,
    pub runs: usize,
}

/// Seed-averaged results, tiers ascending and techniques in [`Technique::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkTable {
    tiers: Vec<u64>,
    cells: Vec<TableCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Throughput,
    Loss,
    Sessions,
}

impl Factor {
    pub fn of(self, cell: &TableCell) -> f64 {
        match self {
            Factor::Throughput => cell.avg_throughput_mbps,
            Factor::Loss => cell.avg_loss_pct,
            Factor::Sessions => cell.avg_sessions,
        }
    }

    pub fn of_record(self, r: &MetricsRecord) -> f64 {
        match self {
            Factor::Throughput => r.throughput_mbps,
            Factor::Loss => r.drop_rate_pct,
            Factor::Sessions => r.admitted_sessions as f64,
        }
    }

    fn heading(self) -> &'static str {
        match self {
            Factor::Throughput => "AVERAGE THROUGHPUT",
            Factor::Loss => "AVERAGE PACKET LOSS RATE",
            Factor::Sessions => "AVERAGE ADMITTED SESSIONS",
        }
    }
}

impl BenchmarkTable {
    /// Builds a table from explicit `(throughput, loss, sessions)` triples,
    /// one row per technique in [`Technique::ALL`] order for each tier.
    pub fn from_values(tiers: &[u64], rows: &[[(f64, f64, f64); 5]]) -> Result<Self> {
        if tiers.len() != rows.len() || tiers.is_empty() {
            return Err(Error::IncompleteMatrix("one row block per tier is required".into()));
        }
        let mut order: Vec<usize> = (0..tiers.len()).collect();
        order.sort_by_key(|&i| tiers[i]);
        let mut cells = Vec::new();
        for &i in &order {
            for (t, &(thr, loss, sess)) in Technique::ALL.iter().zip(rows[i].iter()) {
                cells.push(TableCell {
                    tier_bps: tiers[i],
                    technique: *t,
                    avg_throughput_mbps: thr,
                    avg_loss_pct: loss,
                    avg_sessions: sess,
                    runs: 1,
                });
            }
        }
        Ok(BenchmarkTable {
            tiers: order.iter().map(|&i| tiers[i]).collect(),
            cells,
        })
    }

    pub fn tiers(&self) -> &[u64] {
        &self.tiers
    }

    pub fn cells(&self) -> &[TableCell] {
        &self.cells
    }

    pub fn cell(&self, tier_bps: u64, technique: Technique) -> Option<&TableCell> {
        self.cells
            .iter()
            .find(|c| c.tier_bps == tier_bps && c.technique == technique)
    }

    pub fn tier_cells(&self, tier_bps: u64) -> impl Iterator<Item = &TableCell> {
        self.cells.iter().filter(move |c| c.tier_bps == tier_bps)
    }

    /// Table-2 layout: one block per factor, one column pair per tier.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{:<28}", "FACTORS");
        for t in &self.tiers {
            let _ = write!(out, "{:<22}", format!("{} Mbps", fmt_mbps(*t)));
        }
        out.push('\n');
        for factor in [Factor::Throughput, Factor::Loss, Factor::Sessions] {
            let _ = write!(out, "{:<28}", factor.heading());
            for _ in &self.tiers {
                let _ = write!(out, "{:<12}{:<10}", "TECHNIQUE", "AVG");
            }
            out.push('\n');
            for tech in Technique::ALL {
                let _ = write!(out, "{:<28}", "");
                for &tier in &self.tiers {
                    let v = self.cell(tier, tech).map(|c| factor.of(c)).unwrap_or(f64::NAN);
                    let shown = match factor {
                        Factor::Throughput => format!("{v:.2}"),
                        Factor::Loss => format!("{v:.3}"),
                        Factor::Sessions => format!("{v:.1}"),
                    };
                    let _ = write!(out, "{:<12}{:<10}", tech.label(), shown);
                }
                out.push('\n');
            }
        }
        out
    }
}

pub(crate) fn fmt_mbps(bps: u64) -> String {
    format!("{}", bps as f64 / 1e6)
}

/// Means over seeds per (tier, technique).
///
/// Every tier needs all five techniques, each run over the same seed set.
pub fn aggregate(records: &[MetricsRecord]) -> Result<BenchmarkTable> {
    if records.is_empty() {
        return Err(Error::IncompleteMatrix("no records".into()));
    }
    let mut groups: BTreeMap<(u64, Technique), BTreeMap<u64, &MetricsRecord>> = BTreeMap::new();
    for r in records {
        let seeds = groups.entry((r.bandwidth_bps, r.technique)).or_default();
        if seeds.insert(r.seed, r).is_some() {
            return Err(Error::IncompleteMatrix(format!(
                "duplicate run for {} at {} Mbps seed {}",
                r.technique.label(),
                fmt_mbps(r.bandwidth_bps),
                r.seed
            )));
        }
    }
    let tiers: Vec<u64> = groups
        .keys()
        .map(|(t, _)| *t)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let seed_set: BTreeSet<u64> = groups.values().next().expect("non-empty").keys().copied().collect();
    let mut cells = Vec::new();
    for &tier in &tiers {
        for tech in Technique::ALL {
            let runs = groups.get(&(tier, tech)).ok_or_else(|| {
                Error::IncompleteMatrix(format!("{} missing at {} Mbps", tech.label(), fmt_mbps(tier)))
            })?;
            if runs.keys().copied().collect::<BTreeSet<_>>() != seed_set {
                return Err(Error::IncompleteMatrix(format!(
                    "{} at {} Mbps has a different seed set",
                    tech.label(),
                    fmt_mbps(tier)
                )));
            }
            let n = runs.len() as f64;
            let mean = |f: Factor| runs.values().map(|r| f.of_record(r)).sum::<f64>() / n;
            cells.push(TableCell {
                tier_bps: tier,
                technique: tech,
                avg_throughput_mbps: mean(Factor::Throughput),
                avg_loss_pct: mean(Factor::Loss),
                avg_sessions: mean(Factor::Sessions),
                runs: runs.len(),
            });
        }
    }
    Ok(BenchmarkTable { tiers, cells })
}
