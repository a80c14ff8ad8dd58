//! Ordinal claims about the technique ranking, checked on a benchmark table.

use std::fmt;

use super::table::{fmt_mbps, BenchmarkTable, Factor};
use super::MetricsRecord;
use crate::metering::Technique;

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimResult {
    pub id: &'static str,
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for ClaimResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{:<12} {verdict}  {} ({})", self.id, self.claim, self.detail)
    }
}

/// Whether `tech` is strictly best at `tier`, highest or lowest as asked.
fn strictly_best(table: &BenchmarkTable, tier: u64, tech: Technique, factor: Factor, highest: bool) -> bool {
    let Some(own) = table.cell(tier, tech).map(|c| factor.of(c)) else {
        return false;
    };
    table.tier_cells(tier).filter(|c| c.technique != tech).all(|c| {
        if highest {
            own > factor.of(c)
        } else {
            own < factor.of(c)
        }
    })
}

/// Techniques strictly ahead of `tech` on `factor`.
fn rank(table: &BenchmarkTable, tier: u64, tech: Technique, factor: Factor) -> usize {
    let own = table.cell(tier, tech).map(|c| factor.of(c)).unwrap_or(f64::NAN);
    table
        .tier_cells(tier)
        .filter(|c| c.technique != tech && factor.of(c) > own)
        .count()
}

fn leader(table: &BenchmarkTable, tier: u64, factor: Factor, highest: bool) -> String {
    let mut cells: Vec<_> = table.tier_cells(tier).collect();
    cells.sort_by(|a, b| factor.of(a).total_cmp(&factor.of(b)));
    if highest {
        cells.reverse();
    }
    let mut out = String::new();
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            let tied = factor.of(cells[i - 1]) == factor.of(c);
            out.push_str(match (tied, highest) {
                (true, _) => " = ",
                (false, true) => " > ",
                (false, false) => " < ",
            });
        }
        out.push_str(&format!("{} {:.3}", c.technique.label(), factor.of(c)));
    }
    out
}

/// Evaluates the ranking claims on seed means. Comparisons are strict, so ties fail.
pub fn trend_check(table: &BenchmarkTable) -> Vec<ClaimResult> {
    let tiers = table.tiers();
    let (Some(&low), Some(&high)) = (tiers.first(), tiers.last()) else {
        return Vec::new();
    };
    let top_two: Vec<u64> = tiers.iter().rev().take(2).copied().collect();
    let at = |t: u64| format!("{} Mbps", fmt_mbps(t));
    let mut out = Vec::new();

    out.push(ClaimResult {
        id: "T1",
        claim: "RED has the highest throughput at the top two tiers",
        pass: top_two
            .iter()
            .all(|&t| strictly_best(table, t, Technique::Red, Factor::Throughput, true)),
        detail: top_two
            .iter()
            .map(|&t| format!("{}: {}", at(t), leader(table, t, Factor::Throughput, true)))
            .collect::<Vec<_>>()
            .join("; "),
    });
    out.push(ClaimResult {
        id: "T2",
        claim: "ECN has the highest throughput at the lowest tier",
        pass: strictly_best(table, low, Technique::Ecn, Factor::Throughput, true),
        detail: format!("{}: {}", at(low), leader(table, low, Factor::Throughput, true)),
    });
    out.push(ClaimResult {
        id: "T3",
        claim: "TB is in the bottom two for throughput at every tier",
        pass: tiers
            .iter()
            .all(|&t| rank(table, t, Technique::TokenBucket, Factor::Throughput) >= 3),
        detail: tiers
            .iter()
            .map(|&t| {
                format!(
                    "{}: TB rank {}/5",
                    at(t),
                    1 + rank(table, t, Technique::TokenBucket, Factor::Throughput)
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
    });
    let ab_most = strictly_best(table, high, Technique::AdditionalBuffer, Factor::Sessions, true);
    let tb_fewest = tiers
        .iter()
        .all(|&t| strictly_best(table, t, Technique::TokenBucket, Factor::Sessions, false));
    out.push(ClaimResult {
        id: "T4",
        claim: "AB admits the most sessions at the top tier and TB the fewest at every tier",
        pass: ab_most && tb_fewest,
        detail: format!(
            "AB most at {}: {ab_most}; TB fewest everywhere: {tb_fewest}; {}",
            at(high),
            tiers
                .iter()
                .map(|&t| format!("{}: {}", at(t), leader(table, t, Factor::Sessions, true)))
                .collect::<Vec<_>>()
                .join("; ")
        ),
    });
    out.push(ClaimResult {
        id: "T5",
        claim: "RED has the lowest loss at the lowest tier",
        pass: strictly_best(table, low, Technique::Red, Factor::Loss, false),
        detail: format!("{}: {}", at(low), leader(table, low, Factor::Loss, false)),
    });
    out.push(ClaimResult {
        id: "L-top-TB",
        claim: "TB has the lowest loss at the top tier",
        pass: strictly_best(table, high, Technique::TokenBucket, Factor::Loss, false),
        detail: format!("{}: {}", at(high), leader(table, high, Factor::Loss, false)),
    });
    out.push(ClaimResult {
        id: "L-top-AB",
        claim: "AB has the lowest loss at the top tier",
        pass: strictly_best(table, high, Technique::AdditionalBuffer, Factor::Loss, false),
        detail: format!("{}: {}", at(high), leader(table, high, Factor::Loss, false)),
    });
    out
}

/// Seeds in which `tech` strictly leads the other techniques at `tier`,
/// and the number of seeds compared.
pub fn seed_wins(
    records: &[MetricsRecord],
    tier: u64,
    tech: Technique,
    factor: Factor,
    highest: bool,
) -> (usize, usize) {
    let mut seeds: Vec<u64> = records
        .iter()
        .filter(|r| r.bandwidth_bps == tier)
        .map(|r| r.seed)
        .collect();
    seeds.sort_unstable();
    seeds.dedup();
    let wins = seeds
        .iter()
        .filter(|&&s| {
            let runs: Vec<_> = records
                .iter()
                .filter(|r| r.bandwidth_bps == tier && r.seed == s)
                .collect();
            let Some(own) = runs.iter().find(|r| r.technique == tech).map(|r| factor.of_record(r)) else {
                return false;
            };
            runs.iter().filter(|r| r.technique != tech).all(|r| {
                if highest {
                    own > factor.of_record(r)
                } else {
                    own < factor.of_record(r)
                }
            })
        })
        .count();
    (wins, seeds.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference benchmark, rows in AB, ECN, TB, BM, RED order.
    pub(crate) fn reference() -> BenchmarkTable {
        BenchmarkTable::from_values(
            &[300_000_000, 400_000_000, 500_000_000],
            &[
                [
                    (29.0, 3.38, 55.0),
                    (34.0, 3.0, 56.0),
                    (30.25, 3.1, 53.0),
                    (31.0, 2.95, 58.0),
                    (33.0, 2.75, 58.0),
                ],
                [
                    (31.75, 2.4, 63.0),
                    (33.75, 2.35, 62.0),
                    (31.25, 2.38, 55.0),
                    (35.25, 2.38, 63.0),
                    (39.5, 2.48, 62.0),
                ],
                [
                    (33.5, 1.85, 71.0),
                    (34.5, 2.18, 66.0),
                    (31.25, 2.38, 64.0),
                    (35.5, 2.3, 65.0),
                    (38.75, 2.23, 65.0),
                ],
            ],
        )
        .unwrap()
    }

    fn by_id<'a>(claims: &'a [ClaimResult], id: &str) -> &'a ClaimResult {
        claims.iter().find(|c| c.id == id).unwrap()
    }

    #[test]
    fn reference_table_passes_ranking_claims() {
        let claims = trend_check(&reference());
        for id in ["T1", "T2", "T3", "T4", "T5"] {
            assert!(by_id(&claims, id).pass, "{}", by_id(&claims, id));
        }
        assert!(!by_id(&claims, "L-top-TB").pass);
        assert!(by_id(&claims, "L-top-AB").pass);
    }

    #[test]
    fn flat_table_fails_everything() {
        let row = [(1.0, 1.0, 1.0); 5];
        let t = BenchmarkTable::from_values(&[1, 2, 3], &[row, row, row]).unwrap();
        assert!(trend_check(&t).iter().all(|c| !c.pass));
    }

    #[test]
    fn seed_wins_counts_strict_leads() {
        let mut recs = Vec::new();
        for seed in 1..=3u64 {
            for t in Technique::ALL {
                let thr = if t == Technique::Red && seed != 2 { 9.0 } else { 5.0 };
                recs.push(MetricsRecord::new(t, 10, seed, 10, 10, thr, 1, 0, 0).unwrap());
            }
        }
        assert_eq!(seed_wins(&recs, 10, Technique::Red, Factor::Throughput, true), (2, 3));
        assert_eq!(seed_wins(&recs, 10, Technique::Ecn, Factor::Throughput, true), (0, 3));
    }
}
