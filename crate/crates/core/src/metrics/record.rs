use super::loss_stats;
use crate::error::Result;
use crate::metering::Technique;

/// Aggregates of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub technique: Technique,
    pub bandwidth_bps: u64,
    pub seed: u64,
    pub tsp: u64,
    pub tap: u64,
    pub lp: u64,
    pub drop_rate_pct: f64,
    pub throughput_mbps: f64,
    pub admitted_sessions: u64,
    pub blocked_sessions: u64,
    pub terminated_sessions: u64,
}

impl MetricsRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        technique: Technique,
        bandwidth_bps: u64,
        seed: u64,
        tsp: u64,
        tap: u64,
        throughput_mbps: f64,
        admitted_sessions: u64,
        blocked_sessions: u64,
        terminated_sessions: u64,
    ) -> Result<Self> {
        let (lp, drop_rate_pct) = loss_stats(tsp, tap)?;
        Ok(MetricsRecord {
            technique,
            bandwidth_bps,
            seed,
            tsp,
            tap,
            lp,
            drop_rate_pct,
            throughput_mbps,
            admitted_sessions,
            blocked_sessions,
            terminated_sessions,
        })
    }

    pub fn bandwidth_mbps(&self) -> f64 {
        self.bandwidth_bps as f64 / 1e6
    }
}
