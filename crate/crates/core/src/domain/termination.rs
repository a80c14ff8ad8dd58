use std::cmp::Reverse;

use crate::error::Result;
use crate::model::{Flow, FlowId, LinkConfig, SimTime};

/// Which admitted flows go first when a link must shed load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TerminationPolicy {
    #[default]
    NewestFirst,
    OldestFirst,
}

impl TerminationPolicy {
    pub fn key(self) -> &'static str {
        match self {
            TerminationPolicy::NewestFirst => "newest_first",
            TerminationPolicy::OldestFirst => "oldest_first",
        }
    }
}

/// Smallest `k` with `r - k * per_flow_rate <= Sr`, or `None` when no `k`
/// up to `population` suffices.
pub fn terminations_needed(r: f64, sr: f64, per_flow_rate: f64, population: usize) -> Option<usize> {
    if r <= sr {
        return Some(0);
    }
    if per_flow_rate <= 0.0 || !per_flow_rate.is_finite() {
        return None;
    }
    let guess = ((r - sr) / per_flow_rate).ceil().max(0.0) as usize;
    let fits = |k: usize| r - k as f64 * per_flow_rate <= sr;
    let mut k = guess.min(population);
    while k > 0 && fits(k - 1) {
        k -= 1;
    }
    while k <= population && !fits(k) {
        k += 1;
    }
    (k <= population).then_some(k)
}

/// Picks flows to terminate on a link whose rate `r` exceeds `Sr`, orders
/// them by policy, and moves them to `Terminated` at `now`.
///
/// Returns every admitted flow if even that cannot bring `r` down to `Sr`.
pub fn flow_termination(
    flows: &mut [Flow],
    r: f64,
    link: &LinkConfig,
    per_flow_rate: f64,
    policy: TerminationPolicy,
    now: SimTime,
) -> Result<Vec<FlowId>> {
    let mut order: Vec<usize> = (0..flows.len()).filter(|&i| flows[i].is_active()).collect();
    match policy {
        TerminationPolicy::NewestFirst => order.sort_by_key(|&i| Reverse((flows[i].admitted_at(), flows[i].id))),
        TerminationPolicy::OldestFirst => order.sort_by_key(|&i| (flows[i].admitted_at(), flows[i].id)),
    }
    let k = terminations_needed(r, link.supportable_rate(), per_flow_rate, order.len()).unwrap_or(order.len());
    let mut out = Vec::with_capacity(k);
    for &i in order.iter().take(k) {
        flows[i].terminate(now)?;
        out.push(flows[i].id);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FlowState;

    fn admitted(n: u64) -> Vec<Flow> {
        (0..n)
            .map(|i| {
                let mut f = Flow::new(FlowId(i), 15);
                f.admit(SimTime::from_secs(i)).unwrap();
                f
            })
            .collect()
    }

    fn link() -> LinkConfig {
        LinkConfig::new(100.0, 60.0, 80.0, 90.0).unwrap()
    }

    #[test]
    fn nothing_to_do_at_or_below_sr() {
        let mut fs = admitted(4);
        let out = flow_termination(
            &mut fs,
            80.0,
            &link(),
            5.0,
            TerminationPolicy::NewestFirst,
            SimTime::from_secs(99),
        )
        .unwrap();
        assert!(out.is_empty());
        assert!(fs.iter().all(Flow::is_active));
    }

    #[test]
    fn ceiling_count_newest_first() {
        let mut fs = admitted(10);
        let out = flow_termination(
            &mut fs,
            80.0 + 2.5 * 4.0,
            &link(),
            4.0,
            TerminationPolicy::NewestFirst,
            SimTime::from_secs(99),
        )
        .unwrap();
        assert_eq!(out, vec![FlowId(9), FlowId(8), FlowId(7)]);
        assert_eq!(fs.iter().filter(|f| f.state() == FlowState::Terminated).count(), 3);
    }

    #[test]
    fn oldest_first_policy() {
        let mut fs = admitted(10);
        let out = flow_termination(
            &mut fs,
            90.0,
            &link(),
            4.0,
            TerminationPolicy::OldestFirst,
            SimTime::from_secs(99),
        )
        .unwrap();
        assert_eq!(out, vec![FlowId(0), FlowId(1), FlowId(2)]);
    }

    #[test]
    fn capped_at_population() {
        let mut fs = admitted(2);
        let out = flow_termination(
            &mut fs,
            80.0 + 5.0,
            &link(),
            1.0,
            TerminationPolicy::NewestFirst,
            SimTime::from_secs(99),
        )
        .unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(terminations_needed(85.0, 80.0, 1.0, 2), None);
        assert_eq!(terminations_needed(85.0, 80.0, 0.0, 2), None);
    }

    #[test]
    fn skips_inactive_flows() {
        let mut fs = admitted(3);
        fs.push(Flow::new(FlowId(50), 15));
        let out = flow_termination(
            &mut fs,
            1000.0,
            &link(),
            1.0,
            TerminationPolicy::NewestFirst,
            SimTime::from_secs(99),
        )
        .unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(fs[3].state(), FlowState::Requested);
    }
}
