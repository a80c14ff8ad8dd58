//! Runs the egress congestion level estimate over a marking pattern and lets
//! the ingress decide a request after each report.

use pcn_sim::domain::{ingress_admission, CleEstimator, DEFAULT_ADMIT_THRESHOLD, DEFAULT_CLE_WEIGHT};
use pcn_sim::model::{Flow, FlowId, SimTime};

fn main() -> pcn_sim::Result<()> {
    let mut cle = CleEstimator::new(DEFAULT_CLE_WEIGHT, DEFAULT_ADMIT_THRESHOLD)?;
    // Ten packets per report; the share of marked ones rises then falls.
    let marked_per_report = [0, 1, 3, 6, 9, 10, 8, 4, 1, 0];
    for (n, &marked) in marked_per_report.iter().enumerate() {
        for i in 0..10 {
            cle.update(i < marked);
        }
        let now = SimTime::from_millis(100 * (n as u64 + 1));
        let signal = cle.feedback(now);
        let mut flow = Flow::new(FlowId(n as u64), 15);
        let verdict = ingress_admission(&mut flow, &signal, now)?;
        println!(
            "t={:>4} ms marked {marked:>2}/10 cle {:.3} -> {verdict:?}",
            now.as_micros() / 1000,
            cle.cle()
        );
    }
    Ok(())
}
