//! Runs one scenario with a trace observer and prints its metrics.
//!
//! Usage: `cargo run --release --example single_scenario -- [technique] [bandwidth]`

use pcn_sim::metrics::describe_record;
use pcn_sim::sim::{parse_bandwidth, run_observed, ScenarioConfig, TraceEvent};

fn main() -> pcn_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = ScenarioConfig::default();
    if let Some(t) = args.next() {
        cfg.set("technique", &t)?;
    }
    if let Some(b) = args.next() {
        cfg.bandwidth_bps = parse_bandwidth(&b)?;
    }

    let mut per_second = vec![(0u64, 0u64); cfg.duration.as_secs_f64().ceil() as usize + 1];
    let out = run_observed(&cfg, |ev| match *ev {
        TraceEvent::Delivered { at, marked, .. } => {
            let s = &mut per_second[at.as_secs_f64() as usize];
            s.0 += 1;
            s.1 += u64::from(marked);
        }
        TraceEvent::Dropped { .. } | TraceEvent::Sent { .. } => {}
        TraceEvent::Admitted { .. } | TraceEvent::Blocked { .. } | TraceEvent::Terminated { .. } => {}
    })?;

    println!("{}", describe_record(&out.record));
    println!(
        "events {} delivered {} dropped {} marked {}",
        out.events, out.delivered, out.dropped, out.pcn_marked
    );
    for (s, (d, m)) in per_second.iter().enumerate().step_by(10) {
        println!("  t={s:>3}s delivered {d:>6} marked {m:>5}");
    }
    Ok(())
}
