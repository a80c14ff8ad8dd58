//! Sheds load from a link running above its supportable rate.

use pcn_sim::domain::{classify_precongestion, flow_termination, TerminationPolicy};
use pcn_sim::model::{Flow, FlowId, LinkConfig, SimTime};

fn main() -> pcn_sim::Result<()> {
    let link = LinkConfig::from_fractions(10e6, 0.7, 0.9, 0.9)?;
    let mut flows: Vec<Flow> = (0..12)
        .map(|i| {
            let mut f = Flow::new(FlowId(i), 15);
            f.admit(SimTime::from_secs(i)).map(|_| f)
        })
        .collect::<pcn_sim::Result<_>>()?;

    let per_flow = 0.85e6;
    let r = per_flow * flows.len() as f64;
    println!(
        "r {:.2} Mbit/s on a 10 Mbit/s link: {:?}",
        r / 1e6,
        classify_precongestion(r, &link)
    );
    let gone = flow_termination(
        &mut flows,
        r,
        &link,
        per_flow,
        TerminationPolicy::NewestFirst,
        SimTime::from_secs(20),
    )?;
    let left = r - per_flow * gone.len() as f64;
    println!("terminated {:?}", gone.iter().map(|f| f.0).collect::<Vec<_>>());
    println!(
        "r after {:.2} Mbit/s: {:?}",
        left / 1e6,
        classify_precongestion(left, &link)
    );
    Ok(())
}
