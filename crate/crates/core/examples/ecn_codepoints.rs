//! Shows how a RED mark lands on each ECN codepoint: capable packets turn
//! CE and travel on, Not-ECT packets are dropped.

use pcn_sim::metering::ecn::apply_ecn_verdict;
use pcn_sim::model::{classify_codepoint, EcnCodepoint, FlowId, MeterDecision, Packet, SimTime};

fn main() {
    for bits in 0u8..4 {
        println!("bits {bits:02b} -> {:?}", classify_codepoint(bits));
    }
    println!();
    for cp in [
        EcnCodepoint::NotEct,
        EcnCodepoint::Ect0,
        EcnCodepoint::Ect1,
        EcnCodepoint::Ce,
    ] {
        let mut pkt = Packet::new(1, FlowId(0), 1040, cp, SimTime::ZERO);
        let outcome = apply_ecn_verdict(MeterDecision::Mark, &mut pkt);
        println!("{cp:?} marked -> {outcome:?}, codepoint now {:?}", pkt.codepoint);
    }
}
