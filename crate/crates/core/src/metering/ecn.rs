use rand::Rng;

use super::red::RedState;
use crate::model::{CodepointClass, MeterDecision, Packet};

/// RED whose mark is carried in the ECN field.
///
/// ECN-capable packets become CE and are forwarded as marked. Not-ECT
/// packets cannot carry the mark and are dropped instead.
pub fn ecn_on_arrival<R: Rng + ?Sized>(
    red: &mut RedState,
    pkt: &mut Packet,
    queue_len: usize,
    rng: &mut R,
) -> MeterDecision {
    let verdict = red.on_arrival(queue_len, rng);
    apply_ecn_verdict(verdict, pkt)
}

/// Translates a RED verdict into the ECN outcome for `pkt`.
pub fn apply_ecn_verdict(verdict: MeterDecision, pkt: &mut Packet) -> MeterDecision {
    match verdict {
        MeterDecision::Mark => match pkt.codepoint.class() {
            CodepointClass::NotEcnCapable => MeterDecision::Drop,
            CodepointClass::EcnCapable | CodepointClass::CongestionExperienced => {
                pkt.codepoint.set_ce();
                MeterDecision::Mark
            }
        },
        other => other,
    }
}
