use super::cle::{AdmissionSignal, Verdict};
use crate::error::Result;
use crate::model::{Flow, SimTime};

/// Applies the ingress's latest signal to a pending request.
///
/// Fails without touching the flow unless it is still `Requested`.
pub fn ingress_admission(flow: &mut Flow, latest: &AdmissionSignal, now: SimTime) -> Result<Verdict> {
    match latest.verdict {
        Verdict::Admit => flow.admit(now)?,
        Verdict::Block => flow.block()?,
    }
    Ok(latest.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FlowId, FlowState};

    fn signal(verdict: Verdict) -> AdmissionSignal {
        AdmissionSignal {
            verdict,
            issued_at: SimTime::ZERO,
            cle_snapshot: 0.0,
        }
    }

    #[test]
    fn admit_and_block() {
        let now = SimTime::from_secs(2);
        let mut f = Flow::new(FlowId(1), 15);
        ingress_admission(&mut f, &signal(Verdict::Admit), now).unwrap();
        assert_eq!(f.state(), FlowState::Admitted);
        assert_eq!(f.admitted_at(), Some(now));

        let mut f = Flow::new(FlowId(2), 15);
        ingress_admission(&mut f, &signal(Verdict::Block), now).unwrap();
        assert_eq!(f.state(), FlowState::Blocked);
        assert_eq!(f.admitted_at(), None);
    }

    #[test]
    fn non_requested_is_rejected() {
        let mut f = Flow::new(FlowId(1), 15);
        f.admit(SimTime::ZERO).unwrap();
        assert!(ingress_admission(&mut f, &signal(Verdict::Block), SimTime::from_secs(1)).is_err());
        assert_eq!(f.state(), FlowState::Admitted);
    }
}
