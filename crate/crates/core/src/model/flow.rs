use std::fmt;

use super::SimTime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowId(pub u64);

impl fmt::Display for FlowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "flow#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowState {
    Requested,
    Admitted,
    Blocked,
    Terminated,
}

impl FlowState {
    pub fn can_transition_to(self, next: FlowState) -> bool {
        matches!(
            (self, next),
            (FlowState::Requested, FlowState::Admitted)
                | (FlowState::Requested, FlowState::Blocked)
                | (FlowState::Admitted, FlowState::Terminated)
        )
    }
}

/// An admission-controlled session.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub id: FlowId,
    pub packet_rate: u32,
    state: FlowState,
    admitted_at: Option<SimTime>,
    terminated_at: Option<SimTime>,
}

impl Flow {
    pub fn new(id: FlowId, packet_rate: u32) -> Self {
        Flow {
            id,
            packet_rate,
            state: FlowState::Requested,
            admitted_at: None,
            terminated_at: None,
        }
    }

    pub fn state(&self) -> FlowState {
        self.state
    }

    pub fn admitted_at(&self) -> Option<SimTime> {
        self.admitted_at
    }

    pub fn terminated_at(&self) -> Option<SimTime> {
        self.terminated_at
    }

    pub fn is_active(&self) -> bool {
        self.state == FlowState::Admitted
    }

    fn transition(&mut self, next: FlowState) -> Result<()> {
        if !self.state.can_transition_to(next) {
            return Err(Error::IllegalTransition {
                flow: self.id,
                from: self.state,
                to: next,
            });
        }
        self.state = next;
        Ok(())
    }

    pub fn admit(&mut self, now: SimTime) -> Result<()> {
        self.transition(FlowState::Admitted)?;
        self.admitted_at = Some(now);
        Ok(())
    }

    pub fn block(&mut self) -> Result<()> {
        self.transition(FlowState::Blocked)
    }

    /// Termination must come strictly after admission.
    pub fn terminate(&mut self, now: SimTime) -> Result<()> {
        if let Some(at) = self.admitted_at {
            if now <= at {
                return Err(Error::IllegalTransition {
                    flow: self.id,
                    from: self.state,
                    to: FlowState::Terminated,
                });
            }
        }
        self.transition(FlowState::Terminated)?;
        self.terminated_at = Some(now);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lifecycle() {
        let mut f = Flow::new(FlowId(3), 15);
        f.admit(SimTime::from_secs(1)).unwrap();
        assert!(f.is_active());
        assert!(f.terminate(SimTime::from_secs(1)).is_err());
        f.terminate(SimTime::from_secs(2)).unwrap();
        assert_eq!(f.state(), FlowState::Terminated);
        assert_eq!(f.terminated_at(), Some(SimTime::from_secs(2)));
        assert!(f.admit(SimTime::from_secs(3)).is_err());
    }

    #[test]
    fn blocked_is_absorbing() {
        let mut f = Flow::new(FlowId(0), 15);
        f.block().unwrap();
        assert!(f.admit(SimTime::ZERO).is_err());
        assert!(f.terminate(SimTime::from_secs(1)).is_err());
        assert!(f.block().is_err());
    }

    fn state_strategy() -> impl Strategy<Value = FlowState> {
        prop_oneof![
            Just(FlowState::Requested),
            Just(FlowState::Admitted),
            Just(FlowState::Blocked),
            Just(FlowState::Terminated),
        ]
    }

    proptest! {
        #[test]
        fn random_transition_requests(requests in proptest::collection::vec(state_strategy(), 0..20)) {
            let mut f = Flow::new(FlowId(1), 15);
            let mut t = 0u64;
            for next in requests {
                t += 1;
                let before = f.state();
                let now = SimTime::from_secs(t);
                let res = match next {
                    FlowState::Admitted => f.admit(now),
                    FlowState::Blocked => f.block(),
                    FlowState::Terminated => f.terminate(now),
                    FlowState::Requested => Err(Error::IllegalTransition { flow: f.id, from: before, to: next }),
                };
                prop_assert_eq!(res.is_ok(), before.can_transition_to(next));
                if res.is_err() {
                    prop_assert_eq!(f.state(), before);
                }
                if let (Some(a), Some(z)) = (f.admitted_at(), f.terminated_at()) {
                    prop_assert!(z > a);
                }
            }
        }
    }
}
