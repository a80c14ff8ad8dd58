use thiserror::Error;

use crate::model::{FlowId, FlowState, SimTime};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid link thresholds: {0}")]
    InvalidLink(String),

    #[error("illegal flow transition for {flow}: {from:?} -> {to:?}")]
    IllegalTransition {
        flow: FlowId,
        from: FlowState,
        to: FlowState,
    },

    #[error("admissible rate {ar} exceeds objective rate {or}")]
    AdmissibleAboveObjective { ar: f64, or: f64 },

    #[error("threshold rate {tr} must lie in (0, objective rate {or}]")]
    InvalidThresholdRate { tr: f64, or: f64 },

    #[error("round trip time must be positive, got {0}")]
    NonPositiveRtt(f64),

    #[error("acknowledged packets ({tap}) exceed sent packets ({tsp})")]
    AckedExceedsSent { tsp: u64, tap: u64 },

    #[error("event scheduled at {at} which is before the current time {now}")]
    ScheduledInPast { at: SimTime, now: SimTime },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error("unknown config key `{0}`")]
    UnknownKey(String),

    #[error("incomplete benchmark matrix: {0}")]
    IncompleteMatrix(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
