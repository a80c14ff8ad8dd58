//! PCN control plane: egress congestion estimation, ingress admission,
//! pre-congestion classification, flow termination, and the interior hook.

mod admission;
mod cle;
mod interior;
mod precongestion;
mod termination;

pub use admission::ingress_admission;
pub use cle::{AdmissionSignal, CleEstimator, Verdict, DEFAULT_ADMIT_THRESHOLD, DEFAULT_CLE_WEIGHT};
pub use interior::{interior_process, InteriorOutcome};
pub use precongestion::{classify_precongestion, PreCongestionState};
pub use termination::{flow_termination, terminations_needed, TerminationPolicy};
