//! Discrete-event kernel, topology, traffic generation and the scenario runner.

mod config;
mod engine;
mod event;
mod sender;
mod topology;
mod traffic;

pub use config::{parse_bandwidth, parse_techniques, CleScope, RedQueue, ScenarioConfig, KEYS};
pub use engine::{run, run_observed, EventKind, RunOutput, TraceEvent};
pub use event::{Event, EventQueue};
pub use sender::{optimal_window, SenderMode, SenderModel, TransportSignal};
pub use topology::{build_topology, InteriorLink, NodeId, Topology};
pub use traffic::{cbr_next_departure, CbrClock, PauseSchedule};
