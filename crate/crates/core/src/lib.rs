//! Discrete-event simulator of a pre-congestion notification domain.
//!
//! Interior links meter traffic with one of five techniques ([`metering`]),
//! the egress turns marks into an admission signal and the ingress admits,
//! blocks or terminates sessions ([`domain`]). [`sim::run`] executes one
//! scenario; [`bench`] runs the comparison matrix and [`metrics`] scores it.

pub mod bench;
pub mod cli;
pub mod domain;
pub mod error;
pub mod metering;
pub mod metrics;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
