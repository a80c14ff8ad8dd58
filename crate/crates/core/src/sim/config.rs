//! Scenario configuration and its flat `key=value` text form.
//!
//! One key per line, `#` starts a comment. Times carry their unit in the
//! key name (`_s` or `_ms`). `render` and `parse` round-trip exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::domain::TerminationPolicy;
use crate::error::{Error, Result};
use crate::metering::{MeterParams, Technique};
use crate::model::SimTime;

/// Granularity of the egress congestion estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CleScope {
    /// One estimate over all traffic leaving the domain.
    Aggregate,
    /// One estimate per interior link; a request is judged by the link it would use.
    PerLink,
}

impl CleScope {
    pub fn key(self) -> &'static str {
        match self {
            CleScope::Aggregate => "aggregate",
            CleScope::PerLink => "link",
        }
    }
}

/// Queue that RED and ECN average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RedQueue {
    /// The link's own packet queue, served at line rate.
    Physical,
    /// A counter filled by arrivals and drained at the admissible rate, so
    /// it grows as soon as the link carries more than `Ar`.
    Virtual,
}

impl RedQueue {
    pub fn key(self) -> &'static str {
        match self {
            RedQueue::Physical => "physical",
            RedQueue::Virtual => "virtual",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub technique: Technique,
    pub bandwidth_bps: u64,
    pub n_links: usize,
    pub n_connections: usize,
    pub packet_rate: u32,
    pub packet_size: u32,
    pub duration: SimTime,
    pub pause_interval: SimTime,
    pub pause_length: SimTime,
    pub seed: u64,
    pub ar_fraction: f64,
    pub sr_fraction: f64,
    pub or_fraction: f64,
    pub hop_delay: SimTime,
    pub link_buffer: usize,
    /// Mean gap between session requests (Poisson arrivals).
    pub request_interval: SimTime,
    /// Mean session holding time; zero keeps sessions until the end of the run.
    pub holding_time: SimTime,
    /// Share of sessions that are non-ECN constant-rate senders.
    pub udp_fraction: f64,
    /// Bandwidth term of the window cap of window-based sessions.
    pub flow_bandwidth_bps: f64,
    /// Window a new session starts with; zero starts at the window cap.
    pub start_window: u32,
    pub cle_w: f64,
    pub admit_threshold: f64,
    pub cle_scope: CleScope,
    pub feedback_delay: SimTime,
    pub report_interval: SimTime,
    pub ft_window: SimTime,
    pub termination_policy: TerminationPolicy,
    /// Techniques whose PCN marks the receiver echoes to the sender as
    /// congestion. CE codepoints are always echoed.
    pub echo_marks: Vec<Technique>,
    pub red_queue: RedQueue,
    pub meter: MeterParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            technique: Technique::Red,
            bandwidth_bps: 50_000_000,
            n_links: 5,
            n_connections: 10,
            packet_rate: 15,
            packet_size: 1040,
            duration: SimTime::from_secs(60),
            pause_interval: SimTime::from_secs(30),
            pause_length: SimTime::from_secs(4),
            seed: 1,
            ar_fraction: 0.7,
            sr_fraction: 0.9,
            or_fraction: 0.9,
            hop_delay: SimTime::from_millis(5),
            link_buffer: 50,
            request_interval: SimTime::from_secs(2),
            holding_time: SimTime::ZERO,
            udp_fraction: 0.0,
            flow_bandwidth_bps: 1_000_000.0,
            start_window: 1,
            cle_w: 0.9,
            admit_threshold: 0.5,
            cle_scope: CleScope::Aggregate,
            feedback_delay: SimTime::from_millis(5),
            report_interval: SimTime::from_millis(100),
            ft_window: SimTime::from_secs(1),
            termination_policy: TerminationPolicy::NewestFirst,
            echo_marks: vec![Technique::Red],
            red_queue: RedQueue::Physical,
            meter: MeterParams::default(),
        }
    }
}

/// Every recognised key, in render order.
pub const KEYS: &[&str] = &[
    "technique",
    "bandwidth_bps",
    "n_links",
    "n_connections",
    "packet_rate",
    "packet_size",
    "duration_s",
    "pause_interval_s",
    "pause_length_s",
    "seed",
    "ar_fraction",
    "sr_fraction",
    "or_fraction",
    "hop_delay_ms",
    "link_buffer_pkts",
    "request_interval_s",
    "holding_time_s",
    "udp_fraction",
    "flow_bandwidth_bps",
    "start_window_pkts",
    "cle_w",
    "admit_threshold",
    "cle_scope",
    "feedback_delay_ms",
    "report_interval_ms",
    "ft_window_ms",
    "termination_policy",
    "echo_marks",
    "red_queue",
    "red_w_q",
    "red_min_thr",
    "red_max_thr",
    "red_max_p",
    "tb_depth_ms",
    "tb_mark_fraction",
    "bm_mi_ms",
    "bm_threshold_fraction",
    "ab_capacity_pkts",
];

/// Parses `50mbps`, `400Mbps`, `1.5gbps`, `800kbps`, `1000bps` or a bare number of bits/s.
pub fn parse_bandwidth(s: &str) -> Result<u64> {
    let lower = s.trim().to_ascii_lowercase();
    let (num, scale) = [("gbps", 1e9), ("mbps", 1e6), ("kbps", 1e3), ("bps", 1.0)]
        .iter()
        .find_map(|(suffix, scale)| lower.strip_suffix(suffix).map(|n| (n.trim().to_string(), *scale)))
        .unwrap_or((lower.clone(), 1.0));
    let v: f64 = num
        .parse()
        .map_err(|_| Error::InvalidScenario(format!("malformed bandwidth `{s}`")))?;
    let bps = (v * scale).round();
    if !(bps.is_finite() && bps >= 1.0) {
        return Err(Error::InvalidScenario(format!("bandwidth must be positive, got `{s}`")));
    }
    Ok(bps as u64)
}

/// Comma-separated technique keys, or `none`. Returned in table order without repeats.
pub fn parse_techniques(v: &str) -> Result<Vec<Technique>> {
    if v.trim() == "none" {
        return Ok(Vec::new());
    }
    let picked = v
        .split(',')
        .map(|t| t.trim().parse())
        .collect::<Result<Vec<Technique>>>()?;
    Ok(Technique::ALL.into_iter().filter(|t| picked.contains(t)).collect())
}

fn render_techniques(ts: &[Technique]) -> String {
    if ts.is_empty() {
        "none".to_string()
    } else {
        ts.iter().map(|t| t.key()).collect::<Vec<_>>().join(",")
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidScenario(format!("bad value `{v}` for `{key}`")))
}

fn secs(key: &str, v: &str) -> Result<SimTime> {
    let s: f64 = num(key, v)?;
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidScenario(format!("`{key}` must be a non-negative time")));
    }
    Ok(SimTime::from_secs_f64(s))
}

fn millis(key: &str, v: &str) -> Result<SimTime> {
    let ms: f64 = num(key, v)?;
    if !(ms >= 0.0 && ms.is_finite()) {
        return Err(Error::InvalidScenario(format!("`{key}` must be a non-negative time")));
    }
    Ok(SimTime::from_secs_f64(ms / 1000.0))
}

fn fmt_secs(t: SimTime) -> String {
    format!("{}", t.as_secs_f64())
}

fn fmt_millis(t: SimTime) -> String {
    format!("{}", t.as_micros() as f64 / 1000.0)
}

impl ScenarioConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let m = &mut self.meter;
        match key.trim() {
            "technique" => self.technique = v.parse()?,
            "bandwidth_bps" | "bandwidth" => self.bandwidth_bps = parse_bandwidth(v)?,
            "n_links" => self.n_links = num(key, v)?,
            "n_connections" => self.n_connections = num(key, v)?,
            "packet_rate" => self.packet_rate = num(key, v)?,
            "packet_size" => self.packet_size = num(key, v)?,
            "duration_s" | "duration" => self.duration = secs(key, v)?,
            "pause_interval_s" => self.pause_interval = secs(key, v)?,
            "pause_length_s" => self.pause_length = secs(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "ar_fraction" => self.ar_fraction = num(key, v)?,
            "sr_fraction" => self.sr_fraction = num(key, v)?,
            "or_fraction" => self.or_fraction = num(key, v)?,
            "hop_delay_ms" => self.hop_delay = millis(key, v)?,
            "link_buffer_pkts" => self.link_buffer = num(key, v)?,
            "request_interval_s" => self.request_interval = secs(key, v)?,
            "holding_time_s" => self.holding_time = secs(key, v)?,
            "udp_fraction" => self.udp_fraction = num(key, v)?,
            "flow_bandwidth_bps" => self.flow_bandwidth_bps = parse_bandwidth(v)? as f64,
            "start_window_pkts" => self.start_window = num(key, v)?,
            "cle_w" => self.cle_w = num(key, v)?,
            "cle_scope" => {
                self.cle_scope = match v {
                    "aggregate" => CleScope::Aggregate,
                    "link" => CleScope::PerLink,
                    _ => {
                        return Err(Error::InvalidScenario(format!(
                            "cle_scope must be aggregate or link, got `{v}`"
                        )))
                    }
                }
            }
            "admit_threshold" => self.admit_threshold = num(key, v)?,
            "feedback_delay_ms" => self.feedback_delay = millis(key, v)?,
            "report_interval_ms" => self.report_interval = millis(key, v)?,
            "ft_window_ms" => self.ft_window = millis(key, v)?,
            "termination_policy" => {
                self.termination_policy = match v {
                    "newest_first" => TerminationPolicy::NewestFirst,
                    "oldest_first" => TerminationPolicy::OldestFirst,
                    _ => {
                        return Err(Error::InvalidScenario(format!(
                            "termination_policy must be newest_first or oldest_first, got `{v}`"
                        )))
                    }
                }
            }
            "echo_marks" => self.echo_marks = parse_techniques(v)?,
            "red_queue" => {
                self.red_queue = match v {
                    "physical" => RedQueue::Physical,
                    "virtual" => RedQueue::Virtual,
                    _ => {
                        return Err(Error::InvalidScenario(format!(
                            "red_queue must be physical or virtual, got `{v}`"
                        )))
                    }
                }
            }
            "red_w_q" => m.red_w_q = num(key, v)?,
            "red_min_thr" => m.red_min_thr = num(key, v)?,
            "red_max_thr" => m.red_max_thr = num(key, v)?,
            "red_max_p" => m.red_max_p = num(key, v)?,
            "tb_depth_ms" => m.tb_depth = millis(key, v)?,
            "tb_mark_fraction" => m.tb_mark_fraction = num(key, v)?,
            "bm_mi_ms" => m.bm_mi = millis(key, v)?,
            "bm_threshold_fraction" => m.bm_threshold_fraction = num(key, v)?,
            "ab_capacity_pkts" => m.ab_capacity = num(key, v)?,
            other => return Err(Error::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let m = &self.meter;
        let v = match key {
            "technique" => self.technique.key().to_string(),
            "bandwidth_bps" => self.bandwidth_bps.to_string(),
            "n_links" => self.n_links.to_string(),
            "n_connections" => self.n_connections.to_string(),
            "packet_rate" => self.packet_rate.to_string(),
            "packet_size" => self.packet_size.to_string(),
            "duration_s" => fmt_secs(self.duration),
            "pause_interval_s" => fmt_secs(self.pause_interval),
            "pause_length_s" => fmt_secs(self.pause_length),
            "seed" => self.seed.to_string(),
            "ar_fraction" => self.ar_fraction.to_string(),
            "sr_fraction" => self.sr_fraction.to_string(),
            "or_fraction" => self.or_fraction.to_string(),
            "hop_delay_ms" => fmt_millis(self.hop_delay),
            "link_buffer_pkts" => self.link_buffer.to_string(),
            "request_interval_s" => fmt_secs(self.request_interval),
            "holding_time_s" => fmt_secs(self.holding_time),
            "udp_fraction" => self.udp_fraction.to_string(),
            "flow_bandwidth_bps" => self.flow_bandwidth_bps.to_string(),
            "start_window_pkts" => self.start_window.to_string(),
            "cle_w" => self.cle_w.to_string(),
            "cle_scope" => self.cle_scope.key().to_string(),
            "admit_threshold" => self.admit_threshold.to_string(),
            "feedback_delay_ms" => fmt_millis(self.feedback_delay),
            "report_interval_ms" => fmt_millis(self.report_interval),
            "ft_window_ms" => fmt_millis(self.ft_window),
            "termination_policy" => self.termination_policy.key().to_string(),
            "echo_marks" => render_techniques(&self.echo_marks),
            "red_queue" => self.red_queue.key().to_string(),
            "red_w_q" => m.red_w_q.to_string(),
            "red_min_thr" => m.red_min_thr.to_string(),
            "red_max_thr" => m.red_max_thr.to_string(),
            "red_max_p" => m.red_max_p.to_string(),
            "tb_depth_ms" => fmt_millis(m.tb_depth),
            "tb_mark_fraction" => m.tb_mark_fraction.to_string(),
            "bm_mi_ms" => fmt_millis(m.bm_mi),
            "bm_threshold_fraction" => m.bm_threshold_fraction.to_string(),
            "ab_capacity_pkts" => m.ab_capacity.to_string(),
            _ => return None,
        };
        Some(v)
    }

    /// Applies `key=value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::ConfigSyntax {
                line: idx + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            self.set(k, v).map_err(|e| match e {
                Error::UnknownKey(_) => e,
                other => Error::ConfigSyntax {
                    line: idx + 1,
                    msg: other.to_string(),
                },
            })?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ScenarioConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key}={}", self.get(key).expect("every listed key renders"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidScenario(msg.to_string()));
        if self.n_links == 0 {
            return bad("n_links must be at least 1");
        }
        if self.bandwidth_bps == 0 || self.packet_rate == 0 {
            return bad("bandwidth and packet_rate must be positive");
        }
        if self.packet_size < crate::model::HEADER_BYTES {
            return bad("packet_size must cover the 40-byte header");
        }
        if self.link_buffer == 0 || self.meter.ab_capacity == 0 {
            return bad("buffers must hold at least one packet");
        }
        if !(0.0..=1.0).contains(&self.udp_fraction) {
            return bad("udp_fraction must be in [0, 1]");
        }
        if self.flow_bandwidth_bps.is_nan() || self.flow_bandwidth_bps <= 0.0 {
            return bad("flow_bandwidth_bps must be positive");
        }
        if self.request_interval == SimTime::ZERO
            || self.report_interval == SimTime::ZERO
            || self.ft_window == SimTime::ZERO
        {
            return bad("request_interval, report_interval and ft_window must be positive");
        }
        if self.hop_delay == SimTime::ZERO {
            return bad("hop_delay must be positive");
        }
        crate::domain::CleEstimator::new(self.cle_w, self.admit_threshold)?;
        crate::model::LinkConfig::from_fractions(
            self.link_capacity_bps(),
            self.ar_fraction,
            self.sr_fraction,
            self.or_fraction,
        )?;
        crate::metering::RedState::new(
            self.meter.red_w_q,
            self.meter.red_min_thr,
            self.meter.red_max_thr,
            self.meter.red_max_p,
        )?;
        if !(0.0..=1.0).contains(&self.meter.tb_mark_fraction) || self.meter.tb_depth == SimTime::ZERO {
            return bad("tb_depth_ms must be positive and tb_mark_fraction in [0, 1]");
        }
        if self.meter.bm_mi == SimTime::ZERO
            || self.meter.bm_threshold_fraction.is_nan()
            || self.meter.bm_threshold_fraction <= 0.0
        {
            return bad("bm_mi_ms and bm_threshold_fraction must be positive");
        }
        Ok(())
    }

    pub fn link_capacity_bps(&self) -> f64 {
        self.bandwidth_bps as f64 / self.n_links.max(1) as f64
    }

    /// Propagation-only round trip: three hops each way.
    pub fn base_rtt(&self) -> SimTime {
        SimTime::from_micros(6 * self.hop_delay.as_micros())
    }

    /// The parameter values as first written down before any calibration.
    pub fn ledger_baseline() -> Self {
        ScenarioConfig::default()
    }

    /// Keys whose value differs from [`ScenarioConfig::ledger_baseline`],
    /// ignoring per-run identity (technique, bandwidth, seed, duration).
    pub fn ledger_adjustments(&self) -> Vec<(String, String, String)> {
        let base = Self::ledger_baseline();
        KEYS.iter()
            .filter(|k| !matches!(**k, "technique" | "bandwidth_bps" | "seed" | "duration_s"))
            .filter_map(|k| {
                let (b, v) = (base.get(k)?, self.get(k)?);
                (b != v).then(|| (k.to_string(), b, v))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bandwidth_suffixes() {
        assert_eq!(parse_bandwidth("50mbps").unwrap(), 50_000_000);
        assert_eq!(parse_bandwidth("400Mbps").unwrap(), 400_000_000);
        assert_eq!(parse_bandwidth("1.5gbps").unwrap(), 1_500_000_000);
        assert_eq!(parse_bandwidth("800kbps").unwrap(), 800_000);
        assert_eq!(parse_bandwidth("1234").unwrap(), 1234);
        assert!(parse_bandwidth("fast").is_err());
        assert!(parse_bandwidth("0mbps").is_err());
    }

    #[test]
    fn parses_comments_and_blanks() {
        let cfg = ScenarioConfig::parse("# demo\n\ntechnique = ecn  # inline\nbandwidth_bps=30mbps\nduration_s=12.5\n")
            .unwrap();
        assert_eq!(cfg.technique, Technique::Ecn);
        assert_eq!(cfg.bandwidth_bps, 30_000_000);
        assert_eq!(cfg.duration, SimTime::from_millis(12_500));
    }

    #[test]
    fn technique_lists() {
        let mut cfg = ScenarioConfig::default();
        cfg.set("echo_marks", "red, tb,red").unwrap();
        assert_eq!(cfg.echo_marks, vec![Technique::TokenBucket, Technique::Red]);
        assert_eq!(cfg.get("echo_marks").unwrap(), "tb,red");
        cfg.set("echo_marks", "none").unwrap();
        assert!(cfg.echo_marks.is_empty());
        assert!(cfg.set("echo_marks", "red,xyz").is_err());
    }

    #[test]
    fn unknown_key_rejected() {
        assert_eq!(
            ScenarioConfig::parse("colour=blue").unwrap_err(),
            Error::UnknownKey("colour".into())
        );
        assert!(matches!(
            ScenarioConfig::parse("technique").unwrap_err(),
            Error::ConfigSyntax { line: 1, .. }
        ));
        assert!(matches!(
            ScenarioConfig::parse("\nn_links=x").unwrap_err(),
            Error::ConfigSyntax { line: 2, .. }
        ));
    }

    #[test]
    fn every_key_renders_and_defaults_validate() {
        let cfg = ScenarioConfig::default();
        for k in KEYS {
            assert!(cfg.get(k).is_some(), "{k}");
        }
        cfg.validate().unwrap();
        assert_eq!(ScenarioConfig::parse(&cfg.render()).unwrap(), cfg);
        assert!(cfg.ledger_adjustments().is_empty());
    }

    #[test]
    fn validation_catches_zero_links() {
        let cfg = ScenarioConfig {
            n_links: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn adjustments_are_listed() {
        let mut cfg = ScenarioConfig::default();
        cfg.set("cle_w", "0.8").unwrap();
        cfg.set("seed", "9").unwrap();
        assert_eq!(
            cfg.ledger_adjustments(),
            vec![("cle_w".to_string(), "0.9".to_string(), "0.8".to_string())]
        );
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(
            bw in 1u64..10_000_000_000,
            dur_us in 0u64..10_000_000_000,
            hop_us in 1u64..1_000_000,
            cle_w in 0.01f64..0.99,
            wq in 0.0001f64..1.0,
            seed in any::<u64>(),
        ) {
            let mut cfg = ScenarioConfig {
                bandwidth_bps: bw,
                duration: SimTime::from_micros(dur_us),
                hop_delay: SimTime::from_micros(hop_us),
                cle_w,
                seed,
                ..Default::default()
            };
            cfg.meter.red_w_q = wq;
            prop_assert_eq!(ScenarioConfig::parse(&cfg.render()).unwrap(), cfg);
        }
    }
}
