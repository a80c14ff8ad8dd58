//! Scenario orchestration: sessions, interior links, egress measurement and
//! ingress control, all driven from one event queue.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use super::event::EventQueue;
use super::sender::{SenderMode, SenderModel, TransportSignal};
use super::topology::build_topology;
use super::traffic::{cbr_next_departure, CbrClock, PauseSchedule};
use super::{CleScope, RedQueue, ScenarioConfig};
use crate::domain::{
    classify_precongestion, flow_termination, ingress_admission, interior_process, AdmissionSignal, CleEstimator,
    InteriorOutcome, PreCongestionState, Verdict,
};
use crate::error::Result;
use crate::metering::{BandwidthMeterState, Meter};
use crate::metrics::{throughput, MetricsRecord};
use crate::model::{EcnCodepoint, Flow, FlowId, LinkConfig, Packet, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    PacketArrival,
    PacketDeparture,
    FlowRequest,
    FeedbackSignal,
    GeneratorTick,
    PauseStart,
    PauseEnd,
    SimEnd,
    TransportFeedback,
    EgressReport,
    FlowDeparture,
}

/// Packet-level happenings exposed to observers, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Sent {
        at: SimTime,
        flow: FlowId,
    },
    Delivered {
        at: SimTime,
        flow: FlowId,
        link: usize,
        marked: bool,
    },
    Dropped {
        at: SimTime,
        flow: FlowId,
        link: usize,
    },
    Admitted {
        at: SimTime,
        flow: FlowId,
    },
    Blocked {
        at: SimTime,
        flow: FlowId,
    },
    Terminated {
        at: SimTime,
        flow: FlowId,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub record: MetricsRecord,
    pub delivered: u64,
    pub dropped: u64,
    pub pcn_marked: u64,
    pub events: u64,
    pub trace_digest: u64,
}

#[derive(Debug, Clone)]
struct Transit {
    pkt: Packet,
    link: usize,
    waited: SimTime,
}

#[derive(Debug)]
enum Ev {
    LinkArrival(Transit),
    EgressArrival(Transit),
    Departure(usize),
    FlowRequest {
        chained: bool,
    },
    Feedback {
        signals: Vec<AdmissionSignal>,
        rates: Vec<f64>,
    },
    Tick(usize),
    Transport {
        session: usize,
        signal: TransportSignal,
    },
    EgressReport,
    FlowDeparture(usize),
    PauseStart,
    PauseEnd,
    SimEnd,
}

impl Ev {
    fn kind(&self) -> EventKind {
        match self {
            Ev::LinkArrival(_) | Ev::EgressArrival(_) => EventKind::PacketArrival,
            Ev::Departure(_) => EventKind::PacketDeparture,
            Ev::FlowRequest { .. } => EventKind::FlowRequest,
            Ev::Feedback { .. } => EventKind::FeedbackSignal,
            Ev::Tick(_) => EventKind::GeneratorTick,
            Ev::Transport { .. } => EventKind::TransportFeedback,
            Ev::EgressReport => EventKind::EgressReport,
            Ev::FlowDeparture(_) => EventKind::FlowDeparture,
            Ev::PauseStart => EventKind::PauseStart,
            Ev::PauseEnd => EventKind::PauseEnd,
            Ev::SimEnd => EventKind::SimEnd,
        }
    }
}

#[derive(Debug)]
struct Session {
    flow: Flow,
    link: usize,
    sender: SenderModel,
    codepoint: EcnCodepoint,
    inflight: u32,
    last_decrease: Option<SimTime>,
    clock: Option<CbrClock>,
}

#[derive(Debug)]
struct LinkState {
    config: LinkConfig,
    meter: Meter,
    fifo: VecDeque<Transit>,
    in_service: Option<Transit>,
    active: usize,
    measured: BandwidthMeterState,
    last_termination: Option<SimTime>,
    /// Virtual queue content in bytes and the time it was last drained.
    virtual_bytes: f64,
    virtual_at: SimTime,
}

impl LinkState {
    /// Adds an arrival to the virtual queue and returns its length in packets.
    fn virtual_arrival(&mut self, now: SimTime, size: u32, limit_pkts: usize) -> usize {
        let drained = self.config.admissible_rate() / 8.0 * now.saturating_sub(self.virtual_at).as_secs_f64();
        let limit = (limit_pkts as f64) * f64::from(size);
        self.virtual_bytes = ((self.virtual_bytes - drained).max(0.0) + f64::from(size)).min(limit);
        self.virtual_at = now;
        (self.virtual_bytes / f64::from(size)).floor() as usize
    }

    fn queue_len(&self) -> usize {
        let buffered = match &self.meter {
            Meter::AdditionalBuffer(ab) => ab.len(),
            _ => self.fifo.len(),
        };
        buffered + usize::from(self.in_service.is_some())
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Window {
    bytes: u64,
    wait_us: u64,
    packets: u64,
}

struct Sim<'a, F: FnMut(&TraceEvent)> {
    cfg: &'a ScenarioConfig,
    queue: EventQueue<Ev>,
    /// Session arrivals and holding times; identical across techniques for one seed.
    traffic_rng: ChaCha8Rng,
    meter_rng: ChaCha8Rng,
    echo_marks: bool,
    sessions: Vec<Session>,
    links: Vec<LinkState>,
    /// Latest admission signal per estimate, as known at the ingress.
    signals: Vec<AdmissionSignal>,
    cles: Vec<CleEstimator>,
    pauses: PauseSchedule,
    paused: bool,
    ended: bool,
    base_rtt: SimTime,
    windows: Vec<Window>,
    next_packet: u64,
    requests: u64,
    sent: u64,
    delivered: u64,
    dropped: u64,
    pcn_marked: u64,
    admitted: u64,
    blocked: u64,
    terminated: u64,
    observer: F,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Runs one scenario to completion: generators stop at `cfg.duration`, then
/// every queue drains.
pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput> {
    run_observed(cfg, |_| {})
}

/// As [`run`], reporting every packet and session event to `observer`.
pub fn run_observed<F: FnMut(&TraceEvent)>(cfg: &ScenarioConfig, observer: F) -> Result<RunOutput> {
    cfg.validate()?;
    let topo = build_topology(cfg)?;
    let links = topo
        .links
        .into_iter()
        .map(|l| LinkState {
            measured: BandwidthMeterState::new(cfg.ft_window, l.config.supportable_rate()),
            config: l.config,
            meter: l.meter,
            fifo: VecDeque::new(),
            in_service: None,
            active: 0,
            last_termination: None,
            virtual_bytes: 0.0,
            virtual_at: SimTime::ZERO,
        })
        .collect();
    let base_rtt = cfg.base_rtt();
    let n_estimates = match cfg.cle_scope {
        CleScope::Aggregate => 1,
        CleScope::PerLink => cfg.n_links,
    };
    let n_windows = (cfg.duration.as_micros() / base_rtt.as_micros()) as usize;
    let mut sim = Sim {
        cfg,
        queue: EventQueue::new(),
        traffic_rng: stream(cfg.seed, 0),
        meter_rng: stream(cfg.seed, 1),
        echo_marks: cfg.echo_marks.contains(&cfg.technique),
        sessions: Vec::new(),
        links,
        signals: vec![AdmissionSignal::initial(); n_estimates],
        cles: vec![CleEstimator::new(cfg.cle_w, cfg.admit_threshold)?; n_estimates],
        pauses: PauseSchedule::new(cfg.pause_interval, cfg.pause_length),
        paused: false,
        ended: false,
        base_rtt,
        windows: vec![Window::default(); n_windows],
        next_packet: 0,
        requests: 0,
        sent: 0,
        delivered: 0,
        dropped: 0,
        pcn_marked: 0,
        admitted: 0,
        blocked: 0,
        terminated: 0,
        observer,
    };
    sim.prime()?;
    let mut hasher = DefaultHasher::new();
    let mut events = 0u64;
    while let Some(ev) = sim.queue.pop_next() {
        events += 1;
        (ev.time.as_micros(), ev.seq, ev.payload.kind()).hash(&mut hasher);
        sim.dispatch(ev.time, ev.payload)?;
    }
    sim.finish(events, hasher.finish())
}

impl<F: FnMut(&TraceEvent)> Sim<'_, F> {
    fn prime(&mut self) -> Result<()> {
        let end = self.cfg.duration;
        if end == SimTime::ZERO {
            return Ok(());
        }
        for (start, stop) in self.pauses.windows_before(end) {
            self.queue.schedule(start, Ev::PauseStart)?;
            self.queue.schedule(stop, Ev::PauseEnd)?;
        }
        for _ in 0..self.cfg.n_connections {
            self.queue.schedule(SimTime::ZERO, Ev::FlowRequest { chained: false })?;
        }
        let first = self.exp_delay(self.cfg.request_interval);
        if first < end {
            self.queue.schedule(first, Ev::FlowRequest { chained: true })?;
        }
        if self.cfg.report_interval <= end {
            self.queue.schedule(self.cfg.report_interval, Ev::EgressReport)?;
        }
        self.queue.schedule(end, Ev::SimEnd)?;
        Ok(())
    }

    fn exp_delay(&mut self, mean: SimTime) -> SimTime {
        let exp = Exp::new(1.0 / mean.as_secs_f64()).expect("mean is positive");
        let secs: f64 = exp.sample(&mut self.traffic_rng);
        SimTime::from_secs_f64(secs).max(SimTime::from_micros(1))
    }

    fn dispatch(&mut self, now: SimTime, ev: Ev) -> Result<()> {
        match ev {
            Ev::LinkArrival(t) => self.on_link_arrival(now, t),
            Ev::Departure(link) => self.on_departure(now, link),
            Ev::EgressArrival(t) => self.on_egress(now, t),
            Ev::FlowRequest { chained } => self.on_request(now, chained),
            Ev::Feedback { signals, rates } => self.on_feedback(now, signals, &rates),
            Ev::Tick(s) => self.on_tick(now, s),
            Ev::Transport { session, signal } => self.on_transport(now, session, signal),
            Ev::EgressReport => self.on_report(now),
            Ev::FlowDeparture(s) => self.on_flow_departure(now, s),
            Ev::PauseStart => {
                self.paused = true;
                Ok(())
            }
            Ev::PauseEnd => {
                self.paused = false;
                for s in 0..self.sessions.len() {
                    self.pump(now, s)?;
                }
                Ok(())
            }
            Ev::SimEnd => {
                self.ended = true;
                Ok(())
            }
        }
    }

    fn generating(&self, now: SimTime) -> bool {
        !self.ended && !self.paused && now < self.cfg.duration
    }

    fn emit(&mut self, now: SimTime, s: usize) -> Result<()> {
        let sess = &mut self.sessions[s];
        let pkt = Packet::new(
            self.next_packet,
            sess.flow.id,
            self.cfg.packet_size,
            sess.codepoint,
            now,
        );
        self.next_packet += 1;
        sess.inflight += 1;
        self.sent += 1;
        (self.observer)(&TraceEvent::Sent {
            at: now,
            flow: sess.flow.id,
        });
        let link = sess.link;
        self.queue.schedule(
            now + self.cfg.hop_delay,
            Ev::LinkArrival(Transit {
                pkt,
                link,
                waited: SimTime::ZERO,
            }),
        )?;
        Ok(())
    }

    /// Sends while the window allows. Constant-rate sessions are clocked by ticks instead.
    fn pump(&mut self, now: SimTime, s: usize) -> Result<()> {
        loop {
            let sess = &self.sessions[s];
            let open = sess.flow.is_active()
                && sess.sender.mode == SenderMode::Aimd
                && f64::from(sess.inflight) + 1.0 <= sess.sender.window();
            if !(open && self.generating(now)) {
                return Ok(());
            }
            self.emit(now, s)?;
        }
    }

    fn on_request(&mut self, now: SimTime, chained: bool) -> Result<()> {
        if chained {
            let next = now + self.exp_delay(self.cfg.request_interval);
            if next < self.cfg.duration {
                self.queue.schedule(next, Ev::FlowRequest { chained: true })?;
            }
        }
        let id = FlowId(self.requests);
        self.requests += 1;
        let mut flow = Flow::new(id, self.cfg.packet_rate);
        let link = (0..self.links.len())
            .min_by_key(|&i| (self.links[i].active, i))
            .expect("at least one link");
        if ingress_admission(&mut flow, &self.signals[self.estimate_of(link)], now)? == Verdict::Block {
            self.blocked += 1;
            (self.observer)(&TraceEvent::Blocked { at: now, flow: id });
            return Ok(());
        }
        self.admitted += 1;
        (self.observer)(&TraceEvent::Admitted { at: now, flow: id });
        self.links[link].active += 1;
        let cbr = self.is_cbr(id.0);
        let (mode, codepoint) = if cbr {
            (SenderMode::FixedRateCbr, EcnCodepoint::NotEct)
        } else {
            (SenderMode::Aimd, EcnCodepoint::Ect0)
        };
        let s = self.sessions.len();
        let sender = SenderModel::new(
            mode,
            self.cfg.flow_bandwidth_bps,
            self.base_rtt.as_secs_f64(),
            self.cfg.packet_size,
        );
        let start = if self.cfg.start_window == 0 {
            sender.cap()
        } else {
            f64::from(self.cfg.start_window)
        };
        self.sessions.push(Session {
            flow,
            link,
            sender: sender.with_window(start),
            codepoint,
            inflight: 0,
            last_decrease: None,
            clock: cbr.then(|| CbrClock::new(self.cfg.packet_rate)),
        });
        if self.cfg.holding_time > SimTime::ZERO {
            let until = now + self.exp_delay(self.cfg.holding_time);
            if until < self.cfg.duration {
                self.queue.schedule(until, Ev::FlowDeparture(s))?;
            }
        }
        if cbr {
            self.on_tick(now, s)
        } else {
            self.pump(now, s)
        }
    }

    fn estimate_of(&self, link: usize) -> usize {
        match self.cfg.cle_scope {
            CleScope::Aggregate => 0,
            CleScope::PerLink => link,
        }
    }

    /// Spreads constant-rate sessions evenly through the request sequence.
    fn is_cbr(&self, request: u64) -> bool {
        let f = self.cfg.udp_fraction;
        ((request + 1) as f64 * f).floor() > (request as f64 * f).floor()
    }

    fn on_tick(&mut self, now: SimTime, s: usize) -> Result<()> {
        if !self.sessions[s].flow.is_active() || self.ended || now >= self.cfg.duration {
            return Ok(());
        }
        if !self.paused {
            self.emit(now, s)?;
        }
        let pauses = self.pauses;
        let clock = self.sessions[s]
            .clock
            .as_mut()
            .expect("tick only for constant-rate sessions");
        let next = cbr_next_departure(clock, now, &pauses);
        if next < self.cfg.duration {
            self.queue.schedule(next, Ev::Tick(s))?;
        }
        Ok(())
    }

    fn drop_packet(&mut self, now: SimTime, pkt: &Packet, link: usize) -> Result<()> {
        self.dropped += 1;
        (self.observer)(&TraceEvent::Dropped {
            at: now,
            flow: pkt.flow_id,
            link,
        });
        let s = pkt.flow_id.0 as usize;
        if let Some(idx) = self.session_index(s) {
            if self.sessions[idx].sender.mode == SenderMode::Aimd {
                self.queue.schedule(
                    now + self.base_rtt,
                    Ev::Transport {
                        session: idx,
                        signal: TransportSignal::Loss,
                    },
                )?;
            } else {
                self.sessions[idx].inflight -= 1;
            }
        }
        Ok(())
    }

    fn session_index(&self, request: usize) -> Option<usize> {
        self.sessions
            .binary_search_by_key(&(request as u64), |s| s.flow.id.0)
            .ok()
    }

    fn on_link_arrival(&mut self, now: SimTime, t: Transit) -> Result<()> {
        let link = t.link;
        let ls = &mut self.links[link];
        let qlen = match (&ls.meter, self.cfg.red_queue) {
            (Meter::Red(_) | Meter::Ecn(_), RedQueue::Virtual) => {
                ls.virtual_arrival(now, t.pkt.size_bytes, self.cfg.link_buffer)
            }
            _ => ls.queue_len(),
        };
        match interior_process(t.pkt, &mut ls.meter, qlen, now, &mut self.meter_rng) {
            InteriorOutcome::Forwarded(pkt) => {
                if ls.fifo.len() >= self.cfg.link_buffer {
                    return self.drop_packet(now, &pkt, link);
                }
                ls.fifo.push_back(Transit {
                    pkt,
                    link,
                    waited: SimTime::ZERO,
                });
            }
            InteriorOutcome::Dropped(pkt) => return self.drop_packet(now, &pkt, link),
            InteriorOutcome::Buffered(_) => {}
        }
        if self.links[link].in_service.is_none() {
            self.start_transmission(now, link)?;
        }
        Ok(())
    }

    fn start_transmission(&mut self, now: SimTime, link: usize) -> Result<()> {
        let hop = self.cfg.hop_delay;
        let ls = &mut self.links[link];
        let next = match &mut ls.meter {
            Meter::AdditionalBuffer(ab) => ab.schedule_next().map(|pkt| Transit {
                pkt,
                link,
                waited: SimTime::ZERO,
            }),
            _ => ls.fifo.pop_front(),
        };
        if let Some(mut t) = next {
            t.waited = now.saturating_sub(t.pkt.created_at + hop);
            let micros = (t.pkt.size_bits() as f64 / ls.config.capacity_bps() * 1e6)
                .round()
                .max(1.0) as u64;
            ls.in_service = Some(t);
            self.queue
                .schedule(now + SimTime::from_micros(micros), Ev::Departure(link))?;
        }
        Ok(())
    }

    fn on_departure(&mut self, now: SimTime, link: usize) -> Result<()> {
        let t = self.links[link]
            .in_service
            .take()
            .expect("departure without a packet in service");
        self.queue.schedule(now + self.cfg.hop_delay, Ev::EgressArrival(t))?;
        self.start_transmission(now, link)
    }

    fn on_egress(&mut self, now: SimTime, t: Transit) -> Result<()> {
        let marked = t.pkt.pcn_marked();
        self.delivered += 1;
        if marked {
            self.pcn_marked += 1;
        }
        (self.observer)(&TraceEvent::Delivered {
            at: now,
            flow: t.pkt.flow_id,
            link: t.link,
            marked,
        });
        let e = self.estimate_of(t.link);
        self.cles[e].update(marked);
        self.links[t.link].measured.record(now, t.pkt.size_bytes);
        let idx = (now.as_micros() / self.base_rtt.as_micros()) as usize;
        if let Some(w) = self.windows.get_mut(idx) {
            w.bytes += u64::from(t.pkt.size_bytes);
            w.wait_us += t.waited.as_micros();
            w.packets += 1;
        }
        if let Some(s) = self.session_index(t.pkt.flow_id.0 as usize) {
            if self.sessions[s].sender.mode == SenderMode::Aimd {
                let signal = if t.pkt.codepoint == EcnCodepoint::Ce || (marked && self.echo_marks) {
                    TransportSignal::MarkEcho
                } else {
                    TransportSignal::Ack
                };
                // Remaining hop to the receiver, then three hops back.
                self.queue.schedule(
                    now + SimTime::from_micros(4 * self.cfg.hop_delay.as_micros()),
                    Ev::Transport { session: s, signal },
                )?;
            } else {
                self.sessions[s].inflight -= 1;
            }
        }
        Ok(())
    }

    fn on_transport(&mut self, now: SimTime, s: usize, signal: TransportSignal) -> Result<()> {
        let base_rtt = self.base_rtt;
        let sess = &mut self.sessions[s];
        sess.inflight -= 1;
        let recovering = sess.last_decrease.is_some_and(|t| now < t + base_rtt);
        match signal {
            TransportSignal::Ack => {
                sess.sender.on_feedback(signal);
            }
            TransportSignal::MarkEcho | TransportSignal::Loss if !recovering => {
                sess.sender.on_feedback(signal);
                sess.last_decrease = Some(now);
            }
            _ => {}
        }
        self.pump(now, s)
    }

    fn on_report(&mut self, now: SimTime) -> Result<()> {
        let signals = self.cles.iter().map(|c| c.feedback(now)).collect();
        let rates = self.links.iter_mut().map(|l| l.measured.measure(now)).collect();
        self.queue
            .schedule(now + self.cfg.feedback_delay, Ev::Feedback { signals, rates })?;
        let next = now + self.cfg.report_interval;
        if next <= self.cfg.duration {
            self.queue.schedule(next, Ev::EgressReport)?;
        }
        Ok(())
    }

    fn on_feedback(&mut self, now: SimTime, signals: Vec<AdmissionSignal>, rates: &[f64]) -> Result<()> {
        self.signals = signals;
        for (link, &r) in rates.iter().enumerate() {
            let ls = &self.links[link];
            if classify_precongestion(r, &ls.config) != PreCongestionState::SrPreCongested {
                continue;
            }
            if ls.last_termination.is_some_and(|t| now < t + self.cfg.ft_window) {
                continue;
            }
            let members: Vec<usize> = (0..self.sessions.len())
                .filter(|&s| {
                    let sess = &self.sessions[s];
                    sess.link == link && sess.flow.is_active() && sess.flow.admitted_at().is_some_and(|t| t < now)
                })
                .collect();
            if members.is_empty() {
                continue;
            }
            let mut flows: Vec<Flow> = members.iter().map(|&s| self.sessions[s].flow.clone()).collect();
            let per_flow = r / members.len() as f64;
            let config = self.links[link].config;
            let victims = flow_termination(&mut flows, r, &config, per_flow, self.cfg.termination_policy, now)?;
            for (&s, flow) in members.iter().zip(flows) {
                self.sessions[s].flow = flow;
            }
            for id in &victims {
                (self.observer)(&TraceEvent::Terminated { at: now, flow: *id });
            }
            self.terminated += victims.len() as u64;
            self.links[link].active -= victims.len();
            self.links[link].last_termination = Some(now);
        }
        Ok(())
    }

    fn on_flow_departure(&mut self, now: SimTime, s: usize) -> Result<()> {
        let sess = &mut self.sessions[s];
        if sess.flow.is_active() && sess.flow.admitted_at().is_some_and(|t| t < now) {
            sess.flow.terminate(now)?;
            self.links[sess.link].active -= 1;
        }
        Ok(())
    }

    fn finish(self, events: u64, trace_digest: u64) -> Result<RunOutput> {
        let base = self.base_rtt.as_secs_f64();
        let samples = self
            .windows
            .iter()
            .map(|w| {
                let wait = if w.packets == 0 {
                    0.0
                } else {
                    w.wait_us as f64 / w.packets as f64 / 1e6
                };
                throughput(w.bytes, base + wait)
            })
            .collect::<Result<Vec<f64>>>()?;
        let throughput_bps = if samples.is_empty() {
            0.0
        } else {
            samples.iter().sum::<f64>() / samples.len() as f64
        };
        let record = MetricsRecord::new(
            self.cfg.technique,
            self.cfg.bandwidth_bps,
            self.cfg.seed,
            self.sent,
            self.delivered,
            throughput_bps / 1e6,
            self.admitted,
            self.blocked,
            self.terminated,
        )?;
        Ok(RunOutput {
            record,
            delivered: self.delivered,
            dropped: self.dropped,
            pcn_marked: self.pcn_marked,
            events,
            trace_digest,
        })
    }
}
