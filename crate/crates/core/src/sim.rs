//! Deterministic discrete-event replay of a transfer over the stage servers.
//!
//! The event model follows the data path at TLP granularity: descriptors are
//! fetched over the link, each channel injects the descriptor's TLPs at its
//! engine rate, TLPs interleave round-robin onto the shared link server and
//! then flow through the fabric and memory endpoint. A final completion
//! event carries the operating mode's per-transfer overhead.
//!
//! Event ordering is fully specified (time, then kind, then stage, then
//! channel) so runs are byte-reproducible across platforms. The optional
//! jitter term perturbs stage service times from a seeded generator, so even
//! jittered runs are reproducible per seed.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{build_descriptors, channel_split, engine_overheads};
use crate::error::{ModelError, Result};
use crate::fabric::{capacity_check, fabric_share, memory_service_rate, ArbitrationPolicy, StageServer};
use crate::link::tlp_payloads;
use crate::scenario::{Direction, TransferRequest, ValidatedScenario};
use crate::units::{Bandwidth, ByteSize, Nanos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Aggregate,
    Link,
    Fabric,
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    TransferStart,
    DescriptorFetched,
    TlpInjected,
    StageDone(Stage),
    Completion,
}

impl EventKind {
    fn rank(self) -> u8 {
        match self {
            EventKind::TransferStart => 0,
            EventKind::DescriptorFetched => 1,
            EventKind::TlpInjected => 2,
            EventKind::StageDone(_) => 3,
            EventKind::Completion => 4,
        }
    }

    fn stage_rank(self) -> u8 {
        match self {
            EventKind::StageDone(s) => s as u8,
            _ => 0,
        }
    }

    fn name(self) -> &'static str {
        match self {
            EventKind::TransferStart => "transfer_start",
            EventKind::DescriptorFetched => "descriptor_fetched",
            EventKind::TlpInjected => "tlp_injected",
            EventKind::StageDone(Stage::Aggregate) => "stage_done:aggregate",
            EventKind::StageDone(Stage::Link) => "stage_done:link",
            EventKind::StageDone(Stage::Fabric) => "stage_done:fabric",
            EventKind::StageDone(Stage::Endpoint) => "stage_done:endpoint",
            EventKind::Completion => "completion",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Event {
    pub time: Nanos,
    pub kind: EventKind,
    pub channel: u32,
    pub payload: ByteSize,
}

impl Event {
    fn key(&self) -> (f64, u8, u8, u32) {
        (self.time.value(), self.kind.rank(), self.kind.stage_rank(), self.channel)
    }
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}
impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ta, ka, sa, ca) = self.key();
        let (tb, kb, sb, cb) = other.key();
        ta.total_cmp(&tb).then(ka.cmp(&kb)).then(sa.cmp(&sb)).then(ca.cmp(&cb))
    }
}

/// Min-heap of pending events; pop never goes backwards in time.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<std::cmp::Reverse<Event>>,
    last_popped: Option<Nanos>,
}

impl EventQueue {
    pub fn push(&mut self, ev: Event) {
        self.heap.push(std::cmp::Reverse(ev));
    }

    pub fn pop(&mut self) -> Result<Option<Event>> {
        let Some(std::cmp::Reverse(ev)) = self.heap.pop() else {
            return Ok(None);
        };
        if let Some(last) = self.last_popped {
            if ev.time.value() < last.value() {
                return Err(ModelError::InvariantViolation {
                    last: last.value(),
                    now: ev.time.value(),
                });
            }
        }
        self.last_popped = Some(ev.time);
        Ok(Some(ev))
    }
}

/// Outcome of one simulated transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub scenario: String,
    pub direction: Direction,
    pub channels: u32,
    pub size: ByteSize,
    pub total_time: Nanos,
    pub bandwidth: Bandwidth,
    /// (server name, cumulative busy time).
    pub stage_busy: Vec<(&'static str, Nanos)>,
    pub per_channel_bytes: Vec<u64>,
    pub events_processed: u64,
}

impl SimResult {
    pub fn stage_busy_time(&self, name: &str) -> Option<Nanos> {
        self.stage_busy.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
    }
}

pub struct RunOptions<'a> {
    pub seed: u64,
    /// Relative jitter amplitude on stage service times; `None` disables.
    pub jitter: Option<f64>,
    /// One tab-separated line per event: time_ns, kind, channel, payload.
    pub trace: Option<&'a mut dyn Write>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        RunOptions { seed: 0, jitter: None, trace: None }
    }
}

struct ChannelState {
    /// Descriptor lengths still to fetch, in order.
    descriptors: Vec<ByteSize>,
    next_desc: usize,
    /// TLPs of the in-flight descriptor not yet injected-and-processed.
    tlps_pending: u64,
    completed_bytes: u64,
}

pub fn run_transfer(
    cfg: &ValidatedScenario,
    req: &TransferRequest,
    seed: u64,
) -> Result<SimResult> {
    run_transfer_opts(cfg, req, RunOptions { seed, ..Default::default() })
}

pub fn run_transfer_opts(
    cfg: &ValidatedScenario,
    req: &TransferRequest,
    mut opts: RunOptions<'_>,
) -> Result<SimResult> {
    cfg.check_request(req)?;
    capacity_check(&cfg.endpoint, req)?;

    let is_rdma = cfg.engine.is_rdma();
    let channels = if is_rdma { 1 } else { req.channels };
    let (fabric_cap, factor) = fabric_share(&cfg.fabric, req.direction);
    let chunk = ByteSize((req.size.bytes() / channels as u64).max(1));

    // One engine server per channel, shared servers for everything behind.
    let engine_rate = if is_rdma {
        cfg.rdma().payload_rate()
    } else {
        Bandwidth::gbps(cfg.dma().per_channel_cap(req.direction).value() * factor)
    };
    let mut engines: Vec<StageServer> = (0..channels)
        .map(|_| StageServer::new("engine", engine_rate, ArbitrationPolicy::Fcfs))
        .collect();
    let mut aggregate = (!is_rdma && channels >= 2)
        .then(|| cfg.dma().multi_channel_cap(req.direction))
        .flatten()
        .map(|cap| StageServer::new("aggregate", cap, ArbitrationPolicy::Fcfs));
    let mut link_srv = StageServer::new("link", cfg.link.effective_cap, ArbitrationPolicy::RoundRobin);
    let mut fabric_srv =
        (!is_rdma).then(|| StageServer::new("fabric", fabric_cap, ArbitrationPolicy::Fcfs));
    let mut endpoint_srv = StageServer::new(
        "endpoint",
        memory_service_rate(&cfg.endpoint, chunk),
        ArbitrationPolicy::Fcfs,
    );
    let mut endpoint_latency_due = true;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut jitter = |service: Nanos, rng: &mut ChaCha8Rng| -> Nanos {
        match opts.jitter {
            Some(a) if a > 0.0 => Nanos(service.value() * (1.0 + rng.gen_range(-a..=a))),
            _ => service,
        }
    };

    let plan = channel_split(req.size, channels);
    let desc_granularity = if is_rdma {
        // RDMA has no scatter-gather descriptors on this path; treat the
        // whole message as one unit and charge no fetch cost.
        req.size
    } else {
        cfg.dma().descriptor_granularity
    };
    let desc_overhead = if is_rdma { Nanos::ZERO } else { cfg.dma().descriptor_overhead };

    let mut channel_offset = req.offset.bytes();
    let mut states: Vec<ChannelState> = plan
        .per_channel_sizes
        .iter()
        .map(|&sz| {
            let sub = TransferRequest {
                direction: req.direction,
                size: sz,
                channels: 1,
                offset: ByteSize(channel_offset),
            };
            channel_offset += sz.bytes();
            ChannelState {
                descriptors: build_descriptors(&sub, desc_granularity)
                    .entries
                    .iter()
                    .map(|d| d.length)
                    .collect(),
                next_desc: 0,
                tlps_pending: 0,
                completed_bytes: 0,
            }
        })
        .collect();

    let completion_overhead = engine_overheads(cfg, req);
    let tlp_overhead = ByteSize(cfg.link.overhead_per_tlp() as u64);

    let mut queue = EventQueue::default();
    queue.push(Event {
        time: Nanos::ZERO,
        kind: EventKind::TransferStart,
        channel: 0,
        payload: req.size,
    });

    let mut remaining = req.size.bytes();
    let mut total_time = Nanos::ZERO;
    let mut events_processed: u64 = 0;

    // Fetch the next descriptor for a channel; no-op when the channel is
    // drained. Descriptor reads are small control transactions, so they are
    // charged as plain latency rather than link occupancy.
    let request_fetch =
        |ch: usize, now: Nanos, states: &mut [ChannelState], queue: &mut EventQueue| {
            let st = &mut states[ch];
            if st.next_desc >= st.descriptors.len() {
                return;
            }
            let len = st.descriptors[st.next_desc];
            st.next_desc += 1;
            queue.push(Event {
                time: now + desc_overhead,
                kind: EventKind::DescriptorFetched,
                channel: ch as u32,
                payload: len,
            });
        };

    while let Some(ev) = queue.pop()? {
        events_processed += 1;
        if let Some(trace) = opts.trace.as_deref_mut() {
            writeln!(
                trace,
                "{:.3}\t{}\t{}\t{}",
                ev.time.value(),
                ev.kind.name(),
                ev.channel,
                ev.payload.bytes()
            )?;
        }
        match ev.kind {
            EventKind::TransferStart => {
                for ch in 0..channels as usize {
                    request_fetch(ch, ev.time, &mut states, &mut queue);
                }
            }
            EventKind::DescriptorFetched => {
                // Inject this descriptor's TLPs back to back at the engine
                // rate; they queue behind whatever the channel already has.
                let ch = ev.channel as usize;
                let engine = &mut engines[ch];
                let mut count = 0u64;
                for payload in tlp_payloads(ev.payload, &cfg.link) {
                    let t = engine.serve(ev.time, payload);
                    queue.push(Event {
                        time: t,
                        kind: EventKind::TlpInjected,
                        channel: ev.channel,
                        payload,
                    });
                    count += 1;
                }
                states[ch].tlps_pending += count;
            }
            EventKind::TlpInjected => {
                let ch = ev.channel as usize;
                states[ch].tlps_pending -= 1;
                if states[ch].tlps_pending == 0 {
                    // Last TLP of the descriptor is on its way; fetch the
                    // next descriptor for this channel.
                    request_fetch(ch, ev.time, &mut states, &mut queue);
                }
                let (stage, done) = match aggregate.as_mut() {
                    Some(agg) => {
                        let service = jitter(Nanos(ev.payload.as_f64() / agg.rate.value()), &mut rng);
                        (Stage::Aggregate, agg.serve_for(ev.time, service))
                    }
                    None => {
                        let wire = ByteSize(ev.payload.bytes() + tlp_overhead.bytes());
                        let service = jitter(Nanos(wire.as_f64() / link_srv.rate.value()), &mut rng);
                        (Stage::Link, link_srv.serve_for(ev.time, service))
                    }
                };
                queue.push(Event { time: done, kind: EventKind::StageDone(stage), ..ev });
            }
            EventKind::StageDone(Stage::Aggregate) => {
                let wire = ByteSize(ev.payload.bytes() + tlp_overhead.bytes());
                let service = jitter(Nanos(wire.as_f64() / link_srv.rate.value()), &mut rng);
                let done = link_srv.serve_for(ev.time, service);
                queue.push(Event { time: done, kind: EventKind::StageDone(Stage::Link), ..ev });
            }
            EventKind::StageDone(Stage::Link) => {
                let (stage, done) = match fabric_srv.as_mut() {
                    Some(fab) => {
                        let service = jitter(Nanos(ev.payload.as_f64() / fab.rate.value()), &mut rng);
                        (Stage::Fabric, fab.serve_for(ev.time, service))
                    }
                    None => {
                        let done = serve_endpoint(
                            &mut endpoint_srv,
                            &mut endpoint_latency_due,
                            cfg.endpoint.access_latency,
                            ev,
                            &mut jitter,
                            &mut rng,
                        );
                        (Stage::Endpoint, done)
                    }
                };
                queue.push(Event { time: done, kind: EventKind::StageDone(stage), ..ev });
            }
            EventKind::StageDone(Stage::Fabric) => {
                let done = serve_endpoint(
                    &mut endpoint_srv,
                    &mut endpoint_latency_due,
                    cfg.endpoint.access_latency,
                    ev,
                    &mut jitter,
                    &mut rng,
                );
                queue.push(Event {
                    time: done,
                    kind: EventKind::StageDone(Stage::Endpoint),
                    ..ev
                });
            }
            EventKind::StageDone(Stage::Endpoint) => {
                states[ev.channel as usize].completed_bytes += ev.payload.bytes();
                remaining -= ev.payload.bytes();
                if remaining == 0 {
                    queue.push(Event {
                        time: ev.time + completion_overhead,
                        kind: EventKind::Completion,
                        channel: 0,
                        payload: req.size,
                    });
                }
            }
            EventKind::Completion => {
                total_time = ev.time;
            }
        }
    }

    debug_assert_eq!(remaining, 0);
    let mut stage_busy = vec![("link", link_srv.busy_time)];
    if let Some(agg) = &aggregate {
        stage_busy.push(("aggregate", agg.busy_time));
    }
    if let Some(fab) = &fabric_srv {
        stage_busy.push(("fabric", fab.busy_time));
    }
    stage_busy.push(("endpoint", endpoint_srv.busy_time));
    for (i, e) in engines.iter().enumerate() {
        debug_assert!(e.busy_time.value() <= total_time.value() + 1e-6);
        let _ = i;
    }
    stage_busy.push((
        "engine",
        Nanos(engines.iter().map(|e| e.busy_time.value()).fold(0.0, f64::max)),
    ));

    Ok(SimResult {
        scenario: cfg.name.clone(),
        direction: req.direction,
        channels,
        size: req.size,
        total_time,
        bandwidth: Bandwidth(req.size.as_f64() / total_time.value()),
        stage_busy,
        per_channel_bytes: states.iter().map(|s| s.completed_bytes).collect(),
        events_processed,
    })
}

fn serve_endpoint(
    endpoint: &mut StageServer,
    latency_due: &mut bool,
    latency: Nanos,
    ev: Event,
    jitter: &mut impl FnMut(Nanos, &mut ChaCha8Rng) -> Nanos,
    rng: &mut ChaCha8Rng,
) -> Nanos {
    let mut service = jitter(Nanos(ev.payload.as_f64() / endpoint.rate.value()), rng);
    if *latency_due {
        // One-time first-access latency; subsequent accesses pipeline.
        service += latency;
        *latency_due = false;
    }
    endpoint.serve_for(ev.time, service)
}

/// One point of a sweep; failed points are carried, not fatal.
#[derive(Debug)]
pub struct SweepPoint {
    pub direction: Direction,
    pub channels: u32,
    pub size: ByteSize,
    pub result: Result<SimResult>,
}

pub fn run_sweep(
    cfg: &ValidatedScenario,
    directions: &[Direction],
    channel_counts: &[u32],
    sizes: &[ByteSize],
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if directions.is_empty() {
        return Err(ModelError::EmptyPlan("no directions".into()));
    }
    if channel_counts.is_empty() {
        return Err(ModelError::EmptyPlan("no channel counts".into()));
    }
    if sizes.is_empty() {
        return Err(ModelError::EmptyPlan("no sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ModelError::EmptyPlan("sizes must be strictly ascending".into()));
    }

    let mut out = Vec::with_capacity(directions.len() * channel_counts.len() * sizes.len());
    for &direction in directions {
        for &channels in channel_counts {
            for &size in sizes {
                let req = TransferRequest::new(direction, size, channels);
                out.push(SweepPoint {
                    direction,
                    channels,
                    size,
                    result: run_transfer(cfg, &req, seed),
                });
            }
        }
    }
    Ok(out)
}
