//! AXI fabric arbitration and memory-endpoint service model. Shared between
//! the analytic engine model and the event simulator.

use crate::error::{ModelError, Result};
use crate::scenario::{AxiFabricConfig, Direction, MemoryEndpointConfig, TransferRequest};
use crate::units::{Bandwidth, ByteSize, Nanos};

/// A rate-limited service stage inside one simulation instance. Owned by
/// exactly one instance; never shared.
#[derive(Debug, Clone)]
pub struct StageServer {
    pub name: &'static str,
    pub rate: Bandwidth,
    pub policy: ArbitrationPolicy,
    pub busy_until: Nanos,
    pub busy_time: Nanos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArbitrationPolicy {
    Fcfs,
    RoundRobin,
}

impl StageServer {
    pub fn new(name: &'static str, rate: Bandwidth, policy: ArbitrationPolicy) -> Self {
        StageServer {
            name,
            rate,
            policy,
            busy_until: Nanos::ZERO,
            busy_time: Nanos::ZERO,
        }
    }

    /// Serve `bytes` no earlier than `ready`; returns completion time.
    /// `busy_until` is monotonically non-decreasing over a run.
    pub fn serve(&mut self, ready: Nanos, bytes: ByteSize) -> Nanos {
        self.serve_for(ready, Nanos(bytes.as_f64() / self.rate.value()))
    }

    /// Serve an explicit duration (descriptor fetches, latency hits).
    pub fn serve_for(&mut self, ready: Nanos, service: Nanos) -> Nanos {
        let start = self.busy_until.max(ready);
        self.busy_until = start + service;
        self.busy_time += service;
        self.busy_until
    }
}

/// Fits iff `offset + size <= capacity`. Direction-independent.
pub fn capacity_check(endpoint: &MemoryEndpointConfig, req: &TransferRequest) -> Result<()> {
    let end = req.offset.bytes().saturating_add(req.size.bytes());
    if end <= endpoint.capacity.bytes() {
        Ok(())
    } else {
        Err(ModelError::CapacityExceeded {
            requested: req.size,
            offset: req.offset,
            capacity: endpoint.capacity,
            overflow: end - endpoint.capacity.bytes(),
        })
    }
}

/// Service rate of the endpoint for accesses of `chunk` bytes. Accesses
/// below the burst size pay a linear alignment penalty; at or above it the
/// endpoint runs at peak.
pub fn memory_service_rate(endpoint: &MemoryEndpointConfig, chunk: ByteSize) -> Bandwidth {
    debug_assert!(chunk.bytes() >= 1);
    let burst = endpoint.burst_bytes as f64;
    let frac = (chunk.as_f64() / burst).min(1.0);
    Bandwidth::gbps(endpoint.peak_bw.value() * frac)
}

/// Aggregate fabric cap plus the per-direction contention factor. The cap
/// bounds the whole pipeline; the factor derates the per-channel engine
/// caps when a second master sits on the interconnect.
pub fn fabric_share(fabric: &AxiFabricConfig, direction: Direction) -> (Bandwidth, f64) {
    let factor = if fabric.contending_master {
        match direction {
            Direction::HostToCard => fabric.contention_factor_h2c,
            Direction::CardToHost => fabric.contention_factor_c2h,
        }
    } else {
        1.0
    };
    (fabric.cap, factor)
}
