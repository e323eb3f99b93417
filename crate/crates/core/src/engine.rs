//! DMA/RDMA engine behaviour and the analytic transfer-time model.
//!
//! The analytic model is deliberately simple: a transfer pays a fixed
//! per-transfer overhead (setup plus descriptor fetches), then streams at
//! the bottleneck rate of the pipeline. The event simulator in `sim` must
//! agree with it to within 2% for transfers of 4 KiB and up; the two are
//! each other's cross-check.

use crate::error::{ModelError, Result};
use crate::fabric::{capacity_check, fabric_share, memory_service_rate};
use crate::link::link_payload_cap;
use crate::scenario::{
    EngineKind, ScenarioConfig, TransferRequest, ValidatedScenario,
};
use crate::units::{Bandwidth, ByteSize, Nanos};

/// One scatter-gather descriptor: a contiguous piece of the transfer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Descriptor {
    pub source_offset: ByteSize,
    pub dest_offset: ByteSize,
    pub length: ByteSize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorList {
    pub entries: Vec<Descriptor>,
}

impl DescriptorList {
    pub fn total_bytes(&self) -> u64 {
        self.entries.iter().map(|d| d.length.bytes()).sum()
    }
}

/// Split a request into page-granular descriptors; all but the last carry
/// exactly `granularity` bytes.
pub fn build_descriptors(req: &TransferRequest, granularity: ByteSize) -> DescriptorList {
    debug_assert!(granularity.bytes() >= 1);
    let g = granularity.bytes();
    let mut entries = Vec::with_capacity(req.size.bytes().div_ceil(g) as usize);
    let mut done = 0u64;
    while done < req.size.bytes() {
        let len = g.min(req.size.bytes() - done);
        entries.push(Descriptor {
            source_offset: ByteSize(req.offset.bytes() + done),
            dest_offset: ByteSize(req.offset.bytes() + done),
            length: ByteSize(len),
        });
        done += len;
    }
    DescriptorList { entries }
}

pub fn descriptor_count(size: ByteSize, granularity: ByteSize) -> u64 {
    size.bytes().div_ceil(granularity.bytes())
}

/// Bytes assigned to each interleaved channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelPlan {
    pub per_channel_sizes: Vec<ByteSize>,
}

/// Equal split; remainder bytes go one each to the first channels.
pub fn channel_split(size: ByteSize, channels: u32) -> ChannelPlan {
    debug_assert!((1..=4).contains(&channels));
    let base = size.bytes() / channels as u64;
    let rem = size.bytes() % channels as u64;
    let per_channel_sizes = (0..channels as u64)
        .map(|i| ByteSize(base + u64::from(i < rem)))
        .collect();
    ChannelPlan { per_channel_sizes }
}

/// Fixed per-transfer cost: completion setup for the operating mode plus
/// descriptor fetches, plus queue management for the queue-based engine.
pub fn engine_overheads(cfg: &ScenarioConfig, req: &TransferRequest) -> Nanos {
    match cfg.engine {
        EngineKind::XdmaDescriptor | EngineKind::QdmaQueue => {
            let dma = cfg.dma();
            let ndesc = descriptor_count(req.size, dma.descriptor_granularity);
            let mut t = dma.setup_overhead.for_mode(cfg.mode)
                + Nanos(dma.descriptor_overhead.value() * ndesc as f64);
            if cfg.engine == EngineKind::QdmaQueue {
                t += cfg.dma().qdma_queue_overhead;
            }
            t
        }
        EngineKind::RdmaWrite => cfg.rdma().verb_setup_write,
        EngineKind::RdmaRead => cfg.rdma().verb_setup_read + cfg.rdma().round_trip,
    }
}

/// Bottleneck streaming rate of the pipeline for this request: the minimum
/// of the engine channels, the interleaving aggregate, the payload-visible
/// link cap, the fabric, and the memory endpoint.
pub fn steady_rate(cfg: &ValidatedScenario, req: &TransferRequest) -> Bandwidth {
    if cfg.engine.is_rdma() {
        return rdma_steady_rate(cfg, req.size);
    }
    let dma = cfg.dma();
    let (fabric_cap, factor) = fabric_share(&cfg.fabric, req.direction);
    let chunk = ByteSize((req.size.bytes() / req.channels as u64).max(1));

    let engine = req.channels as f64 * dma.per_channel_cap(req.direction).value() * factor;
    let mut rate = Bandwidth::gbps(engine);
    if req.channels >= 2 {
        if let Some(cap) = dma.multi_channel_cap(req.direction) {
            rate = rate.min(cap);
        }
    }
    rate.min(link_payload_cap(&cfg.link, chunk))
        .min(fabric_cap)
        .min(memory_service_rate(&cfg.endpoint, chunk))
}

fn rdma_steady_rate(cfg: &ValidatedScenario, size: ByteSize) -> Bandwidth {
    cfg.rdma()
        .payload_rate()
        .min(link_payload_cap(&cfg.link, size))
        .min(memory_service_rate(&cfg.endpoint, size))
}

/// Total transfer time and achieved bandwidth under the analytic model:
/// `T = overheads + size / steady_rate`.
pub fn analytic_transfer_time(
    cfg: &ValidatedScenario,
    req: &TransferRequest,
) -> Result<(Nanos, Bandwidth)> {
    cfg.check_request(req)?;
    capacity_check(&cfg.endpoint, req)?;
    let t = engine_overheads(cfg, req) + Nanos(req.size.as_f64() / steady_rate(cfg, req).value());
    Ok((t, Bandwidth(req.size.as_f64() / t.value())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdmaVerb {
    Read,
    Write,
}

/// RDMA verb timing: writes pay setup then stream; reads additionally pay a
/// round trip before data flows.
pub fn rdma_transfer_time(
    cfg: &ValidatedScenario,
    verb: RdmaVerb,
    size: ByteSize,
) -> Result<(Nanos, Bandwidth)> {
    if !cfg.engine.is_rdma() {
        return Err(ModelError::IncompatibleEngine {
            scenario: cfg.name.clone(),
            engine: cfg.engine.name().into(),
            endpoint: cfg.endpoint.kind.name().into(),
        });
    }
    let rdma = cfg.rdma();
    let setup = match verb {
        RdmaVerb::Write => rdma.verb_setup_write,
        RdmaVerb::Read => rdma.verb_setup_read + rdma.round_trip,
    };
    let t = setup + Nanos(size.as_f64() / rdma_steady_rate(cfg, size).value());
    Ok((t, Bandwidth(size.as_f64() / t.value())))
}

/// InfiniBand generation port speeds in Gb/s.
pub fn generation_preset(name: &str) -> Result<f64> {
    match name.to_ascii_uppercase().as_str() {
        "SDR" => Ok(10.0),
        "DDR" => Ok(20.0),
        "QDR" => Ok(40.0),
        "FDR" => Ok(56.0),
        "EDR" => Ok(100.0),
        "HDR" => Ok(200.0),
        "NDR" => Ok(400.0),
        other => Err(ModelError::UnknownGeneration(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{builtin_scenario, validate_scenario, Direction};
    use crate::units::MIB;

    fn scenario(name: &str) -> ValidatedScenario {
        validate_scenario(builtin_scenario(name).unwrap()).unwrap()
    }

    fn req(dir: Direction, size: u64, channels: u32) -> TransferRequest {
        TransferRequest::new(dir, ByteSize(size), channels)
    }

    #[test]
    fn descriptor_counts() {
        let r = req(Direction::HostToCard, MIB, 1);
        let list = build_descriptors(&r, ByteSize::kib(4));
        assert_eq!(list.entries.len(), 256);
        assert_eq!(list.total_bytes(), MIB);

        let r = req(Direction::HostToCard, 4096, 1);
        assert_eq!(build_descriptors(&r, ByteSize::kib(4)).entries.len(), 1);

        let r = req(Direction::HostToCard, 10_000, 1);
        let list = build_descriptors(&r, ByteSize::kib(4));
        let lens: Vec<u64> = list.entries.iter().map(|d| d.length.bytes()).collect();
        assert_eq!(lens, vec![4096, 4096, 1808]);
    }

    #[test]
    fn split_rules() {
        let plan = channel_split(ByteSize(MIB), 4);
        assert!(plan.per_channel_sizes.iter().all(|s| s.bytes() == 262_144));

        let plan = channel_split(ByteSize(10), 4);
        let sizes: Vec<u64> = plan.per_channel_sizes.iter().map(|s| s.bytes()).collect();
        assert_eq!(sizes, vec![3, 3, 2, 2]);

        let plan = channel_split(ByteSize(64), 1);
        assert_eq!(plan.per_channel_sizes, vec![ByteSize(64)]);
    }

    #[test]
    fn overhead_arithmetic() {
        let mut cfg = builtin_scenario("ddr-xdma").unwrap();
        {
            let d = cfg.dma.as_mut().unwrap();
            d.setup_overhead.msix_interrupt = Nanos::micros(5.0);
            d.setup_overhead.polled = Nanos::ZERO;
            d.descriptor_overhead = Nanos::ns(10.0);
        }
        let r = req(Direction::HostToCard, 4096, 1);
        let t = engine_overheads(&cfg, &r);
        assert!((t.value() - 5010.0).abs() < 1e-9);

        cfg.mode = crate::scenario::OperatingMode::Polled;
        let t = engine_overheads(&cfg, &r);
        assert!((t.value() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn single_channel_c2h_is_engine_bound() {
        let s = scenario("ddr-xdma");
        let r = req(Direction::CardToHost, MIB, 1);
        let rate = steady_rate(&s, &r);
        let expected = s.dma().per_channel_cap_c2h;
        assert!(rate.approx_eq(expected), "{rate} vs {expected}");
    }

    #[test]
    fn contention_derates_single_channel() {
        let s = scenario("ddr-microblaze");
        let r = req(Direction::CardToHost, MIB, 1);
        let rate = steady_rate(&s, &r);
        let expected = s.dma().per_channel_cap_c2h.value() * s.fabric.contention_factor_c2h;
        assert!((rate.value() - expected).abs() < 1e-9);
    }

    #[test]
    fn contention_factor_one_reproduces_quiet_fabric() {
        let mut cfg = builtin_scenario("ddr-microblaze").unwrap();
        cfg.fabric.contention_factor_h2c = 1.0;
        cfg.fabric.contention_factor_c2h = 1.0;
        let contended = validate_scenario(cfg).unwrap();
        let quiet = scenario("ddr-xdma");
        for ch in 1..=4 {
            let r = req(Direction::CardToHost, MIB, ch);
            assert_eq!(
                steady_rate(&contended, &r).value(),
                steady_rate(&quiet, &r).value()
            );
        }
    }

    #[test]
    fn analytic_example() {
        // setup 10 us, steady 12 GB/s, 1 MiB => T ~ 97.4 us, BW ~ 10.77.
        let mut cfg = builtin_scenario("ddr-xdma").unwrap();
        {
            let d = cfg.dma.as_mut().unwrap();
            d.setup_overhead.msix_interrupt = Nanos::micros(10.0);
            d.descriptor_overhead = Nanos::ZERO;
            d.per_channel_cap_c2h = Bandwidth::gbps(12.0);
        }
        let s = validate_scenario(cfg).unwrap();
        let r = req(Direction::CardToHost, MIB, 1);
        let (t, bw) = analytic_transfer_time(&s, &r).unwrap();
        assert!((t.value() / 1000.0 - 97.38).abs() < 0.01, "T = {} ns", t.value());
        assert!((bw.value() - 10.77).abs() < 0.01, "BW = {bw}");
    }

    #[test]
    fn capacity_error_propagates() {
        let s = scenario("bram-xdma");
        let r = req(Direction::HostToCard, MIB + 1, 1);
        assert!(matches!(
            analytic_transfer_time(&s, &r),
            Err(ModelError::CapacityExceeded { .. })
        ));
    }

    #[test]
    fn rdma_rates_and_structure() {
        let s = scenario("rdma-bf2-read");
        // 100 Gb/s port: raw 12.5 GB/s bound, slightly derated by framing.
        let rate = rdma_steady_rate(&s, ByteSize::mib(1));
        assert!(rate.value() < 12.5 && rate.value() > 12.0, "{rate}");

        let (t_read, _) = rdma_transfer_time(&s, RdmaVerb::Read, ByteSize::mib(1)).unwrap();
        let (t_write, _) = rdma_transfer_time(&s, RdmaVerb::Write, ByteSize::mib(1)).unwrap();
        assert!(t_read.value() >= t_write.value());

        let fpga = scenario("ddr-xdma");
        assert!(matches!(
            rdma_transfer_time(&fpga, RdmaVerb::Read, ByteSize::mib(1)),
            Err(ModelError::IncompatibleEngine { .. })
        ));
    }

    #[test]
    fn generation_presets() {
        for (name, gbps) in [
            ("SDR", 10.0),
            ("DDR", 20.0),
            ("QDR", 40.0),
            ("FDR", 56.0),
            ("EDR", 100.0),
            ("HDR", 200.0),
            ("NDR", 400.0),
        ] {
            assert_eq!(generation_preset(name).unwrap(), gbps);
        }
        assert!(matches!(
            generation_preset("XDR"),
            Err(ModelError::UnknownGeneration(_))
        ));
    }
}
