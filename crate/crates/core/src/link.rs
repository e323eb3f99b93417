//! PCIe transaction-layer model: splitting a payload into TLPs, accounting
//! for header/framing bytes on the wire, and serialization time on the lane
//! group. Link-layer retries and flow-control credits are absorbed into the
//! link's `effective_cap`.

use crate::scenario::PcieLinkConfig;
use crate::units::{transfer_time, Bandwidth, ByteSize, Nanos};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlpBreakdown {
    pub tlp_count: u64,
    pub payload_bytes: ByteSize,
    pub wire_bytes: ByteSize,
    /// payload / wire, in (0, 1].
    pub efficiency: f64,
}

/// Split `size` bytes into TLPs of at most `max_payload_bytes`; the last TLP
/// carries the remainder.
pub fn packetize(size: ByteSize, link: &PcieLinkConfig) -> TlpBreakdown {
    debug_assert!(size.bytes() >= 1);
    let mps = link.max_payload_bytes as u64;
    let tlp_count = size.bytes().div_ceil(mps);
    let wire = size.bytes() + tlp_count * link.overhead_per_tlp() as u64;
    TlpBreakdown {
        tlp_count,
        payload_bytes: size,
        wire_bytes: ByteSize(wire),
        efficiency: size.as_f64() / wire as f64,
    }
}

/// The payload-visible ceiling of the link for a transfer of `size`:
/// effective wire bandwidth derated by TLP overhead.
pub fn link_payload_cap(link: &PcieLinkConfig, size: ByteSize) -> Bandwidth {
    let eff = packetize(size, link).efficiency;
    Bandwidth::gbps(link.effective_cap.value() * eff)
}

/// Wire-time of `wire_bytes` on the link.
pub fn serialize_time(wire_bytes: ByteSize, link: &PcieLinkConfig) -> Nanos {
    transfer_time(wire_bytes, link.effective_cap)
}

/// Per-TLP payload sizes for a transfer, in order.
pub fn tlp_payloads(size: ByteSize, link: &PcieLinkConfig) -> impl Iterator<Item = ByteSize> + '_ {
    let mps = link.max_payload_bytes as u64;
    let full = size.bytes() / mps;
    let rem = size.bytes() % mps;
    (0..full)
        .map(move |_| ByteSize(mps))
        .chain((rem > 0).then_some(ByteSize(rem)))
}
