//! Property suites over the packetizer, the channel splitter, the analytic
//! model, and the config round trip.

use nicsim::engine::{analytic_transfer_time, channel_split, descriptor_count};
use nicsim::harness::standard_sizes;
use nicsim::link::{packetize, tlp_payloads};
use nicsim::scenario::{
    builtin_scenario, validate_scenario, PcieLinkConfig, ScenarioConfig,
};
use nicsim::units::ByteSize;
use nicsim::{Direction, TransferRequest};

use proptest::prelude::*;

fn arb_link() -> impl Strategy<Value = PcieLinkConfig> {
    (
        prop_oneof![Just(64u32), Just(128), Just(256), Just(512), Just(1024), Just(2048), Just(4096)],
        12u32..=16,
        0u32..=24,
    )
        .prop_map(|(mps, header, framing)| PcieLinkConfig {
            max_payload_bytes: mps,
            tlp_header_bytes: header,
            tlp_framing_bytes: framing,
            ..PcieLinkConfig::gen3_x16()
        })
}

proptest! {
    #[test]
    fn packetize_conserves_payload(size in 1u64..=4 << 20, link in arb_link()) {
        let b = packetize(ByteSize(size), &link);
        prop_assert_eq!(b.payload_bytes.bytes(), size);
        prop_assert_eq!(
            b.wire_bytes.bytes(),
            size + b.tlp_count * link.overhead_per_tlp() as u64
        );
        let per_tlp: u64 = tlp_payloads(ByteSize(size), &link).map(|p| p.bytes()).sum();
        prop_assert_eq!(per_tlp, size);
    }

    #[test]
    fn packetize_efficiency_bounds(size in 1u64..=4 << 20, link in arb_link()) {
        let b = packetize(ByteSize(size), &link);
        prop_assert!(b.efficiency > 0.0 && b.efficiency < 1.0);
        // Full-sized TLPs are the most efficient use of the link.
        let full = link.max_payload_bytes as f64
            / (link.max_payload_bytes + link.overhead_per_tlp()) as f64;
        prop_assert!(b.efficiency <= full + 1e-12);
    }

    #[test]
    fn packetize_tlp_count_monotone(size in 1u64..=1 << 20, extra in 1u64..=1 << 16, link in arb_link()) {
        let a = packetize(ByteSize(size), &link);
        let b = packetize(ByteSize(size + extra), &link);
        prop_assert!(b.tlp_count >= a.tlp_count);
        prop_assert!(b.wire_bytes.bytes() > a.wire_bytes.bytes());
    }

    #[test]
    fn channel_split_conserves_and_balances(size in 1u64..=4 << 20, channels in 1u32..=4) {
        let plan = channel_split(ByteSize(size), channels);
        let total: u64 = plan.per_channel_sizes.iter().map(|s| s.bytes()).sum();
        prop_assert_eq!(total, size);
        let max = plan.per_channel_sizes.iter().map(|s| s.bytes()).max().unwrap();
        let min = plan.per_channel_sizes.iter().map(|s| s.bytes()).min().unwrap();
        prop_assert!(max - min <= 1, "split must be even to within one byte");
    }

    #[test]
    fn descriptor_count_covers_size(size in 1u64..=4 << 20) {
        let n = descriptor_count(ByteSize(size), ByteSize(4096));
        prop_assert!(n * 4096 >= size && (n - 1) * 4096 < size);
    }

    #[test]
    fn analytic_time_monotone_in_size(
        scenario in prop_oneof![Just("ddr-xdma"), Just("ddr-microblaze"), Just("ddr-petalinux")],
        channels in 1u32..=4,
        base in 64u64..=1 << 19,
        extra in 1u64..=1 << 19,
    ) {
        let cfg = validate_scenario(builtin_scenario(scenario).unwrap()).unwrap();
        for dir in Direction::ALL {
            let (t1, _) = analytic_transfer_time(&cfg, &TransferRequest::new(dir, ByteSize(base), channels)).unwrap();
            let (t2, _) = analytic_transfer_time(&cfg, &TransferRequest::new(dir, ByteSize(base + extra), channels)).unwrap();
            prop_assert!(t2.value() > t1.value(), "more bytes cannot be faster");
        }
    }

    #[test]
    fn scenario_toml_round_trip_with_overrides(
        cap in 1.0f64..=15.8,
        mps in prop_oneof![Just(128u32), Just(256), Just(512)],
        channels in 1u32..=4,
    ) {
        let mut cfg = builtin_scenario("ddr-xdma").unwrap();
        cfg.link.max_payload_bytes = mps;
        if let Some(d) = cfg.dma.as_mut() {
            d.per_channel_cap_c2h = nicsim::Bandwidth::gbps(cap);
            d.max_channels = channels;
        }
        let back = ScenarioConfig::from_toml(&cfg.to_toml()).unwrap();
        prop_assert_eq!(cfg, back);
    }
}

#[test]
fn interleaving_helps_c2h_but_caps_h2c() {
    // At 1 MiB the per-transfer overheads are amortized. Interleaved C2H
    // channels outrun a single channel, while the tighter H2C aggregate
    // ceiling pulls multi-channel H2C below its single-channel peak.
    let cfg = validate_scenario(builtin_scenario("ddr-xdma").unwrap()).unwrap();
    let size = *standard_sizes().last().unwrap();
    let bw = |dir, ch| {
        analytic_transfer_time(&cfg, &TransferRequest::new(dir, size, ch))
            .unwrap()
            .1
            .value()
    };
    assert!(bw(Direction::CardToHost, 4) > bw(Direction::CardToHost, 1));
    assert!(bw(Direction::HostToCard, 4) < bw(Direction::HostToCard, 1));
}
