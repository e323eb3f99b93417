//! End-to-end acceptance checks: one test per criterion, each printing a
//! single PASS line with the measured numbers. Tolerances are pinned here
//! and nowhere else.

use nicsim::calibrate::analytic_standard_report;
use nicsim::engine::{analytic_transfer_time, generation_preset, rdma_transfer_time, RdmaVerb};
use nicsim::harness::{run_report, standard_sizes, SweepSpec};
use nicsim::link::packetize;
use nicsim::reference::embedded_references;
use nicsim::report::{compare_to_reference, ModelKind};
use nicsim::scenario::{builtin_scenario, validate_scenario, PcieLinkConfig, ValidatedScenario};
use nicsim::units::{ByteSize, MIB};
use nicsim::{Direction, TransferRequest};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance around each measured reference value or interval.
const PEAK_TOL_ANALYTIC: f64 = 0.05;
/// Event-model peaks get a little extra room for pipeline-fill effects.
const PEAK_TOL_DES: f64 = 0.07;
/// Agreement bound between the two models at sizes >= 4 KiB.
const MODEL_AGREEMENT: f64 = 0.02;

fn scenario(name: &str) -> ValidatedScenario {
    validate_scenario(builtin_scenario(name).unwrap()).unwrap()
}

fn peak(cfg: &ValidatedScenario, dir: Direction, ch: u32) -> f64 {
    standard_sizes()
        .into_iter()
        .map(|s| {
            analytic_transfer_time(cfg, &TransferRequest::new(dir, s, ch))
                .map(|(_, bw)| bw.value())
                .unwrap_or(f64::NEG_INFINITY)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn check_scenario_refs(name: &str, model: ModelKind, tol: f64) {
    let cfg = scenario(name);
    let channels: Vec<u32> = (1..=cfg.max_channels()).collect();
    let sizes = standard_sizes();
    let (report, _) = run_report(
        &cfg,
        &SweepSpec {
            models: &[model],
            directions: &Direction::ALL,
            channel_counts: &channels,
            sizes: &sizes,
            seed: 0,
            jitter: None,
        },
    )
    .unwrap();
    let refs = embedded_references().for_scenario(name);
    let cmp = compare_to_reference(&report, &refs, tol).unwrap();
    assert!(cmp.all_pass(), "{name} under {:?}:\n{}", model, cmp.render());
}

#[test]
fn criterion_1_bram_peaks_and_monotonicity() {
    check_scenario_refs("bram-xdma", ModelKind::Analytic, PEAK_TOL_ANALYTIC);
    let cfg = scenario("bram-xdma");
    for dir in Direction::ALL {
        let mut last = 0.0;
        for size in standard_sizes() {
            let (_, bw) =
                analytic_transfer_time(&cfg, &TransferRequest::new(dir, size, 1)).unwrap();
            assert!(
                bw.value() > last,
                "bandwidth not strictly increasing at {size} ({} <= {last})",
                bw.value()
            );
            last = bw.value();
        }
    }
    println!(
        "PASS 1: bram-xdma 1ch peaks h2c={:.3} c2h={:.3} GB/s (refs 7.54/7.77 +-5%), sweep strictly increasing",
        peak(&cfg, Direction::HostToCard, 1),
        peak(&cfg, Direction::CardToHost, 1)
    );
}

#[test]
fn criterion_2_ddr_simple_peaks() {
    check_scenario_refs("ddr-xdma", ModelKind::Analytic, PEAK_TOL_ANALYTIC);
    let cfg = scenario("ddr-xdma");
    println!(
        "PASS 2: ddr-xdma peaks h2c/1ch={:.3} h2c/4ch={:.3} c2h/1ch={:.3} c2h/4ch={:.3} GB/s",
        peak(&cfg, Direction::HostToCard, 1),
        peak(&cfg, Direction::HostToCard, 4),
        peak(&cfg, Direction::CardToHost, 1),
        peak(&cfg, Direction::CardToHost, 4)
    );
}

#[test]
fn criterion_3_microblaze_peaks_and_toggle_identity() {
    check_scenario_refs("ddr-microblaze", ModelKind::Analytic, PEAK_TOL_ANALYTIC);

    // Disabling the contending master must recover ddr-xdma bit-for-bit.
    let mut quiet = builtin_scenario("ddr-microblaze").unwrap();
    quiet.fabric.contending_master = false;
    quiet.fabric.contention_factor_h2c = 1.0;
    quiet.fabric.contention_factor_c2h = 1.0;
    quiet.name = "ddr-xdma".into();
    let quiet = validate_scenario(quiet).unwrap();
    let base = scenario("ddr-xdma");

    let toggled = analytic_standard_report(&quiet).to_csv();
    let reference = analytic_standard_report(&base).to_csv();
    assert_eq!(toggled, reference, "toggled ddr-microblaze != ddr-xdma");

    // Same identity under the event model.
    let sizes = standard_sizes();
    let spec = SweepSpec {
        models: &[ModelKind::Des],
        directions: &Direction::ALL,
        channel_counts: &[1, 2, 3, 4],
        sizes: &sizes,
        seed: 7,
        jitter: None,
    };
    let (a, _) = run_report(&quiet, &spec).unwrap();
    let (b, _) = run_report(&base, &spec).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    println!("PASS 3: ddr-microblaze refs within 5%; contending_master=false is bit-identical to ddr-xdma (both models)");
}

#[test]
fn criterion_4_petalinux_peaks() {
    check_scenario_refs("ddr-petalinux", ModelKind::Analytic, PEAK_TOL_ANALYTIC);
    check_scenario_refs("bram-xdma", ModelKind::Des, PEAK_TOL_DES);
    check_scenario_refs("ddr-xdma", ModelKind::Des, PEAK_TOL_DES);
    check_scenario_refs("ddr-microblaze", ModelKind::Des, PEAK_TOL_DES);
    check_scenario_refs("ddr-petalinux", ModelKind::Des, PEAK_TOL_DES);
    let cfg = scenario("ddr-petalinux");
    println!(
        "PASS 4: ddr-petalinux peaks h2c/1ch={:.3} c2h/2ch={:.3} c2h/3ch={:.3} c2h/4ch={:.3} GB/s; event model within 7% on all scenarios",
        peak(&cfg, Direction::HostToCard, 1),
        peak(&cfg, Direction::CardToHost, 2),
        peak(&cfg, Direction::CardToHost, 3),
        peak(&cfg, Direction::CardToHost, 4)
    );
}

#[test]
fn criterion_5_ceilings() {
    let mut checked = 0usize;
    for name in nicsim::SCENARIO_NAMES {
        let cfg = scenario(name);
        let ceiling = 15.8f64.min(16.0).min(cfg.endpoint.peak_bw.value());
        let channels: Vec<u32> = (1..=cfg.max_channels()).collect();
        let sizes = standard_sizes();
        let (report, _) = run_report(
            &cfg,
            &SweepSpec {
                models: &[ModelKind::Analytic, ModelKind::Des],
                directions: &Direction::ALL,
                channel_counts: &channels,
                sizes: &sizes,
                seed: 0,
                jitter: None,
            },
        )
        .unwrap();
        for row in &report.rows {
            assert!(
                row.bandwidth.value() <= ceiling + 1e-9,
                "{name} {row:?} exceeds ceiling {ceiling}"
            );
            checked += 1;
        }
    }
    println!("PASS 5: {checked} sweep points all below min(15.8 link, 16.0 fabric, endpoint peak) GB/s");
}

#[test]
fn criterion_6_model_agreement() {
    let sizes: Vec<ByteSize> = standard_sizes()
        .into_iter()
        .filter(|s| s.bytes() >= 4096)
        .chain([ByteSize(10_000), ByteSize(100_000), ByteSize(500_000), ByteSize(1_000_000)])
        .collect();
    let mut sizes = sizes;
    sizes.sort_unstable();
    let mut worst: f64 = 0.0;
    let mut points = 0usize;
    for name in nicsim::SCENARIO_NAMES {
        let cfg = scenario(name);
        for ch in 1..=cfg.max_channels() {
            for dir in Direction::ALL {
                for &size in &sizes {
                    let req = TransferRequest::new(dir, size, ch);
                    let Ok((_, a)) = analytic_transfer_time(&cfg, &req) else { continue };
                    let d = nicsim::sim::run_transfer(&cfg, &req, 0).unwrap();
                    let rel = (a.value() - d.bandwidth.value()).abs() / a.value();
                    assert!(
                        rel <= MODEL_AGREEMENT,
                        "{name}/{}/{ch}ch/{size}: analytic {:.4} vs des {:.4} ({:.2}%)",
                        dir.short(),
                        a.value(),
                        d.bandwidth.value(),
                        rel * 100.0
                    );
                    worst = worst.max(rel);
                    points += 1;
                }
            }
        }
    }
    assert!(points >= 360, "only {points} grid points");
    println!("PASS 6: analytic and event model agree within 2% on {points} points >= 4 KiB (worst {:.3}%)", worst * 100.0);
}

#[test]
fn criterion_7_rdma_properties() {
    let read = scenario("rdma-bf2-read");
    let write = scenario("rdma-bf2-write");
    let ddr = scenario("ddr-xdma");

    let read_peak = peak(&read, Direction::CardToHost, 1);
    let write_peak = peak(&write, Direction::CardToHost, 1);
    let ddr_peak = peak(&ddr, Direction::CardToHost, 1);
    assert!(read_peak < ddr_peak && write_peak < ddr_peak);

    let mut last_read = 0.0;
    let mut last_write = 0.0;
    for size in standard_sizes() {
        let (tr, br) = rdma_transfer_time(&read, RdmaVerb::Read, size).unwrap();
        let (tw, bw) = rdma_transfer_time(&write, RdmaVerb::Write, size).unwrap();
        assert!(tr.value() >= tw.value(), "read faster than write at {size}");
        assert!(br.value() > last_read && bw.value() > last_write, "not monotone at {size}");
        last_read = br.value();
        last_write = bw.value();
    }

    let mut speeds: Vec<f64> = ["sdr", "ddr", "qdr", "fdr", "edr", "hdr", "ndr"]
        .iter()
        .map(|g| generation_preset(g).unwrap())
        .collect();
    speeds.sort_by(f64::total_cmp);
    assert_eq!(speeds, vec![10.0, 20.0, 40.0, 56.0, 100.0, 200.0, 400.0]);
    assert!(generation_preset("xdr").is_err());
    println!(
        "PASS 7: rdma peaks read={read_peak:.3} write={write_peak:.3} < ddr-xdma c2h {ddr_peak:.3} GB/s; read >= write; monotone; presets exact"
    );
}

#[test]
fn criterion_8_determinism() {
    let sizes = standard_sizes();
    for (jitter, seed) in [(None, 0u64), (Some(0.05), 42)] {
        let cfg = scenario("ddr-xdma");
        let spec = SweepSpec {
            models: &[ModelKind::Analytic, ModelKind::Des],
            directions: &Direction::ALL,
            channel_counts: &[1, 4],
            sizes: &sizes,
            seed,
            jitter,
        };
        let (a, _) = run_report(&cfg, &spec).unwrap();
        let (b, _) = run_report(&cfg, &spec).unwrap();
        assert_eq!(a.to_csv(), b.to_csv(), "jitter={jitter:?} seed={seed}");
    }
    println!("PASS 8: repeated sweeps are byte-identical (with and without seeded jitter)");
}

#[test]
fn criterion_9_packetization_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mps_choices = [64u32, 128, 256, 512, 1024, 2048, 4096];
    for _ in 0..1000 {
        let size = rng.gen_range(1..=2 * MIB);
        let mps = mps_choices[rng.gen_range(0..mps_choices.len())];
        let link = PcieLinkConfig {
            max_payload_bytes: mps,
            ..PcieLinkConfig::gen3_x16()
        };
        let got = packetize(ByteSize(size), &link);

        // Brute force: subtract MPS until exhaustion.
        let mut remaining = size;
        let mut count = 0u64;
        let mut wire = 0u64;
        while remaining > 0 {
            let payload = remaining.min(mps as u64);
            remaining -= payload;
            count += 1;
            wire += payload + link.overhead_per_tlp() as u64;
        }
        assert_eq!(got.tlp_count, count, "count for size={size} mps={mps}");
        assert_eq!(got.wire_bytes.bytes(), wire, "wire for size={size} mps={mps}");
        assert_eq!(got.payload_bytes.bytes(), size);
    }
    println!("PASS 9: packetization matches brute-force oracle on 1000 random (size, MPS) pairs");
}
