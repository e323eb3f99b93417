//! Measured bandwidth values used for calibration and acceptance. Interval
//! points encode quoted ranges verbatim instead of inventing midpoints.
//! All points are peaks over the 64 B - 1 MiB sweep; since modeled
//! bandwidth rises monotonically with size, the peak sits at 1 MiB.

use crate::scenario::Direction;
use crate::units::{Bandwidth, ByteSize};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub scenario: &'static str,
    pub direction: Direction,
    pub channels: u32,
    pub size: ByteSize,
    pub bw_low: Bandwidth,
    pub bw_high: Bandwidth,
}

impl ReferencePoint {
    fn point(scenario: &'static str, direction: Direction, channels: u32, bw: f64) -> Self {
        Self::interval(scenario, direction, channels, bw, bw)
    }

    fn interval(
        scenario: &'static str,
        direction: Direction,
        channels: u32,
        lo: f64,
        hi: f64,
    ) -> Self {
        debug_assert!(lo <= hi);
        ReferencePoint {
            scenario,
            direction,
            channels,
            size: ByteSize::mib(1),
            bw_low: Bandwidth::gbps(lo),
            bw_high: Bandwidth::gbps(hi),
        }
    }

    pub fn is_interval(&self) -> bool {
        self.bw_low.value() < self.bw_high.value()
    }

    pub fn label(&self) -> String {
        format!("{}/{}/{}ch", self.scenario, self.direction.short(), self.channels)
    }

    /// Relative distance of `value` from the interval; zero inside.
    pub fn relative_distance(&self, value: f64) -> f64 {
        if value < self.bw_low.value() {
            (self.bw_low.value() - value) / self.bw_low.value()
        } else if value > self.bw_high.value() {
            (value - self.bw_high.value()) / self.bw_high.value()
        } else {
            0.0
        }
    }

    /// Pass check at relative tolerance `tol`.
    pub fn passes(&self, value: f64, tol: f64) -> bool {
        value >= self.bw_low.value() * (1.0 - tol) && value <= self.bw_high.value() * (1.0 + tol)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    pub points: Vec<ReferencePoint>,
}

impl ReferenceSet {
    pub fn for_scenario(&self, scenario: &str) -> ReferenceSet {
        ReferenceSet {
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| p.scenario == scenario)
                .collect(),
        }
    }
}

use Direction::{CardToHost as C2H, HostToCard as H2C};

/// Every bandwidth number quoted for the four FPGA designs.
pub fn embedded_references() -> ReferenceSet {
    ReferenceSet {
        points: vec![
            // BRAM design: single-channel peaks at 1 MiB.
            ReferencePoint::point("bram-xdma", H2C, 1, 7.54),
            ReferencePoint::point("bram-xdma", C2H, 1, 7.77),
            // DDR simple design.
            ReferencePoint::point("ddr-xdma", H2C, 1, 10.8),
            ReferencePoint::interval("ddr-xdma", H2C, 4, 9.0, 10.0),
            ReferencePoint::point("ddr-xdma", C2H, 1, 12.0),
            ReferencePoint::interval("ddr-xdma", C2H, 4, 13.0, 14.0),
            // MicroBlaze design: near-identical single-channel peaks.
            ReferencePoint::point("ddr-microblaze", H2C, 1, 9.5),
            ReferencePoint::point("ddr-microblaze", C2H, 1, 9.4),
            ReferencePoint::interval("ddr-microblaze", C2H, 4, 13.0, 14.0),
            // PetaLinux design.
            ReferencePoint::point("ddr-petalinux", H2C, 1, 9.2),
            ReferencePoint::interval("ddr-petalinux", C2H, 2, 10.5, 12.0),
            ReferencePoint::interval("ddr-petalinux", C2H, 3, 12.0, 13.0),
            ReferencePoint::interval("ddr-petalinux", C2H, 4, 12.0, 13.0),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals_ordered() {
        for p in embedded_references().points {
            assert!(p.bw_low.value() <= p.bw_high.value(), "{}", p.label());
        }
    }

    #[test]
    fn distance_and_pass() {
        let p = ReferencePoint::interval("x", C2H, 4, 13.0, 14.0);
        assert_eq!(p.relative_distance(13.5), 0.0);
        assert!(p.passes(13.5, 0.0));
        assert!(p.passes(12.4, 0.05));
        assert!(!p.passes(12.3, 0.05));

        let q = ReferencePoint::point("x", C2H, 1, 12.0);
        assert!(q.passes(12.0 * 1.04, 0.05));
        assert!(!q.passes(9.0, 0.05));
        assert!((q.relative_distance(11.4) - 0.05).abs() < 1e-12);
    }
}
