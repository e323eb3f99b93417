//! Base quantities: byte counts, bandwidths, durations.
//!
//! Bandwidth is decimal GB/s throughout the model; a handy consequence is
//! that `1 GB/s == 1 byte/ns`, so `bytes / rate_gbps` is directly a time in
//! nanoseconds. Byte sizes use binary units (KiB/MiB) at the boundaries
//! because the driver sweeps power-of-two buffers.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const KIB: u64 = 1024;
pub const MIB: u64 = 1024 * 1024;
pub const GIB: u64 = 1024 * 1024 * 1024;

/// Relative tolerance for bandwidth comparisons.
pub const BW_REL_TOL: f64 = 1e-9;

/// A byte count.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct ByteSize(pub u64);

impl ByteSize {
    pub const fn bytes(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    pub const fn kib(n: u64) -> Self {
        ByteSize(n * KIB)
    }

    pub const fn mib(n: u64) -> Self {
        ByteSize(n * MIB)
    }

    pub const fn gib(n: u64) -> Self {
        ByteSize(n * GIB)
    }
}

impl fmt::Display for ByteSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.0;
        if b >= MIB && b % MIB == 0 {
            write!(f, "{}M", b / MIB)
        } else if b >= KIB && b % KIB == 0 {
            write!(f, "{}K", b / KIB)
        } else {
            write!(f, "{b}")
        }
    }
}

/// A transfer rate in decimal gigabytes per second.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bandwidth(pub f64);

impl Bandwidth {
    pub const fn gbps(v: f64) -> Self {
        Bandwidth(v)
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn min(self, other: Bandwidth) -> Bandwidth {
        Bandwidth(self.0.min(other.0))
    }

    /// Relative-tolerance equality (tolerance `BW_REL_TOL`).
    pub fn approx_eq(self, other: Bandwidth) -> bool {
        let scale = self.0.abs().max(other.0.abs()).max(1.0);
        (self.0 - other.0).abs() <= BW_REL_TOL * scale
    }
}

impl fmt::Display for Bandwidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} GB/s", self.0)
    }
}

/// A duration in nanoseconds. Fractional values are fine; the model is
/// analog, not cycle-accurate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Nanos(pub f64);

impl Nanos {
    pub const ZERO: Nanos = Nanos(0.0);

    pub const fn ns(v: f64) -> Self {
        Nanos(v)
    }

    pub const fn micros(v: f64) -> Self {
        Nanos(v * 1_000.0)
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn max(self, other: Nanos) -> Nanos {
        Nanos(self.0.max(other.0))
    }
}

impl std::ops::Add for Nanos {
    type Output = Nanos;
    fn add(self, rhs: Nanos) -> Nanos {
        Nanos(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Nanos {
    fn add_assign(&mut self, rhs: Nanos) {
        self.0 += rhs.0;
    }
}

impl std::ops::Sub for Nanos {
    type Output = Nanos;
    fn sub(self, rhs: Nanos) -> Nanos {
        Nanos(self.0 - rhs.0)
    }
}

/// Time to move `bytes` at `rate`, exploiting GB/s == byte/ns.
pub fn transfer_time(bytes: ByteSize, rate: Bandwidth) -> Nanos {
    Nanos(bytes.as_f64() / rate.value())
}

/// Achieved bandwidth for `bytes` moved in `elapsed`.
pub fn achieved_bandwidth(bytes: ByteSize, elapsed: Nanos) -> Bandwidth {
    Bandwidth(bytes.as_f64() / elapsed.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gbps_is_byte_per_ns() {
        let t = transfer_time(ByteSize(15_800_000_000), Bandwidth::gbps(15.8));
        assert!((t.value() - 1e9).abs() < 1e-3); // one second
    }

    #[test]
    fn display_sizes() {
        assert_eq!(ByteSize::mib(1).to_string(), "1M");
        assert_eq!(ByteSize::kib(4).to_string(), "4K");
        assert_eq!(ByteSize(100).to_string(), "100");
    }

    #[test]
    fn approx_eq_tolerance() {
        let a = Bandwidth::gbps(15.8);
        let b = Bandwidth::gbps(15.8 + 1e-12);
        assert!(a.approx_eq(b));
        assert!(!a.approx_eq(Bandwidth::gbps(15.81)));
    }
}
