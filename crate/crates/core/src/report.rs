//! Sweep reports: the CSV surface and reference comparison.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::reference::ReferenceSet;
use crate::scenario::Direction;
use crate::units::{Bandwidth, ByteSize, Nanos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Analytic,
    Des,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Analytic => "analytic",
            ModelKind::Des => "des",
        }
    }

    pub fn parse(s: &str) -> Result<ModelKind> {
        match s {
            "analytic" => Ok(ModelKind::Analytic),
            "des" => Ok(ModelKind::Des),
            other => Err(ModelError::Config(format!(
                "unknown model `{other}` (expected analytic or des)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: String,
    pub model: ModelKind,
    pub direction: Direction,
    pub channels: u32,
    pub size: ByteSize,
    pub bandwidth: Bandwidth,
    pub total_time: Nanos,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str = "scenario,model,direction,channels,size_bytes,bandwidth_gbps,total_time_ns";

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.4},{:.1}",
                r.scenario,
                r.model.name(),
                r.direction.short(),
                r.channels,
                r.size.bytes(),
                r.bandwidth.value(),
                r.total_time.value()
            )
            .expect("write to string");
        }
        out
    }

    pub fn filter_model(&self, model: ModelKind) -> SweepReport {
        SweepReport {
            rows: self.rows.iter().filter(|r| r.model == model).cloned().collect(),
        }
    }
}

/// Byte-stable CSV emission: identical inputs yield identical files.
pub fn emit_csv(report: &SweepReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv())?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ComparisonLine {
    pub label: String,
    pub measured_low: f64,
    pub measured_high: f64,
    pub simulated: f64,
    pub relative_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub lines: Vec<ComparisonLine>,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let measured = if l.measured_low == l.measured_high {
                format!("{:.2}", l.measured_low)
            } else {
                format!("[{:.1}, {:.1}]", l.measured_low, l.measured_high)
            };
            writeln!(
                out,
                "{} {:<28} measured {:>12}  simulated {:>7.3}  off-by {:>5.1}%",
                if l.pass { "PASS" } else { "FAIL" },
                l.label,
                measured,
                l.simulated,
                l.relative_distance * 100.0
            )
            .expect("write to string");
        }
        writeln!(
            out,
            "{}/{} reference points within tolerance {:.0}%",
            self.lines.iter().filter(|l| l.pass).count(),
            self.lines.len(),
            self.tolerance * 100.0
        )
        .expect("write to string");
        out
    }
}

/// Check simulated peaks against the measured reference points. Each
/// reference is compared with the maximum bandwidth over the matching
/// (scenario, direction, channels) rows, i.e. the peak over the sweep.
pub fn compare_to_reference(
    results: &SweepReport,
    refs: &ReferenceSet,
    tolerance: f64,
) -> Result<ComparisonReport> {
    let mut missing = Vec::new();
    let mut lines = Vec::new();
    for p in &refs.points {
        let peak = results
            .rows
            .iter()
            .filter(|r| {
                r.scenario == p.scenario && r.direction == p.direction && r.channels == p.channels
            })
            .map(|r| r.bandwidth.value())
            .fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            missing.push(p.label());
            continue;
        }
        lines.push(ComparisonLine {
            label: p.label(),
            measured_low: p.bw_low.value(),
            measured_high: p.bw_high.value(),
            simulated: peak,
            relative_distance: p.relative_distance(peak),
            pass: p.passes(peak, tolerance),
        });
    }
    if !missing.is_empty() {
        return Err(ModelError::MissingCoverage(missing));
    }
    Ok(ComparisonReport { tolerance, lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::embedded_references;

    fn row(scenario: &str, dir: Direction, ch: u32, size: u64, bw: f64) -> SweepRow {
        SweepRow {
            scenario: scenario.into(),
            model: ModelKind::Analytic,
            direction: dir,
            channels: ch,
            size: ByteSize(size),
            bandwidth: Bandwidth::gbps(bw),
            total_time: Nanos(size as f64 / bw),
        }
    }

    #[test]
    fn csv_shapes() {
        let empty = SweepReport::default();
        assert_eq!(empty.to_csv(), format!("{CSV_HEADER}\n"));

        let one = SweepReport {
            rows: vec![row("ddr-xdma", Direction::CardToHost, 1, 1 << 20, 12.0)],
        };
        let text = one.to_csv();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "ddr-xdma,analytic,c2h,1,1048576,12.0000,87381.3"
        );
    }

    #[test]
    fn compare_rules() {
        let refs = embedded_references().for_scenario("bram-xdma");
        let report = SweepReport {
            rows: vec![
                row("bram-xdma", Direction::HostToCard, 1, 1 << 20, 7.60),
                row("bram-xdma", Direction::CardToHost, 1, 1 << 20, 7.77),
            ],
        };
        let cmp = compare_to_reference(&report, &refs, 0.05).unwrap();
        assert!(cmp.all_pass(), "{}", cmp.render());

        let bad = SweepReport {
            rows: vec![
                row("bram-xdma", Direction::HostToCard, 1, 1 << 20, 9.0),
                row("bram-xdma", Direction::CardToHost, 1, 1 << 20, 7.77),
            ],
        };
        let cmp = compare_to_reference(&bad, &refs, 0.05).unwrap();
        assert!(!cmp.all_pass());
    }

    #[test]
    fn interval_inside_passes_at_zero_tolerance() {
        let refs = embedded_references().for_scenario("ddr-xdma");
        let mut rows = vec![
            row("ddr-xdma", Direction::HostToCard, 1, 1 << 20, 10.8),
            row("ddr-xdma", Direction::HostToCard, 4, 1 << 20, 9.5),
            row("ddr-xdma", Direction::CardToHost, 1, 1 << 20, 12.0),
            row("ddr-xdma", Direction::CardToHost, 4, 1 << 20, 13.5),
        ];
        // Peak-over-sizes: add a smaller, slower point that must be ignored.
        rows.push(row("ddr-xdma", Direction::CardToHost, 4, 1 << 10, 2.0));
        let cmp = compare_to_reference(&SweepReport { rows }, &refs, 0.0).unwrap();
        assert!(cmp.all_pass(), "{}", cmp.render());
    }

    #[test]
    fn missing_coverage_reported() {
        let refs = embedded_references().for_scenario("ddr-xdma");
        let report = SweepReport {
            rows: vec![row("ddr-xdma", Direction::CardToHost, 1, 1 << 20, 12.0)],
        };
        match compare_to_reference(&report, &refs, 0.05) {
            Err(ModelError::MissingCoverage(labels)) => assert_eq!(labels.len(), 3),
            other => panic!("expected MissingCoverage, got {other:?}"),
        }
    }
}
