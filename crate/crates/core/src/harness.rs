//! Sweep orchestration shared by the CLI and the browser demo: size grids,
//! size-expression parsing, and building sweep reports from both models.

use crate::engine::analytic_transfer_time;
use crate::error::{ModelError, Result};
use crate::report::{ModelKind, SweepReport, SweepRow};
use crate::scenario::{Direction, TransferRequest, ValidatedScenario};
use crate::sim::{run_transfer, run_transfer_opts, RunOptions};
use crate::units::{ByteSize, KIB, MIB};

/// The measurement grid: powers of two from 64 B to 1 MiB (15 points).
pub fn standard_sizes() -> Vec<ByteSize> {
    (6..=20).map(|p| ByteSize(1 << p)).collect()
}

/// Parse one size with an optional binary suffix: `64`, `4K`, `4KiB`,
/// `1M`, `1MiB`, `2GiB`.
pub fn parse_size(s: &str) -> Result<ByteSize> {
    let s = s.trim();
    let (digits, mult) = if let Some(d) = s.strip_suffix("GiB").or_else(|| s.strip_suffix('G')) {
        (d, KIB * KIB * KIB)
    } else if let Some(d) = s.strip_suffix("MiB").or_else(|| s.strip_suffix('M')) {
        (d, MIB)
    } else if let Some(d) = s.strip_suffix("KiB").or_else(|| s.strip_suffix('K')) {
        (d, KIB)
    } else if let Some(d) = s.strip_suffix('B') {
        (d, 1)
    } else {
        (s, 1)
    };
    let n: u64 = digits
        .trim()
        .parse()
        .map_err(|_| ModelError::Config(format!("cannot parse size `{s}`")))?;
    Ok(ByteSize(n * mult))
}

/// Parse a sweep size expression: either a comma list (`64,4096,1MiB`) or a
/// range with a multiplicative step (`64..1MiB:x2`).
pub fn parse_sizes(expr: &str) -> Result<Vec<ByteSize>> {
    let expr = expr.trim();
    if let Some((range, step)) = expr.split_once(":x") {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| ModelError::Config(format!("range `{expr}` needs `lo..hi:xN`")))?;
        let lo = parse_size(lo)?.bytes();
        let hi = parse_size(hi)?.bytes();
        let step: u64 = step
            .parse()
            .map_err(|_| ModelError::Config(format!("bad step in `{expr}`")))?;
        if step < 2 || lo == 0 || lo > hi {
            return Err(ModelError::Config(format!("degenerate range `{expr}`")));
        }
        let mut sizes = Vec::new();
        let mut v = lo;
        while v <= hi {
            sizes.push(ByteSize(v));
            match v.checked_mul(step) {
                Some(next) => v = next,
                None => break,
            }
        }
        Ok(sizes)
    } else {
        let sizes: Result<Vec<ByteSize>> = expr.split(',').map(parse_size).collect();
        let sizes = sizes?;
        if sizes.is_empty() {
            return Err(ModelError::EmptyPlan("no sizes given".into()));
        }
        Ok(sizes)
    }
}

pub struct SweepSpec<'a> {
    pub models: &'a [ModelKind],
    pub directions: &'a [Direction],
    pub channel_counts: &'a [u32],
    pub sizes: &'a [ByteSize],
    pub seed: u64,
    pub jitter: Option<f64>,
}

/// Run the requested grid under each model. Points that fail (e.g. a
/// transfer beyond BRAM capacity) are skipped and reported back.
pub fn run_report(cfg: &ValidatedScenario, spec: &SweepSpec<'_>) -> Result<(SweepReport, Vec<String>)> {
    if spec.models.is_empty() {
        return Err(ModelError::EmptyPlan("no models".into()));
    }
    if spec.directions.is_empty() || spec.channel_counts.is_empty() || spec.sizes.is_empty() {
        return Err(ModelError::EmptyPlan("empty sweep grid".into()));
    }
    if spec.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ModelError::EmptyPlan("sizes must be strictly ascending".into()));
    }

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &model in spec.models {
        for &direction in spec.directions {
            for &channels in spec.channel_counts {
                for &size in spec.sizes {
                    let req = TransferRequest::new(direction, size, channels);
                    let outcome = match model {
                        ModelKind::Analytic => {
                            analytic_transfer_time(cfg, &req).map(|(t, bw)| (t, bw))
                        }
                        ModelKind::Des => {
                            let res = if spec.jitter.is_some() {
                                run_transfer_opts(
                                    cfg,
                                    &req,
                                    RunOptions {
                                        seed: spec.seed,
                                        jitter: spec.jitter,
                                        trace: None,
                                    },
                                )
                            } else {
                                run_transfer(cfg, &req, spec.seed)
                            };
                            res.map(|r| (r.total_time, r.bandwidth))
                        }
                    };
                    match outcome {
                        Ok((total_time, bandwidth)) => rows.push(SweepRow {
                            scenario: cfg.name.clone(),
                            model,
                            direction,
                            channels,
                            size,
                            bandwidth,
                            total_time,
                        }),
                        Err(e) => skipped.push(format!(
                            "{}/{}/{}ch/{}: {e}",
                            model.name(),
                            direction.short(),
                            channels,
                            size
                        )),
                    }
                }
            }
        }
    }
    Ok((SweepReport { rows }, skipped))
}
