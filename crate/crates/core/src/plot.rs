//! Self-contained SVG bandwidth plots: log2 transfer size on x, GB/s on y,
//! one polyline per (direction, channels, model) series, with the data-path
//! ceilings drawn as horizontal guides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{ModelError, Result};
use crate::report::SweepReport;
use crate::units::ByteSize;

/// Link / fabric / DDR ceilings of the modeled data path, in GB/s.
pub const GUIDE_LINES: [f64; 3] = [15.8, 16.0, 19.2];

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 220.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn render_plot(report: &SweepReport) -> Result<String> {
    if report.rows.is_empty() {
        return Err(ModelError::EmptyReport);
    }

    // Series keyed (direction, channels, model) in deterministic order.
    let mut series: BTreeMap<(u8, u32, &'static str), Vec<(u64, f64)>> = BTreeMap::new();
    for r in &report.rows {
        let dir = match r.direction {
            crate::scenario::Direction::HostToCard => 0,
            crate::scenario::Direction::CardToHost => 1,
        };
        series
            .entry((dir, r.channels, r.model.name()))
            .or_default()
            .push((r.size.bytes(), r.bandwidth.value()));
    }
    for points in series.values_mut() {
        points.sort_unstable_by_key(|&(s, _)| s);
    }

    let x_min = report.rows.iter().map(|r| r.size.bytes()).min().unwrap() as f64;
    let x_max = report.rows.iter().map(|r| r.size.bytes()).max().unwrap() as f64;
    let bw_max = report
        .rows
        .iter()
        .map(|r| r.bandwidth.value())
        .fold(0.0, f64::max);
    let y_max = (bw_max.max(GUIDE_LINES[2]) * 1.08).ceil();

    let lx_min = x_min.log2();
    let lx_max = x_max.log2().max(lx_min + 1.0);
    let px = |bytes: f64| -> f64 {
        MARGIN_L + (bytes.log2() - lx_min) / (lx_max - lx_min) * (WIDTH - MARGIN_L - MARGIN_R)
    };
    let py = |bw: f64| -> f64 { HEIGHT - MARGIN_B - bw / y_max * (HEIGHT - MARGIN_T - MARGIN_B) };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");

    let scenario = &report.rows[0].scenario;
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"22\" font-size=\"15\" font-weight=\"bold\">{} bandwidth vs transfer size</text>",
        MARGIN_L, scenario
    );

    // Axes.
    let x0 = MARGIN_L;
    let x1 = WIDTH - MARGIN_R;
    let y0 = HEIGHT - MARGIN_B;
    let y1 = MARGIN_T;
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );

    // X ticks at powers of two.
    let mut p = lx_min.ceil() as u32;
    while f64::from(p) <= lx_max {
        let bytes = 1u64 << p;
        let x = px(bytes as f64);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{y0}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            y0 + 20.0,
            ByteSize(bytes)
        );
        p += 2;
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">transfer size (bytes, log2)</text>",
        (x0 + x1) / 2.0,
        y0 + 42.0
    );

    // Y ticks.
    let y_step = if y_max > 12.0 { 4.0 } else { 2.0 };
    let mut bw = 0.0;
    while bw <= y_max {
        let y = py(bw);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{x0}\" y2=\"{y:.1}\" stroke=\"black\"/>",
            x0 - 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{bw:.0}</text>",
            x0 - 9.0,
            y + 4.0
        );
        bw += y_step;
    }
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.1}\" transform=\"rotate(-90 16 {:.1})\" text-anchor=\"middle\">bandwidth (GB/s)</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    // Ceiling guides.
    for guide in GUIDE_LINES {
        let y = py(guide);
        let _ = writeln!(
            svg,
            "<line x1=\"{x0}\" y1=\"{y:.1}\" x2=\"{x1}\" y2=\"{y:.1}\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#666\">{guide} GB/s</text>",
            x1 + 6.0,
            y + 4.0
        );
    }

    // Series.
    for (i, ((dir, channels, model), points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = if *model == "des" { " stroke-dasharray=\"3 3\"" } else { "" };
        let mut path = String::new();
        for (j, &(bytes, bwv)) in points.iter().enumerate() {
            let _ = write!(
                path,
                "{}{:.1},{:.1}",
                if j == 0 { "" } else { " " },
                px(bytes as f64),
                py(bwv)
            );
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"{dash}/>"
        );
        for &(bytes, bwv) in points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2.4\" fill=\"{color}\"/>",
                px(bytes as f64),
                py(bwv)
            );
        }
        // Legend entry.
        let ly = MARGIN_T + 14.0 + i as f64 * 18.0;
        let lx = WIDTH - MARGIN_R + 58.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{color}\" stroke-width=\"1.8\"{dash}/>",
            ly - 4.0,
            lx + 24.0,
            ly - 4.0
        );
        let dir_name = if *dir == 0 { "h2c" } else { "c2h" };
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{ly:.1}\">{dir_name} {channels}ch {model}</text>",
            lx + 30.0
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(report: &SweepReport, path: &Path) -> Result<()> {
    let svg = render_plot(report)?;
    std::fs::write(path, svg)?;
    Ok(())
}
