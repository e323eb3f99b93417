//! wasm-bindgen surface for the browser demo: a thin, string-based wrapper
//! over the scenario presets, the sweep, and the reference comparison.
//!
//! The logic lives in [`api`] with plain `String` errors so it compiles and
//! tests on the host; the exported functions only translate errors into
//! `JsValue`, which exists on the wasm target alone.

use wasm_bindgen::prelude::*;

pub mod api {
    use nicsim::harness::{parse_sizes, run_report, standard_sizes, SweepSpec};
    use nicsim::plot::render_plot;
    use nicsim::reference::embedded_references;
    use nicsim::report::{compare_to_reference, ModelKind, SweepReport};
    use nicsim::scenario::{builtin_scenario, validate_scenario, ValidatedScenario};
    use nicsim::Direction;

    pub fn scenario_names() -> String {
        nicsim::SCENARIO_NAMES.join("\n")
    }

    fn load(name: &str) -> Result<ValidatedScenario, String> {
        builtin_scenario(name)
            .and_then(validate_scenario)
            .map_err(|e| e.to_string())
    }

    fn sweep(
        scenario: &str,
        models: &[ModelKind],
        channels: &[u32],
        sizes_expr: &str,
    ) -> Result<(ValidatedScenario, SweepReport), String> {
        let cfg = load(scenario)?;
        let sizes = if sizes_expr.trim().is_empty() {
            standard_sizes()
        } else {
            parse_sizes(sizes_expr).map_err(|e| e.to_string())?
        };
        let spec = SweepSpec {
            models,
            directions: &Direction::ALL,
            channel_counts: channels,
            sizes: &sizes,
            seed: 0,
            jitter: None,
        };
        let (report, _) = run_report(&cfg, &spec).map_err(|e| e.to_string())?;
        Ok((cfg, report))
    }

    pub fn sweep_svg(scenario: &str, channels: &str, sizes: &str) -> Result<String, String> {
        let channels = parse_channel_list(channels)?;
        let (_, report) = sweep(
            scenario,
            &[ModelKind::Analytic, ModelKind::Des],
            &channels,
            sizes,
        )?;
        render_plot(&report).map_err(|e| e.to_string())
    }

    pub fn sweep_csv(scenario: &str, channels: &str, sizes: &str) -> Result<String, String> {
        let channels = parse_channel_list(channels)?;
        let (_, report) = sweep(
            scenario,
            &[ModelKind::Analytic, ModelKind::Des],
            &channels,
            sizes,
        )?;
        Ok(report.to_csv())
    }

    pub fn compare_table(scenario: &str, tolerance: f64) -> Result<String, String> {
        let cfg = load(scenario)?;
        let channels: Vec<u32> = (1..=cfg.max_channels()).collect();
        let (_, report) = sweep(scenario, &[ModelKind::Analytic], &channels, "")?;
        let refs = embedded_references().for_scenario(&cfg.name);
        if refs.points.is_empty() {
            return Ok(format!("no measured reference points for {}", cfg.name));
        }
        let cmp = compare_to_reference(&report, &refs, tolerance).map_err(|e| e.to_string())?;
        Ok(cmp.render())
    }

    fn parse_channel_list(s: &str) -> Result<Vec<u32>, String> {
        s.split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("bad channel count `{c}`"))
            })
            .collect()
    }
}

fn to_js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// Built-in scenario names, one per line.
#[wasm_bindgen]
pub fn scenario_names() -> String {
    api::scenario_names()
}

/// Run the standard sweep for both models and return the bandwidth plot as
/// an SVG document. `channels` is a comma list, `sizes` an optional sweep
/// expression (`64..1MiB:x2`); empty means the standard 64 B..1 MiB grid.
#[wasm_bindgen]
pub fn sweep_svg(scenario: &str, channels: &str, sizes: &str) -> Result<String, JsValue> {
    api::sweep_svg(scenario, channels, sizes).map_err(to_js)
}

/// Same sweep as `sweep_svg`, returned as the CSV text the CLI emits.
#[wasm_bindgen]
pub fn sweep_csv(scenario: &str, channels: &str, sizes: &str) -> Result<String, JsValue> {
    api::sweep_csv(scenario, channels, sizes).map_err(to_js)
}

/// Compare analytic sweep peaks against the measured reference points at
/// the given relative tolerance; returns the PASS/FAIL table.
#[wasm_bindgen]
pub fn compare_table(scenario: &str, tolerance: f64) -> Result<String, JsValue> {
    api::compare_table(scenario, tolerance).map_err(to_js)
}
