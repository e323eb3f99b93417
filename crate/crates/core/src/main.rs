use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nicsim::calibrate::{default_spec_for, fit_parameters, verify_fit, CalibrationSpec, FreeParam};
use nicsim::harness::{parse_sizes, run_report, standard_sizes, SweepSpec};
use nicsim::plot::render_plot;
use nicsim::reference::embedded_references;
use nicsim::report::{compare_to_reference, emit_csv, ModelKind};
use nicsim::scenario::{
    builtin_scenario, builtin_scenarios, validate_scenario, CalibrationFile, ScenarioConfig,
    ValidatedScenario,
};
use nicsim::units::ByteSize;
use nicsim::{Direction, ModelError};

#[derive(Parser)]
#[command(
    name = "nicsim",
    version,
    about = "Bandwidth model for host <-> accelerator-card memory access"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in scenarios, or dump one as TOML with --scenario.
    Scenarios {
        /// Preset name to dump as a TOML config.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Run a transfer-size sweep and emit CSV.
    Sweep(SweepArgs),
    /// Sweep and check the peaks against the measured reference points.
    /// Exits 1 if any point is outside tolerance.
    Compare {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Relative tolerance around each reference value or interval.
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// Sweep and render an SVG bandwidth plot.
    Plot(SweepArgs),
    /// Fit the scenario's free parameters to the reference points and
    /// write a calibration TOML fragment.
    Calibrate {
        /// Preset name or path to a scenario TOML file.
        #[arg(long)]
        scenario: String,
        /// Override the fitted parameter set: name=lo..hi, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Grid points per axis in the coarse phase.
        #[arg(long, default_value_t = 16)]
        grid: usize,
        /// Output TOML path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Preset name or path to a scenario TOML file.
    #[arg(long)]
    scenario: String,
    /// Model(s) to run: analytic, des, or both.
    #[arg(long, default_value = "analytic")]
    model: String,
    /// Comma-separated channel counts.
    #[arg(long, default_value = "1")]
    channels: String,
    /// h2c, c2h, or both.
    #[arg(long, default_value = "both")]
    direction: String,
    /// Comma list (`64,4096,1MiB`) or range (`64..1MiB:x2`);
    /// defaults to the standard 64 B..1 MiB power-of-two grid.
    #[arg(long)]
    sizes: Option<String>,
    /// Event-simulation RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative service-time jitter for the event simulation, e.g. 0.02.
    #[arg(long)]
    jitter: Option<f64>,
    /// Output path (CSV for sweep/compare, SVG for plot); stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_scenario(spec: &str) -> Result<ValidatedScenario, ModelError> {
    let cfg = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec)?;
        ScenarioConfig::from_toml(&text)?
    } else {
        builtin_scenario(spec)?
    };
    validate_scenario(cfg)
}

fn parse_models(s: &str) -> Result<Vec<ModelKind>, ModelError> {
    match s {
        "both" => Ok(vec![ModelKind::Analytic, ModelKind::Des]),
        other => Ok(vec![ModelKind::parse(other)?]),
    }
}

fn parse_directions(s: &str) -> Result<Vec<Direction>, ModelError> {
    match s {
        "both" => Ok(Direction::ALL.to_vec()),
        other => other.split(',').map(Direction::parse).collect(),
    }
}

fn parse_channels(s: &str) -> Result<Vec<u32>, ModelError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse()
                .map_err(|_| ModelError::Config(format!("bad channel count `{c}`")))
        })
        .collect()
}

fn build_report(
    args: &SweepArgs,
) -> Result<(ValidatedScenario, nicsim::report::SweepReport, Vec<String>), ModelError> {
    let cfg = load_scenario(&args.scenario)?;
    let models = parse_models(&args.model)?;
    let directions = parse_directions(&args.direction)?;
    let channels = parse_channels(&args.channels)?;
    let sizes: Vec<ByteSize> = match &args.sizes {
        Some(expr) => parse_sizes(expr)?,
        None => standard_sizes(),
    };
    let spec = SweepSpec {
        models: &models,
        directions: &directions,
        channel_counts: &channels,
        sizes: &sizes,
        seed: args.seed,
        jitter: args.jitter,
    };
    let (report, skipped) = run_report(&cfg, &spec)?;
    Ok((cfg, report, skipped))
}

fn warn_skipped(skipped: &[String]) {
    for s in skipped {
        eprintln!("skipped {s}");
    }
}

fn parse_param_override(s: &str) -> Result<(FreeParam, (f64, f64)), ModelError> {
    let bad = || ModelError::Config(format!("expected name=lo..hi, got `{s}`"));
    let (name, range) = s.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    Ok((FreeParam::parse(name.trim())?, (lo, hi)))
}

fn run(cli: Cli) -> Result<ExitCode, ModelError> {
    match cli.command {
        Command::Scenarios { scenario } => {
            match scenario {
                Some(name) => print!("{}", builtin_scenario(&name)?.to_toml()),
                None => {
                    for cfg in builtin_scenarios() {
                        println!(
                            "{:<16} engine={:<10} endpoint={:<9} channels={}",
                            cfg.name,
                            cfg.engine.name(),
                            cfg.endpoint.kind.name(),
                            cfg.max_channels()
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let (_, report, skipped) = build_report(&args)?;
            warn_skipped(&skipped);
            match &args.out {
                Some(path) => emit_csv(&report, path)?,
                None => print!("{}", report.to_csv()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { sweep, tolerance } => {
            let (cfg, report, skipped) = build_report(&sweep)?;
            warn_skipped(&skipped);
            let refs = embedded_references().for_scenario(&cfg.name);
            if refs.points.is_empty() {
                return Err(ModelError::NoReferencePoints(cfg.name.clone()));
            }
            let cmp = compare_to_reference(&report, &refs, tolerance)?;
            print!("{}", cmp.render());
            Ok(if cmp.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Plot(args) => {
            let (_, report, skipped) = build_report(&args)?;
            warn_skipped(&skipped);
            let svg = render_plot(&report)?;
            match &args.out {
                Some(path) => std::fs::write(path, svg)?,
                None => print!("{svg}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Calibrate {
            scenario,
            params,
            grid,
            out,
        } => {
            let cfg = load_scenario(&scenario)?.into_config();
            let mut spec = if params.is_empty() {
                default_spec_for(&cfg.name)?
            } else {
                let overrides: Result<Vec<_>, _> =
                    params.iter().map(|p| parse_param_override(p)).collect();
                CalibrationSpec::new(overrides?)
            };
            spec.grid_points = grid.max(16);
            let refs = embedded_references();
            let fit = fit_parameters(&cfg, &spec, &refs)?;
            if !verify_fit(&cfg, &spec, &refs, &fit, 64) {
                return Err(ModelError::Config(
                    "fit verification failed: probe found a better point".into(),
                ));
            }
            eprintln!(
                "fit for {}: objective {:.4} after {} evaluations",
                cfg.name, fit.objective, fit.evaluations
            );
            for &(p, v) in &fit.values {
                eprintln!("  {} = {:.4}", p.name(), v);
            }
            let mut file = CalibrationFile::default();
            file.scenario.insert(cfg.name.clone(), fit.to_entry());
            let text = toml::to_string_pretty(&file)
                .map_err(|e| ModelError::Config(e.to_string()))?;
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
