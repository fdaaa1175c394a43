//! Command-line front end: threshold sweeps, witness searches, sign-change
//! sets, decompositions, cubature rules, bound reports, grid checks, and
//! the built-in verification battery.
//!
//! Exit codes: 0 success, 2 indeterminate result, 1 error.

mod config;
mod verify;

use clap::{Args, Parser, Subcommand};
use config::{ExperimentConfig, OutputFormat};
use std::path::PathBuf;
use std::process::ExitCode;
use zeromean::bounds::{compare_bounds, spectrum_label, verify_grid_property};
use zeromean::caratheodory::decompose_origin;
use zeromean::cubature::{equispaced_rule, gauss_legendre_rule, rule_from_certificate, tchakaloff};
use zeromean::sweep::{to_csv, SweepRow};
use zeromean::trig::{Frequency, GeodesicBall, Interval, Spectrum, TorusPoint};
use zeromean::witness::{
    babenko_threshold_with, ball_positivity_with, interval_positivity_with,
    min_diameter_sign_change, PositivityOutcome, SignChangeCertificate, WitnessOptions,
};
use zeromean::{Error, Result};

#[derive(Parser)]
#[command(
    name = "zeromean",
    about = "Zero sets of trigonometric polynomials: witnesses, certificates, cubature",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key-value config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Frequencies: comma-separated integers on the circle (`1,2`) or
    /// semicolon-separated tuples on the torus (`1,0;0,1;1,1`).
    #[arg(long, global = true)]
    spectrum: Option<String>,
    /// Torus dimension (bounds/gridcheck).
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Prime for the grid construction and radius formulas.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Bisection tolerance (default 5e-3).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Grid resolution: points per unit length (intervals, default 2048),
    /// per axis (balls, default 64), sample size (decompose/cubature), or
    /// grid size (signset, default 105).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Positivity margin for the witness LPs (default 1e-3).
    #[arg(long, global = true)]
    margin: Option<f64>,
    /// Seed for the randomized suites (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker count for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output path for the emitted artifact.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Artifact format (default json; csv for sweep-style outputs).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Re-validate the emitted artifact from its serialized form alone.
    #[arg(long, global = true)]
    verify: bool,
    /// Write the effective configuration (file plus flag overrides) for
    /// provenance.
    #[arg(long, global = true)]
    emit_config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Locate the interval-length phase transition for a circle spectrum.
    Threshold,
    /// Search for a positivity witness on an interval or geodesic ball.
    Witness {
        /// Closed arc as `start,length`.
        #[arg(long)]
        interval: Option<String>,
        /// Closed ball as `c1,c2,...;radius`.
        #[arg(long)]
        ball: Option<String>,
    },
    /// Find the smallest grid diameter carrying a sign-change certificate.
    Signset,
    /// Decompose the origin into few curve points.
    Decompose,
    /// Construct a cubature rule.
    Cubature {
        /// Equispaced rule for degree d (d+1 nodes).
        #[arg(long)]
        equispaced: Option<u32>,
        /// Gauss rule with m nodes on [0, 1].
        #[arg(long)]
        gauss: Option<usize>,
        /// Moment-matching rule for --spectrum over a uniform sample.
        #[arg(long)]
        tchakaloff: bool,
        /// Convert a sign-change certificate file for --spectrum.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Closed-form bound report for a spectrum.
    Bounds,
    /// Verify the translated-barycenter grid covering.
    Gridcheck,
    /// Run the built-in verification battery.
    Suite {
        /// Reduced grids for smoke runs.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut from_cli = ExperimentConfig {
        spectrum: cli.common.spectrum.clone(),
        n: cli.common.n,
        p: cli.common.p,
        tol: cli.common.tol,
        grid: cli.common.grid,
        margin: cli.common.margin,
        seed: cli.common.seed,
        jobs: cli.common.jobs,
        out: cli.common.out.clone(),
        format: cli.common.format,
        verify: cli.common.verify.then_some(true),
        ..Default::default()
    };
    match &cli.command {
        Command::Witness { interval, ball } => {
            from_cli.interval = interval.clone();
            from_cli.ball = ball.clone();
        }
        Command::Cubature {
            equispaced,
            gauss,
            tchakaloff,
            certificate,
        } => {
            from_cli.equispaced = *equispaced;
            from_cli.gauss = *gauss;
            from_cli.tchakaloff = (*tchakaloff).then_some(true);
            from_cli.certificate = certificate.clone();
        }
        Command::Suite { quick } => {
            from_cli.quick = (*quick).then_some(true);
        }
        _ => {}
    }
    let base = match &cli.common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("config {}: {e}", path.display())))?;
            ExperimentConfig::parse_kv(&text)?
        }
        None => ExperimentConfig::default(),
    };
    Ok(ExperimentConfig::merge(base, &from_cli))
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let cfg = load_config(&cli)?;
    if let Some(path) = &cli.common.emit_config {
        std::fs::write(path, cfg.to_kv())
            .map_err(|e| Error::InvalidInput(format!("write {}: {e}", path.display())))?;
    }
    match &cli.command {
        Command::Threshold => run_threshold(&cfg),
        Command::Witness { .. } => run_witness(&cfg),
        Command::Signset => run_signset(&cfg),
        Command::Decompose => run_decompose(&cfg),
        Command::Cubature { .. } => run_cubature(&cfg),
        Command::Bounds => run_bounds(&cfg),
        Command::Gridcheck => run_gridcheck(&cfg),
        Command::Suite { .. } => run_suite(&cfg),
    }
}

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

/// `1,2,5` lists circle frequencies; `1,0;0,1;1,1` lists torus tuples.
/// A single torus frequency takes a trailing semicolon: `2,1;`.
fn parse_spectrum(cfg: &ExperimentConfig) -> Result<Spectrum> {
    let Some(text) = &cfg.spectrum else {
        return Err(Error::InvalidInput(
            "--spectrum is required for this command".into(),
        ));
    };
    let parse_entry = |v: &str| {
        v.trim()
            .parse::<u32>()
            .map_err(|_| Error::InvalidInput(format!("bad frequency entry `{v}`")))
    };
    if text.contains(';') {
        let mut freqs = Vec::new();
        let mut n = 0usize;
        for tuple in text.split(';').filter(|t| !t.trim().is_empty()) {
            let entries: Vec<u32> = tuple.split(',').map(parse_entry).collect::<Result<_>>()?;
            n = entries.len();
            freqs.push(Frequency::new(entries)?);
        }
        Spectrum::new(n, freqs)
    } else {
        let ks: Vec<u32> = text.split(',').map(parse_entry).collect::<Result<_>>()?;
        Spectrum::circle(&ks)
    }
}

fn parse_interval(text: &str) -> Result<Interval> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "expected `start,length`, got `{text}`"
        )));
    }
    let start = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad start `{}`", parts[0])))?;
    let length = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad length `{}`", parts[1])))?;
    Interval::new(start, length)
}

fn parse_ball(text: &str) -> Result<GeodesicBall> {
    let Some((coords, radius)) = text.split_once(';') else {
        return Err(Error::InvalidInput(format!(
            "expected `c1,c2,...;radius`, got `{text}`"
        )));
    };
    let center: Vec<f64> = coords
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad coordinate `{v}`")))
        })
        .collect::<Result<_>>()?;
    let radius: f64 = radius
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad radius `{radius}`")))?;
    GeodesicBall::new(TorusPoint::new(center), radius)
}

fn witness_options(cfg: &ExperimentConfig, per_axis: bool) -> WitnessOptions {
    let base = if per_axis {
        WitnessOptions::torus_default()
    } else {
        WitnessOptions::default()
    };
    WitnessOptions {
        grid_resolution: cfg.grid.unwrap_or(base.grid_resolution),
        margin: cfg.margin.unwrap_or(base.margin),
        ..base
    }
}

// ---------------------------------------------------------------------------
// Artifact emission
// ---------------------------------------------------------------------------

fn emit(cfg: &ExperimentConfig, content: &str) -> Result<()> {
    if let Some(path) = &cfg.out {
        std::fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::InvalidInput(format!("serialize: {e}")))
}

/// Reload the just-written artifact (from disk when --out was given) and
/// re-check it from the serialized bytes alone.
fn reverify(
    cfg: &ExperimentConfig,
    serialized: &str,
    check: impl Fn(&str) -> Result<String>,
) -> Result<()> {
    if cfg.verify != Some(true) {
        return Ok(());
    }
    let text = match &cfg.out {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("reload {}: {e}", path.display())))?,
        None => serialized.to_string(),
    };
    let summary = check(&text)?;
    println!("verify: {summary}");
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_threshold(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let s = parse_spectrum(cfg)?;
    let opts = witness_options(cfg, false);
    let tol = cfg.tol.unwrap_or(5e-3);
    let rec = babenko_threshold_with(&s, tol, &opts)?;
    println!(
        "threshold: L* = {:.6} in [{:.6}, {:.6}], grid {}",
        rec.length, rec.feasible_below, rec.infeasible_above, rec.grid_resolution
    );
    let artifact = match cfg.format() {
        OutputFormat::Json => to_json(&rec)?,
        OutputFormat::Csv => {
            let rows: Vec<SweepRow> = rec
                .probes
                .iter()
                .map(|p| SweepRow {
                    parameter: p.length,
                    verdict: p.verdict.clone(),
                    margin_or_residual: p.margin_or_residual,
                    grid: rec.grid_resolution,
                    wall_ms: p.wall_ms,
                })
                .collect();
            to_csv(&rows)
        }
    };
    emit(cfg, &artifact)?;
    if cfg.format() == OutputFormat::Json {
        reverify(cfg, &artifact, verify::threshold)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_witness(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let s = parse_spectrum(cfg)?;
    let (outcome, parameter, opts) = match (&cfg.interval, &cfg.ball) {
        (Some(text), None) => {
            let iv = parse_interval(text)?;
            let opts = witness_options(cfg, false);
            (interval_positivity_with(&s, &iv, &opts)?, iv.length, opts)
        }
        (None, Some(text)) => {
            let ball = parse_ball(text)?;
            let opts = witness_options(cfg, true);
            (ball_positivity_with(&s, &ball, &opts)?, ball.radius, opts)
        }
        _ => {
            return Err(Error::InvalidInput(
                "witness needs exactly one of --interval or --ball".into(),
            ))
        }
    };
    let code = match &outcome {
        PositivityOutcome::Feasible { witness } => {
            println!(
                "witness: positive with margin {:.6e} (verification grid {})",
                witness.margin, witness.verification_resolution
            );
            ExitCode::SUCCESS
        }
        PositivityOutcome::Infeasible { certificate, .. } => {
            println!(
                "no witness at margin {:.1e}: hull certificate residual {:.3e}",
                opts.margin,
                certificate.residual()
            );
            ExitCode::SUCCESS
        }
        PositivityOutcome::Indeterminate {
            attempts,
            last_margin,
        } => {
            println!("indeterminate after {attempts} attempts (last margin {last_margin:.3e})");
            ExitCode::from(2)
        }
    };
    let artifact = match cfg.format() {
        OutputFormat::Json => to_json(&outcome)?,
        OutputFormat::Csv => {
            let (verdict, value) = match &outcome {
                PositivityOutcome::Feasible { witness } => ("feasible", witness.margin),
                PositivityOutcome::Infeasible { certificate, .. } => {
                    ("infeasible", certificate.residual())
                }
                PositivityOutcome::Indeterminate { last_margin, .. } => {
                    ("indeterminate", *last_margin)
                }
            };
            to_csv(&[SweepRow {
                parameter,
                verdict: verdict.into(),
                margin_or_residual: value,
                grid: opts.grid_resolution,
                wall_ms: 0,
            }])
        }
    };
    emit(cfg, &artifact)?;
    if cfg.format() == OutputFormat::Json {
        reverify(cfg, &artifact, |text| verify::witness(text, &s))?;
    }
    Ok(code)
}

fn run_signset(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let s = parse_spectrum(cfg)?;
    let tol = cfg.tol.unwrap_or(5e-3);
    let grid = cfg.grid.unwrap_or(105);
    let res = min_diameter_sign_change(&s, tol, grid)?;
    println!(
        "sign-change set: diameter {:.6} (infeasible at {:.6}), support {}, residual {:.3e}",
        res.feasible_diameter,
        res.infeasible_diameter,
        res.certificate.support.len(),
        res.certificate.residual
    );
    let artifact = to_json(&res)?;
    emit(cfg, &artifact)?;
    reverify(cfg, &artifact, |text| verify::signset(text, &s))?;
    Ok(if res.indeterminate {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_decompose(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let s = parse_spectrum(cfg)?;
    let sample = cfg.grid.unwrap_or((8 * s.len() + 8).max(16));
    let dec = decompose_origin(&s, sample)?;
    println!(
        "decomposition: {} points, span {:.6}, residual {:.3e}",
        dec.support_size(),
        dec.span_length,
        dec.residual
    );
    let artifact = to_json(&dec)?;
    emit(cfg, &artifact)?;
    reverify(cfg, &artifact, |text| verify::decomposition(text, &s))?;
    Ok(ExitCode::SUCCESS)
}

fn run_cubature(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let rule = if let Some(d) = cfg.equispaced {
        equispaced_rule(d)?
    } else if let Some(m) = cfg.gauss {
        gauss_legendre_rule(m)?
    } else if cfg.tchakaloff == Some(true) {
        let s = parse_spectrum(cfg)?;
        let sample = cfg.grid.unwrap_or(4 * (2 * s.len() + 1));
        tchakaloff(&s, sample)?
    } else if let Some(path) = &cfg.certificate {
        let s = parse_spectrum(cfg)?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("read {}: {e}", path.display())))?;
        let cert: SignChangeCertificate = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("parse certificate: {e}")))?;
        rule_from_certificate(&cert, &s)?
    } else {
        return Err(Error::InvalidInput(
            "cubature needs one of --equispaced, --gauss, --tchakaloff, --certificate".into(),
        ));
    };
    println!(
        "rule: {} nodes, exact on {}, max residual {:.3e}",
        rule.len(),
        rule.exact_space,
        rule.max_residual
    );
    let artifact = match cfg.format() {
        OutputFormat::Json => to_json(&rule)?,
        OutputFormat::Csv => {
            let mut out = String::from("node,weight\n");
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let coords = node
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!("{coords},{w}\n"));
            }
            out
        }
    };
    emit(cfg, &artifact)?;
    if cfg.format() == OutputFormat::Json {
        let spectrum = if cfg.tchakaloff == Some(true) || cfg.certificate.is_some() {
            Some(parse_spectrum(cfg)?)
        } else {
            None
        };
        reverify(cfg, &artifact, |text| verify::rule(text, spectrum.as_ref()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_bounds(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let s = parse_spectrum(cfg)?;
    let n = cfg.n.unwrap_or(s.n() as u32);
    let p = cfg
        .p
        .ok_or_else(|| Error::InvalidInput("--p is required for bounds".into()))?;
    let rep = compare_bounds(&s, n, p)?;
    let radii = [
        rep.torus_radius
            .map(|r| format!("torus_radius {r:.6}"))
            .unwrap_or_else(|| "torus_radius n/a".into()),
        format!("kozma_oravecz {:.6}", rep.kozma_oravecz),
        format!("steinerberger {:.6}", rep.steinerberger),
    ]
    .join(", ");
    println!(
        "bounds for {}: winner {} ({radii})",
        spectrum_label(&s),
        rep.winner
    );
    let artifact = match cfg.format() {
        OutputFormat::Json => to_json(&rep)?,
        OutputFormat::Csv => rep.to_csv(),
    };
    emit(cfg, &artifact)?;
    if cfg.format() == OutputFormat::Json {
        reverify(cfg, &artifact, verify::bounds)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn run_gridcheck(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let n = cfg
        .n
        .ok_or_else(|| Error::InvalidInput("--n is required for gridcheck".into()))?;
    let p = cfg
        .p
        .ok_or_else(|| Error::InvalidInput("--p is required for gridcheck".into()))?;
    let check = verify_grid_property(n, p)?;
    println!(
        "{} r={:.6}",
        if check.passes { "PASS" } else { "FAIL" },
        check.radius
    );
    let artifact = match cfg.format() {
        OutputFormat::Json => to_json(&check)?,
        OutputFormat::Csv => {
            let rows: Vec<SweepRow> = check
                .max_distances
                .iter()
                .enumerate()
                .map(|(i, &d)| SweepRow {
                    parameter: i as f64,
                    verdict: if d <= check.radius + 1e-12 {
                        "covered".into()
                    } else {
                        "uncovered".into()
                    },
                    margin_or_residual: d,
                    grid: check.centers.len(),
                    wall_ms: 0,
                })
                .collect();
            to_csv(&rows)
        }
    };
    emit(cfg, &artifact)?;
    if cfg.format() == OutputFormat::Json {
        reverify(cfg, &artifact, |text| verify::gridcheck(text, n, p))?;
    }
    Ok(if check.passes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_suite(cfg: &ExperimentConfig) -> Result<ExitCode> {
    let quick = cfg.quick == Some(true);
    let report = zeromean::acceptance::run_suite_jobs(cfg.seed(), quick, cfg.jobs());
    print!("{}", report.table());
    let artifact = to_json(&report)?;
    emit(cfg, &artifact)?;
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
