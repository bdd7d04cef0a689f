//! Command-line front end for the zipper family.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 a check failed
//! or a search did not converge.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zipper3d::certify::{jordan_check, scan_d};
use zipper3d::cstar::{kronecker_test, log_coordinate, phase_coverage, phase_grid};
use zipper3d::family::{build_zipper, enumerate_sigma, verify_suite, wsp_search, wsp_witness, FamilyConfig, ParamXi};
use zipper3d::zipper::{refine, validate};

/// Largest accepted render depth.
const MAX_RENDER_DEPTH: usize = 10;
/// Largest accepted polyline length.
const MAX_RENDER_ROWS: u128 = 20_000_000;
/// Residual tolerance of the build validation.
const BUILD_TOL: f64 = 1e-9;
/// A witness counts as converged below this identity distance.
const WITNESS_TARGET: f64 = 0.05;
/// Height of the integer relation search in `group`.
const RELATION_HEIGHT: i64 = 1000;
/// Phase targets in `group`.
const PHASE_TARGETS: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "zipper3d", version, about = "Self-similar zippers in R^3: build, render, verify, certify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the zipper at xi and validate its vertex conditions.
    Build(Common),
    /// Write the depth-N polyline as CSV (or PLY when --out ends in .ply).
    Render(Common),
    /// Run the check suite.
    Verify(Common),
    /// Enumerate the intersection pairs (i_k, j_k).
    Sigma(Common),
    /// Search for compositions approaching the identity.
    Witness(Common),
    /// Certify the gaps between the first k piece pairs.
    Jordan(Common),
    /// Run the Jordan check over a grid of the parameter box.
    Scan(Common),
    /// Density evidence for the subgroup generated by the two rotation generators.
    Group(Common),
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    depth: Option<usize>,
    #[arg(long, value_name = "N")]
    kmax: Option<u64>,
    /// Grid dimensions, e.g. 5x5x5.
    #[arg(long, value_name = "AxBxC", value_parser = parse_grid)]
    grid: Option<(usize, usize, usize)>,
    #[arg(long, value_name = "X")]
    eps: Option<f64>,
    #[arg(long, value_name = "N")]
    maxn: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Overrides the configuration seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
}

fn parse_grid(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(format!("expected AxBxC, got '{s}'"));
    }
    let n: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    if n.contains(&0) {
        return Err("grid dimensions must be positive".into());
    }
    Ok((n[0], n[1], n[2]))
}

/// Contents of `--config`. Every field is optional; `xi` defaults to the
/// parameter at which the default generators give a witness.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunFile {
    family: FamilyConfig,
    xi: Option<ParamXi>,
    /// Check groups for `verify`; all groups when absent.
    checks: Option<Vec<String>>,
}

struct Run {
    cfg: FamilyConfig,
    xi: ParamXi,
    checks: Option<Vec<String>>,
    opts: Common,
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<zipper3d::Error> for Failure {
    fn from(e: zipper3d::Error) -> Failure {
        use zipper3d::Error::*;
        match e {
            Hypothesis(_) | Degenerate(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Usage(format!("json: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    let (name, opts) = match &cmd {
        Command::Build(o) => ("build", o),
        Command::Render(o) => ("render", o),
        Command::Verify(o) => ("verify", o),
        Command::Sigma(o) => ("sigma", o),
        Command::Witness(o) => ("witness", o),
        Command::Jordan(o) => ("jordan", o),
        Command::Scan(o) => ("scan", o),
        Command::Group(o) => ("group", o),
    };
    let r = load(opts.clone())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match name {
        "build" => cmd_build(&r),
        "render" => cmd_render(&r),
        "verify" => cmd_verify(&r),
        "sigma" => cmd_sigma(&r),
        "witness" => cmd_witness(&r),
        "jordan" => cmd_jordan(&r),
        "scan" => cmd_scan(&r),
        _ => cmd_group(&r),
    })
}

fn load(opts: Common) -> Result<Run, Failure> {
    let file = match &opts.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str::<RunFile>(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunFile::default(),
    };
    let mut cfg = file.family;
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    cfg.check()?;
    let xi = file.xi.unwrap_or_else(|| cfg.witness_xi());
    cfg.check_xi(xi)?;
    if opts.threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    if let Some(e) = opts.eps {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Failure::Usage(format!("--eps must be positive, got {e}")));
        }
    }
    Ok(Run { cfg, xi, checks: file.checks, opts })
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn cmd_build(r: &Run) -> Outcome {
    let z = build_zipper(&r.cfg, r.xi)?;
    let validation = validate(&z, BUILD_TOL)?;
    #[derive(Serialize)]
    struct Doc<'a> {
        xi: ParamXi,
        zipper: zipper3d::zipper::ZipperDoc,
        validation: &'a zipper3d::zipper::ValidationReport,
    }
    match &r.opts.out {
        Some(p) => {
            std::fs::write(p, z.to_json()? + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            emit(&None, &validation)?;
        }
        None => emit(&None, &Doc { xi: r.xi, zipper: (&z).into(), validation: &validation })?,
    }
    Ok(validation.pass)
}

fn cmd_render(r: &Run) -> Outcome {
    let depth = r.opts.depth.unwrap_or(3);
    let rows = (2 * r.cfg.m as u128).checked_pow(depth as u32).map(|n| n + 1);
    if depth > MAX_RENDER_DEPTH || rows.map_or(true, |n| n > MAX_RENDER_ROWS) {
        return Err(Failure::Usage(format!(
            "depth {depth} too large: {} rows exceed the limit of {MAX_RENDER_ROWS}",
            rows.map_or("too many".into(), |n| n.to_string())
        )));
    }
    let z = build_zipper(&r.cfg, r.xi)?;
    let line = refine(&z, &r.cfg.linear_zipper()?, depth)?;
    let ply = r.opts.out.as_deref().and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("ply"));
    let mut w = sink(&r.opts.out)?;
    if ply {
        line.write_ply(&mut w)?;
    } else {
        line.write_csv(&mut w)?;
    }
    w.flush()?;
    Ok(true)
}

fn cmd_verify(r: &Run) -> Outcome {
    let names: Option<Vec<&str>> = r.checks.as_ref().map(|c| c.iter().map(String::as_str).collect());
    let report = verify_suite(&r.cfg, r.xi, names.as_deref())?;
    emit(&r.opts.out, &report)?;
    Ok(report.pass())
}

fn cmd_sigma(r: &Run) -> Outcome {
    let sigma = enumerate_sigma(&r.cfg, r.opts.kmax.unwrap_or(60))?;
    emit(&r.opts.out, &sigma)?;
    Ok(true)
}

fn cmd_witness(r: &Run) -> Outcome {
    let eps = r.opts.eps.unwrap_or(1e-3);
    let scan = wsp_search(&r.cfg, r.xi, eps, r.opts.maxn.unwrap_or(2000))?;
    let k_max = r.opts.kmax.unwrap_or(3) as usize;
    let sigma = enumerate_sigma(&r.cfg, 2 * k_max as u64 + 2)?;
    let sigma_witnesses = (1..=k_max.min(sigma.len()))
        .map(|k| wsp_witness(&r.cfg, r.xi, &sigma, k))
        .collect::<zipper3d::Result<Vec<_>>>()?;
    let best = scan.best().map(|b| b.2);
    #[derive(Serialize)]
    struct Doc<'a> {
        xi: ParamXi,
        best_identity_distance: Option<f64>,
        scan: &'a zipper3d::family::WitnessScan,
        sigma_witnesses: Vec<zipper3d::family::WspWitness>,
    }
    emit(&r.opts.out, &Doc { xi: r.xi, best_identity_distance: best, scan: &scan, sigma_witnesses })?;
    Ok(best.is_some_and(|d| d < WITNESS_TARGET))
}

fn cmd_jordan(r: &Run) -> Outcome {
    let cert = jordan_check(&r.cfg, r.xi, r.opts.kmax.unwrap_or(4) as usize, r.opts.depth.unwrap_or(14))?;
    emit(&r.opts.out, &cert)?;
    Ok(cert.all_gaps_positive)
}

fn cmd_scan(r: &Run) -> Outcome {
    let dims = r.opts.grid.unwrap_or((5, 5, 5));
    let report = scan_d(&r.cfg, dims, r.opts.kmax.unwrap_or(4) as usize, r.opts.depth.unwrap_or(14))?;
    match &r.opts.out {
        Some(p) => {
            let mut w = sink(&Some(p.clone()))?;
            report.write_csv(&mut w)?;
            w.flush()?;
            emit(&None, &report)?;
        }
        None => emit(&None, &report)?,
    }
    Ok(report.positive > 0)
}

fn cmd_group(r: &Run) -> Outcome {
    let g = r.cfg.generators()?;
    let coverage = phase_coverage(&g, &phase_grid(PHASE_TARGETS), r.opts.eps.unwrap_or(0.1), r.opts.maxn.unwrap_or(20_000));
    let relation = kronecker_test(log_coordinate(g.xi), log_coordinate(g.eta), RELATION_HEIGHT)?;
    #[derive(Serialize)]
    struct Doc<'a> {
        generators: zipper3d::cstar::GenPair,
        relation: zipper3d::cstar::DensityCert,
        coverage: &'a zipper3d::cstar::PhaseCoverage,
    }
    emit(&r.opts.out, &Doc { generators: g, relation, coverage: &coverage })?;
    Ok(coverage.verdict == zipper3d::cstar::Evidence::SecondType)
}
