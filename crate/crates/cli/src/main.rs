//! `shapetile`: decide, search and verify weighted shapetilings of squares.
//!
//! Exit codes: 0 success (whatever the verdict), 1 verification failed,
//! 2 parse or usage error, 3 search inconclusive within bounds.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shapetile::format::{
    certificate_json, check_outcome_json, format_certificate, format_slope_report, format_tile,
    parse_certificate_with, parse_tile, slope_report_json, tile_json, verdict_json,
};
use shapetile::{
    condition2_check, decide_q, decide_z, raster_check, render_certificate, search_tile,
    verify_certificate, Certificate, CheckOutcome, RenderOptions, SearchBounds, SearchMode,
    SearchOptions, WeightedTile,
};

const WORKERS_VAR: &str = "SHAPETILE_WORKERS";

#[derive(Parser)]
#[command(
    name = "shapetile",
    version,
    about = "Weighted shapetiling of squares by rectangular tiles"
)]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a tile file and print its canonical form.
    Check { tile: PathBuf },
    /// Decide whether the tile shapetiles a square with rational and with integer weights.
    Decide { tile: PathBuf },
    /// Print the slope classes and their area gcds.
    Slopes { tile: PathBuf },
    /// Search for a certificate within bounds.
    Search(SearchArgs),
    /// Check a certificate file.
    Verify {
        certificate: PathBuf,
        /// Also compare sampled weight functions at this many samples per unit.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        raster: Option<u32>,
    },
    /// Draw a certificate as SVG.
    Render {
        certificate: PathBuf,
        /// Pixels per unit length.
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(id = "mode", multiple = false)]
struct ModeFlags {
    /// Integer weights (default).
    #[arg(long)]
    integer: bool,
    /// Rational weights.
    #[arg(long)]
    rational: bool,
    /// Integer weights tiling a square w times; reports w.
    #[arg(long = "weight-w")]
    weight_w: bool,
}

#[derive(Args)]
struct SearchArgs {
    tile: PathBuf,
    /// Largest scale factor of the placed copies.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    max_scale: u32,
    /// Shifts and target squares lie in [0, window]^2 of the lattice form.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    window: u32,
    #[command(flatten)]
    mode: ModeFlags,
    /// Refuse systems with more unknowns than this.
    #[arg(long, default_value_t = shapetile::certify::DEFAULT_MAX_UNKNOWNS)]
    max_unknowns: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    VerifyFailed = 1,
    Inconclusive = 3,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_tile(path: &Path) -> anyhow::Result<WeightedTile> {
    let text = read(path)?;
    parse_tile(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_certificate(path: &Path) -> anyhow::Result<Certificate> {
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_certificate_with(&text, |reference| {
        let p = base.join(reference);
        let body = fs::read_to_string(&p).map_err(|e| format!("reading {}: {e}", p.display()))?;
        parse_tile(&body).map_err(|e| format!("{}: {e}", p.display()))
    })
    .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Status> {
    let structured = cli.format == Format::Structured;
    match cli.command {
        Command::Check { tile } => {
            let t = load_tile(&tile)?;
            let body = if structured {
                pretty(&tile_json(&t))
            } else {
                format_tile(&t)
            };
            out.write_all(body.as_bytes())?;
        }
        Command::Decide { tile } => {
            let t = load_tile(&tile)?;
            let q = decide_q(&t)?;
            let z = decide_z(&t);
            if structured {
                let z_json = match &z {
                    Ok(v) => verdict_json(v),
                    Err(e) => json!({ "question": "Z", "error": e.to_string() }),
                };
                out.write_all(pretty(&json!({ "q": verdict_json(&q), "z": z_json })).as_bytes())?;
            } else {
                writeln!(out, "{q}")?;
                match &z {
                    Ok(v) => writeln!(out, "{v}")?,
                    Err(e) => writeln!(out, "Z: not applicable: {e}")?,
                }
                writeln!(out, "area: {}", shapetile::rational::fmt_rational(&q.area))?;
                writeln!(
                    out,
                    "lattice scale: {}",
                    shapetile::rational::fmt_rational(&q.lattice_scale)
                )?;
            }
        }
        Command::Slopes { tile } => {
            let t = load_tile(&tile)?;
            let form = t.to_lattice()?;
            let report = condition2_check(&form.tile)?;
            let body = if structured {
                pretty(&slope_report_json(&report))
            } else {
                format_slope_report(&report)
            };
            out.write_all(body.as_bytes())?;
        }
        Command::Search(args) => return search(args, structured, out),
        Command::Verify {
            certificate,
            raster,
        } => {
            let c = load_certificate(&certificate)?;
            let outcome = verify_certificate(&c);
            let raster_ok = match raster {
                Some(res) => Some(raster_check(&c, res)?),
                None => None,
            };
            let pass = outcome.is_valid() && raster_ok != Some(false);
            if structured {
                let mut v = json!({ "pass": pass, "identity": check_outcome_json(&outcome) });
                if let (Some(res), Some(ok)) = (raster, raster_ok) {
                    v["raster"] = json!({ "resolution": res, "pass": ok });
                }
                out.write_all(pretty(&v).as_bytes())?;
            } else {
                match &outcome {
                    CheckOutcome::Valid => writeln!(out, "identity: pass")?,
                    other => writeln!(out, "identity: fail: {other}")?,
                }
                if let (Some(res), Some(ok)) = (raster, raster_ok) {
                    writeln!(
                        out,
                        "raster (resolution {res}): {}",
                        if ok { "pass" } else { "fail" }
                    )?;
                }
                writeln!(out, "{}", if pass { "pass" } else { "fail" })?;
            }
            return Ok(if pass {
                Status::Ok
            } else {
                Status::VerifyFailed
            });
        }
        Command::Render {
            certificate,
            scale,
            output,
        } => {
            if !(scale.is_finite() && scale > 0.0) {
                anyhow::bail!("--scale must be positive");
            }
            let c = load_certificate(&certificate)?;
            let svg = render_certificate(
                &c,
                RenderOptions {
                    scale,
                    ..RenderOptions::default()
                },
            );
            emit(out, output.as_deref(), &svg)?;
        }
    }
    Ok(Status::Ok)
}

fn search(args: SearchArgs, structured: bool, out: &mut dyn Write) -> anyhow::Result<Status> {
    let t = load_tile(&args.tile)?;
    let mode = if args.mode.rational {
        SearchMode::Rational
    } else if args.mode.weight_w {
        SearchMode::WeightW
    } else {
        SearchMode::Integer
    };
    let bounds = SearchBounds::new(args.max_scale, args.window);
    let opts = SearchOptions {
        bounds,
        max_unknowns: args.max_unknowns,
    };
    match search_tile(&t, mode, opts)? {
        Some(c) => {
            let body = if structured {
                pretty(&certificate_json(&c))
            } else {
                format_certificate(&c)
            };
            emit(out, args.output.as_deref(), &body)?;
            Ok(Status::Ok)
        }
        None => {
            if structured {
                let v = json!({
                    "status": "inconclusive",
                    "maxScale": args.max_scale,
                    "window": args.window,
                });
                out.write_all(pretty(&v).as_bytes())?;
            } else {
                writeln!(
                    out,
                    "inconclusive within bounds (max scale {}, window {})",
                    args.max_scale, args.window
                )?;
            }
            Ok(Status::Inconclusive)
        }
    }
}

fn configure_workers() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(WORKERS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("{WORKERS_VAR} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
