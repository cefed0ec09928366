//! Command-line front end: pack instances, generate instance families,
//! verify the charging-scheme properties, print coverage certificates, and
//! render packings as SVG.
//!
//! Exit codes: 0 success, 1 I/O or format error, 2 violated precondition or
//! usage error, 3 verification failure or unavailable certificate.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use render::{render_svg, RenderStyle};
use tilepack::bounds::{self, XiKind};
use tilepack::charging;
use tilepack::generators::{self, AdversarialParams};
use tilepack::geometry::{GeneralizedTile, Instance, Tile};
use tilepack::packing::{self, PackingRecord};
use tilepack::transforms;
use tilepack::Error;

#[derive(Parser)]
#[command(name = "tilepack", version, about = "Greedy anchored-rectangle tile packing tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack an instance file and write the packing (optionally an SVG).
    Pack {
        /// Instance JSON file.
        input: PathBuf,
        /// Packing JSON output path.
        #[arg(long)]
        out: PathBuf,
        /// Also render the packing to this SVG path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Include the pentagon overlay in the SVG.
        #[arg(long)]
        pentagon: bool,
        /// Render style JSON (defaults to $TILEPACK_STYLE or built-ins).
        #[arg(long)]
        style: Option<PathBuf>,
    },
    /// Generate an instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run verification checks on instances.
    Verify(VerifyArgs),
    /// Print the bound constants (rho*, values and derivative there).
    Bounds,
    /// Print the coverage certificate for a packing file.
    Certify {
        /// Packing JSON file (as written by `pack`).
        packing: PathBuf,
    },
    /// Apply a tile transformation to a tile file.
    Transform {
        #[arg(long, value_enum)]
        op: TransformOp,
        /// Tile JSON ({"anchor", "gamma"}) or, for shorter-side, a
        /// generalized tile ({"sections"}).
        #[arg(long)]
        input: PathBuf,
        /// Output path for the transformed tile (stdout carries the check).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Section index of the step for shorter-side.
        #[arg(long, default_value_t = 0)]
        step_index: usize,
        /// Iteration budget for two-point.
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
    },
    /// Render a packing file to SVG.
    Render {
        /// Packing JSON file.
        packing: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pentagon: bool,
        #[arg(long)]
        style: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Equally spaced points on the ascending diagonal.
    Diagonal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Origin plus uniform random points, seeded.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// The crown-tight family P_eps (1/eps must be an integer).
    CrownTight {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// The adversarial hyperbola/curve construction.
    Adversarial {
        /// Maximal-rectangle target area of the origin tile.
        #[arg(long, default_value_t = (-2.0f64).exp())]
        a: f64,
        #[arg(long)]
        k: usize,
        /// Grid spacing in the rotated frame.
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
        /// Optional CSV dump of the integrated curve family.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance JSON file (omit when using --batch).
    input: Option<PathBuf>,
    /// Directory of instance JSON files verified concurrently.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Checks to run.
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1.., default_values_t = [CheckKind::All])]
    checks: Vec<CheckKind>,
    /// Sample count for the partition check.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Seed for the partition sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    All,
    Partition,
    Crowns,
    Pentagon,
    Ratios,
    Exclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    Normalize,
    Prune,
    TwoPoint,
    ShorterSide,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::InvalidInstance(_) | Error::InvalidTile(_) => 1,
        Error::NotGeneralPosition(_)
        | Error::Parameter(_)
        | Error::Precondition(_)
        | Error::DegenerateTile(_)
        | Error::CoarseGrid { .. } => 2,
        Error::Certification(_) => 3,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Pack { input, out, svg, pentagon, style } => {
            let inst = Instance::from_json(&std::fs::read_to_string(&input)?)?;
            let pk = packing::pack(&inst)?;
            let crowns = charging::crowns(&pk);
            let areas: Vec<f64> = crowns.iter().map(|c| c.total).collect();
            let record = PackingRecord::new(&pk, Some(&areas));
            std::fs::write(&out, serde_json::to_string_pretty(&record)?)?;
            if let Some(svg_path) = svg {
                let style = load_style(style.as_deref())?;
                std::fs::write(&svg_path, render_svg(&pk, Some(&crowns), &style, pentagon))?;
            }
            println!("{}", json!({ "n": record.n, "coverage": record.coverage, "out": out }));
            Ok(0)
        }
        Command::Gen(gen) => {
            let (inst, out) = match gen {
                GenCommand::Diagonal { n, out } => (generators::gen_diagonal(n)?, out),
                GenCommand::Random { n, seed, out } => (generators::gen_random(n, seed), out),
                GenCommand::CrownTight { eps, out } => (generators::gen_crown_tight(eps)?, out),
                GenCommand::Adversarial { a, k, eps, out, curves } => {
                    let params = AdversarialParams::new(a, k, eps);
                    let (inst, family) = generators::gen_adversarial(&params)?;
                    let report = generators::verify_curve_family(&family);
                    if let Some(path) = curves {
                        std::fs::write(&path, family.to_csv())?;
                    }
                    if !report.pass {
                        eprintln!("warning: curve family checks failed: {report:?}");
                    }
                    (inst, out)
                }
            };
            std::fs::write(&out, inst.to_json())?;
            println!("{}", json!({ "label": inst.label, "n": inst.len(), "out": out }));
            Ok(0)
        }
        Command::Verify(args) => cmd_verify(args),
        Command::Bounds => {
            let rs = bounds::rho_star(XiKind::Strong);
            let convexity = bounds::check_point_convexity(XiKind::Strong, rs, 10_000)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "rho_star_weak": bounds::rho_star(XiKind::Weak),
                    "rho_star": rs,
                    "xi_at_rho_star": bounds::xi(XiKind::Strong, rs)?,
                    "xi_prime_at_rho_star": bounds::xi_prime(XiKind::Strong, rs)?,
                    "tangent_at_half": 1.5 + bounds::xi_prime(XiKind::Strong, rs)? * (0.5 - rs),
                    "point_convex": convexity.pass,
                }))?
            );
            Ok(0)
        }
        Command::Certify { packing } => {
            let record: PackingRecord = serde_json::from_str(&std::fs::read_to_string(&packing)?)?;
            let pk = record.to_packing()?;
            let cert = bounds::certify(&pk)?;
            println!("{}", serde_json::to_string_pretty(&cert)?);
            Ok(0)
        }
        Command::Transform { op, input, out, step_index, max_iter } => {
            let text = std::fs::read_to_string(&input)?;
            let (tile_json, check) = match op {
                TransformOp::Normalize => {
                    let t = Tile::from_json(&text)?;
                    let n = transforms::normalize(&t);
                    let check = transforms::check_precedes_tiles(&t, &n);
                    (n.to_json(), check)
                }
                TransformOp::Prune => {
                    let t = Tile::from_json(&text)?;
                    let p = transforms::prune_degenerate(&t);
                    let check = transforms::check_precedes_tiles(&t, &p);
                    (p.to_json(), check)
                }
                TransformOp::TwoPoint => {
                    let t = Tile::from_json(&text)?;
                    let outcome = transforms::two_point_slide(&t, max_iter)?;
                    if !outcome.converged {
                        eprintln!("warning: iteration budget exhausted; partial result");
                    }
                    let check = transforms::check_precedes_tiles(&t, &outcome.tile);
                    (outcome.tile.to_json(), check)
                }
                TransformOp::ShorterSide => {
                    let gt = GeneralizedTile::from_json(&text)?;
                    let swapped = transforms::shorter_side_swap(&gt, step_index)?;
                    let check = transforms::check_precedes(
                        &transforms::Measures::of_generalized(&gt),
                        &transforms::Measures::of_generalized(&swapped),
                    );
                    (swapped.to_json(), check)
                }
            };
            if let Some(path) = &out {
                std::fs::write(path, &tile_json)?;
                println!("{}", serde_json::to_string_pretty(&check)?);
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "check": check,
                        "tile": serde_json::from_str::<serde_json::Value>(&tile_json)?,
                    }))?
                );
            }
            Ok(0)
        }
        Command::Render { packing, out, pentagon, style } => {
            let record: PackingRecord = serde_json::from_str(&std::fs::read_to_string(&packing)?)?;
            let pk = record.to_packing()?;
            let crowns = charging::crowns(&pk);
            let style = load_style(style.as_deref())?;
            std::fs::write(&out, render_svg(&pk, Some(&crowns), &style, pentagon))?;
            Ok(0)
        }
    }
}

fn load_style(path: Option<&Path>) -> Result<RenderStyle, Error> {
    let path = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os("TILEPACK_STYLE").map(PathBuf::from),
    };
    match path {
        Some(p) => Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?),
        None => Ok(RenderStyle::default()),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Error> {
    if let Some(dir) = &args.batch {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        files.sort();
        type FileResult = (PathBuf, Result<(serde_json::Value, bool), Error>);
        let results: Vec<FileResult> = files
            .par_iter()
            .map(|f| (f.clone(), verify_file(f, &args)))
            .collect();
        let mut all_pass = true;
        for (file, res) in results {
            match res {
                Ok((report, pass)) => {
                    all_pass &= pass;
                    println!("{}", json!({ "file": file, "pass": pass, "report": report }));
                }
                Err(e) => {
                    all_pass = false;
                    println!("{}", json!({ "file": file, "error": e.to_string() }));
                }
            }
        }
        return Ok(if all_pass { 0 } else { 3 });
    }

    let Some(input) = &args.input else {
        return Err(Error::Parameter("verify needs an instance file or --batch".into()));
    };
    let (report, pass) = verify_file(input, &args)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if pass { 0 } else { 3 })
}

fn verify_file(path: &Path, args: &VerifyArgs) -> Result<(serde_json::Value, bool), Error> {
    let inst = Instance::from_json(&std::fs::read_to_string(path)?)?;
    let pk = packing::pack(&inst)?;
    let want = |kind: CheckKind| {
        args.checks.contains(&CheckKind::All) || args.checks.contains(&kind)
    };

    let mut checks = Vec::new();
    let mut pass = true;
    let crowns = charging::crowns(&pk);

    if want(CheckKind::Partition) {
        let r = packing::verify_partition(&pk, args.samples, args.seed);
        pass &= r.pass;
        checks.push(json!({ "check": "partition", "pass": r.pass,
            "total_tile_area": r.total_tile_area, "witnesses": r.violations }));
    }
    if want(CheckKind::Exclusive) {
        let r = packing::verify_exclusive_areas(&inst, &pk);
        pass &= r.pass;
        checks.push(json!({ "check": "exclusive", "pass": r.pass, "witnesses": r.violations }));
    }
    if want(CheckKind::Crowns) {
        let r = charging::crowns_disjoint(&crowns, 1e-12);
        pass &= r.pass;
        checks.push(json!({ "check": "crowns", "pass": r.pass,
            "worst_overlap": r.worst_overlap, "witnesses": r.violations }));
    }
    if want(CheckKind::Pentagon) {
        let r = charging::pentagon_containment(&crowns, 1e-9);
        let c_star = charging::total_charge(&crowns);
        let capped = c_star <= 1.5 + 1e-9;
        pass &= r.pass && capped;
        checks.push(json!({ "check": "pentagon", "pass": r.pass && capped,
            "c_star": c_star, "witnesses": r.violations }));
    }
    if want(CheckKind::Ratios) {
        let r = charging::charging_ratio_report(&pk, &crowns, |rho| {
            bounds::xi(XiKind::Strong, rho).expect("densities lie in (0,1]")
        });
        pass &= r.pass;
        let cert = bounds::certify_with_crowns(&pk, &crowns);
        let cert_json = match &cert {
            Ok(c) => json!({ "certified_coverage": c.certified_coverage, "c_star": c.c_star }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        pass &= cert.is_ok();
        checks.push(json!({ "check": "ratios", "pass": r.pass,
            "min_slack": r.min_slack, "per_tile": r.per_tile, "certificate": cert_json }));
    }

    Ok((json!({ "instance": inst.label, "n": inst.len(),
        "coverage": pk.coverage(), "checks": checks, "pass": pass }), pass))
}
