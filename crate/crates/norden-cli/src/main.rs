//! Command-line front end: verification reports, curvature probes, the
//! complexify/realify/twin generators, the doubling tower, and catalog
//! access.
//!
//! Exit codes: 0 success/pass, 1 verification check failure, 2 input or
//! schema error, 3 numerical failure (a degenerate point for one-point
//! commands, or a verification check whose skipped points exceed the 20%
//! budget).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use norden::error::Error;
use norden::expr::Manifest;
use norden::verify::{self, OutputFormat, RunOptions};
use norden::{catalog, generator};

#[derive(Parser)]
#[command(
    name = "norden",
    version,
    about = "Numerical verification and generation of anti-Kähler (Norden) metrics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every applicable residual check and print a report.
    Verify {
        /// Manifest file path, or catalog:<id> (e.g. catalog:sphere(2)).
        manifest: String,
        /// Sample points per check.
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Seed for the deterministic sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for the residual-class checks.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Override the expected Einstein constant.
        #[arg(long)]
        gamma: Option<f64>,
        /// Report rendering.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print g, Γ, Riemann, Ricci, and the scalar curvature at one point.
    Curvature {
        /// Manifest file path, or catalog:<id>.
        manifest: String,
        /// Comma-separated coordinates. Real charts take dim values;
        /// holomorphic/frame charts take 2·dim values (re parts, im parts).
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Analytically continue a real-analytic metric to a holomorphic one.
    Complexify {
        manifest: String,
        /// Output manifest path.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Restrict a holomorphic metric to its real anti-Kähler form.
    Realify {
        manifest: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build the twin metric G(X,Y) = g(JX,Y) of a holomorphic metric.
    Twin {
        manifest: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Iterate complexify ∘ realify, writing level1.json .. levelK.json.
    Tower {
        manifest: String,
        /// Number of doubling levels.
        #[arg(long)]
        levels: usize,
        /// Output directory.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Browse the built-in example metrics.
    Catalog {
        #[command(subcommand)]
        sub: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List every entry id.
    List,
    /// Print one entry as manifest JSON.
    Show { id: String },
}

fn load_manifest(arg: &str) -> Result<Manifest, Error> {
    if let Some(id) = arg.strip_prefix("catalog:") {
        return catalog::get(id);
    }
    let text = fs::read_to_string(arg)
        .map_err(|e| Error::Schema(format!("cannot read '{arg}': {e}")))?;
    Manifest::from_json_str(&text)
}

fn write_manifest(man: &Manifest, path: &Path) -> Result<(), Error> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| Error::Schema(format!("cannot create '{}': {e}", dir.display())))?;
    }
    fs::write(path, man.to_json_string())
        .map_err(|e| Error::Schema(format!("cannot write '{}': {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

/// Input problems are exit 2; numerical degeneracies at a requested point
/// are exit 3.
fn error_exit(e: &Error) -> u8 {
    if e.is_pointwise() {
        3
    } else {
        2
    }
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Verify {
            manifest,
            points,
            seed,
            tol,
            gamma,
            format,
        } => {
            let man = load_manifest(&manifest)?;
            let opts = RunOptions {
                points,
                seed,
                tol,
                gamma_override: gamma,
            };
            let report = verify::run_verify(&man, &opts)?;
            let rendered = verify::render(
                &report,
                match format {
                    Format::Json => OutputFormat::Json,
                    Format::Text => OutputFormat::Text,
                },
            );
            print!("{rendered}");
            Ok(report.exit_code() as u8)
        }
        Cmd::Curvature { manifest, point } => {
            let man = load_manifest(&manifest)?;
            let coords: Result<Vec<f64>, _> = point
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect();
            let coords = coords
                .map_err(|e| Error::Schema(format!("bad --point '{point}': {e}")))?;
            let out = verify::curvature_at(&man, &coords)?;
            let mut text =
                serde_json::to_string_pretty(&out).expect("curvature output serializes");
            text.push('\n');
            print!("{text}");
            Ok(0)
        }
        Cmd::Complexify { manifest, output } => {
            let man = load_manifest(&manifest)?;
            write_manifest(&generator::complexify(&man)?, &output)?;
            Ok(0)
        }
        Cmd::Realify { manifest, output } => {
            let man = load_manifest(&manifest)?;
            write_manifest(&generator::realify(&man)?, &output)?;
            Ok(0)
        }
        Cmd::Twin { manifest, output } => {
            let man = load_manifest(&manifest)?;
            write_manifest(&generator::twin(&man)?, &output)?;
            Ok(0)
        }
        Cmd::Tower {
            manifest,
            levels,
            output,
        } => {
            let man = load_manifest(&manifest)?;
            let tower = generator::tower(&man, levels)?;
            fs::create_dir_all(&output).map_err(|e| {
                Error::Schema(format!("cannot create '{}': {e}", output.display()))
            })?;
            for level in tower.iter().skip(1) {
                let path = output.join(format!("level{}.json", level.level));
                write_manifest(&level.manifest, &path)?;
            }
            Ok(0)
        }
        Cmd::Catalog { sub } => match sub {
            CatalogCmd::List => {
                for id in catalog::census() {
                    println!("{id}");
                }
                Ok(0)
            }
            CatalogCmd::Show { id } => {
                let man = catalog::get(&id)?;
                print!("{}", man.to_json_string());
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit(&e))
        }
    }
}
