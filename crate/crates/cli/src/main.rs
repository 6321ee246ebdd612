use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specbox_cli::commands::{self, Tolerances, Weight};
use specbox_cli::svg::{render_svg, RenderOptions};
use specbox_cli::{CliError, CliResult, ProblemFile, ResultBundle};
use specbox_core::qnr::QnrStrategy;
use specbox_core::sharpness::SharpnessSpec;
use specbox_core::{Execution, Rect};

#[derive(Parser)]
#[command(name = "specbox", version, about = "Spectral enclosures for [[A, B], [-B*, D]] with Hermitian A, D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Write output here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Run data-parallel loops on a single thread.
    #[arg(long)]
    sequential: bool,
    /// Relative Hermitian-symmetry tolerance for A and D.
    #[arg(long, default_value_t = Tolerances::default().herm)]
    tol_herm: f64,
    /// Boundary band around 1 for certificate norms.
    #[arg(long, default_value_t = Tolerances::default().cert)]
    tol_cert: f64,
    /// Relative threshold for the coupled part of a spectrum.
    #[arg(long, default_value_t = Tolerances::default().support)]
    tol_support: f64,
    /// Distance at which an eigenvalue counts as on a region boundary.
    #[arg(long, default_value_t = Tolerances::default().boundary)]
    tol_boundary: f64,
}

impl Common {
    fn tolerances(&self) -> CliResult<Tolerances> {
        let t = Tolerances {
            herm: self.tol_herm,
            cert: self.tol_cert,
            support: self.tol_support,
            boundary: self.tol_boundary,
        };
        for (name, v) in [("tol-herm", t.herm), ("tol-cert", t.cert), ("tol-support", t.support), ("tol-boundary", t.boundary)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Validation(format!("--{name} must be finite and non-negative (got {v})")));
            }
        }
        Ok(t)
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    One,
    Invabs,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Random,
    Eigenvector,
    Mixed,
}

#[derive(Subcommand)]
enum Command {
    /// Enclosure regions, oracle eigenvalues and a membership table.
    Enclose {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "one,invabs")]
        weights: Vec<WeightArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Certificate masks and resolvent-bound layers on a grid.
    Certify {
        input: PathBuf,
        /// Grid box and node counts: XMIN XMAX YMIN YMAX NX NY.
        #[arg(long, num_args = 6, value_names = ["XMIN", "XMAX", "YMIN", "YMAX", "NX", "NY"], allow_negative_numbers = true)]
        grid: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the quadratic numerical range and check eigenvalue witnesses.
    Qnr {
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, value_enum, default_value = "mixed")]
        strategy: StrategyArg,
        #[arg(long, env = "SPECBOX_SEED", default_value_t = specbox_core::qnr::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Diagonal operator whose spectrum fills the quadratic-range enclosure.
    Sharpness {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
        a: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, required = true)]
        d: Vec<f64>,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, env = "SPECBOX_SEED", default_value_t = specbox_core::qnr::DEFAULT_SEED)]
        seed: u64,
        /// Reference points for the density report.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Also write the built operator as a problem file.
        #[arg(long)]
        operator_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Validity, frame bounds and enclosures for J-frame data.
    Jframe {
        input: PathBuf,
        /// Other-side bounds GAMMA_MINUS ALPHA_PLUS for the prior-bound comparison.
        #[arg(long, num_args = 2, value_names = ["GAMMA_MINUS", "ALPHA_PLUS"])]
        corky_bounds: Option<Vec<f64>>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, env = "SPECBOX_SEED", default_value_t = specbox_core::qnr::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Render a result bundle as SVG.
    Render {
        bundle: PathBuf,
        /// Plot window XMIN XMAX YMIN YMAX.
        #[arg(long, num_args = 4, value_names = ["XMIN", "XMAX", "YMIN", "YMAX"], allow_negative_numbers = true)]
        clip: Option<Vec<f64>>,
        #[arg(long, default_value_t = 800)]
        width: u32,
        /// Only draw regions with these tags.
        #[arg(long, value_delimiter = ',')]
        regions: Option<Vec<String>>,
        #[command(flatten)]
        common: Common,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_grid(raw: &[String]) -> CliResult<(Rect, usize, usize)> {
    let f = |s: &String| s.parse::<f64>().map_err(|e| CliError::Validation(format!("--grid: {s}: {e}")));
    let u = |s: &String| s.parse::<usize>().map_err(|e| CliError::Validation(format!("--grid: {s}: {e}")));
    Ok((Rect::new(f(&raw[0])?, f(&raw[1])?, f(&raw[2])?, f(&raw[3])?), u(&raw[4])?, u(&raw[5])?))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Enclose { input, weights, common } => {
            let p = ProblemFile::parse(&read(&input)?)?;
            let w: Vec<Weight> = weights
                .iter()
                .map(|w| match w {
                    WeightArg::One => Weight::One,
                    WeightArg::Invabs => Weight::InvAbs,
                })
                .collect();
            let b = commands::cmd_enclose(&p, &w, &common.tolerances()?)?;
            write_out(common.output.as_deref(), &b.to_json())
        }
        Command::Certify { input, grid, common } => {
            let p = ProblemFile::parse(&read(&input)?)?;
            let (rect, nx, ny) = match grid {
                Some(g) => parse_grid(&g)?,
                None => default_grid(&p, &common)?,
            };
            let b = commands::cmd_certify(&p, rect, nx, ny, &common.tolerances()?, common.exec())?;
            write_out(common.output.as_deref(), &b.to_json())
        }
        Command::Qnr { input, count, strategy, seed, common } => {
            let p = ProblemFile::parse(&read(&input)?)?;
            let strategy = match strategy {
                StrategyArg::Random => QnrStrategy::RandomUnit,
                StrategyArg::Eigenvector => QnrStrategy::EigenvectorDirected,
                StrategyArg::Mixed => QnrStrategy::Mixed,
            };
            let b = commands::cmd_qnr(&p, count, strategy, seed, &common.tolerances()?, common.exec())?;
            write_out(common.output.as_deref(), &b.to_json())
        }
        Command::Sharpness { a, d, b, n, seed, samples, operator_out, common } => {
            let spec = SharpnessSpec {
                a_lo: a[0],
                a_hi: a[1],
                d_lo: d[0],
                d_hi: d[1],
                b,
                n,
                seed,
            };
            let (bundle, cons) = commands::cmd_sharpness(&spec, samples, common.exec())?;
            if let Some(path) = operator_out {
                let mut file = ProblemFile::from_operator(&cons.operator());
                file.meta = Some(serde_json::json!({ "sharpness": spec }));
                write_out(Some(&path), &file.to_json())?;
            }
            write_out(common.output.as_deref(), &bundle.to_json())
        }
        Command::Jframe { input, corky_bounds, samples, seed, common } => {
            let p = ProblemFile::parse(&read(&input)?)?;
            let cb = corky_bounds.map(|v| (v[0], v[1]));
            let b = commands::cmd_jframe(&p, cb, samples, seed, &common.tolerances()?)?;
            write_out(common.output.as_deref(), &b.to_json())
        }
        Command::Render { bundle, clip, width, regions, common } => {
            let b = ResultBundle::from_json(&read(&bundle)?)?;
            let opts = RenderOptions {
                clip: clip.map(|c| Rect::new(c[0], c[1], c[2], c[3])),
                width,
                tags: regions,
                ..RenderOptions::default()
            };
            write_out(common.output.as_deref(), &render_svg(&b, &opts))
        }
    }
}

/// Upper half of the padded enclosure extent, 200×100 nodes, starting just
/// above the real axis.
fn default_grid(p: &specbox_cli::problem::Parsed, common: &Common) -> CliResult<(Rect, usize, usize)> {
    let s = p.operator(common.tolerances()?.herm)?;
    let sp = s.spectra()?;
    let ext = specbox_core::enclosure::qnr_enclosure(&sp)
        .extent()
        .filter(|e| e.is_finite())
        .unwrap_or(Rect::new(-1.0, 1.0, -1.0, 1.0))
        .padded(0.05, 0.1);
    let ymax = ext.ymax.max(0.1);
    Ok((Rect::new(ext.xmin, ext.xmax, ymax / 100.0, ymax), 200, 100))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
