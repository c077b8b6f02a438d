use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Experiments on warped-product metrics, flat circle bundles and tree-graded spaces.
#[derive(Debug, Parser)]
#[command(name = "warpgeom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Paper,
    HeintzeSchroeder,
    Fujiwara,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    Hyperbolic,
    HeisenbergMixed,
    Convergence,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the warping pair on [-rho, eps] and write its spec.
    Construct {
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long, value_enum, default_value = "paper")]
        variant: Variant,
        /// Shift of the h tail, Fujiwara variant only.
        #[arg(long)]
        tau: Option<f64>,
        /// Starting rho; defaults to the tangent-line threshold.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Spec file; without it the spec follows the report on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal curvatures on a grid, as CSV.
    Curvature {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        step: f64,
    },
    /// Certified sectional curvature bounds.
    Certify {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Volume of the end (-inf, r0] over a base of volume volB.
    Volume {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        r0: f64,
        #[arg(long = "volB", alias = "vol-b")]
        vol_b: f64,
    },
    /// Finite-difference oracle self-checks.
    Oracle {
        #[arg(long, value_enum)]
        check: OracleCheck,
    },
    /// Trivializing cover of a flat circle bundle.
    Bundle {
        /// Free holonomy angles in turns, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        free: Vec<f64>,
        /// Torsion summand `ORDER:ANGLE` with the angle a fraction of a turn, e.g. `5:2/5`.
        #[arg(long)]
        torsion: Vec<String>,
        /// Holonomy after deforming to time t in [0, 1].
        #[arg(long)]
        deform: Option<f64>,
        /// The data describes the orientation double cover of a non-orientable bundle.
        #[arg(long)]
        nonorientable: bool,
    },
    /// Handles of the complement of totally geodesic strata.
    Morse {
        #[arg(long, value_delimiter = ',', required = true)]
        codims: Vec<u32>,
        /// The list is a truncation of a countably infinite family.
        #[arg(long)]
        countable: bool,
    },
    /// Openness of a triangle in R x T.
    Tree {
        /// Edge list, one `u v length` per line.
        #[arg(long)]
        tree: PathBuf,
        /// Three points `t,VERTEX` or `t,U:V:OFFSET`.
        #[arg(long, num_args = 3, required = true, allow_hyphen_values = true)]
        open: Vec<String>,
        /// Search for an open triangle with the third vertex moved by at most 1/N.
        #[arg(long)]
        perturb: Option<u32>,
    },
}

/// Exit status 1 for bad input, 2 for a failed scientific check.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    /// Report to print on stdout, and the reason.
    Science(String, anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

pub type Outcome = Result<String, Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            eps,
            variant,
            tau,
            rho,
            n,
            out,
        } => {
            let variant = match (variant, tau) {
                (Variant::Fujiwara, Some(tau)) => warpgeom::warpfn::MetricVariant::Fujiwara { tau },
                (Variant::Fujiwara, None) => {
                    return Err(Failure::Input(anyhow!("--variant fujiwara needs --tau")))
                }
                (_, Some(_)) => {
                    return Err(Failure::Input(anyhow!(
                        "--tau applies to the fujiwara variant only"
                    )))
                }
                (Variant::Paper, None) => warpgeom::warpfn::MetricVariant::PaperNegative,
                (Variant::HeintzeSchroeder, None) => {
                    warpgeom::warpfn::MetricVariant::HeintzeSchroeder
                }
            };
            let (report, spec) = commands::construct(eps, variant, rho, n)?;
            match out {
                Some(path) => {
                    fs::write(&path, spec)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    Ok(report)
                }
                // report as comments, so stdout is itself a spec file
                None => Ok(report
                    .lines()
                    .map(|l| format!("# {l}\n"))
                    .collect::<String>()
                    + &spec),
            }
        }
        Command::Curvature {
            spec,
            from,
            to,
            step,
        } => commands::curvature(&read(&spec)?, from, to, step),
        Command::Certify { spec } => commands::certify(&read(&spec)?),
        Command::Volume { spec, r0, vol_b } => commands::volume(&read(&spec)?, r0, vol_b),
        Command::Oracle { check } => match check {
            OracleCheck::Hyperbolic => commands::oracle_hyperbolic(),
            OracleCheck::HeisenbergMixed => commands::oracle_heisenberg(),
            OracleCheck::Convergence => commands::oracle_convergence(),
        },
        Command::Bundle {
            free,
            torsion,
            deform,
            nonorientable,
        } => commands::bundle(free, &torsion, deform, nonorientable),
        Command::Morse { codims, countable } => commands::morse(codims, countable),
        Command::Tree {
            tree,
            open,
            perturb,
        } => commands::tree(&read(&tree)?, &open, perturb),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Science(out, e)) => {
            print!("{out}");
            eprintln!("failed: {e:#}");
            ExitCode::from(2)
        }
    }
}
