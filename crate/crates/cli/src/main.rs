use std::path::PathBuf;
use std::process::ExitCode;

use avgcoh::commands::{self, CliError, ComplexKind, ExtendMode, LinftyMode};
use avgcoh::render;
use clap::{Args, Parser, Subcommand};

/// Exact checks for averaging algebras, their cohomology, deformations,
/// extensions and L-infinity structures.
#[derive(Parser)]
#[command(name = "avgcoh", version)]
struct Cli {
    /// Emit key=value lines instead of the text report.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an algebra file and its bimodule.
    Verify { file: PathBuf },
    /// Cohomology dimensions of a cochain complex.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = ComplexKind::Ava)]
        complex: ComplexKind,
    },
    /// Residuals of a formal deformation jet.
    Deform {
        file: PathBuf,
        jet: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        /// Look for a formal isomorphism to the undeformed structure.
        #[arg(long)]
        search_trivial: bool,
    },
    /// Abelian extensions by the file's bimodule (or the regular one).
    Extend(ExtendArgs),
    /// The L-infinity structure: Maurer-Cartan check, twisted differential, identities.
    Linfty(LinftyArgs),
    /// Identities of a homotopy averaging structure.
    Homotopy {
        file: PathBuf,
        #[arg(long)]
        arity_cap: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "mode")]
struct ExtendGroup {
    /// Dimension of the second cohomology and class representatives.
    #[arg(long)]
    classify: bool,
    /// Build the extension of an extension-data file.
    #[arg(long, value_name = "DATA")]
    from_cocycle: Option<PathBuf>,
    /// Decide whether two extension-data files give isomorphic extensions.
    #[arg(long, num_args = 2, value_names = ["DATA1", "DATA2"])]
    compare: Option<Vec<PathBuf>>,
}

#[derive(Args)]
struct ExtendArgs {
    file: PathBuf,
    #[command(flatten)]
    mode: ExtendGroup,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "linfty-mode")]
struct LinftyGroup {
    /// Whether the algebra is a Maurer-Cartan element.
    #[arg(long)]
    mc: bool,
    /// Compare the twisted differential with the total differential.
    #[arg(long)]
    twist_compare: bool,
    /// Sweep the L-infinity identities over homogeneous inputs.
    #[arg(long, requires = "graded_space")]
    check_identities: bool,
}

#[derive(Args)]
struct LinftyArgs {
    file: Option<PathBuf>,
    #[command(flatten)]
    mode: LinftyGroup,
    /// Basis degrees of the graded space, e.g. "0 1".
    #[arg(long, allow_hyphen_values = true)]
    graded_space: Option<String>,
    #[arg(long, default_value_t = 4)]
    arity_cap: usize,
    /// Largest arity of the sampled maps.
    #[arg(long, default_value_t = 3)]
    map_arity: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    max_degree: usize,
}

fn run(cli: Cli) -> Result<avgcoh_core::Report, CliError> {
    match cli.command {
        Command::Verify { file } => commands::verify(&file),
        Command::Cohomology { file, max_degree, complex } => commands::cohomology(&file, max_degree, complex),
        Command::Deform { file, jet, order, search_trivial } => commands::deform(&file, &jet, order, search_trivial),
        Command::Extend(args) => {
            let mode = match (&args.mode.from_cocycle, &args.mode.compare) {
                (Some(p), _) => ExtendMode::FromCocycle(p),
                (_, Some(ps)) => ExtendMode::Compare(&ps[0], &ps[1]),
                _ => ExtendMode::Classify,
            };
            commands::extend(&args.file, mode)
        }
        Command::Linfty(args) => {
            let mode = if args.mode.mc {
                LinftyMode::Mc
            } else if args.mode.twist_compare {
                LinftyMode::TwistCompare { max_degree: args.max_degree }
            } else {
                let spec = args.graded_space.clone().unwrap_or_default();
                let degrees = spec
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|_| CliError::Usage(format!("bad degree `{t}` in --graded-space"))))
                    .collect::<Result<Vec<_>, _>>()?;
                LinftyMode::CheckIdentities { degrees, arity_cap: args.arity_cap, map_arity: args.map_arity, seed: args.seed }
            };
            commands::linfty(args.file.as_deref(), mode)
        }
        Command::Homotopy { file, arity_cap } => commands::homotopy(&file, arity_cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let machine = cli.machine;
    match run(cli) {
        Ok(report) => {
            let out = if machine { render::machine(&report) } else { render::text(&report) };
            print!("{out}");
            ExitCode::from(if report.passed() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
