use std::path::PathBuf;
use std::process::ExitCode;

use apollo_cli::input::{read_text, GeneratorFile};
use apollo_cli::solve::{parse_signs, solve_report, RecipeChoice, SignMode};
use apollo_cli::vertices::{enumerate, threads_from_env, VertexOptions, DEFAULT_MAX_COMBINATIONS};
use apollo_cli::{bench, format, plot, tolerances, CliError, CliResult};
use clap::{Parser, Subcommand, ValueEnum};

/// Tangent balls of d+1 generator balls, diagram vertices, plots and timings.
#[derive(Parser)]
#[command(name = "apollo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one set of exactly d+1 balls.
    Solve {
        /// Generator file (JSON or CSV; `-` for stdin).
        input: PathBuf,
        /// 1, 2, 3 or auto (auto also handles flat center sets).
        #[arg(long, default_value = "auto")]
        recipe: RecipeChoice,
        /// Tangency signs, e.g. "+,-,+".
        #[arg(long, conflicts_with = "all_signs")]
        signs: Option<String>,
        /// Enumerate every sign set.
        #[arg(long)]
        all_signs: bool,
        /// Relative residual and deduplication tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Enumerate conflict-free tangent balls over all (d+1)-subsets.
    Vertices {
        input: PathBuf,
        /// Only subsets whose members are pairwise within this surface gap.
        #[arg(long)]
        prune: Option<f64>,
        /// Drop vertices with a smaller radius.
        #[arg(long)]
        min_radius: Option<f64>,
        /// Refuse to solve more subsets than this.
        #[arg(long, default_value_t = DEFAULT_MAX_COMBINATIONS)]
        max_combinations: u64,
        /// Decide conflicts with exact integer predicates.
        #[arg(long)]
        exact: bool,
        /// Power of ten that makes the input integral (overrides the file).
        #[arg(long, allow_hyphen_values = true)]
        scale_exponent: Option<i32>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Render a 2-d set and its tangent circles as SVG.
    Plot2d {
        input: PathBuf,
        /// Vertex file from `vertices`; solved on the fly when absent.
        #[arg(long)]
        vertices: Option<PathBuf>,
    },
    /// Time the three recipes on random sets.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Solve {
            input,
            recipe,
            signs,
            all_signs,
            tolerance,
        } => {
            let file = GeneratorFile::load(&input)?;
            let tol = tolerances(tolerance)?;
            let mode = match (signs, all_signs) {
                (_, true) => SignMode::All,
                (Some(s), false) => SignMode::Signed(parse_signs(&s, file.balls.len())?),
                (None, false) => SignMode::Positive,
            };
            Ok(format::to_json(&solve_report(&file, recipe, &mode, &tol)?))
        }
        Command::Vertices {
            input,
            prune,
            min_radius,
            max_combinations,
            exact,
            scale_exponent,
            format: out,
            tolerance,
        } => {
            let file = GeneratorFile::load(&input)?;
            let opts = VertexOptions {
                prune,
                min_radius,
                max_combinations,
                exact,
                scale_exponent,
                tolerances: tolerances(tolerance)?,
                threads: threads_from_env()?,
            };
            let list = enumerate(&file, &opts)?;
            Ok(match out {
                OutputFormat::Json => format::to_json(&list),
                OutputFormat::Csv => apollo_cli::vertices::to_csv(&list),
            })
        }
        Command::Plot2d { input, vertices } => {
            let file = GeneratorFile::load(&input)?;
            if file.dimension != 2 {
                return Err(CliError::Unsupported(format!("plot2d needs dimension 2, got {}", file.dimension)));
            }
            let disks = match vertices {
                Some(path) => plot::parse_vertices(&read_text(&path)?)?,
                None => {
                    let opts = VertexOptions {
                        threads: threads_from_env()?,
                        ..VertexOptions::default()
                    };
                    plot::computed_disks(&file, &opts)?
                }
            };
            plot::render(&file, &disks)
        }
        Command::Bench { dims, trials, seed } => {
            if let Some(&d) = dims.iter().find(|&&d| d < 2) {
                return Err(CliError::Validation(format!("bench dimensions must be at least 2, got {d}")));
            }
            Ok(bench::to_csv(&bench::measure(&dims, trials, seed)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("apollo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
