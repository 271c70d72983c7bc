use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use synpat::commands::{self, BuildJointsOverrides, ParseOptions};
use synpat::CliError;
use synpat_core::joint::Algorithm;

/// Mines sentence-axis and joint patterns from tagged corpora and uses
/// them to reduce residual syntactic ambiguity to zero.
#[derive(Parser)]
#[command(name = "synpat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract per-layer sentence axes from a gold corpus.
    BuildAxes {
        /// Fully disambiguated training corpus (.vrt).
        #[arg(long)]
        corpus: PathBuf,
        /// Pipeline configuration with the layer definitions.
        #[arg(long)]
        config: PathBuf,
        /// Output axis database (.adb).
        #[arg(long)]
        out: PathBuf,
        /// Tag inventory file; the built-in tag set is used when omitted.
        #[arg(long)]
        inventory: Option<PathBuf>,
    },
    /// Mine joint contexts from a disambiguated corpus.
    BuildJoints {
        /// Training corpus (.vrt); tokens need a gold tag or a single candidate.
        #[arg(long)]
        corpus: PathBuf,
        /// Output joint database (.jdb).
        #[arg(long)]
        out: PathBuf,
        /// Optional pipeline configuration supplying parameter defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Minimum relative frequency in [0, 1].
        #[arg(long, value_parser = parse_unit_interval)]
        error_margin: Option<f64>,
        /// Minimum supporting occurrences.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        absolute_margin: Option<u64>,
        /// Maximum total context length.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: Option<u64>,
        /// Generation algorithm: exhaustive or incremental.
        #[arg(long, value_parser = parse_algorithm)]
        algorithm: Option<Algorithm>,
    },
    /// Disambiguate a corpus with axes and/or joints.
    Parse {
        /// Axis database; omit to skip the axis stage.
        #[arg(long)]
        axes: Option<PathBuf>,
        /// Joint database; omit to rank by candidate order alone.
        #[arg(long)]
        joints: Option<PathBuf>,
        /// Ambiguous input corpus (.vrt).
        #[arg(long = "in")]
        input: PathBuf,
        /// Output corpus with exactly one tag per token.
        #[arg(long)]
        out: PathBuf,
        /// Report words/second and overflow counts.
        #[arg(long)]
        stats: bool,
        /// Readings enumerated per sentence before falling back to
        /// joints-only resolution.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        reading_cap: Option<u64>,
        /// Require every axis gap to consume intervening material.
        #[arg(long)]
        strict_gaps: bool,
        /// Worker threads; the output is identical for any value.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        /// Pipeline configuration supplying reading-cap and gap-mode
        /// defaults; explicit flags win.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Compare a parsed corpus against its gold standard.
    Eval {
        /// Gold corpus (.vrt, one tag per token).
        #[arg(long)]
        gold: PathBuf,
        /// Parser output (.vrt).
        #[arg(long)]
        pred: PathBuf,
        /// The ambiguous corpus the parser consumed; enables the
        /// ambiguity and error columns.
        #[arg(long)]
        input: Option<PathBuf>,
        /// One row per text, where a sentence id "name/rest" belongs to
        /// text "name".
        #[arg(long)]
        by_text: bool,
        /// Comma-separated output instead of the aligned table.
        #[arg(long)]
        csv: bool,
    },
    /// Pretty-print an axis or joint database.
    #[command(group(ArgGroup::new("source").required(true).args(["axes", "joints"])))]
    Inspect {
        /// Axis database to print.
        #[arg(long)]
        axes: Option<PathBuf>,
        /// Joint database to print.
        #[arg(long)]
        joints: Option<PathBuf>,
        /// Only patterns mentioning this tag (axes) or targeting it (joints).
        #[arg(long)]
        tag: Option<String>,
    },
}

fn parse_unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|_| {
        format!("unknown algorithm {s:?}; expected exhaustive or incremental")
    })
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::BuildAxes {
            corpus,
            config,
            out,
            inventory,
        } => commands::build_axes(&corpus, &config, &out, inventory.as_deref()),
        Command::BuildJoints {
            corpus,
            out,
            config,
            error_margin,
            absolute_margin,
            max_len,
            algorithm,
        } => commands::build_joints(
            &corpus,
            &out,
            config.as_deref(),
            BuildJointsOverrides {
                error_margin,
                absolute_margin,
                max_len: max_len.map(|v| v as usize),
                algorithm,
            },
        ),
        Command::Parse {
            axes,
            joints,
            input,
            out,
            stats,
            reading_cap,
            strict_gaps,
            threads,
            config,
        } => commands::parse(
            axes.as_deref(),
            joints.as_deref(),
            &input,
            &out,
            ParseOptions {
                stats,
                reading_cap,
                strict_gaps,
                threads: threads as usize,
                config,
            },
        ),
        Command::Eval {
            gold,
            pred,
            input,
            by_text,
            csv,
        } => commands::eval(&gold, &pred, input.as_deref(), by_text, csv),
        Command::Inspect { axes, joints, tag } => {
            commands::inspect(axes.as_deref(), joints.as_deref(), tag.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("synpat: {e}");
            ExitCode::FAILURE
        }
    }
}
