//! Command-line front end: parses arguments, runs one analysis and writes
//! its report.
//!
//! Exit codes: 0 on success, 1 for usage or input errors, 2 for internal
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scriptstat::distinctivity::{distance_matrix, DifferenceWeights};
use scriptstat::distributions::{
    evaluate_fit, fit_discrete, DfMode, FitMethod, Model, ModelKind, Poisson, SsGeometric,
};
use scriptstat::report::{self, emit_report, Report, ReportFormat};
use scriptstat::uncertainty::VarianceCombination;
use scriptstat::{bundle, io, model, Error};

#[derive(Parser, Debug)]
#[command(
    name = "scriptstat",
    version,
    about = "Quantitative statistics of writing systems"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Csv,
    Md,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Csv => ReportFormat::Csv,
            Format::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-letter complexity from an alphabet file
    Complexity { alphabet: PathBuf },

    /// Complexity distribution and the runs test for uniformity
    RunsTest { alphabet: PathBuf },

    /// Fit a discrete model to an `x,f` frequency table
    Fit(FitArgs),

    /// Mean orthographic uncertainty of a mapping table
    Uncertainty {
        mapping: PathBuf,
        /// `label,U_bar,V` rows to compare against
        #[arg(long)]
        compare: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Combination::Sum)]
        variance_combination: Combination,
    },

    /// Mean distinctivities from an alphabet or a distance matrix
    Distinctivity {
        #[arg(required_unless_present = "matrix", conflicts_with = "matrix")]
        alphabet: Option<PathBuf>,
        /// Difference weights (TOML)
        #[arg(long, conflicts_with = "matrix")]
        weights: Option<PathBuf>,
        /// Labeled distance matrix (CSV)
        #[arg(long)]
        matrix: Option<PathBuf>,
    },

    /// Every analysis on a dataset bundle directory
    Report {
        #[arg(long)]
        bundle: PathBuf,
    },
}

#[derive(Args, Debug)]
struct FitArgs {
    table: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, value_enum, default_value_t = MethodArg::ChisqMin)]
    method: MethodArg,
    /// `auto` (classes - 1 - parameters) or a fixed number
    #[arg(long, default_value = "auto", value_parser = parse_df)]
    df: DfMode,
    /// SS-geometric p (method `given`)
    #[arg(long)]
    p: Option<f64>,
    /// SS-geometric a (method `given`)
    #[arg(long)]
    a: Option<f64>,
    /// Poisson lambda (method `given`)
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    SsGeometric,
    Poisson,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    ChisqMin,
    Moment,
    Given,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Combination {
    Sum,
    Difference,
}

fn parse_df(s: &str) -> Result<DfMode, String> {
    if s == "auto" {
        return Ok(DfMode::ClassesMinusOneMinusParams);
    }
    s.parse::<u32>()
        .map(DfMode::Fixed)
        .map_err(|_| format!("expected `auto` or a non-negative integer, found {s:?}"))
}

/// Runs the CLI with `argv` (program name first) and returns the exit code.
pub fn cli_main<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                1
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };

    let format = ReportFormat::from(cli.format);
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run(cli.command)));
    match outcome {
        Ok(Ok(report)) => match out.write_all(emit_report(&report, format).as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: writing output: {e}");
                2
            }
        },
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(_) => {
            let _ = writeln!(err, "error: internal failure");
            2
        }
    }
}

fn run(command: Command) -> Result<Report, Error> {
    match command {
        Command::Complexity { alphabet } => {
            report::complexity_report(&io::parse_alphabet_file(alphabet)?)
        }
        Command::RunsTest { alphabet } => {
            report::runs_test_report(&io::parse_alphabet_file(alphabet)?)
        }
        Command::Fit(args) => fit(args),
        Command::Uncertainty {
            mapping,
            compare,
            variance_combination,
        } => {
            let table = io::parse_mapping_file(&mapping)?;
            let histogram = model::representation_histogram(&table)?;
            let others = compare
                .map(io::parse_comparison_file)
                .transpose()?
                .unwrap_or_default();
            let combination = match variance_combination {
                Combination::Sum => VarianceCombination::Sum,
                Combination::Difference => VarianceCombination::Difference,
            };
            let label = mapping.file_stem().map_or_else(
                || "target".to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            report::uncertainty_report(&histogram, &label, &others, combination)
        }
        Command::Distinctivity {
            alphabet,
            weights,
            matrix,
        } => {
            let matrix = match (matrix, alphabet) {
                (Some(path), _) => io::parse_matrix_file(path)?,
                (None, Some(path)) => {
                    let alphabet = io::parse_alphabet_file(path)?;
                    let weights = weights
                        .map(io::parse_weights_file)
                        .transpose()?
                        .unwrap_or_else(DifferenceWeights::default);
                    distance_matrix(&alphabet, &weights)
                }
                (None, None) => unreachable!("clap requires an alphabet or --matrix"),
            };
            report::distinctivity_report("Mean distinctivity", &matrix)
        }
        Command::Report { bundle } => report::bundle_report(&bundle::load_bundle(bundle)?),
    }
}

fn fit(args: FitArgs) -> Result<Report, Error> {
    let table = io::parse_frequency_file(&args.table)?;
    let kind = match args.model {
        ModelArg::SsGeometric => ModelKind::SsGeometric,
        ModelArg::Poisson => ModelKind::Poisson,
    };
    let missing = |name: &str| Error::InvalidParams(format!("--method given needs --{name}"));
    let fit = match args.method {
        MethodArg::Given => {
            let model: Model = match kind {
                ModelKind::SsGeometric => SsGeometric::new(
                    args.p.ok_or_else(|| missing("p"))?,
                    args.a.ok_or_else(|| missing("a"))?,
                )?
                .into(),
                ModelKind::Poisson => {
                    Poisson::new(args.lambda.ok_or_else(|| missing("lambda"))?)?.into()
                }
            };
            evaluate_fit(&table, model, args.df)?
        }
        MethodArg::ChisqMin => fit_discrete(&table, kind, FitMethod::ChiSquareMin, args.df)?,
        MethodArg::Moment => fit_discrete(&table, kind, FitMethod::Moment, args.df)?,
    };
    Ok(report::fit_report(&format!("{kind} fit"), &fit))
}
