use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use amsos_core::data::write_csv;
use amsos_core::harness::{self, Algorithm, DatasetSource, OutputFormat, RunSpec};
use amsos_core::{BuiltinMixture, Error, LabelColumn, SeedMethod};
use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

/// Cluster benchmark datasets with AMSOS or seeded k-means and report validity indices.
#[derive(Debug, Parser)]
#[command(name = "amsos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an algorithm on a dataset and print a metric report.
    Run(RunArgs),
    /// Write a builtin synthetic mixture as CSV, labels in the last column.
    Generate(GenerateArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Builtin mixture (synthetic1..synthetic4) or path to a CSV file.
    #[arg(long)]
    dataset: String,
    #[arg(long, value_enum)]
    algorithm: AlgorithmArg,
    /// Seeding for k-means. AMSOS always seeds with spss.
    #[arg(long, value_enum)]
    init: Option<InitArg>,
    /// Cluster count; required for kmeans, rejected for amsos.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Json)]
    output: OutputArg,
    /// Write the AMSOS merge trace of run 0 as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Label column of a CSV dataset: `last`, `none` or a 0-based index.
    #[arg(long, default_value = "last")]
    label_col: String,
    /// Standardize every feature to zero mean and unit variance.
    #[arg(long)]
    zscore: bool,
}

#[derive(Debug, clap::Args)]
struct GenerateArgs {
    #[arg(long)]
    dataset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Amsos,
    Kmeans,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    Spss,
    Kmeanspp,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Markdown,
}

impl From<InitArg> for SeedMethod {
    fn from(arg: InitArg) -> Self {
        match arg {
            InitArg::Spss => SeedMethod::Spss,
            InitArg::Kmeanspp => SeedMethod::Kmeanspp,
            InitArg::Random => SeedMethod::Random,
        }
    }
}

impl From<OutputArg> for OutputFormat {
    fn from(arg: OutputArg) -> Self {
        match arg {
            OutputArg::Json => OutputFormat::Json,
            OutputArg::Csv => OutputFormat::Csv,
            OutputArg::Markdown => OutputFormat::Markdown,
        }
    }
}

fn build_spec(args: &RunArgs) -> amsos_core::Result<RunSpec> {
    let label_column: LabelColumn = args.label_col.parse()?;
    let algorithm = match (args.algorithm, args.init) {
        (AlgorithmArg::Amsos, None | Some(InitArg::Spss)) => Algorithm::Amsos,
        (AlgorithmArg::Amsos, Some(other)) => {
            return Err(Error::InvalidSpec(format!(
                "amsos seeds with spss only, got --init {}",
                SeedMethod::from(other)
            )))
        }
        (AlgorithmArg::Kmeans, init) => Algorithm::Kmeans(init.map_or(SeedMethod::Spss, Into::into)),
    };
    let spec = RunSpec {
        output: args.output.into(),
        zscore: args.zscore,
        ..RunSpec::new(
            DatasetSource::parse(&args.dataset, label_column)?,
            algorithm,
            args.k,
            args.seed,
            args.repeats,
        )
    };
    spec.validate()?;
    Ok(spec)
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let spec = build_spec(&args)?;
    let out = harness::execute(&spec)?;
    if matches!(spec.algorithm, Algorithm::Amsos) && !out.report.identical_runs {
        eprintln!("warning: amsos repeats disagree");
    }
    if let Some(path) = &args.trace {
        let trace = out.trace.as_ref().context("--trace applies to amsos runs only")?;
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut writer = BufWriter::new(file);
        trace.write_jsonl(&mut writer)?;
        writer.flush()?;
    }
    let text = out.report.render(spec.output)?;
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let id: BuiltinMixture = args.dataset.parse()?;
    let data = id.spec().generate(args.seed);
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&data, BufWriter::new(file))?;
        }
        None => write_csv(&data, io::stdout().lock())?,
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_validation() => 2,
        Some(e) if e.is_ingestion() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Generate(args) => generate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // a closed downstream pipe (`| head`) is not a failure
        Err(err) if err.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
