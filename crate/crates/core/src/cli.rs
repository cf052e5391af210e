//! Command line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data or format errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::m2::{parse_edit_file, write_edit_file};
use crate::pipeline::{compare_blocks, evaluate_dataset, extract_dataset, AnnotationSource, Field};
use crate::report;
use crate::score::{Axis, Beta, ScoreReport};
use crate::stats::{corpus_stats, stats_to_json, stats_to_tsv};
use crate::textmodel::{parse_conllu, parse_dataset, AnnotationIndex, DatasetItem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "factedit", version, about = "Edit-based evaluation of factual error correction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract and classify edits from each original summary to its correction.
    Extract(ExtractArgs),
    /// Score a hypothesis edit file against a reference edit file.
    Compare(CompareArgs),
    /// Extract reference and hypothesis edits from a dataset and score them.
    Evaluate(EvaluateArgs),
    /// Corpus statistics per corpus and system.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnnotatorMode {
    /// Read tokens, lemmas and POS tags from `--annotations` files.
    External,
    /// Use the built-in heuristic annotator on the raw text.
    Builtin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Reference,
    Hypothesis,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// JSON-lines dataset.
    #[arg(long)]
    pub dataset: PathBuf,
    /// CoNLL-U annotation files with sentences `<id>.orig`, `<id>.ref`, `<id>.hyp`.
    #[arg(long = "annotations", value_name = "FILE")]
    pub annotations: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = AnnotatorMode::External)]
    pub annotator: AnnotatorMode,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ScoringArgs {
    #[arg(long, value_enum, default_value_t = Axis::Form)]
    pub axis: Axis,
    #[arg(long, default_value = "0.5")]
    pub beta: Beta,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Which correction to diff against the original.
    #[arg(long, value_enum, default_value_t = Target::Reference)]
    pub target: Target,
    /// Write `NA` instead of content codes.
    #[arg(long)]
    pub no_classify: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Hypothesis edit file.
    #[arg(long)]
    pub hyp: PathBuf,
    /// Reference edit file.
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::data_no_line(format!("cannot read {}: {e}", path.display())))
}

fn load_inputs(input: &InputArgs) -> std::result::Result<(Vec<DatasetItem>, AnnotationSource), CliError> {
    let source = match input.annotator {
        AnnotatorMode::Builtin if !input.annotations.is_empty() => {
            return Err(CliError::Usage("--annotations cannot be combined with --annotator builtin".into()));
        }
        AnnotatorMode::Builtin => AnnotationSource::Builtin,
        AnnotatorMode::External if input.annotations.is_empty() => {
            return Err(CliError::Usage(
                "no --annotations given; pass annotation files or select --annotator builtin".into(),
            ));
        }
        AnnotatorMode::External => {
            let mut index = AnnotationIndex::new();
            for path in &input.annotations {
                index.extend(parse_conllu(&read(path)?).map_err(|e| with_path(e, path))?)?;
            }
            AnnotationSource::External(index)
        }
    };
    let items = parse_dataset(&read(&input.dataset)?).map_err(|e| with_path(e, &input.dataset))?;
    Ok((items, source))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::DataFormat { line, message } => {
            Error::DataFormat { line, message: format!("{}: {message}", path.display()) }
        }
        other => other,
    }
}

fn render_report(report: &ScoreReport, format: Format) -> String {
    match format {
        Format::Json => report::to_json(report),
        Format::Tsv => report::to_tsv(report),
    }
}

/// Executes a parsed command and returns its output text.
pub fn execute(command: &Command) -> std::result::Result<(String, Option<PathBuf>), CliError> {
    match command {
        Command::Extract(args) => {
            let (items, source) = load_inputs(&args.input)?;
            let target = match args.target {
                Target::Reference => Field::Reference,
                Target::Hypothesis => Field::Hypothesis,
            };
            let blocks = extract_dataset(&items, target, &source, !args.no_classify, args.input.jobs)?;
            Ok((write_edit_file(&blocks), args.output.clone()))
        }
        Command::Compare(args) => {
            let hyp = parse_edit_file(&read(&args.hyp)?).map_err(|e| with_path(e, &args.hyp))?;
            let reference = parse_edit_file(&read(&args.reference)?).map_err(|e| with_path(e, &args.reference))?;
            let report = compare_blocks(&hyp, &reference, args.scoring.axis, args.scoring.beta)?;
            Ok((render_report(&report, args.scoring.format), args.output.clone()))
        }
        Command::Evaluate(args) => {
            let (items, source) = load_inputs(&args.input)?;
            let report = evaluate_dataset(&items, &source, args.scoring.axis, args.scoring.beta, args.input.jobs)?;
            Ok((render_report(&report, args.scoring.format), args.output.clone()))
        }
        Command::Stats(args) => {
            let (items, source) = load_inputs(&args.input)?;
            let stats = corpus_stats(&items, &source, args.input.jobs)?;
            let text = match args.format {
                Format::Json => stats_to_json(&stats),
                Format::Tsv => stats_to_tsv(&stats),
            };
            Ok((text, args.output.clone()))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, None)) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_DATA
            }
        },
        Ok((text, Some(path))) => match fs::write(&path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                EXIT_DATA
            }
        },
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}
