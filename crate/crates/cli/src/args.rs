use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use segbias_core::corpus::TokenizeMode;
use segbias_core::metrics::{Averaging, PunctPolicy};
use segbias_core::report::ExportFormat;
use segbias_core::segmenters::Method;

#[derive(Debug, Parser)]
#[command(name = "segbias", version, about = "Subword segmentation and gender-bias diagnostics")]
pub struct Cli {
    /// Read flags from a `key = value` file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a segmentation model on a one-sentence-per-line corpus.
    #[command(args_override_self = true)]
    Train(TrainArgs),
    /// Segment text with a trained model.
    #[command(args_override_self = true)]
    Apply(ApplyArgs),
    /// Remove continuation markers from segmented text.
    #[command(args_override_self = true)]
    Deseg(DesegArgs),
    /// List a model's dictionary.
    #[command(args_override_self = true)]
    Vocab(VocabArgs),
    /// Gender accuracy of hypotheses against a paired-reference benchmark.
    #[command(name = "eval-gender", args_override_self = true)]
    EvalGender(EvalGenderArgs),
    /// TTR and MATTR of a text.
    #[command(name = "eval-diversity", args_override_self = true)]
    EvalDiversity(EvalDiversityArgs),
    /// Token-length increment of feminine over masculine references.
    #[command(name = "eval-length", args_override_self = true)]
    EvalLength(EvalLengthArgs),
    /// Whether a model isolates the gender morpheme as its own token.
    #[command(name = "eval-isolation", args_override_self = true)]
    EvalIsolation(EvalIsolationArgs),
    /// Frequency and length asymmetry of feminine/masculine pairs in a corpus.
    #[command(name = "analyze-asymmetry", args_override_self = true)]
    AnalyzeAsymmetry(AsymmetryArgs),
    /// Merge machine-readable reports and render them as text tables.
    #[command(args_override_self = true)]
    Report(ReportArgs),
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("must be a positive number".into())
    }
}

fn fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("must lie strictly between 0 and 1".into())
    }
}

/// Lexicon cap; `inf` leaves it unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap(pub Option<usize>);

fn cap(s: &str) -> Result<Cap, String> {
    if s == "inf" {
        Ok(Cap(None))
    } else {
        positive(s).map(|n| Cap(Some(n)))
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub method: Method,
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[arg(long, default_value = "pretok")]
    pub tokenize: TokenizeMode,
    /// BPE merge operations.
    #[arg(long, default_value = "8000", value_parser = positive)]
    pub merges: usize,
    /// Unigram dictionary size.
    #[arg(long, default_value = "8000", value_parser = positive)]
    pub target_vocab: usize,
    #[arg(long, default_value = "8", value_parser = positive)]
    pub max_piece_len: usize,
    #[arg(long, default_value = "4", value_parser = positive)]
    pub em_iterations: usize,
    #[arg(long, default_value = "0.2", value_parser = fraction)]
    pub prune_fraction: f64,
    /// LMVR lexicon cap, or `inf`.
    #[arg(long, default_value = "32000", value_parser = cap)]
    pub cap: Cap,
    /// Morfessor/LMVR training epochs.
    #[arg(long, default_value = "10", value_parser = positive)]
    pub epochs: usize,
    /// Relative cost improvement below which Morfessor/LMVR training stops.
    #[arg(long, default_value = "1e-4", value_parser = positive_f64)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Defaults to standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = "pretok")]
    pub tokenize: TokenizeMode,
}

#[derive(Debug, Args)]
pub struct DesegArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

/// Machine-readable export and the label the results are filed under.
#[derive(Debug, Args)]
pub struct ExportArgs {
    /// Write a machine-readable report here.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Export format; inferred from the `--out` extension when absent.
    #[arg(long)]
    pub format: Option<ExportFormat>,
    /// System label in report tables; defaults to an input file stem.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct VocabArgs {
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    /// Dictionary listing destination; defaults to standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub export: ExportArgs,
}

#[derive(Debug, Args)]
pub struct EvalGenderArgs {
    #[arg(long, value_name = "PATH")]
    pub benchmark: PathBuf,
    /// One hypothesis per benchmark entry, in order.
    #[arg(long, value_name = "PATH")]
    pub hyp: PathBuf,
    #[command(flatten)]
    pub export: ExportArgs,
}

#[derive(Debug, Args)]
pub struct EvalDiversityArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, default_value = "1000", value_parser = positive)]
    pub window: usize,
    #[arg(long, default_value = "keep")]
    pub punct: PunctPolicy,
    #[command(flatten)]
    pub export: ExportArgs,
}

#[derive(Debug, Args)]
pub struct EvalLengthArgs {
    #[arg(long, value_name = "PATH")]
    pub benchmark: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[arg(long, default_value = "macro")]
    pub averaging: Averaging,
    #[command(flatten)]
    pub export: ExportArgs,
}

/// Term pairs from a `FEM<TAB>MASC` file or from a benchmark's annotations.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PairSource {
    #[arg(long, value_name = "PATH")]
    pub pairs: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub benchmark: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalIsolationArgs {
    #[arg(long, value_name = "PATH")]
    pub model: PathBuf,
    #[command(flatten)]
    pub source: PairSource,
    #[command(flatten)]
    pub export: ExportArgs,
}

#[derive(Debug, Args)]
pub struct AsymmetryArgs {
    #[arg(long, value_name = "PATH")]
    pub corpus: PathBuf,
    #[arg(long, default_value = "pretok")]
    pub tokenize: TokenizeMode,
    #[command(flatten)]
    pub source: PairSource,
    #[command(flatten)]
    pub export: ExportArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Machine-readable reports (TSV or JSON-lines), merged in order.
    #[arg(long = "input", value_name = "PATH", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<ExportFormat>,
}
