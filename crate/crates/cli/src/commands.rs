use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory};
use sha2::{Digest, Sha256};

use segbias_core::corpus::{self, BenchmarkError, Corpus, CorpusError};
use segbias_core::metrics::{self, MetricsError};
use segbias_core::report::{self, ExportFormat, Metadata, ReportBundle, ReportError, VocabSummary};
use segbias_core::segmenters::{self, Method, MorfessorParams, SegmentError, UnigramParams};

use crate::args::*;
use crate::CliError;

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<SegmentError> for CliError {
    fn from(e: SegmentError) -> Self {
        match e {
            SegmentError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<BenchmarkError> for CliError {
    fn from(e: BenchmarkError) -> Self {
        match e {
            BenchmarkError::Read(c) => c.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Segment(s) => s.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

struct Context {
    threads: usize,
    metadata: Metadata,
}

impl Context {
    /// Records the SHA-256 of an input file under the path as given.
    fn digest(&mut self, path: &Path) -> Result<(), CliError> {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.metadata.digests.insert(path.display().to_string(), hex);
        Ok(())
    }

    fn bundle(&self) -> ReportBundle {
        ReportBundle {
            metadata: self.metadata.clone(),
            ..ReportBundle::default()
        }
    }
}

fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var("SEGBIAS_THREADS") {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Invalid(format!("SEGBIAS_THREADS must be a non-negative integer, got {v:?}"))),
    }
}

/// Every flag of the chosen subcommand with its effective value, defaults included.
fn resolved_config(matches: &ArgMatches) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let Some((name, sub)) = matches.subcommand() else {
        return out;
    };
    out.insert("command".to_string(), name.to_string());
    let cmd = crate::args::Cli::command();
    let Some(sub_cmd) = cmd.find_subcommand(name) else {
        return out;
    };
    for arg in sub_cmd.get_arguments() {
        let id = arg.get_id().as_str();
        let Some(long) = arg.get_long() else { continue };
        if long == "config" || !matches!(sub.value_source(id), Some(ValueSource::CommandLine | ValueSource::DefaultValue)) {
            continue;
        }
        if let Ok(Some(values)) = sub.try_get_raw(id) {
            let joined: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
            out.insert(long.to_string(), joined.join(" "));
        }
    }
    out
}

pub fn execute(cli: Cli, matches: &ArgMatches) -> Result<(), CliError> {
    let mut ctx = Context {
        threads: threads_from_env()?,
        metadata: Metadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: resolved_config(matches),
            digests: BTreeMap::new(),
        },
    };
    match cli.command {
        Command::Train(a) => train(&mut ctx, a),
        Command::Apply(a) => apply(&mut ctx, a),
        Command::Deseg(a) => deseg(a),
        Command::Vocab(a) => vocab(&mut ctx, a),
        Command::EvalGender(a) => eval_gender(&mut ctx, a),
        Command::EvalDiversity(a) => eval_diversity(&mut ctx, a),
        Command::EvalLength(a) => eval_length(&mut ctx, a),
        Command::EvalIsolation(a) => eval_isolation(&mut ctx, a),
        Command::AnalyzeAsymmetry(a) => analyze_asymmetry(&mut ctx, a),
        Command::Report(a) => merge_reports(&mut ctx, a),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("standard output: {e}")))
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn export_format(path: &Path, explicit: Option<ExportFormat>) -> ExportFormat {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl" | "json") => ExportFormat::JsonLines,
        _ => ExportFormat::Tsv,
    })
}

/// Prints the text tables and writes the machine export when one was requested.
fn finish(bundle: &ReportBundle, out: Option<&PathBuf>, format: Option<ExportFormat>) -> Result<(), CliError> {
    write_output(None, &report::render_text(bundle)?)?;
    if let Some(path) = out {
        let text = report::export_string(bundle, export_format(path, format));
        write_output(Some(path), &text)?;
    }
    Ok(())
}

fn train(ctx: &mut Context, a: TrainArgs) -> Result<(), CliError> {
    let corpus = corpus::load_corpus(&a.input, a.tokenize)?;
    let morph = MorfessorParams {
        max_epochs: a.epochs,
        convergence_eps: a.eps,
    };
    let model = match a.method {
        Method::Char => segmenters::train_char(&corpus)?,
        Method::Bpe => segmenters::train_bpe(&corpus, a.merges)?,
        Method::Unigram => {
            let params = UnigramParams {
                target_vocab: a.target_vocab,
                max_piece_len: a.max_piece_len,
                em_iterations: a.em_iterations,
                prune_fraction: a.prune_fraction,
            };
            segmenters::train_unigram(&corpus, &params)?
        }
        Method::Morfessor => segmenters::train_morfessor(&corpus, &morph)?,
        Method::Lmvr => segmenters::train_lmvr(&corpus, a.cap.0, &morph)?,
    };
    segmenters::save_model(&model, &a.model)?;
    let _ = ctx;
    eprintln!(
        "{}: {} model, dictionary size {}",
        a.model.display(),
        model.method(),
        segmenters::vocab_report(&model).size
    );
    Ok(())
}

fn apply(ctx: &mut Context, a: ApplyArgs) -> Result<(), CliError> {
    let model = segmenters::load_model(&a.model)?;
    let mut sentences = Vec::new();
    for (idx, line) in corpus::read_lines(&a.input)?.iter().enumerate() {
        let words = corpus::tokenize(line, a.tokenize)
            .map_err(|e| CliError::Invalid(format!("{}:{}: {e}", a.input.display(), idx + 1)))?;
        sentences.push(words);
    }
    let corpus = Corpus::from_sentences(sentences)?;
    let segmented = segmenters::segment_corpus(&model, &corpus, ctx.threads)?;
    let mut text = String::new();
    for s in &segmented {
        text.push_str(&s.render());
        text.push('\n');
    }
    write_output(a.output.as_deref(), &text)
}

fn deseg(a: DesegArgs) -> Result<(), CliError> {
    let mut text = String::new();
    for (idx, line) in corpus::read_lines(&a.input)?.iter().enumerate() {
        let plain = segmenters::desegment(line)
            .map_err(|e| CliError::Invalid(format!("{}:{}: {e}", a.input.display(), idx + 1)))?;
        text.push_str(&plain);
        text.push('\n');
    }
    write_output(a.output.as_deref(), &text)
}

fn vocab(ctx: &mut Context, a: VocabArgs) -> Result<(), CliError> {
    let model = segmenters::load_model(&a.model)?;
    ctx.digest(&a.model)?;
    let v = segmenters::vocab_report(&model);
    let mut text = String::new();
    for (piece, score) in &v.entries {
        match score {
            Some(s) => text.push_str(&format!("{piece}\t{s}\n")),
            None => text.push_str(&format!("{piece}\n")),
        }
    }
    write_output(a.output.as_deref(), &text)?;
    if let Some(out) = &a.export.out {
        let mut bundle = ctx.bundle();
        let label = a.export.label.clone().unwrap_or_else(|| stem(&a.model));
        bundle.vocab.push((label, VocabSummary::from(&v)));
        let text = report::export_string(&bundle, export_format(out, a.export.format));
        write_output(Some(out), &text)?;
    }
    Ok(())
}

fn eval_gender(ctx: &mut Context, a: EvalGenderArgs) -> Result<(), CliError> {
    let bench = corpus::load_benchmark(&a.benchmark)?;
    let hyps = corpus::read_lines(&a.hyp)?;
    ctx.digest(&a.benchmark)?;
    ctx.digest(&a.hyp)?;
    let r = metrics::gender_accuracy(&bench, &hyps)?;
    let mut bundle = ctx.bundle();
    bundle.accuracy.push((a.export.label.unwrap_or_else(|| stem(&a.hyp)), r));
    finish(&bundle, a.export.out.as_ref(), a.export.format)
}

fn eval_diversity(ctx: &mut Context, a: EvalDiversityArgs) -> Result<(), CliError> {
    let lines = corpus::read_lines(&a.input)?;
    ctx.digest(&a.input)?;
    let r = metrics::lexical_diversity(&lines, a.window, a.punct)?;
    let mut bundle = ctx.bundle();
    bundle.diversity.push((a.export.label.unwrap_or_else(|| stem(&a.input)), r));
    finish(&bundle, a.export.out.as_ref(), a.export.format)
}

fn eval_length(ctx: &mut Context, a: EvalLengthArgs) -> Result<(), CliError> {
    let bench = corpus::load_benchmark(&a.benchmark)?;
    let model = segmenters::load_model(&a.model)?;
    ctx.digest(&a.benchmark)?;
    ctx.digest(&a.model)?;
    let r = metrics::length_increment(&bench, &model, a.averaging)?;
    let mut bundle = ctx.bundle();
    bundle.increment.push((a.export.label.unwrap_or_else(|| stem(&a.model)), r));
    finish(&bundle, a.export.out.as_ref(), a.export.format)
}

fn load_pairs(ctx: &mut Context, source: &PairSource) -> Result<Vec<(String, String)>, CliError> {
    if let Some(p) = &source.pairs {
        let pairs = corpus::load_term_pairs(p)?;
        ctx.digest(p)?;
        return Ok(pairs);
    }
    let path = source.benchmark.as_ref().expect("clap requires one pair source");
    let bench = corpus::load_benchmark(path)?;
    ctx.digest(path)?;
    Ok(bench.gender_pairs())
}

fn eval_isolation(ctx: &mut Context, a: EvalIsolationArgs) -> Result<(), CliError> {
    let model = segmenters::load_model(&a.model)?;
    ctx.digest(&a.model)?;
    let pairs = load_pairs(ctx, &a.source)?;
    let r = metrics::gender_isolation(&pairs, &model)?;
    let mut bundle = ctx.bundle();
    bundle.isolation.push((a.export.label.unwrap_or_else(|| stem(&a.model)), r));
    finish(&bundle, a.export.out.as_ref(), a.export.format)
}

fn analyze_asymmetry(ctx: &mut Context, a: AsymmetryArgs) -> Result<(), CliError> {
    let corpus = corpus::load_corpus(&a.corpus, a.tokenize)?;
    ctx.digest(&a.corpus)?;
    let pairs = load_pairs(ctx, &a.source)?;
    let freq = corpus::word_counts(&corpus);
    let r = metrics::asymmetry(&pairs, &freq)?;
    let mut bundle = ctx.bundle();
    bundle.asymmetry.push((a.export.label.unwrap_or_else(|| stem(&a.corpus)), r));
    finish(&bundle, a.export.out.as_ref(), a.export.format)
}

fn merge_reports(ctx: &mut Context, a: ReportArgs) -> Result<(), CliError> {
    let mut bundle = ctx.bundle();
    for path in &a.inputs {
        let part = report::load_export(path).map_err(|e| match e {
            ReportError::Parse { .. } => CliError::Invalid(format!("{}: {e}", path.display())),
            other => other.into(),
        })?;
        ctx.digest(path)?;
        for (k, v) in &part.metadata.digests {
            bundle.metadata.digests.entry(k.clone()).or_insert_with(|| v.clone());
        }
        bundle
            .extend(part)
            .map_err(|e| CliError::Invalid(format!("{}: {e}; relabel with --label", path.display())))?;
    }
    bundle.metadata.digests.extend(ctx.metadata.digests.clone());
    finish(&bundle, a.out.as_ref(), a.format)
}
