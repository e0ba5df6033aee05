//! Text tables and machine-readable exports of metric reports.
//!
//! Machine exports hold one section per report kind. TSV sections start with a
//! `#SECTION <name>` line followed by a header row; JSON-lines hold one object per
//! section with `section` and `rows` fields. Undefined ratios are written as `null`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Category;
use crate::metrics::{
    AccuracyCounts, AccuracyReport, AsymmetryReport, Averaging, DiversityReport, EntryIncrement, FrequencyException,
    IncrementReport, IsolationReport, PairVerdict,
};
use crate::segmenters::VocabReport;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("nothing to render: the report has no sections")]
    EmptyBundle,
    #[error("unknown export format {0:?} (expected \"tsv\" or \"jsonl\")")]
    UnknownFormat(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("label {label:?} appears twice in section {section}")]
    DuplicateLabel { section: &'static str, label: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Tsv,
    JsonLines,
}

impl FromStr for ExportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(ExportFormat::Tsv),
            "jsonl" | "json-lines" => Ok(ExportFormat::JsonLines),
            other => Err(ReportError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Tsv => "tsv",
            ExportFormat::JsonLines => "jsonl",
        })
    }
}

/// Reproducibility header attached to every export.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata {
    pub tool_version: String,
    pub config: BTreeMap<String, String>,
    /// Input path to content digest.
    pub digests: BTreeMap<String, String>,
}

/// Model dictionary size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabSummary {
    pub method: String,
    pub size: usize,
}

impl From<&VocabReport> for VocabSummary {
    fn from(r: &VocabReport) -> Self {
        VocabSummary {
            method: r.method.to_string(),
            size: r.size,
        }
    }
}

/// Labeled report sections, each a list of `(system label, report)`. Labels are
/// unique within a section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportBundle {
    pub metadata: Metadata,
    pub vocab: Vec<(String, VocabSummary)>,
    pub accuracy: Vec<(String, AccuracyReport)>,
    pub diversity: Vec<(String, DiversityReport)>,
    pub increment: Vec<(String, IncrementReport)>,
    pub isolation: Vec<(String, IsolationReport)>,
    pub asymmetry: Vec<(String, AsymmetryReport)>,
}

impl ReportBundle {
    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
            && self.accuracy.is_empty()
            && self.diversity.is_empty()
            && self.increment.is_empty()
            && self.isolation.is_empty()
            && self.asymmetry.is_empty()
    }

    /// Appends the sections of `other`; metadata is left untouched.
    pub fn extend(&mut self, other: ReportBundle) -> Result<(), ReportError> {
        fn append<T>(section: &'static str, into: &mut Vec<(String, T)>, from: Vec<(String, T)>) -> Result<(), ReportError> {
            for (label, r) in from {
                if into.iter().any(|(l, _)| *l == label) {
                    return Err(ReportError::DuplicateLabel { section, label });
                }
                into.push((label, r));
            }
            Ok(())
        }
        append("vocab", &mut self.vocab, other.vocab)?;
        append("accuracy", &mut self.accuracy, other.accuracy)?;
        append("diversity", &mut self.diversity, other.diversity)?;
        append("increment", &mut self.increment, other.increment)?;
        append("isolation", &mut self.isolation, other.isolation)?;
        append("asymmetry", &mut self.asymmetry, other.asymmetry)
    }
}

// ---------------------------------------------------------------------------
// Flat rows shared by both export formats
// ---------------------------------------------------------------------------

trait Cell: Sized {
    fn to_cell(&self) -> String;
    fn from_cell(s: &str) -> Result<Self, String>;
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

impl Cell for String {
    fn to_cell(&self) -> String {
        escape(self)
    }
    fn from_cell(s: &str) -> Result<Self, String> {
        unescape(s)
    }
}

macro_rules! parsed_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn to_cell(&self) -> String {
                self.to_string()
            }
            fn from_cell(s: &str) -> Result<Self, String> {
                s.parse().map_err(|_| format!("cannot parse {s:?} as {}", stringify!($t)))
            }
        }
    )*};
}
parsed_cell!(u64, usize, f64, bool);

impl Cell for Option<f64> {
    fn to_cell(&self) -> String {
        self.map_or_else(|| "null".to_string(), |v| v.to_string())
    }
    fn from_cell(s: &str) -> Result<Self, String> {
        if s == "null" {
            Ok(None)
        } else {
            f64::from_cell(s).map(Some)
        }
    }
}

trait Row: Sized + Serialize + for<'de> Deserialize<'de> {
    const FIELDS: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
    fn from_cells(cells: &[&str]) -> Result<Self, String>;
}

macro_rules! rows {
    ($($name:ident { $($field:ident : $ty:ty),* $(,)? })*) => {$(
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        struct $name { $($field: $ty),* }

        impl Row for $name {
            const FIELDS: &'static [&'static str] = &[$(stringify!($field)),*];

            fn cells(&self) -> Vec<String> {
                vec![$(Cell::to_cell(&self.$field)),*]
            }

            fn from_cells(cells: &[&str]) -> Result<Self, String> {
                if cells.len() != Self::FIELDS.len() {
                    return Err(format!("expected {} columns, found {}", Self::FIELDS.len(), cells.len()));
                }
                let mut it = cells.iter();
                Ok($name { $($field: <$ty as Cell>::from_cell(it.next().expect("length checked"))?),* })
            }
        }
    )*};
}

rows! {
    MetaRow { key: String, value: String }
    VocabRow { label: String, method: String, size: usize }
    AccuracyRow {
        label: String,
        category: String,
        correct: u64,
        wrong: u64,
        not_found: u64,
        accuracy_pct: Option<f64>,
        coverage_pct: Option<f64>,
    }
    DiversityRow { label: String, ttr_pct: f64, mattr_pct: f64, window_size: usize, token_count: usize, type_count: usize }
    IncrementRow { label: String, averaging: String, mean_increment_pct: f64, n_pairs: usize }
    IncrementEntryRow { label: String, id: String, fem_tokens: usize, masc_tokens: usize, increment_pct: f64 }
    IsolationRow {
        label: String,
        isolated_count: usize,
        total_pairs: usize,
        skipped_multiword: usize,
        isolation_rate_pct: Option<f64>,
    }
    IsolationPairRow {
        label: String,
        feminine: String,
        masculine: String,
        segmentation: String,
        divergence: usize,
        isolated: bool,
    }
    AsymmetryRow { label: String, pct_feminine_rarer: f64, pct_feminine_longer: f64, n_pairs: usize }
    AsymmetryExceptionRow { label: String, feminine: String, masculine: String, fem_count: u64, masc_count: u64 }
}

/// All sections in export order.
#[derive(Default)]
struct Tables {
    meta: Vec<MetaRow>,
    vocab: Vec<VocabRow>,
    accuracy: Vec<AccuracyRow>,
    diversity: Vec<DiversityRow>,
    increment: Vec<IncrementRow>,
    increment_entries: Vec<IncrementEntryRow>,
    isolation: Vec<IsolationRow>,
    isolation_pairs: Vec<IsolationPairRow>,
    asymmetry: Vec<AsymmetryRow>,
    asymmetry_exceptions: Vec<AsymmetryExceptionRow>,
}

const ACCURACY_COLUMNS: [&str; 5] = ["ALL", "1F", "1M", "2F", "2M"];

fn accuracy_columns(r: &AccuracyReport) -> [(&'static str, &AccuracyCounts); 5] {
    [
        ("ALL", &r.all),
        ("1F", r.category(Category::OneF)),
        ("1M", r.category(Category::OneM)),
        ("2F", r.category(Category::TwoF)),
        ("2M", r.category(Category::TwoM)),
    ]
}

impl Tables {
    fn from_bundle(b: &ReportBundle) -> Self {
        let mut t = Tables::default();
        let meta = &b.metadata;
        t.meta.push(MetaRow {
            key: "tool_version".into(),
            value: meta.tool_version.clone(),
        });
        for (k, v) in &meta.config {
            t.meta.push(MetaRow {
                key: format!("config.{k}"),
                value: v.clone(),
            });
        }
        for (k, v) in &meta.digests {
            t.meta.push(MetaRow {
                key: format!("digest.{k}"),
                value: v.clone(),
            });
        }
        for (label, v) in &b.vocab {
            t.vocab.push(VocabRow {
                label: label.clone(),
                method: v.method.clone(),
                size: v.size,
            });
        }
        for (label, r) in &b.accuracy {
            for (name, c) in accuracy_columns(r) {
                t.accuracy.push(AccuracyRow {
                    label: label.clone(),
                    category: name.to_string(),
                    correct: c.correct,
                    wrong: c.wrong,
                    not_found: c.not_found,
                    accuracy_pct: c.accuracy_pct(),
                    coverage_pct: c.coverage_pct(),
                });
            }
        }
        for (label, r) in &b.diversity {
            t.diversity.push(DiversityRow {
                label: label.clone(),
                ttr_pct: r.ttr_pct,
                mattr_pct: r.mattr_pct,
                window_size: r.window_size,
                token_count: r.token_count,
                type_count: r.type_count,
            });
        }
        for (label, r) in &b.increment {
            t.increment.push(IncrementRow {
                label: label.clone(),
                averaging: r.averaging.to_string(),
                mean_increment_pct: r.mean_increment_pct,
                n_pairs: r.n_pairs,
            });
            for e in &r.per_entry {
                t.increment_entries.push(IncrementEntryRow {
                    label: label.clone(),
                    id: e.id.clone(),
                    fem_tokens: e.fem_tokens,
                    masc_tokens: e.masc_tokens,
                    increment_pct: e.increment_pct,
                });
            }
        }
        for (label, r) in &b.isolation {
            t.isolation.push(IsolationRow {
                label: label.clone(),
                isolated_count: r.isolated_count,
                total_pairs: r.total_pairs,
                skipped_multiword: r.skipped_multiword,
                isolation_rate_pct: r.isolation_rate_pct,
            });
            for v in &r.verdicts {
                t.isolation_pairs.push(IsolationPairRow {
                    label: label.clone(),
                    feminine: v.feminine.clone(),
                    masculine: v.masculine.clone(),
                    segmentation: v.segmentation.join(" "),
                    divergence: v.divergence,
                    isolated: v.isolated,
                });
            }
        }
        for (label, r) in &b.asymmetry {
            t.asymmetry.push(AsymmetryRow {
                label: label.clone(),
                pct_feminine_rarer: r.pct_feminine_rarer,
                pct_feminine_longer: r.pct_feminine_longer,
                n_pairs: r.n_pairs,
            });
            for e in &r.exceptions {
                t.asymmetry_exceptions.push(AsymmetryExceptionRow {
                    label: label.clone(),
                    feminine: e.feminine.clone(),
                    masculine: e.masculine.clone(),
                    fem_count: e.fem_count,
                    masc_count: e.masc_count,
                });
            }
        }
        t
    }

    fn into_bundle(self) -> Result<ReportBundle, String> {
        let mut b = ReportBundle::default();
        for row in self.meta {
            if row.key == "tool_version" {
                b.metadata.tool_version = row.value;
            } else if let Some(k) = row.key.strip_prefix("config.") {
                b.metadata.config.insert(k.to_string(), row.value);
            } else if let Some(k) = row.key.strip_prefix("digest.") {
                b.metadata.digests.insert(k.to_string(), row.value);
            } else {
                return Err(format!("unknown metadata key {:?}", row.key));
            }
        }
        b.vocab = self
            .vocab
            .into_iter()
            .map(|r| (r.label, VocabSummary { method: r.method, size: r.size }))
            .collect();

        let mut seen = std::collections::BTreeSet::new();
        for row in self.accuracy {
            if !seen.insert((row.label.clone(), row.category.clone())) {
                return Err(format!("accuracy row {}/{} appears twice", row.label, row.category));
            }
            let pos = match b.accuracy.iter().position(|(l, _)| *l == row.label) {
                Some(p) => p,
                None => {
                    let empty = AccuracyReport {
                        per_category: Category::ALL.into_iter().map(|c| (c, AccuracyCounts::default())).collect(),
                        all: AccuracyCounts::default(),
                    };
                    b.accuracy.push((row.label.clone(), empty));
                    b.accuracy.len() - 1
                }
            };
            let counts = AccuracyCounts {
                correct: row.correct,
                wrong: row.wrong,
                not_found: row.not_found,
            };
            let report = &mut b.accuracy[pos].1;
            if row.category == "ALL" {
                report.all = counts;
            } else {
                let c: Category = row.category.parse()?;
                report.per_category.insert(c, counts);
            }
        }

        b.diversity = self
            .diversity
            .into_iter()
            .map(|r| {
                (
                    r.label,
                    DiversityReport {
                        ttr_pct: r.ttr_pct,
                        mattr_pct: r.mattr_pct,
                        window_size: r.window_size,
                        token_count: r.token_count,
                        type_count: r.type_count,
                    },
                )
            })
            .collect();

        for r in self.increment {
            let averaging: Averaging = r.averaging.parse().map_err(|e: crate::metrics::MetricsError| e.to_string())?;
            b.increment.push((
                r.label,
                IncrementReport {
                    mean_increment_pct: r.mean_increment_pct,
                    averaging,
                    per_entry: Vec::new(),
                    n_pairs: r.n_pairs,
                },
            ));
        }
        for e in self.increment_entries {
            let (_, report) = b
                .increment
                .iter_mut()
                .find(|(l, _)| *l == e.label)
                .ok_or_else(|| format!("increment entry for unknown label {:?}", e.label))?;
            report.per_entry.push(EntryIncrement {
                id: e.id,
                fem_tokens: e.fem_tokens,
                masc_tokens: e.masc_tokens,
                increment_pct: e.increment_pct,
            });
        }

        for r in self.isolation {
            b.isolation.push((
                r.label,
                IsolationReport {
                    isolated_count: r.isolated_count,
                    total_pairs: r.total_pairs,
                    skipped_multiword: r.skipped_multiword,
                    isolation_rate_pct: r.isolation_rate_pct,
                    verdicts: Vec::new(),
                },
            ));
        }
        for p in self.isolation_pairs {
            let (_, report) = b
                .isolation
                .iter_mut()
                .find(|(l, _)| *l == p.label)
                .ok_or_else(|| format!("isolation pair for unknown label {:?}", p.label))?;
            report.verdicts.push(PairVerdict {
                feminine: p.feminine,
                masculine: p.masculine,
                segmentation: p.segmentation.split(' ').map(str::to_string).collect(),
                divergence: p.divergence,
                isolated: p.isolated,
            });
        }

        for r in self.asymmetry {
            b.asymmetry.push((
                r.label,
                AsymmetryReport {
                    pct_feminine_rarer: r.pct_feminine_rarer,
                    pct_feminine_longer: r.pct_feminine_longer,
                    n_pairs: r.n_pairs,
                    exceptions: Vec::new(),
                },
            ));
        }
        for e in self.asymmetry_exceptions {
            let (_, report) = b
                .asymmetry
                .iter_mut()
                .find(|(l, _)| *l == e.label)
                .ok_or_else(|| format!("asymmetry exception for unknown label {:?}", e.label))?;
            report.exceptions.push(FrequencyException {
                feminine: e.feminine,
                masculine: e.masculine,
                fem_count: e.fem_count,
                masc_count: e.masc_count,
            });
        }
        fn unique<T>(section: &str, rows: &[(String, T)]) -> Result<(), String> {
            let mut labels = std::collections::BTreeSet::new();
            match rows.iter().find(|(l, _)| !labels.insert(l)) {
                Some((l, _)) => Err(format!("label {l:?} appears twice in section {section}")),
                None => Ok(()),
            }
        }
        unique("vocab", &b.vocab)?;
        unique("diversity", &b.diversity)?;
        unique("increment", &b.increment)?;
        unique("isolation", &b.isolation)?;
        unique("asymmetry", &b.asymmetry)?;
        Ok(b)
    }
}

/// Invokes `$m!(args; section...)` with every section in export order. Section
/// names match the field names of `Tables`.
macro_rules! for_sections {
    ($m:ident!($($args:tt)*)) => {
        $m!($($args)*; meta, vocab, accuracy, diversity, increment, increment_entries,
            isolation, isolation_pairs, asymmetry, asymmetry_exceptions)
    };
}

fn write_tsv_section<R: Row>(out: &mut String, name: &str, rows: &[R]) {
    if rows.is_empty() && name != "meta" {
        return;
    }
    out.push_str("#SECTION ");
    out.push_str(name);
    out.push('\n');
    out.push_str(&R::FIELDS.join("\t"));
    out.push('\n');
    for r in rows {
        out.push_str(&r.cells().join("\t"));
        out.push('\n');
    }
}

fn write_json_section<R: Row>(out: &mut String, name: &str, rows: &[R]) {
    if rows.is_empty() && name != "meta" {
        return;
    }
    let obj = serde_json::json!({ "section": name, "rows": rows });
    out.push_str(&serde_json::to_string(&obj).expect("rows serialize"));
    out.push('\n');
}

macro_rules! write_all {
    ($f:ident, $out:ident, $t:ident; $($s:ident),*) => {{
        $( $f(&mut $out, stringify!($s), &$t.$s); )*
    }};
}

/// Serializes a bundle. Parsing the result with [`parse_export`] yields an equal bundle.
pub fn export_string(bundle: &ReportBundle, format: ExportFormat) -> String {
    let tables = Tables::from_bundle(bundle);
    let mut out = String::new();
    match format {
        ExportFormat::Tsv => for_sections!(write_all!(write_tsv_section, out, tables)),
        ExportFormat::JsonLines => for_sections!(write_all!(write_json_section, out, tables)),
    }
    out
}

fn parse_tsv_rows<R: Row>(header: (usize, &str), lines: &[(usize, &str)]) -> Result<Vec<R>, ReportError> {
    let (hline, htext) = header;
    if htext.split('\t').ne(R::FIELDS.iter().copied()) {
        return Err(ReportError::Parse {
            line: hline,
            reason: format!("expected header {:?}", R::FIELDS.join("\t")),
        });
    }
    lines
        .iter()
        .map(|&(line, text)| {
            let cells: Vec<&str> = text.split('\t').collect();
            R::from_cells(&cells).map_err(|reason| ReportError::Parse { line, reason })
        })
        .collect()
}

fn parse_json_rows<R: Row>(line: usize, rows: serde_json::Value) -> Result<Vec<R>, ReportError> {
    serde_json::from_value(rows).map_err(|e| ReportError::Parse {
        line,
        reason: e.to_string(),
    })
}

macro_rules! fill_section {
    ($t:ident, $name:ident, $line:ident, $parse:expr; $($s:ident),*) => {{
        let mut found = false;
        $(
            if $name == stringify!($s) {
                if !$t.$s.is_empty() {
                    return Err(ReportError::Parse { line: $line, reason: format!("duplicate section {:?}", $name) });
                }
                $t.$s = $parse?;
                found = true;
            }
        )*
        if !found {
            return Err(ReportError::Parse { line: $line, reason: format!("unknown section {:?}", $name) });
        }
    }};
}

fn parse_tsv(text: &str) -> Result<Tables, ReportError> {
    let mut t = Tables::default();
    let numbered: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
    let mut i = 0;
    while i < numbered.len() {
        let (line, content) = numbered[i];
        if content.is_empty() {
            i += 1;
            continue;
        }
        let name = content.strip_prefix("#SECTION ").ok_or_else(|| ReportError::Parse {
            line,
            reason: "expected a #SECTION line".into(),
        })?;
        let header = *numbered.get(i + 1).ok_or_else(|| ReportError::Parse {
            line,
            reason: "section without header".into(),
        })?;
        let mut end = i + 2;
        while end < numbered.len() && !numbered[end].1.starts_with("#SECTION ") && !numbered[end].1.is_empty() {
            end += 1;
        }
        let body = &numbered[i + 2..end];
        for_sections!(fill_section!(t, name, line, parse_tsv_rows(header, body)));
        i = end;
    }
    Ok(t)
}

fn parse_jsonl(text: &str) -> Result<Tables, ReportError> {
    let mut t = Tables::default();
    for (idx, content) in text.lines().enumerate() {
        let line = idx + 1;
        if content.trim().is_empty() {
            continue;
        }
        let err = |reason: String| ReportError::Parse { line, reason };
        let mut obj: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(content).map_err(|e| err(e.to_string()))?;
        let name = match obj.remove("section") {
            Some(serde_json::Value::String(s)) => s,
            _ => return Err(err("missing \"section\" field".into())),
        };
        let rows = obj.remove("rows").ok_or_else(|| err("missing \"rows\" field".into()))?;
        let name = name.as_str();
        for_sections!(fill_section!(t, name, line, parse_json_rows(line, rows.clone())));
    }
    Ok(t)
}

pub fn parse_export(text: &str, format: ExportFormat) -> Result<ReportBundle, ReportError> {
    let tables = match format {
        ExportFormat::Tsv => parse_tsv(text)?,
        ExportFormat::JsonLines => parse_jsonl(text)?,
    };
    tables.into_bundle().map_err(|reason| ReportError::Parse { line: 0, reason })
}

/// Guesses the format from the first non-blank line.
pub fn detect_format(text: &str) -> ExportFormat {
    match text.lines().find(|l| !l.trim().is_empty()) {
        Some(l) if l.trim_start().starts_with('{') => ExportFormat::JsonLines,
        _ => ExportFormat::Tsv,
    }
}

pub fn load_export(path: &Path) -> Result<ReportBundle, ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_export(&text, detect_format(&text))
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

const UNDEFINED: &str = "—";

fn fmt2(v: Option<f64>) -> String {
    v.map_or_else(|| UNDEFINED.to_string(), |v| format!("{v:.2}"))
}

/// First column left-aligned, the rest right-aligned.
fn table(title: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
            let pad = " ".repeat(w - c.chars().count());
            if i == 0 {
                s.push_str(c);
                s.push_str(&pad);
            } else {
                s.push_str("  ");
                s.push_str(&pad);
                s.push_str(c);
            }
        }
        s.trim_end().to_string()
    };
    let mut out = format!("{title}\n");
    out.push_str(&line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>()));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

/// Deterministic plain-text tables, two decimals, `—` for undefined values.
pub fn render_text(bundle: &ReportBundle) -> Result<String, ReportError> {
    if bundle.is_empty() {
        return Err(ReportError::EmptyBundle);
    }
    let mut parts = Vec::new();
    if !bundle.vocab.is_empty() {
        let rows: Vec<Vec<String>> = bundle
            .vocab
            .iter()
            .map(|(l, v)| vec![l.clone(), v.method.clone(), v.size.to_string()])
            .collect();
        parts.push(table("Dictionary size", &["system", "method", "size"], &rows));
    }
    if !bundle.accuracy.is_empty() {
        let mut header = vec!["system"];
        header.extend(ACCURACY_COLUMNS);
        let rows: Vec<Vec<String>> = bundle
            .accuracy
            .iter()
            .map(|(l, r)| {
                let mut row = vec![l.clone()];
                row.extend(accuracy_columns(r).iter().map(|(_, c)| fmt2(c.accuracy_pct())));
                row
            })
            .collect();
        parts.push(table("Gender accuracy (%)", &header, &rows));
    }
    if !bundle.diversity.is_empty() {
        let rows: Vec<Vec<String>> = bundle
            .diversity
            .iter()
            .map(|(l, r)| {
                vec![
                    l.clone(),
                    fmt2(Some(r.ttr_pct)),
                    fmt2(Some(r.mattr_pct)),
                    r.window_size.to_string(),
                    r.token_count.to_string(),
                ]
            })
            .collect();
        parts.push(table("Lexical diversity (%)", &["system", "TTR", "MATTR", "window", "tokens"], &rows));
    }
    if !bundle.increment.is_empty() {
        let rows: Vec<Vec<String>> = bundle
            .increment
            .iter()
            .map(|(l, r)| {
                vec![
                    l.clone(),
                    fmt2(Some(r.mean_increment_pct)),
                    r.averaging.to_string(),
                    r.n_pairs.to_string(),
                ]
            })
            .collect();
        parts.push(table("Length increment (%)", &["system", "increment", "averaging", "pairs"], &rows));
    }
    if !bundle.isolation.is_empty() {
        let rows: Vec<Vec<String>> = bundle
            .isolation
            .iter()
            .map(|(l, r)| {
                vec![
                    l.clone(),
                    r.isolated_count.to_string(),
                    r.total_pairs.to_string(),
                    fmt2(r.isolation_rate_pct),
                    r.skipped_multiword.to_string(),
                ]
            })
            .collect();
        parts.push(table(
            "Gender isolation",
            &["system", "isolated", "pairs", "rate (%)", "skipped"],
            &rows,
        ));
    }
    if !bundle.asymmetry.is_empty() {
        let rows: Vec<Vec<String>> = bundle
            .asymmetry
            .iter()
            .map(|(l, r)| {
                vec![
                    l.clone(),
                    r.n_pairs.to_string(),
                    fmt2(Some(r.pct_feminine_rarer)),
                    fmt2(Some(r.pct_feminine_longer)),
                ]
            })
            .collect();
        parts.push(table(
            "Feminine/masculine asymmetry",
            &["corpus", "pairs", "F rarer (%)", "F longer (%)"],
            &rows,
        ));
    }
    Ok(parts.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(correct: u64, wrong: u64, not_found: u64) -> AccuracyCounts {
        AccuracyCounts { correct, wrong, not_found }
    }

    fn sample() -> ReportBundle {
        let mut per_category = BTreeMap::new();
        per_category.insert(Category::OneF, counts(1, 1, 0));
        per_category.insert(Category::OneM, counts(2, 0, 0));
        per_category.insert(Category::TwoF, counts(0, 0, 0));
        per_category.insert(Category::TwoM, counts(1, 0, 1));
        let mut b = ReportBundle::default();
        b.metadata.tool_version = "0.1.0".into();
        b.metadata.config.insert("merges".into(), "8000".into());
        b.metadata.digests.insert("a\tb.txt".into(), "00ff".into());
        b.accuracy.push((
            "bpe".into(),
            AccuracyReport {
                per_category,
                all: counts(4, 1, 1),
            },
        ));
        b.diversity.push((
            "char".into(),
            DiversityReport {
                ttr_pct: 100.0 / 3.0,
                mattr_pct: 0.1 + 0.2,
                window_size: 1000,
                token_count: 3,
                type_count: 1,
            },
        ));
        b.isolation.push((
            "bpe".into(),
            IsolationReport {
                isolated_count: 0,
                total_pairs: 0,
                skipped_multiword: 2,
                isolation_rate_pct: None,
                verdicts: vec![],
            },
        ));
        b
    }

    #[test]
    fn roundtrip_both_formats() {
        let b = sample();
        for f in [ExportFormat::Tsv, ExportFormat::JsonLines] {
            let text = export_string(&b, f);
            assert_eq!(detect_format(&text), f);
            assert_eq!(parse_export(&text, f).unwrap(), b, "{f}");
        }
    }

    #[test]
    fn undefined_is_null_and_dash() {
        let b = sample();
        assert!(export_string(&b, ExportFormat::Tsv).contains("\tnull"));
        assert!(export_string(&b, ExportFormat::JsonLines).contains("null"));
        let text = render_text(&b).unwrap();
        assert!(text.contains(UNDEFINED));
        assert!(text.contains("system    ALL     1F      1M  2F      2M\nbpe     80.00  50.00  100.00   —  100.00\n"));
    }

    #[test]
    fn two_decimals_round_half_even_on_exact_ties() {
        assert_eq!(fmt2(Some(0.125)), "0.12");
        assert_eq!(fmt2(Some(33.33333)), "33.33");
        assert_eq!(fmt2(None), "—");
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut b = sample();
        assert!(matches!(b.extend(sample()), Err(ReportError::DuplicateLabel { section: "accuracy", .. })));
        let text = "#SECTION diversity\nlabel\tttr_pct\tmattr_pct\twindow_size\ttoken_count\ttype_count\n\
                    a\t1\t1\t1\t1\t1\na\t2\t2\t1\t1\t1\n";
        assert!(parse_export(text, ExportFormat::Tsv).is_err());
    }

    #[test]
    fn empty_bundle_rejected() {
        assert!(matches!(render_text(&ReportBundle::default()), Err(ReportError::EmptyBundle)));
    }

    #[test]
    fn malformed_tsv_reports_line() {
        let err = parse_export("#SECTION vocab\nlabel\tmethod\tsize\nx\tbpe\tnope\n", ExportFormat::Tsv).unwrap_err();
        assert!(matches!(err, ReportError::Parse { line: 3, .. }));
    }
}
