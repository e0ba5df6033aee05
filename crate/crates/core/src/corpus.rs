//! Corpus ingestion, word counting and paired-reference benchmarks.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;
use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

/// Continuation marker reserved for rendered segmentations.
pub const MARKER: &str = "@@";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("reserved marker \"@@\" in word {word:?}")]
    ReservedMarker { word: String },
    #[error("line {line}: reserved marker \"@@\" in word {word:?}")]
    ReservedMarkerAt { line: usize, word: String },
    #[error("line {line}: invalid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("invalid word {word:?}: words must be non-empty and contain no whitespace")]
    InvalidWord { word: String },
    #[error("corpus {0} contains no sentences")]
    Empty(String),
    #[error("unknown tokenize mode {0:?} (expected \"pretok\" or \"basic\")")]
    UnknownMode(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Word-splitting policy applied to raw lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizeMode {
    /// Whitespace only; input is assumed to be pre-tokenized.
    #[default]
    Pretok,
    /// Whitespace, then punctuation at word edges is split off one character at a time.
    Basic,
}

impl FromStr for TokenizeMode {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pretok" => Ok(TokenizeMode::Pretok),
            "basic" => Ok(TokenizeMode::Basic),
            other => Err(CorpusError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for TokenizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenizeMode::Pretok => "pretok",
            TokenizeMode::Basic => "basic",
        })
    }
}

fn is_punctuation(c: char) -> bool {
    c.general_category_group() == GeneralCategoryGroup::Punctuation
}

fn detach_punctuation<'a>(chunk: &'a str, out: &mut Vec<&'a str>) {
    let mut start = 0;
    let mut end = chunk.len();
    let mut leading = Vec::new();
    for (i, c) in chunk.char_indices() {
        if !is_punctuation(c) {
            break;
        }
        leading.push(&chunk[i..i + c.len_utf8()]);
        start = i + c.len_utf8();
    }
    out.extend(leading);
    if start == end {
        return;
    }
    let mut trailing = Vec::new();
    for (i, c) in chunk[start..].char_indices().rev() {
        if !is_punctuation(c) {
            break;
        }
        trailing.push(&chunk[start + i..start + i + c.len_utf8()]);
        end = start + i;
    }
    out.push(&chunk[start..end]);
    out.extend(trailing.into_iter().rev());
}

/// Splits a line into NFC-normalized words.
pub fn tokenize(line: &str, mode: TokenizeMode) -> Result<Vec<String>, CorpusError> {
    let normalized: String = line.nfc().collect();
    let mut pieces = Vec::new();
    for chunk in normalized.split_whitespace() {
        match mode {
            TokenizeMode::Pretok => pieces.push(chunk),
            TokenizeMode::Basic => detach_punctuation(chunk, &mut pieces),
        }
    }
    pieces
        .into_iter()
        .map(|w| {
            if w.contains(MARKER) {
                Err(CorpusError::ReservedMarker { word: w.to_string() })
            } else {
                Ok(w.to_string())
            }
        })
        .collect()
}

pub(crate) fn check_word(word: &str) -> Result<(), CorpusError> {
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return Err(CorpusError::InvalidWord { word: word.to_string() });
    }
    if word.contains(MARKER) {
        return Err(CorpusError::ReservedMarker { word: word.to_string() });
    }
    Ok(())
}

/// Splits a file's bytes into UTF-8 lines, reporting the first undecodable line.
pub fn read_lines(path: &Path) -> Result<Vec<String>, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = Vec::new();
    let mut raw: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if raw.last().is_some_and(|l| l.is_empty()) {
        raw.pop();
    }
    for (idx, line) in raw.into_iter().enumerate() {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        let text = std::str::from_utf8(line).map_err(|_| CorpusError::InvalidUtf8 { line: idx + 1 })?;
        lines.push(text.to_string());
    }
    Ok(lines)
}

/// Ordered sentences of validated words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<String>>,
}

impl Corpus {
    /// Builds a corpus from already-split sentences, NFC-normalizing every word.
    pub fn from_sentences<S, W>(sentences: S) -> Result<Self, CorpusError>
    where
        S: IntoIterator<Item = W>,
        W: IntoIterator,
        W::Item: AsRef<str>,
    {
        let mut out = Vec::new();
        for sentence in sentences {
            let mut words = Vec::new();
            for word in sentence {
                let word: String = word.as_ref().nfc().collect();
                check_word(&word)?;
                words.push(word);
            }
            out.push(words);
        }
        Ok(Corpus { sentences: out })
    }

    /// Expands a frequency table into a corpus of one-word sentences.
    pub fn from_counts(table: &FrequencyTable) -> Self {
        let mut sentences = Vec::with_capacity(table.total_tokens() as usize);
        for (word, count) in table.iter() {
            for _ in 0..count {
                sentences.push(vec![word.to_string()]);
            }
        }
        Corpus { sentences }
    }

    pub fn sentences(&self) -> &[Vec<String>] {
        &self.sentences
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.iter().all(|s| s.is_empty())
    }

    pub fn num_words(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.sentences.iter().flatten().map(String::as_str)
    }
}

/// Reads a one-sentence-per-line file. Blank lines are dropped.
pub fn load_corpus(path: impl AsRef<Path>, mode: TokenizeMode) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let mut sentences = Vec::new();
    for (idx, line) in read_lines(path)?.iter().enumerate() {
        let words = tokenize(line, mode).map_err(|e| match e {
            CorpusError::ReservedMarker { word } => CorpusError::ReservedMarkerAt { line: idx + 1, word },
            other => other,
        })?;
        if !words.is_empty() {
            sentences.push(words);
        }
    }
    if sentences.is_empty() {
        return Err(CorpusError::Empty(path.display().to_string()));
    }
    Ok(Corpus { sentences })
}

/// Word type counts. Iteration is in lexicographic order of the word.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    entries: BTreeMap<String, u64>,
    total_tokens: u64,
}

impl FrequencyTable {
    /// Builds a table from `(word, count)` pairs; repeated words accumulate, zero counts are skipped.
    pub fn from_counts<I, S>(counts: I) -> Result<Self, CorpusError>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut table = FrequencyTable::default();
        for (word, count) in counts {
            let word: String = word.as_ref().nfc().collect();
            check_word(&word)?;
            if count > 0 {
                table.add(word, count);
            }
        }
        Ok(table)
    }

    fn add(&mut self, word: String, count: u64) {
        *self.entries.entry(word).or_insert(0) += count;
        self.total_tokens += count;
    }

    pub fn get(&self, word: &str) -> u64 {
        self.entries.get(word).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn total_types(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.entries.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Entries by descending count, then lexicographically.
    pub fn by_frequency(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

pub fn word_counts(corpus: &Corpus) -> FrequencyTable {
    let mut table = FrequencyTable::default();
    for word in corpus.words() {
        table.add(word.to_string(), 1);
    }
    table
}

/// MuST-SHE style category: 1 = speaker-referred, 2 = cued by the sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    OneF,
    OneM,
    TwoF,
    TwoM,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::OneF, Category::OneM, Category::TwoF, Category::TwoM];

    /// True when the correct reference carries the feminine forms.
    pub fn is_feminine(self) -> bool {
        matches!(self, Category::OneF | Category::TwoF)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::OneF => "1F",
            Category::OneM => "1M",
            Category::TwoF => "2F",
            Category::TwoM => "2M",
        }
    }

    /// Same class, opposite gender.
    pub fn swapped(self) -> Category {
        match self {
            Category::OneF => Category::OneM,
            Category::OneM => Category::OneF,
            Category::TwoF => Category::TwoM,
            Category::TwoM => Category::TwoF,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

/// A gender-marked form in the correct reference and its swapped counterpart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermPair {
    pub correct: String,
    pub wrong: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkEntry {
    pub id: String,
    pub category: Category,
    pub src: String,
    pub ref_correct: String,
    pub ref_wrong: String,
    pub terms: Vec<TermPair>,
}

impl BenchmarkEntry {
    /// `(feminine, masculine)` references.
    pub fn gendered_refs(&self) -> (&str, &str) {
        if self.category.is_feminine() {
            (&self.ref_correct, &self.ref_wrong)
        } else {
            (&self.ref_wrong, &self.ref_correct)
        }
    }

    /// `(feminine, masculine)` term forms.
    pub fn gendered_terms(&self) -> impl Iterator<Item = (&str, &str)> {
        let fem = self.category.is_feminine();
        self.terms.iter().map(move |t| {
            if fem {
                (t.correct.as_str(), t.wrong.as_str())
            } else {
                (t.wrong.as_str(), t.correct.as_str())
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Benchmark {
    pub entries: Vec<BenchmarkEntry>,
    pub language_tag: String,
}

impl Benchmark {
    /// Validates entry invariants; on failure every violation is reported.
    pub fn new(entries: Vec<BenchmarkEntry>, language_tag: impl Into<String>) -> Result<Self, BenchmarkError> {
        let mut issues = Vec::new();
        let mut seen = HashSet::new();
        for (i, entry) in entries.iter().enumerate() {
            validate_entry(entry, i + 1, &mut seen, &mut issues);
        }
        if !issues.is_empty() {
            return Err(BenchmarkError::Invalid(issues));
        }
        Ok(Benchmark {
            entries,
            language_tag: language_tag.into(),
        })
    }

    pub fn num_terms(&self) -> usize {
        self.entries.iter().map(|e| e.terms.len()).sum()
    }

    /// All `(feminine, masculine)` term pairs in entry order.
    pub fn gender_pairs(&self) -> Vec<(String, String)> {
        self.entries
            .iter()
            .flat_map(|e| e.gendered_terms().map(|(f, m)| (f.to_string(), m.to_string())))
            .collect()
    }
}

pub const BENCHMARK_HEADER: &str = "ID\tCATEGORY\tSRC\tREF_CORRECT\tREF_WRONG\tTERMS";

/// One rejected benchmark row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkIssue {
    /// 1-based line number in the file (or entry position for in-memory benchmarks).
    pub row: usize,
    pub id: Option<String>,
    pub kind: IssueKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IssueKind {
    MissingHeader,
    ColumnCount(usize),
    UnknownCategory(String),
    DuplicateId,
    EqualTermForms(String),
    MalformedTerm(String),
    WordCountMismatch { correct: usize, wrong: usize },
    ReservedMarker,
}

impl fmt::Display for BenchmarkIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}", self.row)?;
        if let Some(id) = &self.id {
            write!(f, " (id {id})")?;
        }
        match &self.kind {
            IssueKind::MissingHeader => write!(f, ": missing header, expected {BENCHMARK_HEADER:?}"),
            IssueKind::ColumnCount(n) => write!(f, ": malformed row, expected 6 columns, found {n}"),
            IssueKind::UnknownCategory(c) => write!(f, ": unknown category {c:?}"),
            IssueKind::DuplicateId => write!(f, ": duplicate id"),
            IssueKind::EqualTermForms(t) => write!(f, ": term pair {t:?} has equal correct and wrong forms"),
            IssueKind::MalformedTerm(t) => write!(f, ": malformed term pair {t:?}, expected correct>wrong"),
            IssueKind::WordCountMismatch { correct, wrong } => write!(
                f,
                ": correct reference has {correct} words but wrong reference has {wrong}"
            ),
            IssueKind::ReservedMarker => write!(f, ": reserved marker \"@@\" in a field"),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchmarkError {
    #[error("invalid benchmark:\n{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<BenchmarkIssue>),
    #[error(transparent)]
    Read(#[from] CorpusError),
}

impl BenchmarkError {
    pub fn issues(&self) -> &[BenchmarkIssue] {
        match self {
            BenchmarkError::Invalid(v) => v,
            BenchmarkError::Read(_) => &[],
        }
    }
}

fn validate_entry(
    entry: &BenchmarkEntry,
    row: usize,
    seen: &mut HashSet<String>,
    issues: &mut Vec<BenchmarkIssue>,
) {
    let mut push = |kind| {
        issues.push(BenchmarkIssue {
            row,
            id: Some(entry.id.clone()),
            kind,
        })
    };
    if !seen.insert(entry.id.clone()) {
        push(IssueKind::DuplicateId);
    }
    let correct = entry.ref_correct.split_whitespace().count();
    let wrong = entry.ref_wrong.split_whitespace().count();
    if correct != wrong {
        push(IssueKind::WordCountMismatch { correct, wrong });
    }
    if entry.ref_correct.contains(MARKER) || entry.ref_wrong.contains(MARKER) {
        push(IssueKind::ReservedMarker);
    }
    for term in &entry.terms {
        let shown = format!("{}>{}", term.correct, term.wrong);
        if term.correct.trim().is_empty() || term.wrong.trim().is_empty() {
            push(IssueKind::MalformedTerm(shown));
        } else if term.correct == term.wrong {
            push(IssueKind::EqualTermForms(shown));
        }
    }
}

fn normalize_phrase(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    nfc.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn parse_terms(field: &str) -> Result<Vec<TermPair>, String> {
    let mut terms = Vec::new();
    for raw in field.split(';').filter(|t| !t.trim().is_empty()) {
        let (correct, wrong) = raw.split_once('>').ok_or_else(|| raw.to_string())?;
        if wrong.contains('>') {
            return Err(raw.to_string());
        }
        terms.push(TermPair {
            correct: normalize_phrase(correct),
            wrong: normalize_phrase(wrong),
        });
    }
    Ok(terms)
}

/// Parses benchmark TSV text. `language_tag` is stored verbatim.
pub fn parse_benchmark(text: &str, language_tag: &str) -> Result<Benchmark, BenchmarkError> {
    let mut lines = text.lines();
    let mut issues = Vec::new();
    if lines.next().map(|h| h.trim_end_matches('\r')) != Some(BENCHMARK_HEADER) {
        issues.push(BenchmarkIssue {
            row: 1,
            id: None,
            kind: IssueKind::MissingHeader,
        });
        return Err(BenchmarkError::Invalid(issues));
    }
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 2;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            issues.push(BenchmarkIssue {
                row,
                id: cols.first().map(|s| s.to_string()),
                kind: IssueKind::ColumnCount(cols.len()),
            });
            continue;
        }
        let id = cols[0].trim().to_string();
        let category = match cols[1].trim().parse::<Category>() {
            Ok(c) => c,
            Err(_) => {
                issues.push(BenchmarkIssue {
                    row,
                    id: Some(id),
                    kind: IssueKind::UnknownCategory(cols[1].to_string()),
                });
                continue;
            }
        };
        let terms = match parse_terms(cols[5]) {
            Ok(t) => t,
            Err(raw) => {
                issues.push(BenchmarkIssue {
                    row,
                    id: Some(id),
                    kind: IssueKind::MalformedTerm(raw),
                });
                continue;
            }
        };
        entries.push(BenchmarkEntry {
            id,
            category,
            src: normalize_phrase(cols[2]),
            ref_correct: normalize_phrase(cols[3]),
            ref_wrong: normalize_phrase(cols[4]),
            terms,
        });
        rows.push(row);
    }
    let mut seen = HashSet::new();
    for (entry, &row) in entries.iter().zip(&rows) {
        validate_entry(entry, row, &mut seen, &mut issues);
    }
    if !issues.is_empty() {
        issues.sort_by_key(|i| i.row);
        return Err(BenchmarkError::Invalid(issues));
    }
    Ok(Benchmark {
        entries,
        language_tag: language_tag.to_string(),
    })
}

/// Loads a benchmark TSV. The language tag is taken from the file stem.
pub fn load_benchmark(path: impl AsRef<Path>) -> Result<Benchmark, BenchmarkError> {
    let path = path.as_ref();
    let text = read_lines(path)?.join("\n");
    let tag = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_benchmark(&text, &tag)
}

/// Reads a `FEM<TAB>MASC` file; blank lines are skipped.
pub fn load_term_pairs(path: impl AsRef<Path>) -> Result<Vec<(String, String)>, CorpusError> {
    let path = path.as_ref();
    let mut pairs = Vec::new();
    for (idx, line) in read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 || cols.iter().any(|c| c.trim().is_empty()) {
            return Err(CorpusError::InvalidWord {
                word: format!("line {}: expected FEM<TAB>MASC, got {line:?}", idx + 1),
            });
        }
        pairs.push((normalize_phrase(cols[0]), normalize_phrase(cols[1])));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn words(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn whitespace_split() {
        assert_eq!(
            tokenize("un expert est allé", TokenizeMode::Pretok).unwrap(),
            words(&["un", "expert", "est", "allé"])
        );
        assert!(tokenize("", TokenizeMode::Pretok).unwrap().is_empty());
        assert!(tokenize(" \t ", TokenizeMode::Basic).unwrap().is_empty());
    }

    #[test]
    fn basic_mode_detaches_edge_punctuation() {
        assert_eq!(
            tokenize("Hello, world.", TokenizeMode::Basic).unwrap(),
            words(&["Hello", ",", "world", "."])
        );
        assert_eq!(
            tokenize("«l'ami»", TokenizeMode::Basic).unwrap(),
            words(&["«", "l'ami", "»"])
        );
        assert_eq!(tokenize("...", TokenizeMode::Basic).unwrap(), words(&[".", ".", "."]));
        // pretok keeps punctuation attached
        assert_eq!(tokenize("Hello,", TokenizeMode::Pretok).unwrap(), words(&["Hello,"]));
    }

    #[test]
    fn tokenize_normalizes_to_nfc() {
        let decomposed = "e\u{301}";
        assert_eq!(tokenize(decomposed, TokenizeMode::Pretok).unwrap(), words(&["é"]));
    }

    #[test]
    fn marker_is_rejected() {
        assert!(matches!(
            tokenize("x@@y", TokenizeMode::Pretok),
            Err(CorpusError::ReservedMarker { .. })
        ));
    }

    fn write_tmp(contents: &[u8]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents).unwrap();
        f
    }

    #[test]
    fn load_two_lines() {
        let f = write_tmp(b"a b\nc");
        let c = load_corpus(f.path(), TokenizeMode::Pretok).unwrap();
        assert_eq!(c.sentences().len(), 2);
        assert_eq!(c.num_words(), 3);
    }

    #[test]
    fn load_drops_blank_lines() {
        let f = write_tmp(b"a b\n\nc\n");
        let c = load_corpus(f.path(), TokenizeMode::Pretok).unwrap();
        assert_eq!(c.sentences().len(), 2);
    }

    #[test]
    fn load_reports_marker_line() {
        let f = write_tmp(b"x@@y\n");
        let err = load_corpus(f.path(), TokenizeMode::Pretok).unwrap_err();
        assert!(matches!(err, CorpusError::ReservedMarkerAt { line: 1, .. }), "{err}");
    }

    #[test]
    fn load_reports_bad_utf8_line() {
        let f = write_tmp(b"ok\n\xff\xfe\n");
        let err = load_corpus(f.path(), TokenizeMode::Pretok).unwrap_err();
        assert!(matches!(err, CorpusError::InvalidUtf8 { line: 2 }));
    }

    #[test]
    fn load_rejects_empty_file() {
        let f = write_tmp(b"\n\n");
        assert!(matches!(load_corpus(f.path(), TokenizeMode::Pretok), Err(CorpusError::Empty(_))));
    }

    #[test]
    fn counts() {
        let c = Corpus::from_sentences(vec![vec!["a", "b"], vec!["a"]]).unwrap();
        let t = word_counts(&c);
        assert_eq!(t.get("a"), 2);
        assert_eq!(t.get("b"), 1);
        assert_eq!(t.total_tokens(), 3);
        assert_eq!(t.total_types(), 2);

        assert!(word_counts(&Corpus::default()).is_empty());

        let many = Corpus::from_sentences(vec![vec!["x"; 1000]]).unwrap();
        let t = word_counts(&many);
        assert_eq!(t.get("x"), 1000);
        assert_eq!(t.total_types(), 1);
    }

    const HEADER: &str = "ID\tCATEGORY\tSRC\tREF_CORRECT\tREF_WRONG\tTERMS\n";

    #[test]
    fn benchmark_single_row() {
        let text = format!("{HEADER}e1\t1F\tI am tired\tje suis fatiguée\tje suis fatigué\tfatiguée>fatigué\n");
        let b = parse_benchmark(&text, "en-fr").unwrap();
        assert_eq!(b.entries.len(), 1);
        assert_eq!(b.entries[0].category, Category::OneF);
        assert_eq!(
            b.entries[0].terms,
            vec![TermPair {
                correct: "fatiguée".into(),
                wrong: "fatigué".into()
            }]
        );
        assert_eq!(b.gender_pairs(), vec![("fatiguée".to_string(), "fatigué".to_string())]);
    }

    #[test]
    fn benchmark_unknown_category() {
        let text = format!("{HEADER}e1\t3F\ta\tb\tc\tb>c\n");
        let err = parse_benchmark(&text, "x").unwrap_err();
        assert!(err.to_string().contains("unknown category"), "{err}");
        assert_eq!(err.issues()[0].row, 2);
    }

    #[test]
    fn benchmark_duplicate_id() {
        let text = format!("{HEADER}e1\t1F\ta\tb\tc\tb>c\ne1\t1M\ta\tb\tc\tb>c\n");
        let err = parse_benchmark(&text, "x").unwrap_err();
        assert_eq!(err.issues().len(), 1);
        assert_eq!(err.issues()[0].kind, IssueKind::DuplicateId);
        assert_eq!(err.issues()[0].row, 3);
    }

    #[test]
    fn benchmark_collects_every_violation() {
        let text = format!(
            "{HEADER}e1\t1F\ta\tb\tc\tb>b\ne2\t2M\ta\tb b\tc\tb>c\ne3\t1F\ttoo\tfew\n"
        );
        let err = parse_benchmark(&text, "x").unwrap_err();
        let kinds: Vec<_> = err.issues().iter().map(|i| (i.row, i.kind.clone())).collect();
        assert_eq!(
            kinds,
            vec![
                (2, IssueKind::EqualTermForms("b>b".into())),
                (3, IssueKind::WordCountMismatch { correct: 2, wrong: 1 }),
                (4, IssueKind::ColumnCount(4)),
            ]
        );
    }

    #[test]
    fn benchmark_requires_header() {
        let err = parse_benchmark("e1\t1F\ta\tb\tc\tb>c\n", "x").unwrap_err();
        assert_eq!(err.issues()[0].kind, IssueKind::MissingHeader);
    }

    #[test]
    fn multiword_terms() {
        let text = format!("{HEADER}e1\t2M\ts\til est  parti\telle est partie\til est>elle est; parti>partie\n");
        let b = parse_benchmark(&text, "x").unwrap();
        assert_eq!(b.entries[0].ref_correct, "il est parti");
        assert_eq!(b.entries[0].terms.len(), 2);
        assert_eq!(b.entries[0].terms[0].correct, "il est");
        // masculine category: feminine side is the wrong reference
        assert_eq!(b.entries[0].gendered_refs().0, "elle est partie");
    }
}
