//! The five segmentation families behind one model type.
//!
//! Every method splits a word into surface tokens whose concatenation is the word.
//! Rendered text marks every non-final token of a word with the `@@` suffix, e.g.
//! `des@@ crit@@ t a`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{self, word_counts, Corpus, FrequencyTable, MARKER};

pub mod bpe;
pub mod io;
mod lattice;
pub mod morph;
pub mod unigram;

pub use bpe::MergeTable;
pub use lattice::SCORE_TIE_TOLERANCE;
pub use io::{load_model, parse_model, save_model, serialize_model};
pub use morph::{MorfessorParams, MorfessorTrace, MorphLexicon};
pub use unigram::{UnigramModel, UnigramParams, UnigramTrace};

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid word {word:?}: {reason}")]
    InvalidWord { word: String, reason: String },
    #[error("sentence {sentence}, word {word}: {source}")]
    At {
        sentence: usize,
        word: usize,
        #[source]
        source: Box<SegmentError>,
    },
    #[error("dangling continuation marker at end of line")]
    DanglingMarker,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported model version {0} (expected {})", io::FORMAT_VERSION)]
    VersionMismatch(String),
    #[error("unknown segmentation method {0:?}")]
    UnknownMethod(String),
    #[error("line {line}: malformed model record: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Char,
    Bpe,
    Unigram,
    Morfessor,
    Lmvr,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Char, Method::Bpe, Method::Unigram, Method::Morfessor, Method::Lmvr];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Char => "char",
            Method::Bpe => "bpe",
            Method::Unigram => "unigram",
            Method::Morfessor => "morfessor",
            Method::Lmvr => "lmvr",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = SegmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| SegmentError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Char,
    Bpe(MergeTable),
    Unigram(UnigramModel),
    /// Morfessor and LMVR.
    Morph(MorphLexicon),
}

/// A trained segmenter. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationModel {
    method: Method,
    alphabet: BTreeSet<char>,
    payload: Payload,
}

impl SegmentationModel {
    pub fn char_model(alphabet: BTreeSet<char>) -> Self {
        SegmentationModel {
            method: Method::Char,
            alphabet,
            payload: Payload::Char,
        }
    }

    pub fn bpe(alphabet: BTreeSet<char>, merges: MergeTable) -> Self {
        SegmentationModel {
            method: Method::Bpe,
            alphabet,
            payload: Payload::Bpe(merges),
        }
    }

    pub fn unigram(model: UnigramModel) -> Self {
        let alphabet = model
            .entries()
            .iter()
            .filter(|(p, _)| p.chars().count() == 1)
            .filter_map(|(p, _)| p.chars().next())
            .collect();
        SegmentationModel {
            method: Method::Unigram,
            alphabet,
            payload: Payload::Unigram(model),
        }
    }

    /// `method` must be `Morfessor` or `Lmvr`.
    pub fn morph(method: Method, lexicon: MorphLexicon) -> Self {
        assert!(matches!(method, Method::Morfessor | Method::Lmvr));
        let alphabet = lexicon.morphs().keys().flat_map(|m| m.chars()).collect();
        SegmentationModel {
            method,
            alphabet,
            payload: Payload::Morph(lexicon),
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Splits one word. The tokens always concatenate back to `word`.
    pub fn segment_word(&self, word: &str) -> Result<Vec<String>, SegmentError> {
        if let Err(e) = corpus::check_word(word) {
            return Err(SegmentError::InvalidWord {
                word: word.to_string(),
                reason: e.to_string(),
            });
        }
        Ok(match &self.payload {
            Payload::Char => word.chars().map(String::from).collect(),
            Payload::Bpe(merges) => merges.apply(word),
            Payload::Unigram(model) => model.viterbi(word).0,
            Payload::Morph(lexicon) => lexicon.segment(word),
        })
    }

    pub fn segment_sentence<S: AsRef<str>>(&self, words: &[S]) -> Result<SegmentedSentence, SegmentError> {
        words
            .iter()
            .map(|w| self.segment_word(w.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(|words| SegmentedSentence { words })
    }
}

fn alphabet_of(counts: &FrequencyTable) -> BTreeSet<char> {
    counts.iter().flat_map(|(w, _)| w.chars()).collect()
}

fn counts_of(corpus: &Corpus) -> Result<FrequencyTable, SegmentError> {
    let counts = word_counts(corpus);
    if counts.is_empty() {
        return Err(SegmentError::EmptyCorpus);
    }
    Ok(counts)
}

pub fn train_char(corpus: &Corpus) -> Result<SegmentationModel, SegmentError> {
    let counts = counts_of(corpus)?;
    Ok(SegmentationModel::char_model(alphabet_of(&counts)))
}

pub fn train_bpe(corpus: &Corpus, num_merges: usize) -> Result<SegmentationModel, SegmentError> {
    train_bpe_counts(&counts_of(corpus)?, num_merges)
}

pub fn train_bpe_counts(counts: &FrequencyTable, num_merges: usize) -> Result<SegmentationModel, SegmentError> {
    let merges = bpe::train_merges(counts, num_merges)?;
    Ok(SegmentationModel::bpe(alphabet_of(counts), merges))
}

pub fn train_unigram(corpus: &Corpus, params: &UnigramParams) -> Result<SegmentationModel, SegmentError> {
    train_unigram_counts(&counts_of(corpus)?, params).map(|(m, _)| m)
}

pub fn train_unigram_counts(
    counts: &FrequencyTable,
    params: &UnigramParams,
) -> Result<(SegmentationModel, UnigramTrace), SegmentError> {
    let (model, trace) = unigram::train_unigram_model(counts, params)?;
    Ok((SegmentationModel::unigram(model), trace))
}

pub fn train_morfessor(corpus: &Corpus, params: &MorfessorParams) -> Result<SegmentationModel, SegmentError> {
    train_morfessor_counts(&counts_of(corpus)?, params).map(|(m, _)| m)
}

pub fn train_morfessor_counts(
    counts: &FrequencyTable,
    params: &MorfessorParams,
) -> Result<(SegmentationModel, MorfessorTrace), SegmentError> {
    let (lexicon, trace) = morph::train_morph_lexicon(counts, params, None)?;
    Ok((SegmentationModel::morph(Method::Morfessor, lexicon), trace))
}

/// LMVR-style training; `cap = None` leaves the lexicon unbounded.
pub fn train_lmvr(corpus: &Corpus, cap: Option<usize>, params: &MorfessorParams) -> Result<SegmentationModel, SegmentError> {
    train_lmvr_counts(&counts_of(corpus)?, cap, params).map(|(m, _)| m)
}

pub fn train_lmvr_counts(
    counts: &FrequencyTable,
    cap: Option<usize>,
    params: &MorfessorParams,
) -> Result<(SegmentationModel, MorfessorTrace), SegmentError> {
    if cap == Some(0) {
        return Err(SegmentError::InvalidParameter("cap must be positive".into()));
    }
    let (lexicon, trace) = morph::train_morph_lexicon(counts, params, cap)?;
    Ok((SegmentationModel::morph(Method::Lmvr, lexicon), trace))
}

/// Per-word token lists of one sentence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SegmentedSentence {
    pub words: Vec<Vec<String>>,
}

impl SegmentedSentence {
    pub fn num_tokens(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Tokens joined by spaces; every non-final token of a word carries `@@`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, word) in self.words.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            for (j, tok) in word.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(tok);
                if j + 1 < word.len() {
                    out.push_str(MARKER);
                }
            }
        }
        out
    }
}

pub type SegmentedCorpus = Vec<SegmentedSentence>;

/// Segments every sentence. With `threads > 1` sentences are processed on a local
/// thread pool; output order always matches input order.
pub fn segment_corpus(
    model: &SegmentationModel,
    corpus: &Corpus,
    threads: usize,
) -> Result<SegmentedCorpus, SegmentError> {
    let one = |(i, sentence): (usize, &Vec<String>)| -> Result<SegmentedSentence, SegmentError> {
        let mut words = Vec::with_capacity(sentence.len());
        for (j, w) in sentence.iter().enumerate() {
            words.push(model.segment_word(w).map_err(|e| SegmentError::At {
                sentence: i + 1,
                word: j + 1,
                source: Box::new(e),
            })?);
        }
        Ok(SegmentedSentence { words })
    };
    let sentences = corpus.sentences();
    if threads <= 1 {
        return sentences.iter().enumerate().map(one).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SegmentError::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| sentences.par_iter().enumerate().map(one).collect())
}

/// Removes continuation markers. A line ending in `@@` is rejected.
pub fn desegment(line: &str) -> Result<String, SegmentError> {
    let trimmed = line.trim_end();
    if trimmed.ends_with(MARKER) {
        return Err(SegmentError::DanglingMarker);
    }
    Ok(line.replace("@@ ", ""))
}

/// Like [`desegment`], but drops a dangling final marker instead of failing.
pub fn desegment_lenient(line: &str) -> String {
    let out = line.replace("@@ ", "");
    let trimmed = out.trim_end();
    trimmed.strip_suffix(MARKER).unwrap_or(trimmed).to_string()
}

/// Dictionary size and entries in reporting order.
#[derive(Debug, Clone, PartialEq)]
pub struct VocabReport {
    pub method: Method,
    pub size: usize,
    /// Entries with their count or log-probability where the method has one.
    pub entries: Vec<(String, Option<f64>)>,
}

pub fn vocab_report(model: &SegmentationModel) -> VocabReport {
    let chars = || model.alphabet.iter().map(|c| (c.to_string(), None));
    let entries: Vec<(String, Option<f64>)> = match &model.payload {
        Payload::Char => chars().collect(),
        Payload::Bpe(merges) => {
            let mut seen: BTreeSet<String> = model.alphabet.iter().map(|c| c.to_string()).collect();
            let mut v: Vec<_> = chars().collect();
            for (l, r) in merges.merges() {
                let piece = format!("{l}{r}");
                if seen.insert(piece.clone()) {
                    v.push((piece, None));
                }
            }
            v
        }
        Payload::Unigram(m) => m.entries().into_iter().map(|(p, lp)| (p.to_string(), Some(lp))).collect(),
        Payload::Morph(lex) => lex
            .entries()
            .into_iter()
            .map(|(m, c)| (m.to_string(), Some(c as f64)))
            .collect(),
    };
    VocabReport {
        method: model.method,
        size: entries.len(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(lines: &[&str]) -> Corpus {
        Corpus::from_sentences(lines.iter().map(|l| l.split_whitespace().collect::<Vec<_>>())).unwrap()
    }

    #[test]
    fn char_alphabet() {
        let m = train_char(&corpus(&["abc cab", "ba"])).unwrap();
        assert_eq!(m.alphabet().len(), 3);
        assert_eq!(vocab_report(&m).size, 3);
        let nfc = Corpus::from_sentences(vec![vec!["e\u{301}"]]).unwrap();
        assert_eq!(train_char(&nfc).unwrap().alphabet().len(), 1);
    }

    #[test]
    fn char_rendering() {
        let m = train_char(&corpus(&["sure"])).unwrap();
        let seg = m.segment_sentence(&["sure"]).unwrap();
        assert_eq!(seg.words[0], vec!["s", "u", "r", "e"]);
        assert_eq!(seg.render(), "s@@ u@@ r@@ e");
        let seg = m.segment_sentence(&["ab", "cd"]).unwrap();
        assert_eq!(seg.render(), "a@@ b c@@ d");
        assert_eq!(SegmentedSentence::default().render(), "");
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(train_char(&Corpus::default()), Err(SegmentError::EmptyCorpus)));
        assert!(matches!(train_bpe(&Corpus::default(), 5), Err(SegmentError::EmptyCorpus)));
        assert!(matches!(
            train_morfessor(&Corpus::default(), &MorfessorParams::default()),
            Err(SegmentError::EmptyCorpus)
        ));
    }

    #[test]
    fn desegment_cases() {
        assert_eq!(desegment("chie@@ sta").unwrap(), "chiesta");
        assert_eq!(desegment("a b").unwrap(), "a b");
        assert!(matches!(desegment("x@@"), Err(SegmentError::DanglingMarker)));
        assert_eq!(desegment_lenient("x@@ y z@@"), "xy z");
    }

    #[test]
    fn bpe_vocab_is_additive() {
        let merges = MergeTable::new(vec![
            ("a".into(), "b".into()),
            ("ab".into(), "c".into()),
            ("d".into(), "e".into()),
        ])
        .unwrap();
        let m = SegmentationModel::bpe("abcde".chars().collect(), merges);
        assert_eq!(vocab_report(&m).size, 8);
    }

    #[test]
    fn segment_word_rejects_bad_input() {
        let m = train_char(&corpus(&["ab"])).unwrap();
        assert!(m.segment_word("").is_err());
        assert!(m.segment_word("a b").is_err());
        assert!(m.segment_word("a@@b").is_err());
    }

    #[test]
    fn parallel_segmentation_keeps_order() {
        let m = train_char(&corpus(&["ab"])).unwrap();
        let c = corpus(&["ab", "cd ef"]);
        let seq = segment_corpus(&m, &c, 1).unwrap();
        let par = segment_corpus(&m, &c, 3).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq[1].render(), "c@@ d e@@ f");
    }
}
