//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use segbias_core::corpus::{load_corpus, TokenizeMode};
use segbias_core::Corpus;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")).join(name)
}

/// The bundled 1000-sentence synthetic corpus.
pub fn synthetic_corpus() -> Corpus {
    load_corpus(fixture("synthetic_1k.txt"), TokenizeMode::Pretok).expect("bundled fixture")
}
