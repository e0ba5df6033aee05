//! Diagnostics linking segmentation to gender translation.

use thiserror::Error;

use crate::segmenters::SegmentError;

pub mod accuracy;
pub mod asymmetry;
pub mod diversity;
pub mod increment;
pub mod isolation;

pub use accuracy::{gender_accuracy, AccuracyCounts, AccuracyReport};
pub use asymmetry::{asymmetry, AsymmetryReport, FrequencyException};
pub use diversity::{fold_tokens, lexical_diversity, mattr, ttr, DiversityReport, PunctPolicy, DEFAULT_WINDOW};
pub use increment::{increment_from_counts, length_increment, Averaging, EntryIncrement, IncrementReport};
pub use isolation::{divergence_index, gender_isolation, IsolationReport, PairVerdict};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("benchmark has {entries} entries but {hypotheses} hypothesis lines were given")]
    LengthMismatch { entries: usize, hypotheses: usize },
    #[error("cannot compute a ratio over an empty token list")]
    EmptyInput,
    #[error("window size must be at least 1")]
    ZeroWindow,
    #[error("feminine and masculine forms are identical: {0:?}")]
    EqualForms(String),
    #[error("empty form in term pair ({0:?}, {1:?})")]
    EmptyForm(String, String),
    #[error("entry {0}: masculine reference renders to zero tokens")]
    EmptyReference(String),
    #[error("no term pairs given")]
    NoPairs,
    #[error("unknown averaging mode {0:?} (expected \"macro\" or \"micro\")")]
    UnknownAveraging(String),
    #[error("unknown punctuation policy {0:?} (expected \"keep\" or \"strip\")")]
    UnknownPunctPolicy(String),
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

/// `100 * num / den`, undefined for an empty denominator.
pub(crate) fn pct(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}
