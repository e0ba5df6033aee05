//! Token-length increment of feminine over masculine references.

use std::fmt;
use std::str::FromStr;

use crate::corpus::{tokenize, Benchmark, TokenizeMode};
use crate::segmenters::SegmentationModel;

use super::MetricsError;

/// How per-entry increments combine into one figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Mean of per-entry percentages.
    #[default]
    Macro,
    /// Percentage of the summed token counts.
    Micro,
}

impl FromStr for Averaging {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "macro" => Ok(Averaging::Macro),
            "micro" => Ok(Averaging::Micro),
            other => Err(MetricsError::UnknownAveraging(other.to_string())),
        }
    }
}

impl fmt::Display for Averaging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Averaging::Macro => "macro",
            Averaging::Micro => "micro",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryIncrement {
    pub id: String,
    pub fem_tokens: usize,
    pub masc_tokens: usize,
    pub increment_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncrementReport {
    pub mean_increment_pct: f64,
    pub averaging: Averaging,
    pub per_entry: Vec<EntryIncrement>,
    pub n_pairs: usize,
}

/// Builds a report from `(id, feminine_tokens, masculine_tokens)` triples.
pub fn increment_from_counts<I>(rows: I, averaging: Averaging) -> Result<IncrementReport, MetricsError>
where
    I: IntoIterator<Item = (String, usize, usize)>,
{
    let mut per_entry = Vec::new();
    for (id, fem, masc) in rows {
        if masc == 0 {
            return Err(MetricsError::EmptyReference(id));
        }
        let increment_pct = 100.0 * (fem as f64 - masc as f64) / masc as f64;
        per_entry.push(EntryIncrement {
            id,
            fem_tokens: fem,
            masc_tokens: masc,
            increment_pct,
        });
    }
    if per_entry.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mean_increment_pct = match averaging {
        Averaging::Macro => per_entry.iter().map(|e| e.increment_pct).sum::<f64>() / per_entry.len() as f64,
        Averaging::Micro => {
            let fem: usize = per_entry.iter().map(|e| e.fem_tokens).sum();
            let masc: usize = per_entry.iter().map(|e| e.masc_tokens).sum();
            100.0 * (fem as f64 - masc as f64) / masc as f64
        }
    };
    Ok(IncrementReport {
        mean_increment_pct,
        averaging,
        n_pairs: per_entry.len(),
        per_entry,
    })
}

fn rendered_len(model: &SegmentationModel, text: &str) -> Result<usize, MetricsError> {
    let words = tokenize(text, TokenizeMode::Pretok).map_err(|e| crate::segmenters::SegmentError::InvalidWord {
        word: text.to_string(),
        reason: e.to_string(),
    })?;
    Ok(model.segment_sentence(&words)?.num_tokens())
}

/// Segments both references of every entry and compares their token counts.
pub fn length_increment(
    benchmark: &Benchmark,
    model: &SegmentationModel,
    averaging: Averaging,
) -> Result<IncrementReport, MetricsError> {
    let mut rows = Vec::with_capacity(benchmark.entries.len());
    for entry in &benchmark.entries {
        let (fem, masc) = entry.gendered_refs();
        rows.push((entry.id.clone(), rendered_len(model, fem)?, rendered_len(model, masc)?));
    }
    increment_from_counts(rows, averaging)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula() {
        let r = increment_from_counts([("a".to_string(), 21, 20)], Averaging::Macro).unwrap();
        assert_eq!(r.per_entry[0].increment_pct, 5.0);
        let r = increment_from_counts([("a".to_string(), 7, 7)], Averaging::Macro).unwrap();
        assert_eq!(r.mean_increment_pct, 0.0);
    }

    #[test]
    fn macro_and_micro_differ_only_in_aggregation() {
        let rows = || vec![("a".to_string(), 11, 10), ("b".to_string(), 100, 100)];
        let mac = increment_from_counts(rows(), Averaging::Macro).unwrap();
        let mic = increment_from_counts(rows(), Averaging::Micro).unwrap();
        assert_eq!(mac.per_entry, mic.per_entry);
        assert!((mac.mean_increment_pct - 5.0).abs() < 1e-12);
        assert!((mic.mean_increment_pct - 100.0 / 110.0).abs() < 1e-12);
    }

    #[test]
    fn zero_masculine_rejected() {
        assert!(matches!(
            increment_from_counts([("x".to_string(), 1, 0)], Averaging::Macro),
            Err(MetricsError::EmptyReference(_))
        ));
    }
}
