//! Gender accuracy over paired references.
//!
//! For each annotated term the hypothesis is searched for the correct form first and
//! the wrong form second. A matched span is consumed, so one hypothesis position is
//! never credited to two terms. Matching is on lowercased, desegmented words.

use std::collections::BTreeMap;

use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Benchmark, Category};
use crate::segmenters::desegment_lenient;

use super::{pct, MetricsError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AccuracyCounts {
    pub correct: u64,
    pub wrong: u64,
    pub not_found: u64,
}

impl AccuracyCounts {
    pub fn total(&self) -> u64 {
        self.correct + self.wrong + self.not_found
    }

    /// `100 * correct / (correct + wrong)`; `None` when no term was found.
    pub fn accuracy_pct(&self) -> Option<f64> {
        pct(self.correct, self.correct + self.wrong)
    }

    /// Share of terms found in either form.
    pub fn coverage_pct(&self) -> Option<f64> {
        pct(self.correct + self.wrong, self.total())
    }

    fn absorb(&mut self, other: &AccuracyCounts) {
        self.correct += other.correct;
        self.wrong += other.wrong;
        self.not_found += other.not_found;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyReport {
    /// Always holds all four categories.
    pub per_category: BTreeMap<Category, AccuracyCounts>,
    /// Micro-aggregate over every term.
    pub all: AccuracyCounts,
}

impl AccuracyReport {
    pub fn category(&self, c: Category) -> &AccuracyCounts {
        &self.per_category[&c]
    }
}

pub(crate) fn fold_words(text: &str) -> Vec<String> {
    let nfc: String = text.nfc().collect();
    nfc.to_lowercase().split_whitespace().map(str::to_string).collect()
}

/// First start position where `form` matches unconsumed tokens.
fn find_span(tokens: &[String], used: &[bool], form: &[String]) -> Option<usize> {
    if form.is_empty() || form.len() > tokens.len() {
        return None;
    }
    (0..=tokens.len() - form.len()).find(|&i| (0..form.len()).all(|k| !used[i + k] && tokens[i + k] == form[k]))
}

fn score_entry(terms: &[(Vec<String>, Vec<String>)], hypothesis: &str) -> AccuracyCounts {
    let tokens = fold_words(&desegment_lenient(hypothesis));
    let mut used = vec![false; tokens.len()];
    let mut counts = AccuracyCounts::default();
    for (correct, wrong) in terms {
        let hit = find_span(&tokens, &used, correct)
            .map(|i| (i, correct.len(), true))
            .or_else(|| find_span(&tokens, &used, wrong).map(|i| (i, wrong.len(), false)));
        match hit {
            Some((start, len, is_correct)) => {
                used[start..start + len].iter_mut().for_each(|u| *u = true);
                if is_correct {
                    counts.correct += 1;
                } else {
                    counts.wrong += 1;
                }
            }
            None => counts.not_found += 1,
        }
    }
    counts
}

/// Scores one hypothesis line per benchmark entry, in entry order.
pub fn gender_accuracy<S: AsRef<str>>(benchmark: &Benchmark, hypotheses: &[S]) -> Result<AccuracyReport, MetricsError> {
    if hypotheses.len() != benchmark.entries.len() {
        return Err(MetricsError::LengthMismatch {
            entries: benchmark.entries.len(),
            hypotheses: hypotheses.len(),
        });
    }
    let mut per_category: BTreeMap<Category, AccuracyCounts> =
        Category::ALL.into_iter().map(|c| (c, AccuracyCounts::default())).collect();
    let mut all = AccuracyCounts::default();
    for (entry, hyp) in benchmark.entries.iter().zip(hypotheses) {
        let terms: Vec<_> = entry
            .terms
            .iter()
            .map(|t| (fold_words(&t.correct), fold_words(&t.wrong)))
            .collect();
        let counts = score_entry(&terms, hyp.as_ref());
        per_category.get_mut(&entry.category).expect("all categories present").absorb(&counts);
        all.absorb(&counts);
    }
    Ok(AccuracyReport { per_category, all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{BenchmarkEntry, TermPair};

    fn bench(terms: &[(&str, &str)], category: Category) -> Benchmark {
        Benchmark::new(
            vec![BenchmarkEntry {
                id: "e1".into(),
                category,
                src: "I am tired".into(),
                ref_correct: "je suis fatiguée".into(),
                ref_wrong: "je suis fatigué".into(),
                terms: terms
                    .iter()
                    .map(|(c, w)| TermPair {
                        correct: c.to_string(),
                        wrong: w.to_string(),
                    })
                    .collect(),
            }],
            "en-fr",
        )
        .unwrap()
    }

    #[test]
    fn correct_wrong_missing() {
        let b = bench(&[("fatiguée", "fatigué")], Category::OneF);
        let r = gender_accuracy(&b, &["je suis fatiguée"]).unwrap();
        assert_eq!(r.category(Category::OneF).correct, 1);
        assert_eq!(r.all.accuracy_pct(), Some(100.0));

        let r = gender_accuracy(&b, &["je suis fatigué"]).unwrap();
        assert_eq!(r.all.wrong, 1);
        assert_eq!(r.all.accuracy_pct(), Some(0.0));

        let r = gender_accuracy(&b, &["je suis là"]).unwrap();
        assert_eq!(r.all.not_found, 1);
        assert_eq!(r.category(Category::OneF).accuracy_pct(), None);
        assert_eq!(r.category(Category::OneF).coverage_pct(), Some(0.0));
        assert_eq!(r.category(Category::TwoM).coverage_pct(), None);
    }

    #[test]
    fn shared_token_credited_once() {
        let b = bench(&[("fatiguée", "fatigué"), ("fatiguée", "fatigué")], Category::OneF);
        let r = gender_accuracy(&b, &["je suis fatiguée"]).unwrap();
        assert_eq!(r.all.correct, 1);
        assert_eq!(r.all.not_found, 1);
    }

    #[test]
    fn markers_and_case_are_normalized() {
        let b = bench(&[("fatiguée", "fatigué")], Category::OneF);
        let r = gender_accuracy(&b, &["Je suis FATI@@ GU@@ ÉE"]).unwrap();
        assert_eq!(r.all.correct, 1);
    }

    #[test]
    fn correct_form_checked_first() {
        let b = bench(&[("fatiguée", "fatigué")], Category::OneF);
        let r = gender_accuracy(&b, &["fatigué fatiguée"]).unwrap();
        assert_eq!(r.all.correct, 1);
        assert_eq!(r.all.wrong, 0);
    }

    #[test]
    fn multiword_terms_match_contiguously() {
        let b = bench(&[("suis fatiguée", "suis fatigué")], Category::OneF);
        assert_eq!(gender_accuracy(&b, &["je suis fatiguée"]).unwrap().all.correct, 1);
        assert_eq!(gender_accuracy(&b, &["suis très fatiguée"]).unwrap().all.not_found, 1);
    }

    #[test]
    fn length_mismatch() {
        let b = bench(&[("fatiguée", "fatigué")], Category::OneF);
        let err = gender_accuracy(&b, &["a", "b"]).unwrap_err();
        assert!(err.to_string().contains("1 entries") && err.to_string().contains("2 hypothesis"));
    }
}
