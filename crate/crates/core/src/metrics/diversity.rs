//! Type/token ratio and its moving-average variant.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use unicode_properties::{GeneralCategoryGroup, UnicodeGeneralCategory};

use crate::segmenters::desegment_lenient;

use super::accuracy::fold_words;
use super::MetricsError;

pub const DEFAULT_WINDOW: usize = 1000;

/// Whether tokens made only of punctuation count toward diversity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PunctPolicy {
    #[default]
    Keep,
    Strip,
}

impl FromStr for PunctPolicy {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "keep" => Ok(PunctPolicy::Keep),
            "strip" => Ok(PunctPolicy::Strip),
            other => Err(MetricsError::UnknownPunctPolicy(other.to_string())),
        }
    }
}

impl fmt::Display for PunctPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PunctPolicy::Keep => "keep",
            PunctPolicy::Strip => "strip",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub ttr_pct: f64,
    pub mattr_pct: f64,
    pub window_size: usize,
    pub token_count: usize,
    pub type_count: usize,
}

pub fn ttr<S: AsRef<str>>(tokens: &[S]) -> Result<f64, MetricsError> {
    if tokens.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let types: HashSet<&str> = tokens.iter().map(AsRef::as_ref).collect();
    Ok(100.0 * types.len() as f64 / tokens.len() as f64)
}

/// Mean TTR over every window of `window` consecutive tokens, sliding by one. Lists
/// no longer than the window fall back to plain TTR.
pub fn mattr<S: AsRef<str>>(tokens: &[S], window: usize) -> Result<f64, MetricsError> {
    if window == 0 {
        return Err(MetricsError::ZeroWindow);
    }
    if tokens.len() <= window {
        return ttr(tokens);
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &tokens[..window] {
        *counts.entry(t.as_ref()).or_insert(0) += 1;
    }
    // summed in integers; a single division keeps the result exact to one rounding
    let mut distinct_sum = counts.len() as u64;
    for i in window..tokens.len() {
        let out = tokens[i - window].as_ref();
        let slot = counts.get_mut(out).expect("token inside window");
        *slot -= 1;
        if *slot == 0 {
            counts.remove(out);
        }
        *counts.entry(tokens[i].as_ref()).or_insert(0) += 1;
        distinct_sum += counts.len() as u64;
    }
    let windows = (tokens.len() - window + 1) as u64;
    Ok(100.0 * distinct_sum as f64 / (windows * window as u64) as f64)
}

fn is_punct_token(t: &str) -> bool {
    t.chars().all(|c| c.general_category_group() == GeneralCategoryGroup::Punctuation)
}

/// Lowercased, desegmented tokens of a text, optionally without punctuation tokens.
pub fn fold_tokens<S: AsRef<str>>(lines: &[S], punct: PunctPolicy) -> Vec<String> {
    lines
        .iter()
        .flat_map(|l| fold_words(&desegment_lenient(l.as_ref())))
        .filter(|t| punct == PunctPolicy::Keep || !is_punct_token(t))
        .collect()
}

pub fn lexical_diversity<S: AsRef<str>>(
    lines: &[S],
    window: usize,
    punct: PunctPolicy,
) -> Result<DiversityReport, MetricsError> {
    let tokens = fold_tokens(lines, punct);
    let ttr_pct = ttr(&tokens)?;
    let mattr_pct = mattr(&tokens, window)?;
    Ok(DiversityReport {
        ttr_pct,
        mattr_pct,
        window_size: window,
        token_count: tokens.len(),
        type_count: tokens.iter().collect::<HashSet<_>>().len(),
    })
}
