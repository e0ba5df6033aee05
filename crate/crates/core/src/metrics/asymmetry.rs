use crate::corpus::FrequencyTable;

use super::MetricsError;

/// A pair whose feminine form is at least as frequent as the masculine one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyException {
    pub feminine: String,
    pub masculine: String,
    pub fem_count: u64,
    pub masc_count: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryReport {
    pub pct_feminine_rarer: f64,
    pub pct_feminine_longer: f64,
    pub n_pairs: usize,
    pub exceptions: Vec<FrequencyException>,
}

/// Frequency and length comparison of `(feminine, masculine)` pairs. Absent words
/// count as zero; equal counts are not "rarer".
pub fn asymmetry<S: AsRef<str>>(pairs: &[(S, S)], freq: &FrequencyTable) -> Result<AsymmetryReport, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::NoPairs);
    }
    let mut rarer = 0usize;
    let mut longer = 0usize;
    let mut exceptions = Vec::new();
    for (f, m) in pairs {
        let (f, m) = (f.as_ref(), m.as_ref());
        let (fc, mc) = (freq.get(f), freq.get(m));
        if fc < mc {
            rarer += 1;
        } else {
            exceptions.push(FrequencyException {
                feminine: f.to_string(),
                masculine: m.to_string(),
                fem_count: fc,
                masc_count: mc,
            });
        }
        if f.chars().count() > m.chars().count() {
            longer += 1;
        }
    }
    let n = pairs.len() as f64;
    Ok(AsymmetryReport {
        pct_feminine_rarer: 100.0 * rarer as f64 / n,
        pct_feminine_longer: 100.0 * longer as f64 / n,
        n_pairs: pairs.len(),
        exceptions,
    })
}
