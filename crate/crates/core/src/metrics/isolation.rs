//! Whether a segmentation exposes the gender morpheme as its own token.

use crate::segmenters::SegmentationModel;

use super::{pct, MetricsError};

/// Length in characters of the longest common prefix of the two forms.
pub fn divergence_index(form_f: &str, form_m: &str) -> Result<usize, MetricsError> {
    if form_f.is_empty() || form_m.is_empty() {
        return Err(MetricsError::EmptyForm(form_f.to_string(), form_m.to_string()));
    }
    if form_f == form_m {
        return Err(MetricsError::EqualForms(form_f.to_string()));
    }
    Ok(form_f.chars().zip(form_m.chars()).take_while(|(a, b)| a == b).count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairVerdict {
    pub feminine: String,
    pub masculine: String,
    pub segmentation: Vec<String>,
    pub divergence: usize,
    pub isolated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsolationReport {
    pub isolated_count: usize,
    /// Evaluable (single-word) pairs.
    pub total_pairs: usize,
    pub skipped_multiword: usize,
    pub isolation_rate_pct: Option<f64>,
    pub verdicts: Vec<PairVerdict>,
}

/// Character offsets at which a token starts or ends, word edges included.
fn boundaries(tokens: &[String]) -> Vec<usize> {
    let mut out = vec![0];
    let mut acc = 0;
    for t in tokens {
        acc += t.chars().count();
        out.push(acc);
    }
    out
}

/// A pair is isolated when the feminine form's segmentation has a boundary exactly
/// where the two forms diverge. Multi-word pairs are skipped and counted.
pub fn gender_isolation<S: AsRef<str>>(
    pairs: &[(S, S)],
    model: &SegmentationModel,
) -> Result<IsolationReport, MetricsError> {
    let mut verdicts = Vec::new();
    let mut skipped = 0;
    for (f, m) in pairs {
        let (f, m) = (f.as_ref(), m.as_ref());
        if f.split_whitespace().count() > 1 || m.split_whitespace().count() > 1 {
            skipped += 1;
            continue;
        }
        let divergence = divergence_index(f, m)?;
        let segmentation = model.segment_word(f)?;
        let isolated = boundaries(&segmentation).contains(&divergence);
        verdicts.push(PairVerdict {
            feminine: f.to_string(),
            masculine: m.to_string(),
            segmentation,
            divergence,
            isolated,
        });
    }
    let isolated_count = verdicts.iter().filter(|v| v.isolated).count();
    Ok(IsolationReport {
        isolated_count,
        total_pairs: verdicts.len(),
        skipped_multiword: skipped,
        isolation_rate_pct: pct(isolated_count as u64, verdicts.len() as u64),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmenters::{MergeTable, SegmentationModel};

    #[test]
    fn divergence_examples() {
        assert_eq!(divergence_index("adoptée", "adopté").unwrap(), 6);
        assert_eq!(divergence_index("chiesta", "chiesto").unwrap(), 6);
        assert_eq!(divergence_index("xa", "ya").unwrap(), 0);
        assert!(matches!(divergence_index("a", "a"), Err(MetricsError::EqualForms(_))));
    }

    #[test]
    fn boundary_offsets() {
        let toks: Vec<String> = ["adop", "t", "é", "e"].iter().map(|s| s.to_string()).collect();
        assert_eq!(boundaries(&toks), vec![0, 4, 5, 6, 7]);
    }

    #[test]
    fn multiword_pairs_skipped() {
        let m = SegmentationModel::char_model("ab".chars().collect());
        let r = gender_isolation(&[("a b", "a a"), ("ab", "aa")], &m).unwrap();
        assert_eq!(r.skipped_multiword, 1);
        assert_eq!(r.total_pairs, 1);
        assert_eq!(r.isolation_rate_pct, Some(100.0));
    }

    #[test]
    fn coarse_bpe_split_is_not_isolated() {
        let merges = [("a", "d"), ("o", "p"), ("ad", "op"), ("t", "é"), ("té", "e")];
        let table = MergeTable::new(merges.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect()).unwrap();
        let m = SegmentationModel::bpe("adopté".chars().collect(), table);
        assert_eq!(m.segment_word("adoptée").unwrap(), vec!["adop", "tée"]);
        let r = gender_isolation(&[("adoptée", "adopté")], &m).unwrap();
        assert_eq!(r.isolated_count, 0);
        assert_eq!(r.isolation_rate_pct, Some(0.0));
    }
}
