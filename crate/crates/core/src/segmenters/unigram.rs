//! Unigram language-model segmentation trained by EM with likelihood-based pruning.

use std::collections::{BTreeMap, HashMap};

use crate::corpus::FrequencyTable;

use super::lattice::{best_segmentation, CharIndex};
use super::SegmentError;

/// Piece log-probabilities (natural log).
#[derive(Debug, Clone, PartialEq)]
pub struct UnigramModel {
    pieces: HashMap<String, f64>,
    max_len: usize,
    unk_logprob: f64,
}

impl UnigramModel {
    /// Validates that every log-probability is finite and non-positive and that the
    /// probabilities sum to one within 1e-6.
    pub fn new<I, S>(pieces: I) -> Result<Self, SegmentError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = HashMap::new();
        for (piece, lp) in pieces {
            let piece = piece.into();
            if piece.is_empty() || !lp.is_finite() || lp > 0.0 {
                return Err(SegmentError::InvalidModel(format!(
                    "piece {piece:?} has invalid log-probability {lp}"
                )));
            }
            if map.insert(piece.clone(), lp).is_some() {
                return Err(SegmentError::InvalidModel(format!("duplicate piece {piece:?}")));
            }
        }
        if map.is_empty() {
            return Err(SegmentError::InvalidModel("unigram model has no pieces".into()));
        }
        let mut sorted: Vec<f64> = map.values().map(|lp| lp.exp()).collect();
        sorted.sort_by(f64::total_cmp);
        let mass: f64 = sorted.iter().sum();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(SegmentError::InvalidModel(format!(
                "piece probabilities sum to {mass}, expected 1"
            )));
        }
        Ok(Self::from_map(map))
    }

    fn from_map(pieces: HashMap<String, f64>) -> Self {
        let max_len = pieces.keys().map(|p| p.chars().count()).max().unwrap_or(1);
        let min_lp = pieces.values().copied().fold(0.0, f64::min);
        UnigramModel {
            pieces,
            max_len,
            // an unseen character is half as likely as the rarest piece
            unk_logprob: min_lp + 0.5f64.ln(),
        }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn logprob(&self, piece: &str) -> Option<f64> {
        self.pieces.get(piece).copied()
    }

    pub fn unknown_char_logprob(&self) -> f64 {
        self.unk_logprob
    }

    /// Pieces by descending probability, then lexicographically.
    pub fn entries(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<_> = self.pieces.iter().map(|(p, &lp)| (p.as_str(), lp)).collect();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    fn score(&self, piece: &str, n_chars: usize) -> Option<f64> {
        match self.pieces.get(piece) {
            Some(&lp) => Some(lp),
            None if n_chars == 1 => Some(self.unk_logprob),
            None => None,
        }
    }

    /// Maximum log-probability segmentation. Ties go to fewer tokens, then to the
    /// lexicographically smallest token sequence.
    pub fn viterbi(&self, word: &str) -> (Vec<String>, f64) {
        best_segmentation(word, self.max_len, |p, n| self.score(p, n))
    }

    /// Log of the summed probability of every segmentation of `word`.
    pub fn word_log_likelihood(&self, word: &str) -> f64 {
        Lattice::build(word, self).log_z()
    }

    /// Count-weighted marginal log-likelihood of a frequency table.
    pub fn log_likelihood(&self, counts: &FrequencyTable) -> f64 {
        counts
            .iter()
            .map(|(w, c)| c as f64 * self.word_log_likelihood(w))
            .sum()
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Edges `(start, end, piece, logprob)` over character positions.
struct Lattice<'a> {
    n: usize,
    edges: Vec<(usize, usize, &'a str, f64)>,
}

impl<'a> Lattice<'a> {
    fn build(word: &'a str, model: &UnigramModel) -> Self {
        let idx = CharIndex::new(word);
        let n = idx.len();
        let mut edges = Vec::new();
        for start in 0..n {
            for end in start + 1..=(start + model.max_len).min(n) {
                let piece = idx.slice(start, end);
                if let Some(lp) = model.score(piece, end - start) {
                    edges.push((start, end, piece, lp));
                }
            }
        }
        Lattice { n, edges }
    }

    fn forward(&self) -> Vec<f64> {
        let mut alpha = vec![f64::NEG_INFINITY; self.n + 1];
        alpha[0] = 0.0;
        // edges are ordered by start, so every alpha[start] is final when reached
        for &(s, e, _, lp) in &self.edges {
            alpha[e] = log_add(alpha[e], alpha[s] + lp);
        }
        alpha
    }

    fn log_z(&self) -> f64 {
        self.forward()[self.n]
    }

    fn backward(&self) -> Vec<f64> {
        let mut beta = vec![f64::NEG_INFINITY; self.n + 1];
        beta[self.n] = 0.0;
        for &(s, e, _, lp) in self.edges.iter().rev() {
            beta[s] = log_add(beta[s], beta[e] + lp);
        }
        beta
    }
}

/// Training knobs. Defaults: pieces up to 8 characters, 4 EM iterations per round,
/// 20% of prunable pieces removed per round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnigramParams {
    pub target_vocab: usize,
    pub max_piece_len: usize,
    pub em_iterations: usize,
    pub prune_fraction: f64,
}

impl UnigramParams {
    pub fn new(target_vocab: usize) -> Self {
        UnigramParams {
            target_vocab,
            max_piece_len: 8,
            em_iterations: 4,
            prune_fraction: 0.2,
        }
    }
}

/// Log-likelihoods observed during training, one vector per EM round: the value
/// before the first iteration followed by the value after each iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UnigramTrace {
    pub rounds: Vec<Vec<f64>>,
    pub sizes: Vec<usize>,
}

fn seed_pieces(counts: &FrequencyTable, max_len: usize) -> BTreeMap<String, f64> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for (word, c) in counts.iter() {
        let idx = CharIndex::new(word);
        for start in 0..idx.len() {
            for end in start + 1..=(start + max_len).min(idx.len()) {
                *freq.entry(idx.slice(start, end)).or_insert(0) += c;
            }
        }
    }
    freq.into_iter()
        .filter(|(p, f)| *f >= 2 || p.chars().count() == 1)
        .map(|(p, f)| (p.to_string(), f as f64))
        .collect()
}

fn normalize(weights: BTreeMap<String, f64>) -> HashMap<String, f64> {
    let total: f64 = weights.values().sum();
    weights
        .into_iter()
        .map(|(p, w)| {
            let prob = (w / total).max(f64::MIN_POSITIVE);
            (p, prob.ln())
        })
        .collect()
}

fn expected_counts(model: &UnigramModel, counts: &FrequencyTable) -> (BTreeMap<String, f64>, f64) {
    let mut expected: BTreeMap<String, f64> = model.pieces.keys().map(|p| (p.clone(), 0.0)).collect();
    let mut ll = 0.0;
    for (word, c) in counts.iter() {
        let lattice = Lattice::build(word, model);
        let alpha = lattice.forward();
        let beta = lattice.backward();
        let z = alpha[lattice.n];
        ll += c as f64 * z;
        for &(s, e, piece, lp) in &lattice.edges {
            let post = (alpha[s] + lp + beta[e] - z).exp();
            if let Some(slot) = expected.get_mut(piece) {
                *slot += c as f64 * post;
            }
        }
    }
    (expected, ll)
}

fn prune(model: &UnigramModel, counts: &FrequencyTable, params: &UnigramParams) -> BTreeMap<String, f64> {
    // Viterbi piece frequencies under the current model.
    let mut freq: BTreeMap<String, f64> = model.pieces.keys().map(|p| (p.clone(), 0.0)).collect();
    for (word, c) in counts.iter() {
        for tok in model.viterbi(word).0 {
            if let Some(f) = freq.get_mut(&tok) {
                *f += c as f64;
            }
        }
    }
    let vsum: f64 = freq.values().sum();

    let mut losses: Vec<(f64, &str)> = Vec::new();
    for piece in model.pieces.keys() {
        if piece.chars().count() == 1 {
            continue;
        }
        let f = freq[piece];
        let loss = if f == 0.0 || vsum == 0.0 {
            0.0
        } else {
            // Re-route the piece's occurrences through its best alternative split.
            let (alt, _) = best_segmentation(piece, model.max_len, |p, n| {
                if p == piece {
                    None
                } else {
                    model.score(p, n)
                }
            });
            let logprob_piece = f.ln() - vsum.ln();
            let new_sum = vsum + f * (alt.len() as f64 - 1.0);
            let logprob_alt: f64 = alt
                .iter()
                .map(|a| (freq.get(a).copied().unwrap_or(0.0) + f).ln())
                .sum::<f64>()
                - alt.len() as f64 * new_sum.ln();
            (f / vsum) * (logprob_piece - logprob_alt)
        };
        losses.push((loss, piece.as_str()));
    }
    losses.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));

    let excess = model.pieces.len() - params.target_vocab;
    let quota = ((losses.len() as f64 * params.prune_fraction).ceil() as usize).max(1);
    let drop: std::collections::HashSet<&str> = losses.iter().take(quota.min(excess)).map(|(_, p)| *p).collect();

    model
        .pieces
        .iter()
        .filter(|(p, _)| !drop.contains(p.as_str()))
        .map(|(p, lp)| (p.clone(), lp.exp()))
        .collect()
}

/// Trains a unigram model whose vocabulary holds at most `target_vocab` pieces. Single
/// characters are never pruned.
pub fn train_unigram_model(
    counts: &FrequencyTable,
    params: &UnigramParams,
) -> Result<(UnigramModel, UnigramTrace), SegmentError> {
    if counts.is_empty() {
        return Err(SegmentError::EmptyCorpus);
    }
    if params.max_piece_len == 0 {
        return Err(SegmentError::InvalidParameter("max_piece_len must be at least 1".into()));
    }
    if !(params.prune_fraction > 0.0 && params.prune_fraction < 1.0) {
        return Err(SegmentError::InvalidParameter(format!(
            "prune_fraction must lie in (0, 1), got {}",
            params.prune_fraction
        )));
    }
    let seeds = seed_pieces(counts, params.max_piece_len);
    let alphabet = seeds.keys().filter(|p| p.chars().count() == 1).count();
    if params.target_vocab < alphabet {
        return Err(SegmentError::InvalidParameter(format!(
            "target vocabulary {} is smaller than the alphabet ({alphabet} characters)",
            params.target_vocab
        )));
    }

    let mut model = UnigramModel::from_map(normalize(seeds));
    let mut trace = UnigramTrace::default();
    loop {
        let mut lls = Vec::with_capacity(params.em_iterations + 1);
        for _ in 0..params.em_iterations {
            let (expected, ll) = expected_counts(&model, counts);
            lls.push(ll);
            model = UnigramModel::from_map(normalize(expected));
        }
        lls.push(model.log_likelihood(counts));
        trace.rounds.push(lls);
        trace.sizes.push(model.len());
        if model.len() <= params.target_vocab {
            break;
        }
        model = UnigramModel::from_map(normalize(prune(&model, counts, params)));
    }
    Ok((model, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(pieces: &[(&str, f64)]) -> UnigramModel {
        let total: f64 = pieces.iter().map(|p| p.1).sum();
        UnigramModel::new(pieces.iter().map(|&(p, w)| (p, (w / total).ln()))).unwrap()
    }

    #[test]
    fn ab_collapses_to_single_piece() {
        let counts = FrequencyTable::from_counts([("ab", 10)]).unwrap();
        let (m, _) = train_unigram_model(&counts, &UnigramParams::new(3)).unwrap();
        for p in ["a", "b", "ab"] {
            assert!(m.logprob(p).is_some(), "{p} missing");
        }
        assert_eq!(m.viterbi("ab").0, vec!["ab"]);
    }

    #[test]
    fn only_one_path() {
        let m = model(&[("a", 1.0), ("b", 1.0), ("c", 1.0)]);
        assert_eq!(m.viterbi("abc").0, vec!["a", "b", "c"]);
    }

    #[test]
    fn adoptee_fixture() {
        // fine pieces dominate the coarse "tée"/"té"
        let m = model(&[
            ("adop", 8.0),
            ("t", 8.0),
            ("é", 8.0),
            ("e", 8.0),
            ("tée", 0.01),
            ("té", 0.01),
            ("a", 1.0),
            ("d", 1.0),
            ("o", 1.0),
            ("p", 1.0),
        ]);
        assert_eq!(m.viterbi("adoptée").0, vec!["adop", "t", "é", "e"]);
    }

    #[test]
    fn unknown_characters_become_singletons() {
        let m = model(&[("a", 1.0), ("b", 1.0)]);
        let (toks, score) = m.viterbi("azb");
        assert_eq!(toks, vec!["a", "z", "b"]);
        assert!(score.is_finite());
    }

    #[test]
    fn target_below_alphabet_rejected() {
        let counts = FrequencyTable::from_counts([("abc", 3)]).unwrap();
        assert!(matches!(
            train_unigram_model(&counts, &UnigramParams::new(2)),
            Err(SegmentError::InvalidParameter(_))
        ));
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(UnigramModel::new([("a", 0.5f64.ln())]).is_err());
        assert!(UnigramModel::new([("a", 0.1)]).is_err());
        assert!(UnigramModel::new([("a", f64::NAN)]).is_err());
    }

    #[test]
    fn pruning_reaches_target_and_keeps_characters() {
        let counts = FrequencyTable::from_counts([
            ("lower", 4),
            ("lowest", 3),
            ("newer", 5),
            ("newest", 6),
            ("wider", 2),
            ("widest", 3),
        ])
        .unwrap();
        let (m, trace) = train_unigram_model(&counts, &UnigramParams::new(20)).unwrap();
        assert!(m.len() <= 20);
        for ch in "lowerstnid".chars() {
            assert!(m.logprob(&ch.to_string()).is_some());
        }
        assert!(trace.rounds.len() > 1);
        let mass: f64 = m.entries().iter().map(|e| e.1.exp()).sum();
        assert!((mass - 1.0).abs() < 1e-6);
    }

    #[test]
    fn em_does_not_decrease_likelihood() {
        let counts = FrequencyTable::from_counts([("abab", 5), ("abba", 3), ("baab", 2), ("bbb", 1)]).unwrap();
        let (_, trace) = train_unigram_model(&counts, &UnigramParams::new(6)).unwrap();
        for round in &trace.rounds {
            for w in round.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "{round:?}");
            }
        }
    }
}
