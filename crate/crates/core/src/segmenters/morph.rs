//! Morfessor-style lexicon induction under a two-part MDL cost, with an optional hard
//! cap on lexicon size (the LMVR variant).
//!
//! Cost in bits, with `N` morph tokens and `K` lexicon entries:
//!
//! ```text
//! corpus  = -sum_m count(m) * log2(count(m) / N)
//! lexicon =  sum_m (sum_{c in m} -log2 p(c)) - K * log2 p(end)
//! ```
//!
//! where `p` is the character distribution over lexicon strings with one end marker per
//! morph. Both parts reduce to sums of `x log2 x` terms, which are maintained
//! incrementally during training.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::FrequencyTable;

use super::lattice::best_segmentation;
use super::SegmentError;

/// Trained morph lexicon with stored analyses of the training word types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphLexicon {
    morphs: BTreeMap<String, u64>,
    analyses: BTreeMap<String, Vec<String>>,
    cap: Option<usize>,
    total: u64,
    max_len: usize,
}

impl MorphLexicon {
    /// Checks that every morph is used by an analysis, analyses concatenate back to
    /// their word, counts are positive and the cap (if any) holds.
    pub fn new(
        morphs: BTreeMap<String, u64>,
        analyses: BTreeMap<String, Vec<String>>,
        cap: Option<usize>,
    ) -> Result<Self, SegmentError> {
        let invalid = |msg: String| Err(SegmentError::InvalidModel(msg));
        let mut used = BTreeSet::new();
        for (word, parts) in &analyses {
            if parts.is_empty() || parts.concat() != *word {
                return invalid(format!("analysis of {word:?} does not reproduce the word"));
            }
            for m in parts {
                if !morphs.contains_key(m) {
                    return invalid(format!("analysis of {word:?} uses unknown morph {m:?}"));
                }
                used.insert(m.as_str());
            }
        }
        for (m, &c) in &morphs {
            if c == 0 {
                return invalid(format!("morph {m:?} has zero count"));
            }
            if !used.contains(m.as_str()) {
                return invalid(format!("morph {m:?} appears in no analysis"));
            }
        }
        if let Some(cap) = cap {
            if morphs.len() > cap {
                return invalid(format!("{} morphs exceed the cap of {cap}", morphs.len()));
            }
        }
        Ok(Self::assemble(morphs, analyses, cap))
    }

    fn assemble(morphs: BTreeMap<String, u64>, analyses: BTreeMap<String, Vec<String>>, cap: Option<usize>) -> Self {
        let total = morphs.values().sum();
        let max_len = morphs.keys().map(|m| m.chars().count()).max().unwrap_or(1);
        MorphLexicon {
            morphs,
            analyses,
            cap,
            total,
            max_len,
        }
    }

    pub fn morphs(&self) -> &BTreeMap<String, u64> {
        &self.morphs
    }

    pub fn analyses(&self) -> &BTreeMap<String, Vec<String>> {
        &self.analyses
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.morphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphs.is_empty()
    }

    /// Morphs by descending count, then lexicographically.
    pub fn entries(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.morphs.iter().map(|(m, &c)| (m.as_str(), c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }

    /// Total MDL cost of the lexicon and its analyses, in bits.
    pub fn cost(&self) -> f64 {
        mdl_cost(&self.morphs)
    }

    /// Stored analysis for training words; otherwise the cheapest path through the
    /// lexicon, with unseen characters costed as half a token.
    pub fn segment(&self, word: &str) -> Vec<String> {
        if let Some(parts) = self.analyses.get(word) {
            return parts.clone();
        }
        let n = self.total.max(1) as f64;
        let unk = (0.5 / n).log2();
        best_segmentation(word, self.max_len, |p, chars| match self.morphs.get(p) {
            Some(&c) => Some((c as f64 / n).log2()),
            None if chars == 1 => Some(unk),
            None => None,
        })
        .0
    }
}

fn xlogx(x: u64) -> f64 {
    if x == 0 {
        0.0
    } else {
        let x = x as f64;
        x * x.log2()
    }
}

/// MDL cost of a morph-count table, recomputed from scratch.
pub fn mdl_cost(morphs: &BTreeMap<String, u64>) -> f64 {
    let mut chars: BTreeMap<char, u64> = BTreeMap::new();
    for m in morphs.keys() {
        for c in m.chars() {
            *chars.entry(c).or_insert(0) += 1;
        }
    }
    let n: u64 = morphs.values().sum();
    let k = morphs.len() as u64;
    let t = chars.values().sum::<u64>() + k;
    let corpus = xlogx(n) - morphs.values().map(|&c| xlogx(c)).sum::<f64>();
    let lexicon = xlogx(t) - chars.values().map(|&c| xlogx(c)).sum::<f64>() - xlogx(k);
    corpus + lexicon
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorfessorParams {
    pub max_epochs: usize,
    /// Stop once the relative cost change of an epoch falls below this.
    pub convergence_eps: f64,
}

impl Default for MorfessorParams {
    fn default() -> Self {
        MorfessorParams {
            max_epochs: 10,
            convergence_eps: 1e-4,
        }
    }
}

/// Cost before training followed by the cost after every epoch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MorfessorTrace {
    pub costs: Vec<f64>,
    pub max_lexicon_size: usize,
}

/// Incrementally maintained cost terms.
struct CostState {
    counts: BTreeMap<String, u64>,
    chars: BTreeMap<char, u64>,
    tokens: u64,
    lex_chars: u64,
    sum_count_log: f64,
    sum_char_log: f64,
}

impl CostState {
    fn new() -> Self {
        CostState {
            counts: BTreeMap::new(),
            chars: BTreeMap::new(),
            tokens: 0,
            lex_chars: 0,
            sum_count_log: 0.0,
            sum_char_log: 0.0,
        }
    }

    fn lexicon_size(&self) -> usize {
        self.counts.len()
    }

    fn bump_chars(&mut self, morph: &str, entering: bool) {
        for c in morph.chars() {
            let slot = self.chars.entry(c).or_insert(0);
            self.sum_char_log -= xlogx(*slot);
            if entering {
                *slot += 1;
                self.lex_chars += 1;
            } else {
                *slot -= 1;
                self.lex_chars -= 1;
            }
            self.sum_char_log += xlogx(*slot);
            if *slot == 0 {
                self.chars.remove(&c);
            }
        }
    }

    fn add(&mut self, morph: &str, count: u64) {
        let slot = self.counts.entry(morph.to_string()).or_insert(0);
        let old = *slot;
        *slot += count;
        let new = *slot;
        self.sum_count_log += xlogx(new) - xlogx(old);
        self.tokens += count;
        if old == 0 {
            self.bump_chars(morph, true);
        }
    }

    fn remove(&mut self, morph: &str, count: u64) {
        let slot = self.counts.get_mut(morph).expect("removing a present morph");
        let old = *slot;
        *slot -= count;
        let new = *slot;
        self.sum_count_log += xlogx(new) - xlogx(old);
        self.tokens -= count;
        if new == 0 {
            self.counts.remove(morph);
            self.bump_chars(morph, false);
        }
    }

    fn cost(&self) -> f64 {
        let k = self.counts.len() as u64;
        let corpus = xlogx(self.tokens) - self.sum_count_log;
        let lexicon = xlogx(self.lex_chars + k) - self.sum_char_log - xlogx(k);
        corpus + lexicon
    }

    /// Recomputes the float sums from the integer counts.
    fn resync(&mut self) {
        self.sum_count_log = self.counts.values().map(|&c| xlogx(c)).sum();
        self.sum_char_log = self.chars.values().map(|&c| xlogx(c)).sum();
    }
}

struct Trainer {
    state: CostState,
    cap: Option<usize>,
    max_lexicon: usize,
}

impl Trainer {
    fn admissible(&self) -> bool {
        self.cap.is_none_or(|cap| self.state.lexicon_size() <= cap)
    }

    fn note_size(&mut self) {
        self.max_lexicon = self.max_lexicon.max(self.state.lexicon_size());
    }

    /// Re-analyzes `segment` (currently absent from the state) by recursive binary
    /// splitting. Returns `None` when no admissible option exists.
    fn resegment(&mut self, segment: &str, count: u64) -> Option<Vec<String>> {
        let mut best: Option<(f64, Option<usize>)> = None;

        self.state.add(segment, count);
        if self.admissible() {
            best = Some((self.state.cost(), None));
        }
        self.state.remove(segment, count);

        let cuts: Vec<usize> = segment.char_indices().skip(1).map(|(i, _)| i).collect();
        for &cut in &cuts {
            let (left, right) = segment.split_at(cut);
            self.state.add(left, count);
            self.state.add(right, count);
            if self.admissible() {
                let cost = self.state.cost();
                if best.is_none_or(|(b, _)| cost < b) {
                    best = Some((cost, Some(cut)));
                }
            }
            self.state.remove(right, count);
            self.state.remove(left, count);
        }

        match best? {
            (_, None) => {
                self.state.add(segment, count);
                self.note_size();
                Some(vec![segment.to_string()])
            }
            (_, Some(cut)) => {
                let (left, right) = segment.split_at(cut);
                self.state.add(left, count);
                self.state.add(right, count);
                self.note_size();
                self.state.remove(left, count);
                let mut parts = self.resegment(left, count).expect("unsplit half stays admissible");
                self.state.remove(right, count);
                parts.extend(self.resegment(right, count).expect("unsplit half stays admissible"));
                Some(parts)
            }
        }
    }
}

/// Acceptance margin for a re-analysis, in bits; smaller gains are treated as ties.
const MIN_GAIN: f64 = 1e-9;

fn initial_analyses(order: &[(&str, u64)], cap: Option<usize>) -> Vec<Vec<String>> {
    let whole = |w: &str| vec![w.to_string()];
    let chars = |w: &str| w.chars().map(String::from).collect::<Vec<_>>();
    match cap {
        Some(cap) if order.len() > cap => {
            // Keep frequent words whole while the lexicon, with every character
            // reserved, stays within the cap; spell out the rest.
            let mut lexicon: BTreeSet<String> = order.iter().flat_map(|(w, _)| chars(w)).collect();
            order
                .iter()
                .map(|(w, _)| {
                    if lexicon.contains(*w) {
                        whole(w)
                    } else if lexicon.len() < cap {
                        lexicon.insert(w.to_string());
                        whole(w)
                    } else {
                        chars(w)
                    }
                })
                .collect()
        }
        _ => order.iter().map(|(w, _)| whole(w)).collect(),
    }
}

/// Trains a morph lexicon. With `cap = None` this is plain Morfessor-style training;
/// with `Some(cap)` every accepted state keeps at most `cap` morphs.
pub fn train_morph_lexicon(
    counts: &FrequencyTable,
    params: &MorfessorParams,
    cap: Option<usize>,
) -> Result<(MorphLexicon, MorfessorTrace), SegmentError> {
    if counts.is_empty() {
        return Err(SegmentError::EmptyCorpus);
    }
    if params.max_epochs == 0 {
        return Err(SegmentError::InvalidParameter("max_epochs must be at least 1".into()));
    }
    if params.convergence_eps.is_nan() || params.convergence_eps < 0.0 {
        return Err(SegmentError::InvalidParameter("convergence_eps must be non-negative".into()));
    }
    let alphabet: BTreeSet<char> = counts.iter().flat_map(|(w, _)| w.chars()).collect();
    if let Some(cap) = cap {
        if cap < alphabet.len() {
            return Err(SegmentError::InvalidParameter(format!(
                "cap {cap} is smaller than the alphabet ({} characters)",
                alphabet.len()
            )));
        }
    }

    let order = counts.by_frequency();
    let mut analyses = initial_analyses(&order, cap);
    let mut trainer = Trainer {
        state: CostState::new(),
        cap,
        max_lexicon: 0,
    };
    for ((_, c), parts) in order.iter().zip(&analyses) {
        for m in parts {
            trainer.state.add(m, *c);
        }
    }
    trainer.state.resync();
    trainer.note_size();

    let mut trace = MorfessorTrace {
        costs: vec![mdl_cost(&trainer.state.counts)],
        max_lexicon_size: 0,
    };
    for _ in 0..params.max_epochs {
        for (i, &(word, c)) in order.iter().enumerate() {
            let before = trainer.state.cost();
            let old = std::mem::take(&mut analyses[i]);
            for m in &old {
                trainer.state.remove(m, c);
            }
            let restore = |t: &mut Trainer, new: &[String]| {
                for m in new {
                    t.state.remove(m, c);
                }
                for m in &old {
                    t.state.add(m, c);
                }
            };
            match trainer.resegment(word, c) {
                Some(new) if trainer.state.cost() < before - MIN_GAIN => analyses[i] = new,
                Some(new) => {
                    restore(&mut trainer, &new);
                    analyses[i] = old;
                }
                None => {
                    restore(&mut trainer, &[]);
                    analyses[i] = old;
                }
            }
        }
        trainer.state.resync();
        let prev = *trace.costs.last().expect("initial cost");
        let cost = mdl_cost(&trainer.state.counts);
        trace.costs.push(cost);
        if prev == 0.0 || (prev - cost) / prev < params.convergence_eps {
            break;
        }
    }
    trace.max_lexicon_size = trainer.max_lexicon;

    let analyses: BTreeMap<String, Vec<String>> = order
        .iter()
        .zip(analyses)
        .map(|((w, _), parts)| (w.to_string(), parts))
        .collect();
    let lexicon = MorphLexicon::new(trainer.state.counts, analyses, cap)?;
    Ok((lexicon, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_cost_matches_recomputation() {
        let mut s = CostState::new();
        for (m, c) in [("abc", 4), ("ab", 2), ("c", 7), ("abc", 1)] {
            s.add(m, c);
        }
        s.remove("ab", 2);
        assert!((s.cost() - mdl_cost(&s.counts)).abs() < 1e-9);
    }

    #[test]
    fn repeated_halves_are_split() {
        let counts = FrequencyTable::from_counts([("abcabc", 50)]).unwrap();
        let (lex, _) = train_morph_lexicon(&counts, &MorfessorParams::default(), None).unwrap();
        assert_eq!(lex.analyses()["abcabc"], vec!["abc", "abc"]);
    }

    #[test]
    fn cap_below_alphabet_rejected() {
        let counts = FrequencyTable::from_counts([("abc", 5)]).unwrap();
        assert!(train_morph_lexicon(&counts, &MorfessorParams::default(), Some(2)).is_err());
    }

    #[test]
    fn cap_forces_character_fallback() {
        let counts = FrequencyTable::from_counts([("abc", 5), ("bca", 4), ("cab", 3), ("aaa", 2)]).unwrap();
        let (lex, trace) = train_morph_lexicon(&counts, &MorfessorParams::default(), Some(3)).unwrap();
        assert!(lex.len() <= 3);
        assert!(trace.max_lexicon_size <= 3);
        for (w, parts) in lex.analyses() {
            assert_eq!(&parts.concat(), w);
        }
    }

    #[test]
    fn unknown_words_use_lexicon() {
        let counts = FrequencyTable::from_counts([("abcabc", 50), ("xy", 3)]).unwrap();
        let (lex, _) = train_morph_lexicon(&counts, &MorfessorParams::default(), None).unwrap();
        let seg = lex.segment("abcqabc");
        assert_eq!(seg.concat(), "abcqabc");
        assert!(seg.contains(&"q".to_string()));
    }

    #[test]
    fn invariants_checked_on_construction() {
        let morphs: BTreeMap<String, u64> = [("ab".to_string(), 1)].into();
        let bad: BTreeMap<String, Vec<String>> = [("abc".to_string(), vec!["ab".to_string()])].into();
        assert!(MorphLexicon::new(morphs.clone(), bad, None).is_err());
        let unused: BTreeMap<String, u64> = [("ab".to_string(), 1), ("zz".to_string(), 1)].into();
        let good: BTreeMap<String, Vec<String>> = [("ab".to_string(), vec!["ab".to_string()])].into();
        assert!(MorphLexicon::new(unused, good.clone(), None).is_err());
        assert!(MorphLexicon::new(morphs, good, Some(0)).is_err());
    }
}
