//! Byte-pair encoding over characters: merges learned from word types weighted by count.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};

use crate::corpus::FrequencyTable;

use super::SegmentError;

/// Ranked merge rules. Rank is the position in `merges`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeTable {
    merges: Vec<(String, String)>,
    ranks: HashMap<String, HashMap<String, usize>>,
}

impl MergeTable {
    /// Builds a table, checking that pairs are unique and every piece is a single
    /// character or the output of an earlier merge.
    pub fn new(merges: Vec<(String, String)>) -> Result<Self, SegmentError> {
        let mut derivable: HashSet<String> = HashSet::new();
        let mut ranks: HashMap<String, HashMap<String, usize>> = HashMap::new();
        for (rank, (left, right)) in merges.iter().enumerate() {
            for piece in [left, right] {
                if piece.is_empty() || (piece.chars().count() > 1 && !derivable.contains(piece)) {
                    return Err(SegmentError::InvalidModel(format!(
                        "merge {rank} uses underivable piece {piece:?}"
                    )));
                }
            }
            let slot = ranks.entry(left.clone()).or_default();
            if slot.insert(right.clone(), rank).is_some() {
                return Err(SegmentError::InvalidModel(format!(
                    "duplicate merge ({left:?}, {right:?})"
                )));
            }
            derivable.insert(format!("{left}{right}"));
        }
        Ok(MergeTable { merges, ranks })
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    pub fn len(&self) -> usize {
        self.merges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.merges.is_empty()
    }

    /// First `k` merges.
    pub fn truncated(&self, k: usize) -> MergeTable {
        MergeTable::new(self.merges[..k.min(self.merges.len())].to_vec()).expect("prefix of a valid table")
    }

    fn rank(&self, left: &str, right: &str) -> Option<usize> {
        self.ranks.get(left)?.get(right).copied()
    }

    /// Distinct pieces produced by merges.
    pub fn merged_pieces(&self) -> BTreeSet<String> {
        self.merges.iter().map(|(l, r)| format!("{l}{r}")).collect()
    }

    /// Applies merges in rank order, each as one left-to-right pass.
    pub fn apply(&self, word: &str) -> Vec<String> {
        let mut tokens: Vec<String> = word.chars().map(String::from).collect();
        let mut floor: Option<usize> = None;
        loop {
            // Lowest-ranked applicable merge above the last applied rank: merges in
            // between had no occurrence when their pass came up.
            let next = tokens
                .windows(2)
                .filter_map(|w| self.rank(&w[0], &w[1]))
                .filter(|&r| floor.is_none_or(|f| r > f))
                .min();
            let Some(rank) = next else { break };
            let (left, right) = &self.merges[rank];
            tokens = apply_merge(&tokens, left, right);
            floor = Some(rank);
        }
        tokens
    }
}

/// One pass of a single merge: non-overlapping occurrences, left to right.
pub fn apply_merge(tokens: &[String], left: &str, right: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() && tokens[i] == left && tokens[i + 1] == right {
            out.push(format!("{left}{right}"));
            i += 2;
        } else {
            out.push(tokens[i].clone());
            i += 1;
        }
    }
    out
}

#[derive(PartialEq, Eq)]
struct Candidate {
    count: u64,
    left: String,
    right: String,
    ids: (u32, u32),
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.right.cmp(&self.right))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Symbols {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Symbols {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(s.to_string());
        self.ids.insert(s.to_string(), id);
        id
    }
}

fn pair_occurrences(seq: &[u32]) -> HashMap<(u32, u32), u64> {
    let mut m = HashMap::new();
    for w in seq.windows(2) {
        *m.entry((w[0], w[1])).or_insert(0) += 1;
    }
    m
}

/// Learns up to `num_merges` merges. Training stops early once no pair occurs twice.
pub fn train_merges(counts: &FrequencyTable, num_merges: usize) -> Result<MergeTable, SegmentError> {
    if num_merges == 0 {
        return Err(SegmentError::InvalidParameter("num_merges must be at least 1".into()));
    }
    if counts.is_empty() {
        return Err(SegmentError::EmptyCorpus);
    }
    let mut symbols = Symbols {
        names: Vec::new(),
        ids: HashMap::new(),
    };
    let mut words: Vec<(Vec<u32>, u64)> = counts
        .iter()
        .map(|(w, c)| {
            let mut buf = [0u8; 4];
            let seq = w.chars().map(|ch| symbols.intern(ch.encode_utf8(&mut buf))).collect();
            (seq, c)
        })
        .collect();

    let mut pair_counts: HashMap<(u32, u32), u64> = HashMap::new();
    let mut locations: HashMap<(u32, u32), HashSet<usize>> = HashMap::new();
    for (idx, (seq, c)) in words.iter().enumerate() {
        for (pair, occ) in pair_occurrences(seq) {
            *pair_counts.entry(pair).or_insert(0) += occ * c;
            locations.entry(pair).or_default().insert(idx);
        }
    }
    let candidate = |symbols: &Symbols, pair: (u32, u32), count: u64| Candidate {
        count,
        left: symbols.names[pair.0 as usize].clone(),
        right: symbols.names[pair.1 as usize].clone(),
        ids: pair,
    };
    let mut heap: BinaryHeap<Candidate> = pair_counts
        .iter()
        .map(|(&pair, &count)| candidate(&symbols, pair, count))
        .collect();

    let mut merges: Vec<(String, String)> = Vec::new();
    let mut learned: HashSet<(u32, u32)> = HashSet::new();
    while merges.len() < num_merges {
        let Some(top) = heap.pop() else { break };
        let current = pair_counts.get(&top.ids).copied().unwrap_or(0);
        if current != top.count || learned.contains(&top.ids) {
            continue;
        }
        if current < 2 {
            break;
        }
        let (a, b) = top.ids;
        let merged = symbols.intern(&format!("{}{}", top.left, top.right));
        merges.push((top.left, top.right));
        learned.insert(top.ids);

        let mut affected: Vec<usize> = locations.remove(&top.ids).unwrap_or_default().into_iter().collect();
        affected.sort_unstable();
        let mut touched: HashSet<(u32, u32)> = HashSet::new();
        for idx in affected {
            let (seq, c) = &mut words[idx];
            let before = pair_occurrences(seq);
            let mut next = Vec::with_capacity(seq.len());
            let mut i = 0;
            while i < seq.len() {
                if i + 1 < seq.len() && seq[i] == a && seq[i + 1] == b {
                    next.push(merged);
                    i += 2;
                } else {
                    next.push(seq[i]);
                    i += 1;
                }
            }
            if next.len() == seq.len() {
                continue;
            }
            let after = pair_occurrences(&next);
            *seq = next;
            for (pair, occ) in &before {
                let entry = pair_counts.get_mut(pair).expect("counted pair");
                *entry -= occ * *c;
                touched.insert(*pair);
            }
            for (pair, occ) in &after {
                *pair_counts.entry(*pair).or_insert(0) += occ * *c;
                locations.entry(*pair).or_default().insert(idx);
                touched.insert(*pair);
            }
        }
        pair_counts.remove(&top.ids);
        let mut touched: Vec<_> = touched.into_iter().collect();
        touched.sort_unstable();
        for pair in touched {
            match pair_counts.get(&pair).copied() {
                Some(0) => {
                    pair_counts.remove(&pair);
                }
                Some(count) => heap.push(candidate(&symbols, pair, count)),
                None => {}
            }
        }
    }
    MergeTable::new(merges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(counts: &[(&str, u64)]) -> FrequencyTable {
        FrequencyTable::from_counts(counts.iter().copied()).unwrap()
    }

    #[test]
    fn first_merge_is_es() {
        let t = table(&[("low", 5), ("lower", 2), ("newest", 6), ("widest", 3)]);
        let m = train_merges(&t, 1).unwrap();
        assert_eq!(m.merges(), &[("e".to_string(), "s".to_string())]);
    }

    #[test]
    fn zero_merges_rejected() {
        let t = table(&[("low", 5)]);
        assert!(matches!(train_merges(&t, 0), Err(SegmentError::InvalidParameter(_))));
    }

    #[test]
    fn exhausts_after_single_merge() {
        let t = table(&[("aa", 3)]);
        let m = train_merges(&t, 5).unwrap();
        assert_eq!(m.merges(), &[("a".to_string(), "a".to_string())]);
    }

    #[test]
    fn singleton_pairs_do_not_merge() {
        let t = table(&[("ab", 1)]);
        assert!(train_merges(&t, 5).unwrap().is_empty());
    }

    #[test]
    fn overlapping_runs_merge_left_to_right() {
        let m = MergeTable::new(vec![("a".into(), "a".into())]).unwrap();
        assert_eq!(m.apply("aaa"), vec!["aa", "a"]);
        assert_eq!(m.apply("aaaa"), vec!["aa", "aa"]);
    }

    #[test]
    fn chiesta_fixture() {
        let pairs = [("c", "h"), ("ch", "i"), ("chi", "e"), ("s", "t"), ("st", "a"), ("chie", "st"), ("chiest", "o")];
        let m = MergeTable::new(pairs.iter().map(|(l, r)| (l.to_string(), r.to_string())).collect()).unwrap();
        assert_eq!(m.apply("chiesta"), vec!["chie", "sta"]);
        assert_eq!(m.apply("chiesto"), vec!["chiesto"]);
    }

    #[test]
    fn rejects_underivable_and_duplicate_merges() {
        assert!(MergeTable::new(vec![("ab".into(), "c".into())]).is_err());
        assert!(MergeTable::new(vec![("a".into(), "b".into()), ("a".into(), "b".into())]).is_err());
    }

    #[test]
    fn rank_beats_position() {
        let m = MergeTable::new(vec![("b".into(), "c".into()), ("a".into(), "b".into())]).unwrap();
        assert_eq!(m.apply("abc"), vec!["a", "bc"]);
    }
}
