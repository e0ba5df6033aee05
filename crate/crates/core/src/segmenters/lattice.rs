//! Best-path search over the segmentation lattice of a single word.

use std::cmp::Ordering;

/// Character-indexed view of a word.
pub(crate) struct CharIndex<'a> {
    word: &'a str,
    offsets: Vec<usize>,
}

impl<'a> CharIndex<'a> {
    pub(crate) fn new(word: &'a str) -> Self {
        let mut offsets: Vec<usize> = word.char_indices().map(|(i, _)| i).collect();
        offsets.push(word.len());
        CharIndex { word, offsets }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub(crate) fn slice(&self, start: usize, end: usize) -> &'a str {
        &self.word[self.offsets[start]..self.offsets[end]]
    }
}

#[derive(Clone)]
struct Node {
    score: f64,
    /// Piece scores in ascending order.
    terms: Vec<f64>,
    spans: Vec<(usize, usize)>,
}

/// Sums in ascending order so that paths using the same piece scores in a different
/// order tie exactly.
pub(crate) fn canonical_sum(sorted: &[f64]) -> f64 {
    sorted.iter().fold(0.0, |acc, x| acc + x)
}

/// Relative tolerance under which two path scores count as tied. Products of
/// probabilities that are equal in exact arithmetic differ by a few ulps in log space.
pub const SCORE_TIE_TOLERANCE: f64 = 1e-12;

pub(crate) fn score_cmp(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= SCORE_TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0) {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

fn compare_paths(idx: &CharIndex<'_>, a: &Node, b: &Node) -> Ordering {
    // Greater is better: higher score, then fewer tokens, then smaller token sequence.
    score_cmp(a.score, b.score)
        .then_with(|| b.spans.len().cmp(&a.spans.len()))
        .then_with(|| {
            let ta = a.spans.iter().map(|&(s, e)| idx.slice(s, e));
            let tb = b.spans.iter().map(|&(s, e)| idx.slice(s, e));
            tb.cmp(ta)
        })
}

/// Maximizes the summed piece score (see [`canonical_sum`] and [`score_cmp`]).
/// `score(piece, n_chars)` returns `None` for pieces absent from the lattice; single
/// characters must always score.
pub(crate) fn best_segmentation<F>(word: &str, max_len: usize, mut score: F) -> (Vec<String>, f64)
where
    F: FnMut(&str, usize) -> Option<f64>,
{
    let idx = CharIndex::new(word);
    let n = idx.len();
    let mut best: Vec<Option<Node>> = vec![None; n + 1];
    best[0] = Some(Node {
        score: 0.0,
        terms: Vec::new(),
        spans: Vec::new(),
    });
    for end in 1..=n {
        let lo = end.saturating_sub(max_len.max(1));
        let mut winner: Option<Node> = None;
        for start in lo..end {
            let Some(prev) = &best[start] else { continue };
            let Some(s) = score(idx.slice(start, end), end - start) else {
                continue;
            };
            let mut spans = prev.spans.clone();
            spans.push((start, end));
            let mut terms = prev.terms.clone();
            let at = terms.partition_point(|t| t.total_cmp(&s).is_lt());
            terms.insert(at, s);
            let cand = Node {
                score: canonical_sum(&terms),
                terms,
                spans,
            };
            let better = match &winner {
                None => true,
                Some(w) => compare_paths(&idx, &cand, w) == Ordering::Greater,
            };
            if better {
                winner = Some(cand);
            }
        }
        best[end] = winner;
    }
    let node = best[n].take().expect("single characters always score");
    let tokens = node.spans.iter().map(|&(s, e)| idx.slice(s, e).to_string()).collect();
    (tokens, node.score)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_fewer_tokens_on_equal_score() {
        // "ab" scores -2 whole; a+b scores -1 + -1.
        let (toks, score) = best_segmentation("ab", 2, |p, _| match p {
            "ab" => Some(-2.0),
            "a" | "b" => Some(-1.0),
            _ => None,
        });
        assert_eq!(toks, vec!["ab"]);
        assert_eq!(score, -2.0);
    }

    #[test]
    fn lexicographic_tie_break() {
        // a|bc vs ab|c, both two tokens with equal score
        let (toks, _) = best_segmentation("abc", 3, |p, n| match p {
            "ab" | "bc" => Some(-1.0),
            _ if n == 1 => Some(-1.0),
            _ => None,
        });
        assert_eq!(toks, vec!["a", "bc"]);
    }

    #[test]
    fn multibyte_characters() {
        let (toks, _) = best_segmentation("éa", 2, |_, n| if n == 1 { Some(-1.0) } else { None });
        assert_eq!(toks, vec!["é", "a"]);
    }
}
