use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use segbias_core::corpus::FrequencyTable;
use segbias_core::segmenters::unigram::train_unigram_model;
use segbias_core::segmenters::{UnigramModel, UnigramParams, SCORE_TIE_TOLERANCE};

/// 30 pieces over {a,b,c,d}. Several pieces share a weight so that distinct
/// segmentations reach bit-identical scores.
fn fixture() -> UnigramModel {
    let weighted: [(&str, f64); 30] = [
        ("a", 6.0), ("b", 5.0), ("c", 6.0), ("d", 4.0),
        ("ab", 3.0), ("bc", 3.0), ("cd", 2.0), ("da", 2.0), ("ba", 1.5), ("ac", 1.5),
        ("aa", 1.0), ("bb", 1.0), ("cc", 1.0), ("dd", 1.0), ("ad", 0.5), ("db", 0.5),
        ("abc", 2.0), ("bcd", 1.0), ("cda", 1.0), ("dab", 1.0), ("aab", 0.5), ("bca", 0.5),
        ("abcd", 1.0), ("bcda", 0.5), ("cdab", 0.5), ("dabc", 0.5),
        ("abca", 0.25), ("aaaa", 0.25), ("dcba", 0.25), ("abcab", 0.25),
    ];
    let total: f64 = weighted.iter().map(|(_, w)| w).sum();
    UnigramModel::new(weighted.iter().map(|(p, w)| (p.to_string(), (w / total).ln()))).unwrap()
}

/// Best split by exhaustive enumeration: highest score, then fewer tokens, then the
/// lexicographically smallest token sequence. Scores within the tie tolerance are equal.
fn enumerate_best(model: &UnigramModel, word: &str) -> (Vec<String>, f64) {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut best: Option<(Vec<String>, f64)> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut toks = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || mask & (1 << (i - 1)) != 0 {
                toks.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        let mut terms = Vec::new();
        let mut valid = true;
        for t in &toks {
            match model.logprob(t) {
                Some(lp) => terms.push(lp),
                None if t.chars().count() == 1 => terms.push(model.unknown_char_logprob()),
                None => valid = false,
            }
        }
        if !valid {
            continue;
        }
        // scores are defined as the ascending-order sum of the piece log-probabilities
        terms.sort_by(f64::total_cmp);
        let score: f64 = terms.iter().fold(0.0, |a, x| a + x);
        let better = match &best {
            None => true,
            Some((bt, bs)) => {
                let tied = (score - bs).abs() <= SCORE_TIE_TOLERANCE * score.abs().max(bs.abs()).max(1.0);
                (!tied && score > *bs) || (tied && (toks.len() < bt.len() || (toks.len() == bt.len() && toks < *bt)))
            }
        };
        if better {
            best = Some((toks, score));
        }
    }
    best.expect("single characters always segment")
}

fn all_words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for c in alphabet {
                let mut x = w.clone();
                x.push(*c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn viterbi_matches_enumeration_up_to_length_six() {
    let model = fixture();
    assert_eq!(model.len(), 30);
    for word in all_words(&['a', 'b', 'c', 'd'], 6) {
        let (toks, score) = model.viterbi(&word);
        let (otoks, oscore) = enumerate_best(&model, &word);
        assert!((score - oscore).abs() <= 1e-9, "{word}: {score} vs {oscore}");
        assert_eq!(toks, otoks, "{word}");
    }
}

#[test]
fn viterbi_matches_enumeration_on_long_and_unknown_words() {
    let model = fixture();
    let mut rng = StdRng::seed_from_u64(11);
    let alphabet = ['a', 'b', 'c', 'd', 'x'];
    for _ in 0..3000 {
        let len = rng.gen_range(7..=10);
        let word: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let (toks, score) = model.viterbi(&word);
        let (otoks, oscore) = enumerate_best(&model, &word);
        assert!((score - oscore).abs() <= 1e-9, "{word}: {score} vs {oscore}");
        assert_eq!(toks, otoks, "{word}");
    }
}

#[test]
fn equal_scores_prefer_lexicographic_order() {
    let model = fixture();
    // a+bc and ab+c score identically; "a" < "ab"
    let (toks, _) = model.viterbi("abcx");
    let (otoks, _) = enumerate_best(&model, "abcx");
    assert_eq!(toks, otoks);
}

#[test]
fn em_log_likelihood_never_decreases() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let mut counts = Vec::new();
        for _ in 0..rng.gen_range(20..60) {
            let len = rng.gen_range(2..9);
            let w: String = (0..len).map(|_| ['a', 'b', 'c', 'd', 'e'][rng.gen_range(0..5)]).collect();
            counts.push((w, rng.gen_range(1..30)));
        }
        let freq = FrequencyTable::from_counts(counts).unwrap();
        let params = UnigramParams::new(12);
        let (_, trace) = train_unigram_model(&freq, &params).unwrap();
        assert!(!trace.rounds.is_empty());
        for round in &trace.rounds {
            for w in round.windows(2) {
                assert!(w[1] >= w[0] - 1e-9, "{round:?}");
            }
        }
    }
}
