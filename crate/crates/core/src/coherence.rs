//! UMass topic coherence: document-level co-occurrence counts over each
//! topic's top words, scored as sum of log((Num(w_i, w_j) + eps) / Num(w_j))
//! over pairs j < i, then averaged across topics.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::recovery::TopicModel;

/// Document-level presence counts restricted to a word set: `pair(i, j)`
/// is the number of documents containing both `i` and `j` at least once;
/// `word(i)` is the plain document frequency. `pair(i, i) == word(i)`.
#[derive(Debug, Clone)]
pub struct DocCooccurrenceCounts {
    pair_counts: HashMap<(usize, usize), u64>,
    word_counts: Vec<u64>,
}

impl DocCooccurrenceCounts {
    pub fn pair(&self, i: usize, j: usize) -> u64 {
        if i == j {
            return self.word(i);
        }
        let key = (i.min(j), i.max(j));
        self.pair_counts.get(&key).copied().unwrap_or(0)
    }

    pub fn word(&self, i: usize) -> u64 {
        self.word_counts.get(i).copied().unwrap_or(0)
    }
}

/// Exact presence-based counts for the given word set (token counts are
/// irrelevant: a word occurring five times in a document still counts
/// once).
pub fn count_cooccurrence(corpus: &Corpus, words: &BTreeSet<usize>) -> Result<DocCooccurrenceCounts> {
    let v = corpus.vocab_size();
    for &w in words {
        if w >= v {
            return Err(Error::WordOutOfRange { word: w, vocab: v });
        }
    }
    let mut word_counts = vec![0u64; v];
    let mut pair_counts: HashMap<(usize, usize), u64> = HashMap::new();
    for doc in corpus.docs() {
        let present: Vec<usize> = doc
            .iter()
            .map(|&(w, _)| w)
            .filter(|w| words.contains(w))
            .collect();
        for (a, &wa) in present.iter().enumerate() {
            word_counts[wa] += 1;
            for &wb in &present[a + 1..] {
                *pair_counts.entry((wa, wb)).or_insert(0) += 1;
            }
        }
    }
    Ok(DocCooccurrenceCounts {
        pair_counts,
        word_counts,
    })
}

/// Coherence settings: `h` top words per topic and the smoothing constant
/// added to pair counts so never-co-occurring pairs stay finite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoherenceParams {
    pub h: usize,
    pub epsilon: f64,
}

impl CoherenceParams {
    pub fn new(h: usize) -> Self {
        CoherenceParams { h, epsilon: 1e-8 }
    }

    fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::InvalidParameter("h must be >= 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Scores one topic's ordered top-word list:
/// `sum_{i=2..H} sum_{j<i} ln((Num(w_i, w_j) + eps) / Num(w_j))`,
/// natural log, where `w_1` is the highest-probability word.
pub fn topic_coherence(
    counts: &DocCooccurrenceCounts,
    top_words: &[usize],
    params: &CoherenceParams,
) -> Result<f64> {
    params.validate()?;
    for &w in top_words {
        if counts.word(w) == 0 {
            return Err(Error::ZeroDocFrequency { word: w });
        }
    }
    let mut score = 0.0;
    for i in 1..top_words.len() {
        for j in 0..i {
            let num = counts.pair(top_words[i], top_words[j]) as f64 + params.epsilon;
            let den = counts.word(top_words[j]) as f64;
            score += (num / den).ln();
        }
    }
    Ok(score)
}

/// The `h` words with the largest probability in the given topic column,
/// descending, ties broken toward the lower index.
pub fn top_words(model: &TopicModel, topic: usize, h: usize) -> Result<Vec<usize>> {
    let v = model.vocab_size();
    if topic >= model.num_topics() {
        return Err(Error::InvalidParameter(format!(
            "topic {topic} out of range for {} topics",
            model.num_topics()
        )));
    }
    if h > v {
        return Err(Error::InvalidParameter(format!(
            "h = {h} exceeds vocabulary size {v}"
        )));
    }
    let column = model.matrix().column(topic);
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by(|&a, &b| {
        column[b]
            .partial_cmp(&column[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    order.truncate(h);
    Ok(order)
}

/// Per-topic scores and their mean at a fixed `H`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub per_topic: Vec<f64>,
    pub average: f64,
    pub h: usize,
}

/// Scores every topic over its top-`H` words and averages. Counts are
/// taken on the corpus the model was trained on (the preprocessed one),
/// restricted to the union of all topics' top words.
pub fn average_coherence(
    model: &TopicModel,
    corpus: &Corpus,
    params: &CoherenceParams,
) -> Result<CoherenceReport> {
    params.validate()?;
    let k = model.num_topics();
    let mut tops = Vec::with_capacity(k);
    let mut union = BTreeSet::new();
    for topic in 0..k {
        let words = top_words(model, topic, params.h)?;
        union.extend(words.iter().copied());
        tops.push(words);
    }
    let counts = count_cooccurrence(corpus, &union)?;
    let per_topic: Vec<f64> = tops
        .iter()
        .map(|words| topic_coherence(&counts, words, params))
        .collect::<Result<_>>()?;
    let average = per_topic.iter().sum::<f64>() / k as f64;
    Ok(CoherenceReport {
        per_topic,
        average,
        h: params.h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anchors::{AnchorMethod, AnchorSet};
    use ndarray::{array, Array2};
    use std::sync::Arc;

    fn toy_corpus(docs: Vec<Vec<(usize, u32)>>, v: usize) -> Corpus {
        let vocab = (0..v).map(|i| format!("w{i}")).collect();
        Corpus::from_docs(docs, vocab).unwrap()
    }

    fn set(words: &[usize]) -> BTreeSet<usize> {
        words.iter().copied().collect()
    }

    fn model_from(a: Array2<f64>) -> TopicModel {
        let v = a.nrows();
        TopicModel::from_parts(
            a,
            AnchorSet {
                indices: vec![0],
                method: AnchorMethod::SoftClique,
                total_weight: None,
            },
            Arc::new((0..v).map(|i| format!("w{i}")).collect()),
        )
    }

    #[test]
    fn pair_counts_trivial_cases() {
        // words 0 and 1 never co-occur; 0 and 2 co-occur in every doc
        let c = toy_corpus(
            vec![
                vec![(0, 1), (2, 3)],
                vec![(1, 2), (3, 1)],
                vec![(0, 2), (2, 1)],
            ],
            4,
        );
        let counts = count_cooccurrence(&c, &set(&[0, 1, 2])).unwrap();
        assert_eq!(counts.pair(0, 1), 0);
        assert_eq!(counts.pair(0, 2), 2);
        assert_eq!(counts.pair(2, 0), 2);
        assert_eq!(counts.word(0), 2);
        assert_eq!(counts.pair(0, 0), 2);
    }

    #[test]
    fn pair_in_every_document() {
        let m = 7;
        let docs = (0..m).map(|_| vec![(0usize, 1u32), (1, 2)]).collect();
        let c = toy_corpus(docs, 2);
        let counts = count_cooccurrence(&c, &set(&[0, 1])).unwrap();
        assert_eq!(counts.pair(0, 1), m as u64);
    }

    #[test]
    fn counts_match_brute_force_double_loop() {
        let mut docs = Vec::new();
        for d in 0..10usize {
            let mut doc = Vec::new();
            for w in 0..5usize {
                if (d * 3 + w * w) % (w + 2) == 0 {
                    doc.push((w, 1u32 + (d % 2) as u32));
                }
            }
            if doc.is_empty() {
                doc.push((4, 1));
            }
            docs.push(doc);
        }
        let c = toy_corpus(docs.clone(), 5);
        let counts = count_cooccurrence(&c, &set(&[0, 1, 2, 3, 4])).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let brute = docs
                    .iter()
                    .filter(|doc| {
                        doc.iter().any(|&(w, _)| w == i) && doc.iter().any(|&(w, _)| w == j)
                    })
                    .count() as u64;
                assert_eq!(counts.pair(i, j), brute, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn restricted_counts_agree_with_full_counts() {
        let docs = vec![
            vec![(0, 1), (1, 1), (3, 2)],
            vec![(1, 1), (2, 1)],
            vec![(0, 2), (3, 1)],
        ];
        let c = toy_corpus(docs, 4);
        let full = count_cooccurrence(&c, &set(&[0, 1, 2, 3])).unwrap();
        let restricted = count_cooccurrence(&c, &set(&[0, 3])).unwrap();
        assert_eq!(full.pair(0, 3), restricted.pair(0, 3));
        assert_eq!(full.word(0), restricted.word(0));
    }

    #[test]
    fn single_word_topic_scores_zero() {
        let c = toy_corpus(vec![vec![(0, 1)]], 1);
        let counts = count_cooccurrence(&c, &set(&[0])).unwrap();
        let score = topic_coherence(&counts, &[0], &CoherenceParams::new(1)).unwrap();
        assert_eq!(score, 0.0);
    }

    #[test]
    fn two_word_hand_computation() {
        // Num(w0) = 2 (docs 0, 1), Num(w1) = 1, Num(w0, w1) = 1
        let c = toy_corpus(vec![vec![(0, 1), (1, 1)], vec![(0, 2)]], 2);
        let counts = count_cooccurrence(&c, &set(&[0, 1])).unwrap();
        let params = CoherenceParams::new(2);
        let score = topic_coherence(&counts, &[0, 1], &params).unwrap();
        let expect = ((1.0 + 1e-8) / 2.0f64).ln();
        assert!((score - expect).abs() < 1e-12);
        assert!((score - (-0.693147)).abs() < 1e-6);
    }

    #[test]
    fn three_word_hand_expansion() {
        // five documents over words {0, 1, 2}
        let docs = vec![
            vec![(0, 1), (1, 1)],
            vec![(0, 2), (1, 1), (2, 1)],
            vec![(0, 1)],
            vec![(1, 3)],
            vec![(2, 1), (1, 1)],
        ];
        let c = toy_corpus(docs, 3);
        let counts = count_cooccurrence(&c, &set(&[0, 1, 2])).unwrap();
        // Num(w0)=3, Num(w1)=4, Num(w2)=2, Num(w1,w0)=2, Num(w2,w0)=1, Num(w2,w1)=2
        let eps = 1e-8;
        let expect = ((2.0 + eps) / 3.0f64).ln() // (i=w1, j=w0)
            + ((1.0 + eps) / 3.0f64).ln() // (i=w2, j=w0)
            + ((2.0 + eps) / 4.0f64).ln(); // (i=w2, j=w1)
        let score = topic_coherence(&counts, &[0, 1, 2], &CoherenceParams::new(3)).unwrap();
        assert!((score - expect).abs() < 1e-9, "{score} vs {expect}");
    }

    #[test]
    fn zero_frequency_word_is_an_error() {
        let c = toy_corpus(vec![vec![(0, 1)]], 2);
        let counts = count_cooccurrence(&c, &set(&[0, 1])).unwrap();
        let err = topic_coherence(&counts, &[0, 1], &CoherenceParams::new(2)).unwrap_err();
        assert!(matches!(err, Error::ZeroDocFrequency { word: 1 }));
    }

    #[test]
    fn coherence_is_essentially_non_positive() {
        let docs = vec![
            vec![(0, 1), (1, 1), (2, 1)],
            vec![(0, 1), (2, 2)],
            vec![(1, 1), (2, 1)],
        ];
        let c = toy_corpus(docs, 3);
        let counts = count_cooccurrence(&c, &set(&[0, 1, 2])).unwrap();
        let params = CoherenceParams::new(3);
        let score = topic_coherence(&counts, &[2, 1, 0], &params).unwrap();
        let h = 3.0;
        let bound = h * (h - 1.0) / 2.0 * (1.0f64 + params.epsilon).ln();
        assert!(score <= bound + 1e-12);
    }

    #[test]
    fn top_words_indicator_column() {
        let mut a = Array2::<f64>::zeros((5, 1));
        a[(3, 0)] = 1.0;
        let model = model_from(a);
        assert_eq!(top_words(&model, 0, 1).unwrap(), vec![3]);
    }

    #[test]
    fn top_words_uniform_column_breaks_ties_by_index() {
        let a = Array2::<f64>::from_elem((4, 1), 0.25);
        let model = model_from(a);
        assert_eq!(top_words(&model, 0, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn top_words_matches_full_sort_oracle() {
        let mut a = Array2::<f64>::zeros((8, 1));
        let values = [0.11, 0.07, 0.22, 0.04, 0.22, 0.1, 0.2, 0.04];
        for (i, &v) in values.iter().enumerate() {
            a[(i, 0)] = v;
        }
        let model = model_from(a);
        let got = top_words(&model, 0, 5).unwrap();
        let mut oracle: Vec<usize> = (0..8).collect();
        oracle.sort_by(|&x, &y| values[y].partial_cmp(&values[x]).unwrap().then(x.cmp(&y)));
        assert_eq!(got, oracle[..5].to_vec());
    }

    #[test]
    fn average_of_single_topic_is_its_score() {
        let c = toy_corpus(vec![vec![(0, 1), (1, 1)], vec![(0, 1)]], 2);
        let a = array![[0.6], [0.4]];
        let model = model_from(a);
        let params = CoherenceParams::new(2);
        let report = average_coherence(&model, &c, &params).unwrap();
        let counts = count_cooccurrence(&c, &set(&[0, 1])).unwrap();
        let single = topic_coherence(&counts, &[0, 1], &params).unwrap();
        assert_eq!(report.per_topic.len(), 1);
        assert!((report.average - single).abs() < 1e-15);
    }

    #[test]
    fn average_is_mean_of_two_topics() {
        let c = toy_corpus(
            vec![vec![(0, 1), (1, 1)], vec![(2, 1), (3, 1)], vec![(0, 1), (3, 1)]],
            4,
        );
        let a = array![[0.7, 0.0], [0.3, 0.0], [0.0, 0.6], [0.0, 0.4]];
        let model = model_from(a);
        let params = CoherenceParams::new(2);
        let report = average_coherence(&model, &c, &params).unwrap();
        let counts = count_cooccurrence(&c, &set(&[0, 1, 2, 3])).unwrap();
        let s0 = topic_coherence(&counts, &[0, 1], &params).unwrap();
        let s1 = topic_coherence(&counts, &[2, 3], &params).unwrap();
        assert!((report.average - (s0 + s1) / 2.0).abs() < 1e-12);
        assert_eq!(report.h, 2);
    }

    #[test]
    fn end_to_end_hand_oracle() {
        // two topics over a five-document corpus, fully hand-expanded
        let docs = vec![
            vec![(0, 1), (1, 2)],
            vec![(0, 1), (1, 1), (2, 1)],
            vec![(2, 2), (3, 1)],
            vec![(3, 1)],
            vec![(0, 1), (3, 2)],
        ];
        let c = toy_corpus(docs, 4);
        let a = array![[0.5, 0.1], [0.3, 0.1], [0.1, 0.2], [0.1, 0.6]];
        let model = model_from(a);
        let params = CoherenceParams::new(2);
        let report = average_coherence(&model, &c, &params).unwrap();
        // topic 0 tops: [0, 1]; topic 1 tops: [3, 2]
        // Num(w0)=3, Num(w1,w0)=2; Num(w3)=3, Num(w2,w3)=1
        let eps = 1e-8;
        let t0 = ((2.0 + eps) / 3.0f64).ln();
        let t1 = ((1.0 + eps) / 3.0f64).ln();
        assert!((report.per_topic[0] - t0).abs() < 1e-9);
        assert!((report.per_topic[1] - t1).abs() < 1e-9);
        assert!((report.average - (t0 + t1) / 2.0).abs() < 1e-9);
    }
}
