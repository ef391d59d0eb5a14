//! Word co-occurrence statistics: the second-order moment matrix `Q`, its
//! max-normalized similarity-graph form, its row-normalized conditional
//! form, and exactly separable synthetic instances for testing.

use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Dense symmetric `V x V` matrix of joint word co-occurrence
/// probabilities, with cached row sums `Q * 1`.
#[derive(Debug, Clone)]
pub struct CooccurrenceMatrix {
    q: Array2<f64>,
    row_sums: Vec<f64>,
}

impl CooccurrenceMatrix {
    /// Wraps an existing matrix, computing row sums. The caller is
    /// responsible for symmetry and non-negativity.
    pub fn from_matrix(q: Array2<f64>) -> Self {
        let row_sums = q.rows().into_iter().map(|r| r.sum()).collect();
        CooccurrenceMatrix { q, row_sums }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.q
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn vocab_size(&self) -> usize {
        self.q.nrows()
    }

    pub fn total_mass(&self) -> f64 {
        self.row_sums.iter().sum()
    }
}

/// Estimates `Q` from a corpus with the unbiased per-document second-moment
/// estimator
///
/// `Q = (1/M') * sum_d (w_d w_d^T - diag(w_d)) / (n_d (n_d - 1))`
///
/// summed over the `M'` documents with at least two tokens. Entry `(i, j)`
/// is the probability that an ordered pair of distinct token positions
/// drawn from a random document carries words `i` and `j`; the total mass
/// is 1.
///
/// Accumulation is sharded by row range: each shard scans documents in
/// corpus order, so every entry is summed in the same order regardless of
/// thread count and the result is bit-identical across worker counts.
pub fn build_q(corpus: &Corpus) -> Result<CooccurrenceMatrix> {
    let v = corpus.vocab_size();
    let eligible: Vec<(&[(usize, u32)], u64)> = corpus
        .docs()
        .iter()
        .zip(corpus.doc_tokens())
        .filter(|&(_, &n)| n >= 2)
        .map(|(doc, &n)| (doc.as_slice(), n))
        .collect();
    if eligible.is_empty() {
        return Err(Error::DegenerateCorpus);
    }
    let m = eligible.len() as f64;
    let scales: Vec<f64> = eligible
        .iter()
        .map(|&(_, n)| 1.0 / (n as f64 * (n - 1) as f64 * m))
        .collect();

    let mut q = Array2::<f64>::zeros((v, v));
    let shard_rows = 256usize.max(v / 64).min(v.max(1));
    q.axis_chunks_iter_mut(Axis(0), shard_rows)
        .into_iter()
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .for_each(|(shard, mut block)| {
            let lo = shard * shard_rows;
            let hi = lo + block.nrows();
            for (&(doc, _), &scale) in eligible.iter().zip(&scales) {
                for &(i, ci) in doc {
                    if i < lo || i >= hi {
                        continue;
                    }
                    let ci = f64::from(ci);
                    let mut row = block.row_mut(i - lo);
                    for &(j, cj) in doc {
                        let cj = f64::from(cj);
                        let pairs = if i == j { ci * (ci - 1.0) } else { ci * cj };
                        row[j] += pairs * scale;
                    }
                }
            }
        });

    Ok(CooccurrenceMatrix::from_matrix(q))
}

/// Undirected word similarity graph: `Q` rescaled so its largest entry is
/// exactly 1. Edge weights live on the off-diagonal; the diagonal is kept
/// as rescaled but carries no edge (clique weights never read it).
#[derive(Debug, Clone)]
pub struct SimilarityGraph {
    weights: Array2<f64>,
}

impl SimilarityGraph {
    /// Wraps a symmetric non-negative weight matrix directly, without
    /// rescaling. Used for hand-constructed graphs in tests and examples.
    pub fn from_weights(weights: Array2<f64>) -> Result<Self> {
        if weights.nrows() != weights.ncols() {
            return Err(Error::InvalidParameter("weight matrix must be square".into()));
        }
        Ok(SimilarityGraph { weights })
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    pub fn num_nodes(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.weights[(a, b)]
    }
}

/// Rescales `Q` by its maximum entry so weights land in `[0, 1]`.
pub fn to_similarity_graph(q: &CooccurrenceMatrix) -> Result<SimilarityGraph> {
    let max = q.matrix().iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(SimilarityGraph {
        weights: q.matrix() / max,
    })
}

/// Row-normalized `Q`: row `i` is the conditional distribution over words
/// co-occurring with word `i`.
#[derive(Debug, Clone)]
pub struct RowNormalizedQ {
    rows: Array2<f64>,
}

impl RowNormalizedQ {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.rows
    }

    pub fn vocab_size(&self) -> usize {
        self.rows.nrows()
    }
}

/// Divides every row of `Q` by its sum. A zero-sum row is reported with
/// the offending word index; such words must be filtered in preprocessing.
pub fn row_normalize(q: &CooccurrenceMatrix) -> Result<RowNormalizedQ> {
    for (i, &s) in q.row_sums().iter().enumerate() {
        if s <= 0.0 {
            return Err(Error::ZeroRowSum { word: i });
        }
    }
    let mut rows = q.matrix().clone();
    for (mut row, &s) in rows.rows_mut().into_iter().zip(q.row_sums()) {
        row.mapv_inplace(|x| x / s);
    }
    Ok(RowNormalizedQ { rows })
}

/// Ground truth for an exactly separable instance: a column-stochastic
/// word-topic matrix whose first `K` rows are the anchors (one non-zero
/// each, on their own topic) and a symmetric positive-semidefinite
/// topic-topic matrix with total mass 1.
#[derive(Debug, Clone)]
pub struct SyntheticModel {
    a_true: Array2<f64>,
    r: Array2<f64>,
}

impl SyntheticModel {
    pub fn new(a_true: Array2<f64>, r: Array2<f64>) -> Result<Self> {
        let k = a_true.ncols();
        if r.nrows() != k || r.ncols() != k {
            return Err(Error::InvalidParameter(
                "topic-topic matrix must be K x K".into(),
            ));
        }
        for col in a_true.columns() {
            let s: f64 = col.sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(
                    "word-topic columns must sum to 1".into(),
                ));
            }
        }
        for row in 0..k {
            let nonzero = a_true.row(row).iter().filter(|&&x| x != 0.0).count();
            if nonzero != 1 || a_true[(row, row)] == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "row {row} must be an anchor for topic {row}"
                )));
            }
        }
        Ok(SyntheticModel { a_true, r })
    }

    pub fn word_topic(&self) -> &Array2<f64> {
        &self.a_true
    }

    pub fn topic_topic(&self) -> &Array2<f64> {
        &self.r
    }

    pub fn num_topics(&self) -> usize {
        self.r.nrows()
    }

    /// The anchor word of each topic; by construction topic `k` is anchored
    /// by word `k`.
    pub fn true_anchors(&self) -> Vec<usize> {
        (0..self.num_topics()).collect()
    }

    /// The exact noiseless co-occurrence matrix `Q = A R A^T`.
    pub fn cooccurrence(&self) -> CooccurrenceMatrix {
        let q = self.a_true.dot(&self.r).dot(&self.a_true.t());
        CooccurrenceMatrix::from_matrix(q)
    }
}

/// Builds a random exactly separable instance with `v` words and `k`
/// topics: anchors occupy word indices `0..k`.
pub fn generate_synthetic(v: usize, k: usize, seed: u64) -> Result<(SyntheticModel, CooccurrenceMatrix)> {
    if k > v {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds vocabulary size v = {v}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut a = Array2::<f64>::zeros((v, k));
    for t in 0..k {
        a[(t, t)] = rng.gen_range(0.5..1.5);
    }
    for w in k..v {
        for t in 0..k {
            a[(w, t)] = rng.gen_range(0.0..1.0);
        }
    }
    for mut col in a.columns_mut() {
        let s = col.sum();
        col.mapv_inplace(|x| x / s);
    }

    let mut g = Array2::<f64>::zeros((k, 2 * k));
    for x in g.iter_mut() {
        *x = rng.gen_range(0.1..1.0);
    }
    let mut r = g.dot(&g.t());
    let mass = r.sum();
    r.mapv_inplace(|x| x / mass);

    let model = SyntheticModel::new(a, r)?;
    let q = model.cooccurrence();
    Ok((model, q))
}
