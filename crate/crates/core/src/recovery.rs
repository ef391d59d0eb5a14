//! Topic recovery: each row of the row-normalized co-occurrence matrix is
//! reconstructed as a convex combination of the anchor rows by solving a
//! simplex-constrained least-squares problem with exponentiated-gradient
//! updates, and the word-topic matrix is obtained by rescaling the
//! coefficients with the word marginals and normalizing columns.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::anchors::AnchorSet;
use crate::cooccurrence::{row_normalize, CooccurrenceMatrix, RowNormalizedQ};
use crate::error::{Error, Result};

/// Exponentiated-gradient solver settings. `step_size` is the initial
/// learning rate; the solver line-searches from there (halving on
/// non-descent, growing on success), so the objective is non-increasing
/// across iterations. `tol` bounds the simplex duality gap
/// `max_i (c . grad - grad_i)`, which upper-bounds the objective
/// suboptimality, so iteration stops once the solution is within `tol` of
/// optimal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EgParams {
    pub step_size: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for EgParams {
    fn default() -> Self {
        EgParams {
            step_size: 50.0,
            max_iter: 500,
            tol: 1e-7,
        }
    }
}

impl EgParams {
    fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0) {
            return Err(Error::InvalidParameter("step_size must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        Ok(())
    }
}

/// One solved simplex least-squares problem, with the objective value
/// after every accepted iterate (index 0 is the uniform start).
#[derive(Debug, Clone)]
pub struct EgSolution {
    pub coefficients: Array1<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub objectives: Vec<f64>,
}

/// Minimizes `||target - c^T anchor_rows||^2` over the probability
/// simplex. The result satisfies the simplex constraints exactly
/// (renormalized every step); if the gap tolerance is not reached within
/// `max_iter` the best iterate is returned with `converged = false` in the
/// detailed variant.
pub fn eg_simplex_lsq(
    target: ArrayView1<f64>,
    anchor_rows: &Array2<f64>,
    params: &EgParams,
) -> Result<Array1<f64>> {
    Ok(eg_simplex_lsq_detailed(target, anchor_rows, params)?.coefficients)
}

/// [`eg_simplex_lsq`] returning convergence diagnostics and the objective
/// trace.
pub fn eg_simplex_lsq_detailed(
    target: ArrayView1<f64>,
    anchor_rows: &Array2<f64>,
    params: &EgParams,
) -> Result<EgSolution> {
    params.validate()?;
    if anchor_rows.nrows() == 0 {
        return Err(Error::InvalidParameter("need at least one anchor row".into()));
    }
    if anchor_rows.ncols() != target.len() {
        return Err(Error::InvalidParameter(format!(
            "target length {} does not match anchor row length {}",
            target.len(),
            anchor_rows.ncols()
        )));
    }
    if target.iter().any(|x| !x.is_finite()) || anchor_rows.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("exponentiated-gradient input"));
    }

    let gram = anchor_rows.dot(&anchor_rows.t());
    let lin = anchor_rows.dot(&target);
    let tt = target.dot(&target);

    let mut trace = Vec::new();
    let (coefficients, converged, iterations) =
        solve_on_gram(&gram, lin.view(), tt, params, Some(&mut trace));
    Ok(EgSolution {
        coefficients,
        converged,
        iterations,
        objectives: trace,
    })
}

/// Core loop over the precomputed Gram matrix `G = B B^T` and linear term
/// `b = B t`; the objective is `c^T G c - 2 c^T b + t.t`.
fn solve_on_gram(
    gram: &Array2<f64>,
    lin: ArrayView1<f64>,
    tt: f64,
    params: &EgParams,
    mut trace: Option<&mut Vec<f64>>,
) -> (Array1<f64>, bool, usize) {
    let k = gram.nrows();
    let mut c = Array1::<f64>::from_elem(k, 1.0 / k as f64);
    let objective = |c: &Array1<f64>| c.dot(&gram.dot(c)) - 2.0 * c.dot(&lin) + tt;
    let mut f = objective(&c);
    if let Some(t) = trace.as_deref_mut() {
        t.push(f);
    }

    let mut eta = params.step_size;
    let eta_floor = params.step_size * 1e-16;
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=params.max_iter {
        iterations = it;
        let grad = {
            let mut g = gram.dot(&c);
            g.zip_mut_with(&lin, |gi, &bi| *gi = 2.0 * (*gi - bi));
            g
        };
        let mu = c.dot(&grad);
        let gap = grad.iter().fold(f64::NEG_INFINITY, |m, &g| m.max(mu - g));
        converged = converged || gap < params.tol;

        // multiplicative step with backtracking; exponents are shifted by
        // their maximum before exp to avoid overflow. Once the gap bound
        // is met, only strictly descending steps are taken (the large
        // line-searched step collapses near-vertex solutions by orders of
        // magnitude), and the first non-descending attempt terminates.
        let mut accepted = false;
        while eta >= eta_floor {
            let exponents: Vec<f64> = grad.iter().map(|&g| -eta * (g - mu)).collect();
            let shift = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut candidate = Array1::<f64>::zeros(k);
            for i in 0..k {
                candidate[i] = c[i] * (exponents[i] - shift).exp();
            }
            let z = candidate.sum();
            if z > 0.0 && z.is_finite() {
                candidate.mapv_inplace(|x| x / z);
                let f_new = objective(&candidate);
                if f_new < f {
                    c = candidate;
                    f = f_new;
                    accepted = true;
                    eta = (eta * 2.0).min(1e300);
                    break;
                }
            }
            eta /= 2.0;
        }
        if !accepted {
            break;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(f);
        }
    }

    (c, converged, iterations)
}

/// Per-word simplex coefficients reconstructing each row of `Q'` from the
/// anchor rows; `non_converged` lists the rows whose solver hit the
/// iteration cap.
#[derive(Debug, Clone)]
pub struct ReconstructionCoefficients {
    c: Array2<f64>,
    pub non_converged: Vec<usize>,
}

impl ReconstructionCoefficients {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.c
    }

    pub fn from_matrix(c: Array2<f64>) -> Self {
        ReconstructionCoefficients {
            c,
            non_converged: Vec::new(),
        }
    }
}

/// Solves the `V` independent row problems (in parallel; results are
/// assembled by row index, so scheduling cannot affect the output).
pub fn recover_c(
    qprime: &RowNormalizedQ,
    anchors: &AnchorSet,
    params: &EgParams,
) -> Result<ReconstructionCoefficients> {
    params.validate()?;
    let v = qprime.vocab_size();
    for &a in &anchors.indices {
        if a >= v {
            return Err(Error::WordOutOfRange { word: a, vocab: v });
        }
    }
    let anchor_rows = qprime.matrix().select(Axis(0), &anchors.indices);
    let gram = anchor_rows.dot(&anchor_rows.t());
    // column i holds B q'_i
    let lin_all = anchor_rows.dot(&qprime.matrix().t());

    let solved: Vec<(Array1<f64>, bool)> = (0..v)
        .into_par_iter()
        .map(|i| {
            let row = qprime.matrix().row(i);
            let tt = row.dot(&row);
            let (c, converged, _) = solve_on_gram(&gram, lin_all.column(i), tt, params, None);
            (c, converged)
        })
        .collect();

    let k = anchors.k();
    let mut c = Array2::<f64>::zeros((v, k));
    let mut non_converged = Vec::new();
    for (i, (row, converged)) in solved.into_iter().enumerate() {
        c.row_mut(i).assign(&row);
        if !converged {
            non_converged.push(i);
        }
    }
    Ok(ReconstructionCoefficients { c, non_converged })
}

/// The word-topic matrix: column `k` is the word distribution of topic
/// `k`, summing to 1.
#[derive(Debug, Clone)]
pub struct TopicModel {
    a: Array2<f64>,
    pub anchors: AnchorSet,
    pub vocab: Arc<Vec<String>>,
}

impl TopicModel {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.a
    }

    pub fn num_topics(&self) -> usize {
        self.a.ncols()
    }

    pub fn vocab_size(&self) -> usize {
        self.a.nrows()
    }

    pub fn from_parts(a: Array2<f64>, anchors: AnchorSet, vocab: Arc<Vec<String>>) -> Self {
        TopicModel { a, anchors, vocab }
    }
}

/// Applies the final rescaling `A = column_normalize(diag(Q 1) C)`: the
/// coefficient rows (word-given-topic responsibilities) are weighted by
/// the word marginals and each topic column is normalized to a
/// distribution. A column with no mass names the degenerate topic.
pub fn recover_a(
    q: &CooccurrenceMatrix,
    coeffs: &ReconstructionCoefficients,
    anchors: &AnchorSet,
    vocab: Arc<Vec<String>>,
) -> Result<TopicModel> {
    let v = q.vocab_size();
    if coeffs.matrix().nrows() != v {
        return Err(Error::InvalidParameter(format!(
            "coefficient rows {} do not match vocabulary {v}",
            coeffs.matrix().nrows()
        )));
    }
    let mut a = coeffs.matrix().clone();
    for (mut row, &mass) in a.rows_mut().into_iter().zip(q.row_sums()) {
        row.mapv_inplace(|x| x * mass);
    }
    for (topic, mut col) in a.columns_mut().into_iter().enumerate() {
        let s = col.sum();
        if s <= 0.0 {
            return Err(Error::DegenerateTopic { topic });
        }
        col.mapv_inplace(|x| x / s);
    }
    Ok(TopicModel {
        a,
        anchors: anchors.clone(),
        vocab,
    })
}

/// Full recovery from `Q` and a chosen anchor set: row-normalize, solve
/// the simplex reconstructions, apply the marginal rescaling.
pub fn recover_topics(
    q: &CooccurrenceMatrix,
    anchors: &AnchorSet,
    vocab: Arc<Vec<String>>,
    params: &EgParams,
) -> Result<TopicModel> {
    let qprime = row_normalize(q)?;
    let coeffs = recover_c(&qprime, anchors, params)?;
    recover_a(q, &coeffs, anchors, vocab)
}
