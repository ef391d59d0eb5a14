//! Anchor-word selection. Two strategies over the corpus co-occurrence
//! statistics:
//!
//! * [`soft_clique`] — finds a low-total-edge-weight K-clique in the word
//!   similarity graph via multi-start greedy seeding ([`merge_init`]) and
//!   single-swap descent ([`local_search`]);
//! * [`fast_anchor_words`] — the convex-hull baseline: iterated
//!   farthest-point-from-span over rows of the row-normalized matrix,
//!   optionally after Gaussian random projection.
//!
//! Every tie (greedy growth, counter cut, farthest point) breaks toward
//! the lowest word index so runs are reproducible across platforms.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cooccurrence::{RowNormalizedQ, SimilarityGraph};
use crate::error::{Error, Result};

/// Which selection strategy produced an anchor set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorMethod {
    SoftClique,
    FastAnchorWords,
}

/// An ordered set of K distinct word indices designating the anchor words.
/// For the clique method, `total_weight` carries the sum of edge weights
/// over unordered anchor pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorSet {
    pub indices: Vec<usize>,
    pub method: AnchorMethod,
    pub total_weight: Option<f64>,
}

impl AnchorSet {
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    fn validate(&self, v: usize) -> Result<()> {
        let mut seen = vec![false; v];
        for &i in &self.indices {
            if i >= v {
                return Err(Error::WordOutOfRange { word: i, vocab: v });
            }
            if seen[i] {
                return Err(Error::InvalidParameter(format!("duplicate anchor {i}")));
            }
            seen[i] = true;
        }
        Ok(())
    }
}

/// Parameters for [`soft_clique`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SoftCliqueParams {
    /// Number of topics K; at least 2.
    pub k: usize,
    /// Iteration cap for the swap descent.
    pub max_iter: usize,
    /// Number of greedy starts; `None` means `ceil(V / K)`.
    pub num_starts: Option<usize>,
    pub seed: u64,
}

impl SoftCliqueParams {
    pub fn new(k: usize, seed: u64) -> Self {
        SoftCliqueParams {
            k,
            max_iter: 1000,
            num_starts: None,
            seed,
        }
    }

    fn validate(&self, v: usize) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {}", self.k)));
        }
        if self.k > v {
            return Err(Error::InvalidParameter(format!(
                "k = {} exceeds the {v}-word vocabulary",
                self.k
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if self.num_starts == Some(0) {
            return Err(Error::InvalidParameter("num_starts must be >= 1".into()));
        }
        Ok(())
    }

    fn effective_starts(&self, v: usize) -> usize {
        let wanted = self
            .num_starts
            .unwrap_or_else(|| v.div_ceil(self.k).max(1));
        wanted.min(v)
    }
}

/// Parameters for [`fast_anchor_words`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FawParams {
    /// Number of topics K; at least 1.
    pub k: usize,
    /// Random-projection target dimension; 0 skips projection.
    pub proj_dim: usize,
    pub seed: u64,
}

impl FawParams {
    pub fn new(k: usize, seed: u64) -> Self {
        FawParams {
            k,
            proj_dim: 1000,
            seed,
        }
    }

    fn validate(&self, v: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        if self.k > v {
            return Err(Error::InvalidParameter(format!(
                "k = {} exceeds the {v}-word vocabulary",
                self.k
            )));
        }
        if self.proj_dim != 0 && self.proj_dim < self.k {
            return Err(Error::InvalidParameter(format!(
                "proj_dim = {} is smaller than k = {}",
                self.proj_dim, self.k
            )));
        }
        Ok(())
    }
}

/// Total edge weight from node `x` to the members of `clique`, excluding
/// any self-loop. An empty clique contributes 0.
pub fn clique_weight(x: usize, clique: &[usize], graph: &SimilarityGraph) -> f64 {
    clique
        .iter()
        .filter(|&&c| c != x)
        .map(|&c| graph.weight(x, c))
        .sum()
}

/// Sum of edge weights over unordered pairs of `members`.
pub fn total_clique_weight(members: &[usize], graph: &SimilarityGraph) -> f64 {
    let mut total = 0.0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            total += graph.weight(a, b);
        }
    }
    total
}

/// Greedily grows one K-clique from each start node (adding the node of
/// minimum weight to the current clique, lowest index on ties), counts
/// memberships, and keeps the K most frequently chosen nodes.
pub fn merge_init(graph: &SimilarityGraph, params: &SoftCliqueParams) -> Result<AnchorSet> {
    let v = graph.num_nodes();
    params.validate(v)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let starts = sample_without_replacement(&mut rng, v, params.effective_starts(v));
    merge_init_from_starts(graph, params.k, &starts)
}

/// [`merge_init`] with explicit start nodes; exposed so the seeding can be
/// driven or replayed directly.
pub fn merge_init_from_starts(
    graph: &SimilarityGraph,
    k: usize,
    starts: &[usize],
) -> Result<AnchorSet> {
    let v = graph.num_nodes();
    if k < 2 || k > v {
        return Err(Error::InvalidParameter(format!("k = {k} invalid for {v} nodes")));
    }
    if starts.is_empty() {
        return Err(Error::InvalidParameter("at least one start node required".into()));
    }
    for &s in starts {
        if s >= v {
            return Err(Error::WordOutOfRange { word: s, vocab: v });
        }
    }

    let cliques: Vec<Vec<usize>> = starts
        .par_iter()
        .map(|&start| grow_clique(graph, k, start))
        .collect();

    let mut node_count = vec![0usize; v];
    for clique in &cliques {
        for &member in clique {
            node_count[member] += 1;
        }
    }

    // top K by count, lowest index on ties
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by(|&a, &b| node_count[b].cmp(&node_count[a]).then(a.cmp(&b)));
    let mut indices: Vec<usize> = order.into_iter().take(k).collect();
    indices.sort_unstable();

    let total_weight = total_clique_weight(&indices, graph);
    Ok(AnchorSet {
        indices,
        method: AnchorMethod::SoftClique,
        total_weight: Some(total_weight),
    })
}

fn grow_clique(graph: &SimilarityGraph, k: usize, start: usize) -> Vec<usize> {
    let v = graph.num_nodes();
    let mut members = Vec::with_capacity(k);
    let mut in_clique = vec![false; v];
    // cumulative weight from every node to the current clique
    let mut cum = vec![0.0f64; v];
    members.push(start);
    in_clique[start] = true;
    for y in 0..v {
        cum[y] = graph.weight(y, start);
    }
    while members.len() < k {
        let mut best = usize::MAX;
        let mut best_w = f64::INFINITY;
        for x in 0..v {
            if !in_clique[x] && cum[x] < best_w {
                best = x;
                best_w = cum[x];
            }
        }
        members.push(best);
        in_clique[best] = true;
        for y in 0..v {
            cum[y] += graph.weight(y, best);
        }
    }
    members
}

fn sample_without_replacement(rng: &mut ChaCha8Rng, v: usize, n: usize) -> Vec<usize> {
    // partial Fisher-Yates over 0..v
    let mut pool: Vec<usize> = (0..v).collect();
    for i in 0..n {
        let j = rng.gen_range(i..v);
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool
}

/// Single-swap descent on the clique: repeatedly replaces the member
/// whose best substitute lowers the total edge weight the most, stopping
/// when no strictly improving swap exists or `max_iter` is reached. The
/// total weight strictly decreases across performed swaps.
pub fn local_search(
    graph: &SimilarityGraph,
    init: &AnchorSet,
    max_iter: usize,
) -> Result<AnchorSet> {
    let v = graph.num_nodes();
    init.validate(v)?;
    let mut members = init.indices.clone();
    members.sort_unstable();
    let k = members.len();

    if k >= v {
        // no candidate words outside the clique
        return Ok(AnchorSet {
            indices: members.clone(),
            method: AnchorMethod::SoftClique,
            total_weight: Some(total_clique_weight(&members, graph)),
        });
    }

    let mut in_clique = vec![false; v];
    for &s in &members {
        in_clique[s] = true;
    }
    // cum[y] = clique_weight(y, S): members exclude their own self-loop
    let mut cum = vec![0.0f64; v];
    for y in 0..v {
        cum[y] = members
            .iter()
            .filter(|&&s| s != y)
            .map(|&s| graph.weight(y, s))
            .sum();
    }

    for _ in 0..max_iter {
        // best substitute for each member, in parallel; the final argmin is
        // taken sequentially in ascending member order so ties are stable
        let candidates: Vec<(usize, usize, f64)> = members
            .par_iter()
            .map(|&s| {
                let removed_weight = cum[s];
                let mut best_w = usize::MAX;
                let mut best_val = f64::INFINITY;
                for w in 0..v {
                    if in_clique[w] {
                        continue;
                    }
                    let val = cum[w] - graph.weight(w, s) - removed_weight;
                    if val < best_val {
                        best_val = val;
                        best_w = w;
                    }
                }
                (best_w, s, best_val)
            })
            .collect();

        let (swap_in, swap_out, best_val) = candidates
            .into_iter()
            .min_by(|a, b| {
                a.2.partial_cmp(&b.2)
                    .unwrap()
                    .then(a.0.cmp(&b.0))
                    .then(a.1.cmp(&b.1))
            })
            .expect("k >= 2 members");

        if best_val >= 0.0 {
            break;
        }

        let pos = members.binary_search(&swap_out).expect("member present");
        members.remove(pos);
        let pos = members.binary_search(&swap_in).unwrap_err();
        members.insert(pos, swap_in);
        in_clique[swap_out] = false;
        in_clique[swap_in] = true;
        for y in 0..v {
            cum[y] += graph.weight(y, swap_in) - graph.weight(y, swap_out);
        }
        // repair the two entries whose self-loop status changed
        cum[swap_in] = members
            .iter()
            .filter(|&&s| s != swap_in)
            .map(|&s| graph.weight(swap_in, s))
            .sum();
        cum[swap_out] = members.iter().map(|&s| graph.weight(swap_out, s)).sum();
    }

    let total_weight = total_clique_weight(&members, graph);
    Ok(AnchorSet {
        indices: members,
        method: AnchorMethod::SoftClique,
        total_weight: Some(total_weight),
    })
}

/// The full clique heuristic: greedy multi-start seeding followed by swap
/// descent. Deterministic given the seed.
pub fn soft_clique(graph: &SimilarityGraph, params: &SoftCliqueParams) -> Result<AnchorSet> {
    let init = merge_init(graph, params)?;
    local_search(graph, &init, params.max_iter)
}

/// Convex-hull baseline: treats each row of the row-normalized matrix as a
/// point, optionally projects to `proj_dim` dimensions with a seeded
/// Gaussian matrix scaled by `1/sqrt(proj_dim)`, then repeatedly selects
/// the row with the largest residual after orthogonal projection onto the
/// span of the rows chosen so far.
pub fn fast_anchor_words(qprime: &RowNormalizedQ, params: &FawParams) -> Result<AnchorSet> {
    let v = qprime.vocab_size();
    params.validate(v)?;

    let mut points: Array2<f64> = if params.proj_dim > 0 {
        let d = params.proj_dim;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let scale = 1.0 / (d as f64).sqrt();
        let mut proj = Array2::<f64>::zeros((qprime.matrix().ncols(), d));
        for x in proj.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *x = g * scale;
        }
        qprime.matrix().dot(&proj)
    } else {
        qprime.matrix().clone()
    };

    let norm_floor = {
        let max_norm = points
            .rows()
            .into_iter()
            .map(|r| r.dot(&r).sqrt())
            .fold(0.0f64, f64::max);
        1e-10 * max_norm.max(1.0)
    };

    let mut indices = Vec::with_capacity(params.k);
    let mut chosen = vec![false; v];
    for iteration in 0..params.k {
        let mut best = usize::MAX;
        let mut best_sq = f64::NEG_INFINITY;
        for (i, row) in points.rows().into_iter().enumerate() {
            if chosen[i] {
                continue;
            }
            let sq = row.dot(&row);
            if sq > best_sq {
                best_sq = sq;
                best = i;
            }
        }
        if best == usize::MAX || best_sq.sqrt() <= norm_floor {
            return Err(Error::RankDeficient { iteration });
        }
        indices.push(best);
        chosen[best] = true;

        // deflate every point against the normalized chosen direction
        let direction: Array1<f64> = {
            let row = points.row(best);
            let norm = row.dot(&row).sqrt();
            row.mapv(|x| x / norm)
        };
        let coeffs: Vec<f64> = points
            .rows()
            .into_iter()
            .map(|r| r.dot(&direction))
            .collect();
        for (mut row, c) in points.rows_mut().into_iter().zip(coeffs) {
            row.scaled_add(-c, &direction);
        }
    }

    Ok(AnchorSet {
        indices,
        method: AnchorMethod::FastAnchorWords,
        total_weight: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooccurrence::{generate_synthetic, row_normalize};
    use ndarray::array;

    /// Undirected graph from an upper-triangular edge list.
    fn graph(v: usize, edges: &[(usize, usize, f64)]) -> SimilarityGraph {
        let mut w = Array2::<f64>::zeros((v, v));
        for &(a, b, x) in edges {
            w[(a, b)] = x;
            w[(b, a)] = x;
        }
        SimilarityGraph::from_weights(w).unwrap()
    }

    /// The worked 4-node example: cheap edges (0,1)=0.1 and (0,2)=0.2,
    /// everything else 0.9.
    fn worked_graph() -> SimilarityGraph {
        graph(
            4,
            &[
                (0, 1, 0.1),
                (0, 2, 0.2),
                (0, 3, 0.9),
                (1, 2, 0.9),
                (1, 3, 0.9),
                (2, 3, 0.9),
            ],
        )
    }

    fn random_graph(rng: &mut ChaCha8Rng, v: usize) -> SimilarityGraph {
        let mut w = Array2::<f64>::zeros((v, v));
        for i in 0..v {
            for j in 0..i {
                let x: f64 = rng.gen_range(0.0..1.0);
                w[(i, j)] = x;
                w[(j, i)] = x;
            }
        }
        SimilarityGraph::from_weights(w).unwrap()
    }

    #[test]
    fn clique_weight_cases() {
        let g = graph(3, &[(0, 1, 0.1), (0, 2, 0.2), (1, 2, 0.4)]);
        assert_eq!(clique_weight(0, &[], &g), 0.0);
        assert_eq!(clique_weight(0, &[0], &g), 0.0);
        assert!((clique_weight(0, &[1, 2], &g) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn merge_init_hand_trace_with_forced_starts() {
        let g = worked_graph();
        // starts at nodes 1 and 2: cliques {1,0} and {2,0}; counts
        // 0 -> 2, 1 -> 1, 2 -> 1; the count-1 tie breaks to node 1
        let set = merge_init_from_starts(&g, 2, &[1, 2]).unwrap();
        assert_eq!(set.indices, vec![0, 1]);
        assert!((set.total_weight.unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn merge_init_with_v_equal_k_returns_everything() {
        let g = worked_graph();
        let params = SoftCliqueParams::new(4, 0);
        let set = merge_init(&g, &params).unwrap();
        assert_eq!(set.indices, vec![0, 1, 2, 3]);
    }

    /// Oracle re-implementation of the greedy growth, recomputing the
    /// node-to-clique weight from scratch at every step.
    fn naive_grow(graph: &SimilarityGraph, k: usize, start: usize) -> Vec<usize> {
        let v = graph.num_nodes();
        let mut clique = vec![start];
        while clique.len() < k {
            let (best, _) = (0..v)
                .filter(|x| !clique.contains(x))
                .map(|x| (x, clique_weight(x, &clique, graph)))
                .fold((usize::MAX, f64::INFINITY), |acc, (x, w)| {
                    if w < acc.1 {
                        (x, w)
                    } else {
                        acc
                    }
                });
            clique.push(best);
        }
        clique
    }

    #[test]
    fn merge_init_matches_replay_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..50 {
            let v = 12;
            let k = 2 + (trial % 3);
            let g = random_graph(&mut rng, v);
            let starts: Vec<usize> = sample_without_replacement(&mut rng, v, 4);
            let got = merge_init_from_starts(&g, k, &starts).unwrap();

            // independent recount
            let cliques: Vec<Vec<usize>> =
                starts.iter().map(|&s| naive_grow(&g, k, s)).collect();
            let mut counts = vec![0usize; v];
            for c in &cliques {
                for &m in c {
                    counts[m] += 1;
                }
            }
            let mut order: Vec<usize> = (0..v).collect();
            order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
            let mut expect: Vec<usize> = order.into_iter().take(k).collect();
            expect.sort_unstable();
            assert_eq!(got.indices, expect, "trial {trial}");

            // every selected node belongs to at least one grown clique
            for &i in &got.indices {
                assert!(cliques.iter().any(|c| c.contains(&i)));
            }
        }
    }

    #[test]
    fn merge_init_is_deterministic_for_a_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(&mut rng, 10);
        let params = SoftCliqueParams::new(3, 17);
        assert_eq!(
            merge_init(&g, &params).unwrap(),
            merge_init(&g, &params).unwrap()
        );
    }

    #[test]
    fn local_search_leaves_uniform_graph_unchanged() {
        let mut w = Array2::from_elem((5, 5), 0.4);
        for i in 0..5 {
            w[(i, i)] = 0.0;
        }
        let g = SimilarityGraph::from_weights(w).unwrap();
        let init = AnchorSet {
            indices: vec![1, 3],
            method: AnchorMethod::SoftClique,
            total_weight: Some(0.4),
        };
        let out = local_search(&g, &init, 100).unwrap();
        assert_eq!(out.indices, vec![1, 3]);
    }

    #[test]
    fn local_search_hand_trace_reaches_global_minimum() {
        let g = worked_graph();
        let init = AnchorSet {
            indices: vec![2, 3],
            method: AnchorMethod::SoftClique,
            total_weight: Some(0.9),
        };
        let out = local_search(&g, &init, 100).unwrap();
        assert_eq!(out.indices, vec![0, 1]);
        assert!((out.total_weight.unwrap() - 0.1).abs() < 1e-12);

        // brute force over all six 2-cliques confirms {0,1} is global
        let mut best = (vec![], f64::INFINITY);
        for a in 0..4 {
            for b in (a + 1)..4 {
                let w = total_clique_weight(&[a, b], &g);
                if w < best.1 {
                    best = (vec![a, b], w);
                }
            }
        }
        assert_eq!(best.0, out.indices);
    }

    fn all_subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(start: usize, v: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if current.len() == k {
                out.push(current.clone());
                return;
            }
            for i in start..v {
                current.push(i);
                rec(i + 1, v, k, current, out);
                current.pop();
            }
        }
        rec(0, v, k, &mut current, &mut out);
        out
    }

    #[test]
    fn local_search_output_is_one_swap_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let v = 5 + (trial % 8); // up to 12
            let k = 2 + (trial % 3); // up to 4
            let g = random_graph(&mut rng, v);
            let params = SoftCliqueParams::new(k, trial as u64);
            let init = merge_init(&g, &params).unwrap();
            let out = local_search(&g, &init, 1000).unwrap();
            let out_weight = out.total_weight.unwrap();
            assert!(out_weight <= init.total_weight.unwrap() + 1e-12);

            // exhaustive swap enumeration: no single substitution improves
            for (si, &s) in out.indices.iter().enumerate() {
                for w in 0..v {
                    if out.indices.contains(&w) {
                        continue;
                    }
                    let mut swapped = out.indices.clone();
                    swapped[si] = w;
                    let alt = total_clique_weight(&swapped, &g);
                    assert!(
                        alt >= out_weight - 1e-12,
                        "trial {trial}: swap {s}->{w} improves {out_weight} to {alt}"
                    );
                }
            }
        }
    }

    #[test]
    fn soft_clique_finds_global_minimum_on_worked_graph() {
        let g = worked_graph();
        for seed in 0..8 {
            let mut params = SoftCliqueParams::new(2, seed);
            params.num_starts = Some(3);
            let out = soft_clique(&g, &params).unwrap();
            assert_eq!(out.indices, vec![0, 1], "seed {seed}");
        }
    }

    #[test]
    fn soft_clique_with_v_equal_k_returns_all() {
        let g = worked_graph();
        let out = soft_clique(&g, &SoftCliqueParams::new(4, 5)).unwrap();
        assert_eq!(out.indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn soft_clique_total_weight_matches_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_graph(&mut rng, 15);
        let out = soft_clique(&g, &SoftCliqueParams::new(4, 1)).unwrap();
        let recount = total_clique_weight(&out.indices, &g);
        assert!((out.total_weight.unwrap() - recount).abs() < 1e-9);
    }

    #[test]
    fn clique_methods_are_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = random_graph(&mut rng, 11);
        for scale in [0.5, 3.7] {
            let scaled =
                SimilarityGraph::from_weights(g.weights() * scale).unwrap();
            let params = SoftCliqueParams::new(3, 7);
            let a = merge_init(&g, &params).unwrap();
            let b = merge_init(&scaled, &params).unwrap();
            assert_eq!(a.indices, b.indices);
            let la = local_search(&g, &a, 500).unwrap();
            let lb = local_search(&scaled, &b, 500).unwrap();
            assert_eq!(la.indices, lb.indices);
        }
    }

    #[test]
    fn faw_hand_geometry_in_two_dimensions() {
        // rows: e1, e2, interior midpoint. norms 1, 1, 0.707; residual of
        // e2 after removing the e1 direction is 1.
        let rows = array![[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]];
        let q = crate::cooccurrence::CooccurrenceMatrix::from_matrix(rows);
        let qp = row_normalize(&q).unwrap();
        let set = fast_anchor_words(
            &qp,
            &FawParams {
                k: 2,
                proj_dim: 0,
                seed: 0,
            },
        )
        .unwrap();
        assert_eq!(set.indices, vec![0, 1]);
        assert_eq!(set.method, AnchorMethod::FastAnchorWords);
    }

    #[test]
    fn faw_selects_every_row_when_k_equals_v() {
        let rows = array![[0.6, 0.2, 0.2], [0.1, 0.8, 0.1], [0.25, 0.25, 0.5]];
        let q = crate::cooccurrence::CooccurrenceMatrix::from_matrix(rows);
        let qp = row_normalize(&q).unwrap();
        let set = fast_anchor_words(
            &qp,
            &FawParams {
                k: 3,
                proj_dim: 0,
                seed: 0,
            },
        )
        .unwrap();
        let mut sorted = set.indices.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn faw_recovers_true_anchors_on_separable_instance() {
        let (model, q) = generate_synthetic(10, 3, 42).unwrap();
        let qp = row_normalize(&q).unwrap();
        let set = fast_anchor_words(
            &qp,
            &FawParams {
                k: 3,
                proj_dim: 0,
                seed: 0,
            },
        )
        .unwrap();
        let mut got = set.indices.clone();
        got.sort_unstable();
        assert_eq!(got, model.true_anchors());
    }

    #[test]
    fn faw_reports_rank_deficiency() {
        let rows = array![[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]];
        let q = crate::cooccurrence::CooccurrenceMatrix::from_matrix(rows);
        let qp = row_normalize(&q).unwrap();
        let err = fast_anchor_words(
            &qp,
            &FawParams {
                k: 2,
                proj_dim: 0,
                seed: 0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::RankDeficient { iteration: 1 }));
    }

    #[test]
    fn faw_projection_is_deterministic_per_seed() {
        let (_, q) = generate_synthetic(20, 4, 7).unwrap();
        let qp = row_normalize(&q).unwrap();
        let params = FawParams {
            k: 4,
            proj_dim: 8,
            seed: 33,
        };
        let a = fast_anchor_words(&qp, &params).unwrap();
        let b = fast_anchor_words(&qp, &params).unwrap();
        assert_eq!(a, b);
        for &i in &a.indices {
            assert!(i < 20);
        }
    }
}
