//! The `pipeline` subcommand: anchors, recovery, coherence for each seed,
//! with per-seed outputs and a run manifest. Also the exact synthetic
//! mode, which verifies recovery against the generating model.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use snmf_topics::anchors::{fast_anchor_words, soft_clique, AnchorSet, FawParams, SoftCliqueParams};
use snmf_topics::coherence::{average_coherence, top_words, CoherenceParams};
use snmf_topics::cooccurrence::{
    generate_synthetic, row_normalize, to_similarity_graph, CooccurrenceMatrix, RowNormalizedQ,
    SimilarityGraph,
};
use snmf_topics::corpus::Corpus;
use snmf_topics::recovery::{recover_a, recover_c, recover_topics, EgParams};

use crate::outputs::{
    self, write_anchor_json, write_coherence_tsv, write_manifest, write_topic_model,
    CoherenceSummary, Manifest, SeedError,
};
use crate::stages::{self, ms};
use crate::{MethodArg, PipelineArgs};

#[derive(Serialize, Clone)]
struct PipelineConfig {
    method: String,
    k: usize,
    seeds: Vec<u64>,
    h_values: Vec<usize>,
    proj_dim: usize,
    max_iter: usize,
    num_starts: Option<usize>,
    eg: EgParams,
    synthetic: Option<String>,
}

pub fn run(args: &PipelineArgs) -> Result<()> {
    if args.seeds.is_empty() {
        bail!("--seeds must not be empty");
    }
    if args.k < 2 {
        bail!("-k must be at least 2");
    }
    for &h in &args.h_values {
        if h == 0 {
            bail!("--h-values entries must be >= 1");
        }
    }
    fs::create_dir_all(&args.out)?;

    if let Some(spec) = &args.synthetic {
        return run_synthetic(args, spec);
    }

    let prepared = stages::prepare(&args.corpus, &args.out)?;
    let corpus = &prepared.corpus;
    let q = &prepared.q;
    eprintln!(
        "corpus: {} docs, {} words (from {} x {}), Q mass {:.6}",
        corpus.num_docs(),
        corpus.vocab_size(),
        prepared.original_docs,
        prepared.original_vocab,
        q.total_mass()
    );

    let mut stage_times = prepared.times.millis.clone();

    // method-specific derived matrix, built once and shared across seeds
    let t0 = Instant::now();
    let derived = match args.method {
        MethodArg::Sc => Derived::Graph(to_similarity_graph(q)?),
        MethodArg::Faw => Derived::Rows(row_normalize(q)?),
    };
    stage_times.insert("derive_ms".to_string(), ms(t0));

    let eg = args.eg.to_params();
    let config = PipelineConfig {
        method: args.method.name().to_string(),
        k: args.k,
        seeds: args.seeds.clone(),
        h_values: args.h_values.clone(),
        proj_dim: args.proj_dim,
        max_iter: args.max_iter,
        num_starts: args.num_starts,
        eg: eg.clone(),
        synthetic: None,
    };

    let run_seed = |&seed: &u64| -> (u64, std::result::Result<SeedOutput, SeedError>) {
        (
            seed,
            run_one_seed(args, &derived, q, corpus, &eg, seed, &args.out).map_err(|e| SeedError {
                seed,
                stage: "pipeline".to_string(),
                message: format!("{e:#}"),
            }),
        )
    };
    let results: Vec<(u64, std::result::Result<SeedOutput, SeedError>)> = if args.parallel_seeds {
        args.seeds.par_iter().map(run_seed).collect()
    } else {
        args.seeds.iter().map(run_seed).collect()
    };

    let mut summary = CoherenceSummary::default();
    let mut seed_times = BTreeMap::new();
    let mut outputs_list = Vec::new();
    let mut errors = Vec::new();
    for (seed, result) in results {
        match result {
            Ok(out) => {
                for (h, avg) in out.coherence {
                    summary.insert(h, seed, avg);
                }
                seed_times.insert(seed, out.times);
                outputs_list.extend(out.files);
            }
            Err(err) => errors.push(err),
        }
    }
    summary.finalize();

    fs::write(
        args.out.join("coherence-summary.json"),
        serde_json::to_vec_pretty(&summary)?,
    )?;
    for (h, mean) in &summary.mean {
        eprintln!("H = {h}: mean coherence over seeds = {mean:.4}");
    }

    let manifest = Manifest {
        command: "pipeline".to_string(),
        config,
        source: prepared.source,
        preprocess: prepared.preprocess,
        corpus_hash: prepared.corpus_hash,
        original: (prepared.original_docs, prepared.original_vocab),
        preprocessed: (corpus.num_docs(), corpus.vocab_size()),
        stage_times_ms: stage_times,
        seed_times_ms: seed_times,
        outputs: outputs_list,
        errors,
    };
    write_manifest(&args.out.join("run-manifest.json"), &manifest)?;

    if !manifest.errors.is_empty() {
        bail!(
            "{} of {} seeds failed; see run-manifest.json",
            manifest.errors.len(),
            args.seeds.len()
        );
    }
    Ok(())
}

enum Derived {
    Graph(SimilarityGraph),
    Rows(RowNormalizedQ),
}

struct SeedOutput {
    coherence: Vec<(usize, f64)>,
    times: BTreeMap<String, f64>,
    files: Vec<String>,
}

fn select_anchors(
    args: &PipelineArgs,
    derived: &Derived,
    seed: u64,
) -> snmf_topics::Result<(AnchorSet, serde_json::Value)> {
    match derived {
        Derived::Graph(graph) => {
            let params = SoftCliqueParams {
                k: args.k,
                max_iter: args.max_iter,
                num_starts: args.num_starts,
                seed,
            };
            let set = soft_clique(graph, &params)?;
            Ok((set, serde_json::to_value(&params).expect("serializable")))
        }
        Derived::Rows(rows) => {
            let params = FawParams {
                k: args.k,
                proj_dim: args.proj_dim,
                seed,
            };
            let set = fast_anchor_words(rows, &params)?;
            Ok((set, serde_json::to_value(&params).expect("serializable")))
        }
    }
}

fn run_one_seed(
    args: &PipelineArgs,
    derived: &Derived,
    q: &CooccurrenceMatrix,
    corpus: &Corpus,
    eg: &EgParams,
    seed: u64,
    out: &Path,
) -> Result<SeedOutput> {
    let mut times = BTreeMap::new();
    let mut files = Vec::new();

    let t0 = Instant::now();
    let (anchors, params_json) = select_anchors(args, derived, seed)?;
    times.insert("select_ms".to_string(), ms(t0));

    let anchor_path = out.join(format!("anchors-seed{seed}.json"));
    write_anchor_json(&anchor_path, &anchors, seed, params_json, corpus.vocab())?;
    files.push(outputs::file_name(&anchor_path));

    let t0 = Instant::now();
    let qprime = row_normalize(q)?;
    let coeffs = recover_c(&qprime, &anchors, eg)?;
    let model = recover_a(q, &coeffs, &anchors, corpus.vocab_arc())?;
    times.insert("recover_ms".to_string(), ms(t0));
    if !coeffs.non_converged.is_empty() {
        eprintln!(
            "seed {seed}: {} of {} rows hit the EG iteration cap",
            coeffs.non_converged.len(),
            corpus.vocab_size()
        );
    }

    let model_path = out.join(format!("topics-seed{seed}.amat"));
    write_topic_model(&model_path, &model, seed, eg, &coeffs.non_converged)?;
    files.push(outputs::file_name(&model_path));

    let mut coherence = Vec::new();
    let t0 = Instant::now();
    for &h in &args.h_values {
        let params = CoherenceParams::new(h);
        let report = average_coherence(&model, corpus, &params)?;
        let tops: Vec<Vec<usize>> = (0..model.num_topics())
            .map(|t| top_words(&model, t, h))
            .collect::<snmf_topics::Result<_>>()?;
        let tsv_path = out.join(format!("coherence-seed{seed}-h{h}.tsv"));
        write_coherence_tsv(&tsv_path, &report, &tops, corpus.vocab())?;
        files.push(outputs::file_name(&tsv_path));
        coherence.push((h, report.average));
    }
    times.insert("coherence_ms".to_string(), ms(t0));

    Ok(SeedOutput {
        coherence,
        times,
        files,
    })
}

/// Exact synthetic mode: generates `Q = A R A^T`, runs the selected
/// method, recovers topics, and verifies the results against the
/// generator (anchor identity for projection-free FAW, column-matched L1
/// error for the recovered matrix).
fn run_synthetic(args: &PipelineArgs, spec: &str) -> Result<()> {
    let parts: Vec<usize> = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad --synthetic {spec:?}; expected vocab,topics"))?;
    if parts.len() != 2 {
        bail!("--synthetic wants vocab,topics");
    }
    let (v, k_true) = (parts[0], parts[1]);
    if args.k != k_true {
        bail!("-k {} must equal the synthetic topic count {k_true}", args.k);
    }

    let eg = args.eg.to_params();
    let vocab: Arc<Vec<String>> = Arc::new((0..v).map(|i| format!("syn{i:05}")).collect());

    #[derive(Serialize)]
    struct SynthCheck {
        seed: u64,
        anchors: Vec<usize>,
        anchors_exact: Option<bool>,
        column_l1: f64,
        l1_ok: bool,
    }
    let mut checks: Vec<SynthCheck> = Vec::new();

    for &seed in &args.seeds {
        let (model, q) = generate_synthetic(v, k_true, seed)?;
        let (anchors, _) = match args.method {
            MethodArg::Sc => {
                let graph = to_similarity_graph(&q)?;
                let params = SoftCliqueParams {
                    k: args.k,
                    max_iter: args.max_iter,
                    num_starts: args.num_starts,
                    seed,
                };
                (soft_clique(&graph, &params)?, ())
            }
            MethodArg::Faw => {
                let rows = row_normalize(&q)?;
                let params = FawParams {
                    k: args.k,
                    proj_dim: args.proj_dim,
                    seed,
                };
                (fast_anchor_words(&rows, &params)?, ())
            }
        };

        let recovered = recover_topics(&q, &anchors, Arc::clone(&vocab), &eg)?;
        let mut l1 = 0.0f64;
        for (col, &anchor) in anchors.indices.iter().enumerate() {
            if anchor < k_true {
                let err: f64 = recovered
                    .matrix()
                    .column(col)
                    .iter()
                    .zip(model.word_topic().column(anchor).iter())
                    .map(|(a, b)| (a - b).abs())
                    .sum();
                l1 = l1.max(err);
            } else {
                l1 = f64::INFINITY; // selected a non-anchor word
            }
        }

        let anchors_exact = if args.method == MethodArg::Faw && args.proj_dim == 0 {
            let mut got = anchors.indices.clone();
            got.sort_unstable();
            Some(got == model.true_anchors())
        } else {
            None
        };

        checks.push(SynthCheck {
            seed,
            anchors: anchors.indices.clone(),
            anchors_exact,
            column_l1: l1,
            l1_ok: l1 < 0.05,
        });
    }

    fs::create_dir_all(&args.out)?;
    fs::write(
        args.out.join("synthetic-report.json"),
        serde_json::to_vec_pretty(&serde_json::json!({
            "vocab": v,
            "topics": k_true,
            "method": args.method.name(),
            "proj_dim": args.proj_dim,
            "checks": checks,
        }))?,
    )?;

    let mut failures = Vec::new();
    for c in &checks {
        if c.anchors_exact == Some(false) {
            failures.push(format!("seed {}: anchors {:?} are not the true anchors", c.seed, c.anchors));
        }
        if !c.l1_ok {
            failures.push(format!("seed {}: column L1 error {}", c.seed, c.column_l1));
        }
        eprintln!(
            "seed {}: anchors {:?} exact={:?} column_l1={:.2e}",
            c.seed, c.anchors, c.anchors_exact, c.column_l1
        );
    }
    if !failures.is_empty() {
        bail!("synthetic recovery checks failed:\n{}", failures.join("\n"));
    }
    Ok(())
}
