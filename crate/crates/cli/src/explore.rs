//! The `explore` subcommand: runs the clique search under many seeds,
//! groups the distinct anchor sets it finds, recovers topics for each,
//! and reports clique weights, coherence, top words, and pairwise
//! anchor-set overlap.

use std::collections::BTreeMap;
use std::fs;

use anyhow::{bail, Result};
use serde::Serialize;

use snmf_topics::anchors::{soft_clique, SoftCliqueParams};
use snmf_topics::coherence::{average_coherence, top_words, CoherenceParams};
use snmf_topics::cooccurrence::to_similarity_graph;
use snmf_topics::recovery::{recover_topics, EgParams};

use crate::outputs::{write_manifest, Manifest};
use crate::stages;
use crate::ExploreArgs;

#[derive(Serialize, Clone)]
struct ExploreConfig {
    k: usize,
    seeds: Vec<u64>,
    h_values: Vec<usize>,
    max_iter: usize,
    num_starts: Option<usize>,
    eg: EgParams,
}

#[derive(Serialize)]
struct AnchorGroup {
    indices: Vec<usize>,
    words: Vec<String>,
    seeds: Vec<u64>,
    total_weight: f64,
    coherence: BTreeMap<usize, f64>,
    top_words: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ExploreReport {
    rounds: usize,
    distinct_sets: usize,
    groups: Vec<AnchorGroup>,
    /// Jaccard overlap between distinct anchor sets, row-major upper
    /// triangle (i < j).
    jaccard: Vec<JaccardEntry>,
}

#[derive(Serialize)]
struct JaccardEntry {
    a: usize,
    b: usize,
    jaccard: f64,
}

pub fn run(args: &ExploreArgs) -> Result<()> {
    if args.k < 2 {
        bail!("-k must be at least 2");
    }
    let seeds: Vec<u64> = match &args.seeds {
        Some(s) if !s.is_empty() => s.clone(),
        Some(_) => bail!("--seeds must not be empty"),
        None => (args.seed_base..args.seed_base + args.rounds).collect(),
    };
    if seeds.is_empty() {
        bail!("need at least one round");
    }
    fs::create_dir_all(&args.out)?;

    let prepared = stages::prepare(&args.corpus, &args.out)?;
    let corpus = &prepared.corpus;
    let q = &prepared.q;
    let graph = to_similarity_graph(q)?;
    let eg = args.eg.to_params();

    // group rounds by the anchor set they land on
    let mut groups: BTreeMap<Vec<usize>, (Vec<u64>, f64)> = BTreeMap::new();
    for &seed in &seeds {
        let params = SoftCliqueParams {
            k: args.k,
            max_iter: args.max_iter,
            num_starts: args.num_starts,
            seed,
        };
        let set = soft_clique(&graph, &params)?;
        let entry = groups
            .entry(set.indices.clone())
            .or_insert_with(|| (Vec::new(), set.total_weight.unwrap_or(f64::NAN)));
        entry.0.push(seed);
    }

    let mut report_groups = Vec::new();
    for (indices, (group_seeds, weight)) in &groups {
        let anchors = snmf_topics::AnchorSet {
            indices: indices.clone(),
            method: snmf_topics::AnchorMethod::SoftClique,
            total_weight: Some(*weight),
        };
        let model = recover_topics(q, &anchors, corpus.vocab_arc(), &eg)?;
        let mut coherence = BTreeMap::new();
        for &h in &args.h_values {
            let rep = average_coherence(&model, corpus, &CoherenceParams::new(h))?;
            coherence.insert(h, rep.average);
        }
        let tops: Vec<Vec<String>> = (0..model.num_topics())
            .map(|t| {
                top_words(&model, t, 10.min(corpus.vocab_size())).map(|ws| {
                    ws.into_iter()
                        .map(|w| corpus.vocab()[w].clone())
                        .collect::<Vec<_>>()
                })
            })
            .collect::<snmf_topics::Result<_>>()?;
        report_groups.push(AnchorGroup {
            indices: indices.clone(),
            words: indices.iter().map(|&i| corpus.vocab()[i].clone()).collect(),
            seeds: group_seeds.clone(),
            total_weight: *weight,
            coherence,
            top_words: tops,
        });
    }

    let mut jaccard = Vec::new();
    for i in 0..report_groups.len() {
        for j in (i + 1)..report_groups.len() {
            let a: std::collections::BTreeSet<usize> =
                report_groups[i].indices.iter().copied().collect();
            let b: std::collections::BTreeSet<usize> =
                report_groups[j].indices.iter().copied().collect();
            let inter = a.intersection(&b).count() as f64;
            let union = a.union(&b).count() as f64;
            jaccard.push(JaccardEntry {
                a: i,
                b: j,
                jaccard: inter / union,
            });
        }
    }

    let report = ExploreReport {
        rounds: seeds.len(),
        distinct_sets: report_groups.len(),
        groups: report_groups,
        jaccard,
    };
    fs::write(
        args.out.join("explore-report.json"),
        serde_json::to_vec_pretty(&report)?,
    )?;

    // flat TSV of top words per (group, topic)
    let mut tsv = String::from("group\ttopic\tcoherence_h10\ttop_words\n");
    for (gi, g) in report.groups.iter().enumerate() {
        for (t, words) in g.top_words.iter().enumerate() {
            let c10 = g.coherence.get(&10).copied().unwrap_or(f64::NAN);
            tsv.push_str(&format!("{gi}\t{t}\t{c10}\t{}\n", words.join(",")));
        }
    }
    fs::write(args.out.join("explore-topics.tsv"), tsv)?;

    eprintln!(
        "{} rounds found {} distinct anchor sets",
        report.rounds, report.distinct_sets
    );

    write_manifest(
        &args.out.join("run-manifest.json"),
        &Manifest {
            command: "explore".to_string(),
            config: ExploreConfig {
                k: args.k,
                seeds,
                h_values: args.h_values.clone(),
                max_iter: args.max_iter,
                num_starts: args.num_starts,
                eg,
            },
            source: prepared.source,
            preprocess: prepared.preprocess,
            corpus_hash: prepared.corpus_hash,
            original: (prepared.original_docs, prepared.original_vocab),
            preprocessed: (corpus.num_docs(), corpus.vocab_size()),
            stage_times_ms: prepared.times.millis,
            seed_times_ms: BTreeMap::new(),
            outputs: vec!["explore-report.json".into(), "explore-topics.tsv".into()],
            errors: Vec::new(),
        },
    )?;
    Ok(())
}
