//! The `benchmark` subcommand: times the anchor-selection stage only
//! (graph and row-normalized matrices are built once, outside the
//! timers), for both methods over a sweep of K.

use std::collections::BTreeMap;
use std::fs;
use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;

use snmf_topics::anchors::{fast_anchor_words, soft_clique, FawParams, SoftCliqueParams};
use snmf_topics::cooccurrence::{row_normalize, to_similarity_graph};

use crate::outputs::{write_manifest, Manifest};
use crate::stages::{self, ms};
use crate::BenchmarkArgs;

#[derive(Serialize, Clone)]
struct BenchmarkConfig {
    seeds: Vec<u64>,
    k_min: usize,
    k_max: usize,
    k_step: usize,
    proj_dim: usize,
    max_iter: usize,
    num_starts: Option<usize>,
}

#[derive(Serialize)]
struct MedianRow {
    k: usize,
    sc_median_ms: f64,
    faw_median_ms: f64,
}

pub fn run(args: &BenchmarkArgs) -> Result<()> {
    if args.seeds.is_empty() {
        bail!("--seeds must not be empty");
    }
    if args.k_step == 0 || args.k_min < 2 || args.k_max < args.k_min {
        bail!(
            "invalid K sweep {}..{} step {}",
            args.k_min,
            args.k_max,
            args.k_step
        );
    }
    fs::create_dir_all(&args.out)?;

    let prepared = stages::prepare(&args.corpus, &args.out)?;
    let q = &prepared.q;
    eprintln!(
        "corpus: {} docs, {} words; timing anchor selection only",
        prepared.corpus.num_docs(),
        prepared.corpus.vocab_size()
    );

    let graph = to_similarity_graph(q)?;
    let qprime = row_normalize(q)?;

    let ks: Vec<usize> = (args.k_min..=args.k_max).step_by(args.k_step).collect();
    let mut writer = csv::Writer::from_path(args.out.join("timings.csv"))?;
    writer.write_record(["k", "method", "seed", "millis"])?;

    let mut by_cell: BTreeMap<(usize, &'static str), Vec<f64>> = BTreeMap::new();
    for &k in &ks {
        for &seed in &args.seeds {
            let t0 = Instant::now();
            soft_clique(
                &graph,
                &SoftCliqueParams {
                    k,
                    max_iter: args.max_iter,
                    num_starts: args.num_starts,
                    seed,
                },
            )?;
            let sc_ms = ms(t0);
            writer.write_record([
                k.to_string(),
                "sc".to_string(),
                seed.to_string(),
                sc_ms.to_string(),
            ])?;
            by_cell.entry((k, "sc")).or_default().push(sc_ms);

            let t0 = Instant::now();
            fast_anchor_words(
                &qprime,
                &FawParams {
                    k,
                    proj_dim: args.proj_dim,
                    seed,
                },
            )?;
            let faw_ms = ms(t0);
            writer.write_record([
                k.to_string(),
                "faw".to_string(),
                seed.to_string(),
                faw_ms.to_string(),
            ])?;
            by_cell.entry((k, "faw")).or_default().push(faw_ms);
        }
    }
    writer.flush()?;

    let medians: Vec<MedianRow> = ks
        .iter()
        .map(|&k| MedianRow {
            k,
            sc_median_ms: median(&by_cell[&(k, "sc")]),
            faw_median_ms: median(&by_cell[&(k, "faw")]),
        })
        .collect();

    for row in &medians {
        eprintln!(
            "K = {:3}: SC median {:9.2} ms | FAW median {:9.2} ms",
            row.k, row.sc_median_ms, row.faw_median_ms
        );
    }

    fs::write(
        args.out.join("timing-summary.json"),
        serde_json::to_vec_pretty(&medians)?,
    )?;

    write_manifest(
        &args.out.join("run-manifest.json"),
        &Manifest {
            command: "benchmark".to_string(),
            config: BenchmarkConfig {
                seeds: args.seeds.clone(),
                k_min: args.k_min,
                k_max: args.k_max,
                k_step: args.k_step,
                proj_dim: args.proj_dim,
                max_iter: args.max_iter,
                num_starts: args.num_starts,
            },
            source: prepared.source,
            preprocess: prepared.preprocess,
            corpus_hash: prepared.corpus_hash,
            original: (prepared.original_docs, prepared.original_vocab),
            preprocessed: (prepared.corpus.num_docs(), prepared.corpus.vocab_size()),
            stage_times_ms: prepared.times.millis,
            seed_times_ms: BTreeMap::new(),
            outputs: vec!["timings.csv".into(), "timing-summary.json".into()],
            errors: Vec::new(),
        },
    )?;
    Ok(())
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
