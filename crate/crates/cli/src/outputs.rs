//! Serialized artifacts: anchor JSON, topic-model container, coherence
//! TSV/JSON, run manifests. Anchor JSON and coherence TSV are
//! byte-reproducible for a fixed config and seed: no timestamps, stable
//! field order, shortest-round-trip float formatting.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::Serialize;

use snmf_topics::anchors::{AnchorMethod, AnchorSet};
use snmf_topics::coherence::CoherenceReport;
use snmf_topics::matrix_io;
use snmf_topics::recovery::TopicModel;

pub fn method_name(m: AnchorMethod) -> &'static str {
    match m {
        AnchorMethod::SoftClique => "soft_clique",
        AnchorMethod::FastAnchorWords => "fast_anchor_words",
    }
}

#[derive(Serialize)]
struct AnchorFile<'a> {
    method: &'a str,
    seed: u64,
    k: usize,
    params: serde_json::Value,
    indices: &'a [usize],
    words: Vec<&'a str>,
    total_weight: Option<f64>,
}

pub fn write_anchor_json(
    path: &Path,
    set: &AnchorSet,
    seed: u64,
    params: serde_json::Value,
    vocab: &[String],
) -> Result<()> {
    let file = AnchorFile {
        method: method_name(set.method),
        seed,
        k: set.k(),
        params,
        indices: &set.indices,
        words: set.indices.iter().map(|&i| vocab[i].as_str()).collect(),
        total_weight: set.total_weight,
    };
    fs::write(path, serde_json::to_vec_pretty(&file)?)?;
    Ok(())
}

/// Writes the word-topic matrix in the binary container plus a JSON
/// sidecar with the anchors and solver diagnostics.
pub fn write_topic_model(
    path: &Path,
    model: &TopicModel,
    seed: u64,
    eg: &snmf_topics::EgParams,
    non_converged: &[usize],
) -> Result<()> {
    matrix_io::write_matrix_with_sidecar(
        path,
        model.matrix(),
        &serde_json::json!({
            "matrix": "word_topic",
            "seed": seed,
            "method": method_name(model.anchors.method),
            "anchors": model.anchors.indices,
            "anchor_words": model
                .anchors
                .indices
                .iter()
                .map(|&i| model.vocab[i].as_str())
                .collect::<Vec<_>>(),
            "eg_params": eg,
            "non_converged_rows": non_converged,
        }),
    )?;
    Ok(())
}

/// One row per topic: index, score, comma-joined top words.
pub fn write_coherence_tsv(
    path: &Path,
    report: &CoherenceReport,
    tops: &[Vec<usize>],
    vocab: &[String],
) -> Result<()> {
    let mut out = String::new();
    out.push_str("topic\tcoherence\ttop_words\n");
    for (topic, (score, words)) in report.per_topic.iter().zip(tops).enumerate() {
        let names: Vec<&str> = words.iter().map(|&w| vocab[w].as_str()).collect();
        out.push_str(&format!("{topic}\t{score}\t{}\n", names.join(",")));
    }
    out.push_str(&format!("average\t{}\t\n", report.average));
    fs::write(path, out)?;
    Ok(())
}

/// Per-H coherence summary across seeds.
#[derive(Serialize, Default)]
pub struct CoherenceSummary {
    /// h -> seed -> average coherence
    pub per_seed: BTreeMap<usize, BTreeMap<u64, f64>>,
    /// h -> mean over seeds
    pub mean: BTreeMap<usize, f64>,
}

impl CoherenceSummary {
    pub fn insert(&mut self, h: usize, seed: u64, average: f64) {
        self.per_seed.entry(h).or_default().insert(seed, average);
    }

    pub fn finalize(&mut self) {
        self.mean = self
            .per_seed
            .iter()
            .map(|(&h, seeds)| {
                let vals: Vec<f64> = seeds.values().copied().collect();
                (h, vals.iter().sum::<f64>() / vals.len() as f64)
            })
            .collect();
    }
}

#[derive(Serialize)]
pub struct SeedError {
    pub seed: u64,
    pub stage: String,
    pub message: String,
}

/// Run manifest: everything needed to reproduce the outputs (config,
/// seeds, corpus hash) plus wall-times and any per-seed failures.
#[derive(Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: String,
    pub config: C,
    pub source: crate::stages::CorpusSource,
    pub preprocess: crate::stages::ResolvedPreprocess,
    pub corpus_hash: String,
    pub original: (usize, usize),
    pub preprocessed: (usize, usize),
    pub stage_times_ms: BTreeMap<String, f64>,
    pub seed_times_ms: BTreeMap<u64, BTreeMap<String, f64>>,
    pub outputs: Vec<String>,
    pub errors: Vec<SeedError>,
}

pub fn write_manifest<C: Serialize>(path: &Path, manifest: &Manifest<C>) -> Result<()> {
    fs::write(path, serde_json::to_vec_pretty(manifest)?)?;
    Ok(())
}

pub fn file_name(path: &PathBuf) -> String {
    path.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default()
}
