//! Shared stage machinery: corpus loading (files or sampled), resolved
//! preprocessing configs with named presets, and content-hash-keyed
//! caching of the preprocessed corpus and of Q.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use snmf_topics::cooccurrence::{build_q, CooccurrenceMatrix};
use snmf_topics::corpus::{english_stopwords, file_sha256, Corpus, PreprocessConfig};
use snmf_topics::matrix_io;
use snmf_topics::synth::{sample_topic_corpus, SynthCorpusParams};

use crate::CorpusArgs;

/// Per-corpus document-frequency cutoffs; high-frequency removal is 80%
/// everywhere.
const PRESETS: &[(&str, usize)] = &[
    ("nips", 50),
    ("kos", 60),
    ("enron", 200),
    ("20news", 150),
];

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedPreprocess {
    pub preset: Option<String>,
    pub df_cutoff: usize,
    pub high_freq_fraction: f64,
    pub stopword_source: String,
    pub stopword_count: usize,
}

impl ResolvedPreprocess {
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("serializable"));
        hex(&h.finalize())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn resolve_preprocess(args: &CorpusArgs) -> Result<(PreprocessConfig, ResolvedPreprocess)> {
    let preset_cutoff = match &args.preset {
        Some(name) => Some(
            PRESETS
                .iter()
                .find(|(p, _)| p == name)
                .map(|&(_, c)| c)
                .with_context(|| {
                    format!(
                        "unknown preset {name:?}; available: {}",
                        PRESETS.iter().map(|(p, _)| *p).collect::<Vec<_>>().join(", ")
                    )
                })?,
        ),
        None => None,
    };
    let df_cutoff = args.df_cutoff.or(preset_cutoff).unwrap_or(0);
    let high_freq_fraction = args.high_freq.unwrap_or(0.8);

    let (stopwords, source) = match args.stopwords.as_deref() {
        Some("none") => (Default::default(), "none".to_string()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading stopword list {path}"))?;
            let words: std::collections::HashSet<String> = text
                .lines()
                .map(|l| l.trim().to_string())
                .filter(|l| !l.is_empty())
                .collect();
            (words, path.to_string())
        }
        None => (english_stopwords(), "bundled-english".to_string()),
    };

    let summary = ResolvedPreprocess {
        preset: args.preset.clone(),
        df_cutoff,
        high_freq_fraction,
        stopword_source: source,
        stopword_count: stopwords.len(),
    };
    let config = PreprocessConfig::new(stopwords, df_cutoff, high_freq_fraction)?;
    Ok((config, summary))
}

/// Where the documents came from, for the manifest.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusSource {
    Files {
        docword: PathBuf,
        vocab: PathBuf,
        docword_sha256: String,
        vocab_sha256: String,
    },
    Sampled {
        num_docs: usize,
        vocab_size: usize,
        num_topics: usize,
        seed: u64,
    },
}

impl CorpusSource {
    fn cache_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("serializable"));
        hex(&h.finalize())
    }
}

pub fn load_input_corpus(args: &CorpusArgs) -> Result<(Corpus, CorpusSource)> {
    if let Some(spec) = &args.synth_corpus {
        let parts: Vec<usize> = spec
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad --synth-corpus {spec:?}; expected docs,vocab,topics"))?;
        if parts.len() != 3 {
            bail!("--synth-corpus wants docs,vocab,topics");
        }
        let params = SynthCorpusParams {
            num_docs: parts[0],
            vocab_size: parts[1],
            num_topics: parts[2],
            seed: args.synth_seed,
            ..Default::default()
        };
        let corpus = sample_topic_corpus(&params)?;
        let source = CorpusSource::Sampled {
            num_docs: parts[0],
            vocab_size: parts[1],
            num_topics: parts[2],
            seed: args.synth_seed,
        };
        return Ok((corpus, source));
    }

    let docword = args
        .corpus
        .clone()
        .context("--corpus is required unless --synth-corpus is given")?;
    let vocab = args
        .vocab
        .clone()
        .context("--vocab is required unless --synth-corpus is given")?;
    let source = CorpusSource::Files {
        docword_sha256: file_sha256(&docword)?,
        vocab_sha256: file_sha256(&vocab)?,
        docword: docword.clone(),
        vocab: vocab.clone(),
    };
    let corpus = Corpus::load_uci_paths(&docword, &vocab)?;
    Ok((corpus, source))
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTimes {
    pub millis: BTreeMap<String, f64>,
}

/// Loaded, preprocessed, co-occurrence-ready inputs plus provenance.
pub struct Prepared {
    pub corpus: Corpus,
    pub q: CooccurrenceMatrix,
    pub source: CorpusSource,
    pub preprocess: ResolvedPreprocess,
    pub original_docs: usize,
    pub original_vocab: usize,
    pub times: StageTimes,
    pub corpus_hash: String,
}

/// Runs load -> preprocess -> Q with caching under `<out>/cache`. The
/// preprocessed corpus is cached keyed by (source, config); Q is cached
/// keyed by the preprocessed corpus content hash.
pub fn prepare(args: &CorpusArgs, out: &Path) -> Result<Prepared> {
    let cache = out.join("cache");
    fs::create_dir_all(&cache)?;
    let (config, preprocess) = resolve_preprocess(args)?;

    let mut times = BTreeMap::new();

    let t0 = Instant::now();
    let (raw, source) = load_input_corpus(args)?;
    times.insert("load_ms".to_string(), ms(t0));
    let original_docs = raw.num_docs();
    let original_vocab = raw.vocab_size();

    let pre_key = {
        let mut h = Sha256::new();
        h.update(source.cache_id());
        h.update(preprocess.digest());
        hex(&h.finalize())[..16].to_string()
    };
    let pre_dir = cache.join(format!("preprocessed-{pre_key}"));
    let t0 = Instant::now();
    let corpus = if pre_dir.join("docword.txt.gz").exists() {
        let c = Corpus::load_uci_paths(&pre_dir.join("docword.txt.gz"), &pre_dir.join("vocab.txt"))?;
        times.insert("preprocess_cached".to_string(), 1.0);
        c
    } else {
        let c = raw.preprocess(&config)?;
        fs::create_dir_all(&pre_dir)?;
        let dw = BufWriter::new(flate2::write::GzEncoder::new(
            fs::File::create(pre_dir.join("docword.txt.gz"))?,
            flate2::Compression::fast(),
        ));
        let vb = BufWriter::new(fs::File::create(pre_dir.join("vocab.txt"))?);
        c.write_uci(dw, vb)?;
        let meta = serde_json::json!({
            "source": source,
            "preprocess": preprocess,
            "original": {"docs": original_docs, "vocab": original_vocab},
            "result": {"docs": c.num_docs(), "vocab": c.vocab_size()},
        });
        fs::write(pre_dir.join("meta.json"), serde_json::to_vec_pretty(&meta)?)?;
        c
    };
    times.insert("preprocess_ms".to_string(), ms(t0));

    let corpus_hash = corpus.content_hash();
    let q_path = cache.join(format!("q-{}.qmat", &corpus_hash[..16]));
    let t0 = Instant::now();
    let q = if q_path.exists() {
        let m = matrix_io::read_matrix(&q_path)?;
        times.insert("build_q_cached".to_string(), 1.0);
        CooccurrenceMatrix::from_matrix(m)
    } else {
        let q = build_q(&corpus)?;
        matrix_io::write_matrix_with_sidecar(
            &q_path,
            q.matrix(),
            &serde_json::json!({
                "matrix": "q",
                "vocab_size": corpus.vocab_size(),
                "corpus_hash": corpus_hash,
                "preprocess": preprocess,
            }),
        )?;
        q
    };
    times.insert("build_q_ms".to_string(), ms(t0));

    Ok(Prepared {
        corpus,
        q,
        source,
        preprocess,
        original_docs,
        original_vocab,
        times: StageTimes { millis: times },
        corpus_hash,
    })
}

pub fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}
