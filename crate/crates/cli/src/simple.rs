//! The `preprocess` and `build-q` subcommands: run the early stages and
//! leave their cached artifacts in the output directory.

use std::fs;

use anyhow::Result;

use crate::stages;
use crate::SimpleArgs;

pub fn run_preprocess(args: &SimpleArgs) -> Result<()> {
    fs::create_dir_all(&args.out)?;
    let (config, summary) = stages::resolve_preprocess(&args.corpus)?;
    let (raw, source) = stages::load_input_corpus(&args.corpus)?;
    let processed = raw.preprocess(&config)?;
    eprintln!(
        "{} docs x {} words -> {} docs x {} words",
        raw.num_docs(),
        raw.vocab_size(),
        processed.num_docs(),
        processed.vocab_size()
    );

    let dw = fs::File::create(args.out.join("docword.txt.gz"))?;
    let dw = flate2::write::GzEncoder::new(dw, flate2::Compression::fast());
    let vb = fs::File::create(args.out.join("vocab.txt"))?;
    processed.write_uci(dw, vb)?;
    fs::write(
        args.out.join("meta.json"),
        serde_json::to_vec_pretty(&serde_json::json!({
            "source": source,
            "preprocess": summary,
            "original": {"docs": raw.num_docs(), "vocab": raw.vocab_size()},
            "result": {"docs": processed.num_docs(), "vocab": processed.vocab_size()},
            "corpus_hash": processed.content_hash(),
        }))?,
    )?;
    Ok(())
}

pub fn run_build_q(args: &SimpleArgs) -> Result<()> {
    let prepared = stages::prepare(&args.corpus, &args.out)?;
    eprintln!(
        "Q is {v} x {v} with total mass {mass:.9}; cached under {}",
        args.out.join("cache").display(),
        v = prepared.corpus.vocab_size(),
        mass = prepared.q.total_mass(),
    );
    Ok(())
}
