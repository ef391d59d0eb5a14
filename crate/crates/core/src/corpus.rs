//! Bag-of-words corpora in the UCI `docword`/`vocab` format, plus the
//! preprocessing (stopword, document-frequency and high-frequency filters)
//! applied before any co-occurrence statistics are computed.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A corpus of `M` documents over a vocabulary of `V` words. Documents are
/// sparse count vectors sorted by word index; empty documents are never
/// stored. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<Vec<(usize, u32)>>,
    vocab: Arc<Vec<String>>,
    doc_tokens: Vec<u64>,
}

impl Corpus {
    /// Builds a corpus from raw documents, validating the type invariants:
    /// indices in range, counts positive, no empty documents, vocabulary
    /// entries unique and non-empty.
    pub fn from_docs(docs: Vec<Vec<(usize, u32)>>, vocab: Vec<String>) -> Result<Self> {
        let v = vocab.len();
        let mut seen = HashSet::with_capacity(v);
        for word in &vocab {
            if word.is_empty() {
                return Err(Error::Format("empty vocabulary entry".into()));
            }
            if !seen.insert(word.as_str()) {
                return Err(Error::Format(format!("duplicate vocabulary entry {word:?}")));
            }
        }
        let mut clean = Vec::with_capacity(docs.len());
        let mut doc_tokens = Vec::with_capacity(docs.len());
        for mut doc in docs {
            if doc.is_empty() {
                continue;
            }
            doc.sort_unstable_by_key(|&(w, _)| w);
            let mut total = 0u64;
            for i in 0..doc.len() {
                let (w, c) = doc[i];
                if w >= v {
                    return Err(Error::WordOutOfRange { word: w, vocab: v });
                }
                if c == 0 {
                    return Err(Error::Format(format!("zero count for word {w}")));
                }
                if i > 0 && doc[i - 1].0 == w {
                    return Err(Error::Format(format!("duplicate word {w} in document")));
                }
                total += u64::from(c);
            }
            doc_tokens.push(total);
            clean.push(doc);
        }
        Ok(Corpus {
            docs: clean,
            vocab: Arc::new(vocab),
            doc_tokens,
        })
    }

    /// Number of documents `M`.
    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    /// Vocabulary size `V`.
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn docs(&self) -> &[Vec<(usize, u32)>] {
        &self.docs
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    /// Shared handle to the vocabulary, for structures that outlive the corpus.
    pub fn vocab_arc(&self) -> Arc<Vec<String>> {
        Arc::clone(&self.vocab)
    }

    /// Cached token totals `n_d` per document.
    pub fn doc_tokens(&self) -> &[u64] {
        &self.doc_tokens
    }

    /// Number of documents containing `word` at least once.
    pub fn doc_frequency(&self, word: usize) -> Result<usize> {
        if word >= self.vocab.len() {
            return Err(Error::WordOutOfRange {
                word,
                vocab: self.vocab.len(),
            });
        }
        Ok(self
            .docs
            .iter()
            .filter(|doc| doc.binary_search_by_key(&word, |&(w, _)| w).is_ok())
            .count())
    }

    /// Document frequencies for every word in one pass.
    pub fn doc_frequencies(&self) -> Vec<usize> {
        let mut df = vec![0usize; self.vocab.len()];
        for doc in &self.docs {
            for &(w, _) in doc {
                df[w] += 1;
            }
        }
        df
    }

    /// Loads the UCI bag-of-words format: three integer header lines `D`,
    /// `W`, `NNZ`, then `NNZ` lines `docID wordID count` with 1-based ids.
    /// Duplicate (doc, word) triples are summed; documents without any
    /// triple are dropped, so the result has `M <= D` documents.
    pub fn load_uci<R1: BufRead, R2: BufRead>(docword: R1, vocab: R2) -> Result<Self> {
        let mut lines = docword.lines();
        let mut header = |name: &str| -> Result<usize> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing header line {name}")))??;
            line.trim()
                .parse::<usize>()
                .map_err(|_| Error::Format(format!("header line {name} is not an integer: {line:?}")))
        };
        let d = header("D")?;
        let w = header("W")?;
        let nnz = header("NNZ")?;

        let mut docs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); d];
        let mut found = 0usize;
        for (offset, line) in lines.enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = 4 + offset;
            found += 1;
            if found > nnz {
                return Err(Error::TripleCountMismatch {
                    expected: nnz,
                    found,
                });
            }
            let mut it = line.split_whitespace();
            let mut field = |name: &str| -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Format(format!("line {lineno}: missing {name}")))?
                    .parse::<usize>()
                    .map_err(|_| Error::Format(format!("line {lineno}: bad {name}")))
            };
            let doc_id = field("docID")?;
            let word_id = field("wordID")?;
            let count = field("count")?;
            if it.next().is_some() {
                return Err(Error::Format(format!("line {lineno}: trailing fields")));
            }
            if doc_id == 0 || doc_id > d {
                return Err(Error::IdOutOfRange {
                    line: lineno,
                    what: "docID",
                    id: doc_id,
                    max: d,
                });
            }
            if word_id == 0 || word_id > w {
                return Err(Error::IdOutOfRange {
                    line: lineno,
                    what: "wordID",
                    id: word_id,
                    max: w,
                });
            }
            if count == 0 {
                return Err(Error::Format(format!("line {lineno}: zero count")));
            }
            let count = u32::try_from(count)
                .map_err(|_| Error::Format(format!("line {lineno}: count too large")))?;
            docs[doc_id - 1].push((word_id - 1, count));
        }
        if found != nnz {
            return Err(Error::TripleCountMismatch {
                expected: nnz,
                found,
            });
        }

        let mut merged = Vec::with_capacity(d);
        for mut doc in docs {
            doc.sort_unstable_by_key(|&(w, _)| w);
            let mut out: Vec<(usize, u32)> = Vec::with_capacity(doc.len());
            for (w, c) in doc {
                match out.last_mut() {
                    Some(last) if last.0 == w => last.1 += c,
                    _ => out.push((w, c)),
                }
            }
            merged.push(out);
        }

        let words: Vec<String> = vocab
            .lines()
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .map(|l| l.trim().to_string())
            .collect();
        if words.len() != w {
            return Err(Error::Format(format!(
                "vocabulary has {} entries, header declares {w}",
                words.len()
            )));
        }
        Self::from_docs(merged, words)
    }

    /// Opens `docword` and `vocab` files by path; `.gz` inputs are
    /// decompressed transparently.
    pub fn load_uci_paths(docword: &Path, vocab: &Path) -> Result<Self> {
        Self::load_uci(open_maybe_gz(docword)?, open_maybe_gz(vocab)?)
    }

    /// Writes the corpus back out in UCI format (1-based ids, doc-major
    /// triples). Reloading the output yields an equal corpus.
    pub fn write_uci<W1: Write, W2: Write>(&self, mut docword: W1, mut vocab: W2) -> Result<()> {
        let nnz: usize = self.docs.iter().map(Vec::len).sum();
        writeln!(docword, "{}", self.docs.len())?;
        writeln!(docword, "{}", self.vocab.len())?;
        writeln!(docword, "{nnz}")?;
        for (d, doc) in self.docs.iter().enumerate() {
            for &(w, c) in doc {
                writeln!(docword, "{} {} {}", d + 1, w + 1, c)?;
            }
        }
        for word in self.vocab.iter() {
            writeln!(vocab, "{word}")?;
        }
        Ok(())
    }

    /// Applies the preprocessing filters: drops stopwords, words with
    /// document frequency below `df_cutoff`, and words appearing in more
    /// than `high_freq_fraction * M` documents; documents left empty are
    /// dropped. The filter is iterated until the corpus is a fixed point,
    /// so applying the same config twice is a no-op (dropping documents
    /// lowers `M`, which can newly expose high-frequency words).
    pub fn preprocess(&self, cfg: &PreprocessConfig) -> Result<Corpus> {
        cfg.validate()?;
        let mut current = self.clone();
        loop {
            let m = current.num_docs();
            let df = current.doc_frequencies();
            let hf_limit = cfg.high_freq_fraction * m as f64;
            let keep: Vec<bool> = current
                .vocab
                .iter()
                .enumerate()
                .map(|(w, word)| {
                    !cfg.stopwords.contains(word.as_str())
                        && df[w] >= cfg.df_cutoff
                        && (df[w] as f64) <= hf_limit
                })
                .collect();
            if keep.iter().all(|&k| k) {
                return Ok(current);
            }

            let mut remap = vec![usize::MAX; current.vocab.len()];
            let mut vocab = Vec::new();
            for (w, word) in current.vocab.iter().enumerate() {
                if keep[w] {
                    remap[w] = vocab.len();
                    vocab.push(word.clone());
                }
            }
            if vocab.is_empty() {
                return Err(Error::EmptyVocabulary);
            }

            let docs: Vec<Vec<(usize, u32)>> = current
                .docs
                .iter()
                .map(|doc| {
                    doc.iter()
                        .filter(|&&(w, _)| keep[w])
                        .map(|&(w, c)| (remap[w], c))
                        .collect::<Vec<_>>()
                })
                .filter(|doc: &Vec<(usize, u32)>| !doc.is_empty())
                .collect();
            current = Corpus::from_docs(docs, vocab)?;
        }
    }

    /// Content hash of the corpus (documents and vocabulary), used to key
    /// cached artifacts.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for word in self.vocab.iter() {
            h.update(word.as_bytes());
            h.update([0u8]);
        }
        for doc in &self.docs {
            for &(w, c) in doc {
                h.update((w as u64).to_le_bytes());
                h.update(c.to_le_bytes());
            }
            h.update(u64::MAX.to_le_bytes());
        }
        hex_digest(&h.finalize())
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn open_maybe_gz(path: &Path) -> Result<Box<dyn BufRead>> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(BufReader::new(flate2::read::GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Hashes raw input files (pre-parse) for run manifests.
pub fn file_sha256(path: &Path) -> Result<String> {
    let mut file = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex_digest(&hasher.finalize()))
}

/// Configuration for [`Corpus::preprocess`].
#[derive(Debug, Clone)]
pub struct PreprocessConfig {
    /// Words removed outright.
    pub stopwords: HashSet<String>,
    /// Minimum document frequency a word needs to be kept.
    pub df_cutoff: usize,
    /// Words in more than this fraction of documents are removed; in (0, 1].
    pub high_freq_fraction: f64,
}

impl PreprocessConfig {
    pub fn new(stopwords: HashSet<String>, df_cutoff: usize, high_freq_fraction: f64) -> Result<Self> {
        let cfg = PreprocessConfig {
            stopwords,
            df_cutoff,
            high_freq_fraction,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Identity configuration: keeps every word.
    pub fn keep_all() -> Self {
        PreprocessConfig {
            stopwords: HashSet::new(),
            df_cutoff: 0,
            high_freq_fraction: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.high_freq_fraction > 0.0 && self.high_freq_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "high_freq_fraction must be in (0, 1], got {}",
                self.high_freq_fraction
            )));
        }
        Ok(())
    }
}

/// The bundled standard English stopword list (the 500-odd word list
/// shipped with common topic-modeling toolkits).
pub fn english_stopwords() -> HashSet<String> {
    include_str!("assets/stopwords_en.txt")
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect()
}
