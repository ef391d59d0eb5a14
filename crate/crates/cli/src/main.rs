//! `snmf` — anchor-word topic modeling from bag-of-words corpora.
//!
//! Subcommands: `pipeline` (end-to-end topic discovery and coherence),
//! `benchmark` (anchor-selection timing sweep), `explore` (repeated
//! clique search across seeds), `preprocess` and `build-q` (cached stage
//! outputs).

mod benchmark;
mod explore;
mod outputs;
mod pipeline;
mod simple;
mod stages;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "snmf", version, about = "Anchor-word topic modeling via separable NMF")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: preprocess, build Q, select anchors,
    /// recover topics, score coherence.
    Pipeline(PipelineArgs),
    /// Time anchor selection for both methods over a sweep of K.
    Benchmark(BenchmarkArgs),
    /// Run the clique search across many seeds and compare the anchor
    /// sets it finds.
    Explore(ExploreArgs),
    /// Preprocess a corpus and cache the result.
    Preprocess(SimpleArgs),
    /// Build and cache the co-occurrence matrix.
    BuildQ(SimpleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// SoftClique: minimum-edge-weight clique search
    Sc,
    /// FastAnchorWords: convex-hull farthest point
    Faw,
}

impl MethodArg {
    pub fn name(self) -> &'static str {
        match self {
            MethodArg::Sc => "sc",
            MethodArg::Faw => "faw",
        }
    }
}

/// Corpus source and preprocessing flags shared by all subcommands.
#[derive(Args, Clone)]
pub struct CorpusArgs {
    /// UCI docword file (plain or .gz)
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// UCI vocab file (plain or .gz)
    #[arg(long)]
    pub vocab: Option<PathBuf>,

    /// Named preprocessing preset: kos, nips, enron, 20news
    #[arg(long)]
    pub preset: Option<String>,

    /// Minimum document frequency (overrides preset)
    #[arg(long)]
    pub df_cutoff: Option<usize>,

    /// Remove words in more than this fraction of documents
    #[arg(long)]
    pub high_freq: Option<f64>,

    /// Stopword list file, or "none"; defaults to the bundled English list
    #[arg(long)]
    pub stopwords: Option<String>,

    /// Sample a synthetic corpus "docs,vocab,topics" instead of reading files
    #[arg(long)]
    pub synth_corpus: Option<String>,

    /// Seed for the synthetic corpus sampler
    #[arg(long, default_value_t = 0)]
    pub synth_seed: u64,
}

/// Exponentiated-gradient settings shared by recovery-bearing commands.
#[derive(Args, Clone)]
pub struct EgArgs {
    /// Initial EG learning rate
    #[arg(long, default_value_t = 50.0)]
    pub eg_step: f64,

    /// EG iteration cap per row
    #[arg(long, default_value_t = 500)]
    pub eg_iter: usize,

    /// EG duality-gap tolerance
    #[arg(long, default_value_t = 1e-7)]
    pub eg_tol: f64,
}

impl EgArgs {
    pub fn to_params(&self) -> snmf_topics::EgParams {
        snmf_topics::EgParams {
            step_size: self.eg_step,
            max_iter: self.eg_iter,
            tol: self.eg_tol,
        }
    }
}

#[derive(Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Anchor selection method
    #[arg(long, value_enum, default_value_t = MethodArg::Sc)]
    pub method: MethodArg,

    /// Number of topics
    #[arg(short, long, default_value_t = 100)]
    pub k: usize,

    /// Selection seeds, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub seeds: Vec<u64>,

    /// Coherence top-word counts, comma separated
    #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
    pub h_values: Vec<usize>,

    /// FAW random-projection dimension (0 disables projection)
    #[arg(long, default_value_t = 1000)]
    pub proj_dim: usize,

    /// SoftClique swap-descent iteration cap
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    /// SoftClique greedy start count (default: ceil(V/K))
    #[arg(long)]
    pub num_starts: Option<usize>,

    #[command(flatten)]
    pub eg: EgArgs,

    /// Run on an exact synthetic instance "vocab,topics" and verify
    /// recovery instead of reading a corpus
    #[arg(long)]
    pub synthetic: Option<String>,

    /// Run seeds concurrently (timings become unreliable)
    #[arg(long)]
    pub parallel_seeds: bool,

    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Selection seeds, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub seeds: Vec<u64>,

    #[arg(long, default_value_t = 10)]
    pub k_min: usize,

    #[arg(long, default_value_t = 100)]
    pub k_max: usize,

    #[arg(long, default_value_t = 10)]
    pub k_step: usize,

    /// FAW random-projection dimension (0 disables projection)
    #[arg(long, default_value_t = 1000)]
    pub proj_dim: usize,

    /// SoftClique swap-descent iteration cap
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    /// SoftClique greedy start count (default: ceil(V/K))
    #[arg(long)]
    pub num_starts: Option<usize>,

    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ExploreArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Number of topics
    #[arg(short, long, default_value_t = 5)]
    pub k: usize,

    /// Number of seeded rounds
    #[arg(long, default_value_t = 100)]
    pub rounds: u64,

    /// First seed; rounds use seed_base..seed_base+rounds
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,

    /// Explicit seeds (overrides --rounds/--seed-base)
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,

    /// Coherence top-word counts
    #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
    pub h_values: Vec<usize>,

    /// SoftClique swap-descent iteration cap
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,

    /// SoftClique greedy start count (default: ceil(V/K))
    #[arg(long)]
    pub num_starts: Option<usize>,

    #[command(flatten)]
    pub eg: EgArgs,

    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SimpleArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,

    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Pipeline(args) => pipeline::run(&args),
        Command::Benchmark(args) => benchmark::run(&args),
        Command::Explore(args) => explore::run(&args),
        Command::Preprocess(args) => simple::run_preprocess(&args),
        Command::BuildQ(args) => simple::run_build_q(&args),
    }
}
