//! Anchor-word topic modeling via separable non-negative matrix
//! factorization.
//!
//! The pipeline discovers topics from a bag-of-words corpus in two stages:
//! anchor-word selection and topic recovery. Two selection strategies are
//! provided — a minimum-edge-weight clique search over the word similarity
//! graph ([`anchors::soft_clique`]) and the convex-hull farthest-point
//! baseline ([`anchors::fast_anchor_words`]) — followed by
//! simplex-constrained least-squares recovery of the word-topic matrix
//! ([`recovery::recover_topics`]) and UMass coherence evaluation
//! ([`coherence::average_coherence`]).
//!
//! A guided tour with runnable examples lives in the `book/` directory of
//! the repository; its code snippets are compiled as doc-tests.

pub mod anchors;
pub mod coherence;
pub mod cooccurrence;
pub mod corpus;
pub mod error;
pub mod matrix_io;
pub mod recovery;
pub mod synth;

pub use anchors::{AnchorMethod, AnchorSet, FawParams, SoftCliqueParams};
pub use coherence::{CoherenceParams, CoherenceReport, DocCooccurrenceCounts};
pub use cooccurrence::{CooccurrenceMatrix, RowNormalizedQ, SimilarityGraph, SyntheticModel};
pub use corpus::{Corpus, PreprocessConfig};
pub use error::{Error, Result};
pub use recovery::{EgParams, ReconstructionCoefficients, TopicModel};
