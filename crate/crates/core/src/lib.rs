//! Sensory-descriptor extraction and blending analysis for fiction corpora.
//!
//! The pipeline runs in stages, each living in its own module:
//!
//! - [`corpus`]: manifest loading, fiction filtering and corpus metadata stats
//! - [`text`]: tokenization, part-of-speech tagging and stop-word removal
//! - [`lexicon`]: per-sense seed word lists and their inflections
//! - [`windows`]: seed-anchored context windows and per-sense window counts
//! - [`descriptors`]: cutoff-based descriptor identification and top-K lists
//! - [`embedding`]: CBOW word embeddings with negative sampling
//! - [`geometry`]: correlation distance matrices and PCA
//! - [`analyses`]: pairwise-distance, radius-neighbourhood and overlap analyses
//! - [`report`]: CSV tables and SVG figures
//! - [`pipeline`]: end-to-end orchestration with on-disk checkpoints

pub mod analyses;
pub mod config;
pub mod corpus;
pub mod descriptors;
pub mod embedding;
pub mod error;
pub mod geometry;
pub mod lexicon;
pub mod pipeline;
pub mod report;
pub mod synth;
pub mod text;
pub mod windows;

pub use error::{Error, Result};
pub use lexicon::{SeedEntry, SeedLexicon, Sense};
pub use text::{Coarse, TaggedToken, TokenStream, WordKey};
