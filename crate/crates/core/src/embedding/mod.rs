//! CBOW word embeddings trained with negative sampling on context windows.
//!
//! Each context window is one training instance. Every in-vocabulary token
//! of the window (the seed included) is predicted in turn from the mean of
//! the remaining tokens' input vectors. With subword information enabled,
//! a word's input vector is the mean of its own row and the rows of its
//! hashed character n-grams.

mod io;
mod subword;
mod train;
mod vocab;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::WordKey;
use crate::windows::ContextWindow;

pub use io::{read_model, write_model, MODEL_MAGIC};
pub use subword::{char_ngrams, ngram_bucket};
pub use train::{example_gradient, example_loss, DenseParams, Example, Gradient, ParamStore, Trainer};
pub use vocab::{build_vocab, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubwordConfig {
    pub min_n: usize,
    pub max_n: usize,
    pub buckets: usize,
}

impl Default for SubwordConfig {
    fn default() -> Self {
        SubwordConfig {
            min_n: 3,
            max_n: 6,
            buckets: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EmbeddingConfig {
    pub dims: usize,
    pub min_count: u64,
    pub epochs: usize,
    pub negative_samples: usize,
    pub initial_learning_rate: f64,
    pub min_learning_rate: f64,
    /// Exponent applied to unigram counts for the negative-sampling distribution.
    pub sampling_exponent: f64,
    pub rng_seed: u64,
    /// 1 = deterministic single-threaded training; more uses lock-free
    /// parallel updates and is not reproducible.
    pub threads: usize,
    pub subword: Option<SubwordConfig>,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            dims: 200,
            min_count: 10,
            epochs: 20,
            negative_samples: 5,
            initial_learning_rate: 0.025,
            min_learning_rate: 1e-4,
            sampling_exponent: 0.75,
            rng_seed: 1,
            threads: 1,
            subword: None,
        }
    }
}

impl EmbeddingConfig {
    /// Settings for the subword variant: 100 dimensions, min count 5, 5 epochs.
    pub fn subword_defaults() -> Self {
        EmbeddingConfig {
            dims: 100,
            min_count: 5,
            epochs: 5,
            subword: Some(SubwordConfig::default()),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.dims < 2 {
            return bad("embedding dims must be at least 2");
        }
        if self.epochs == 0 {
            return bad("embedding epochs must be at least 1");
        }
        if self.min_count == 0 {
            return bad("embedding min_count must be positive");
        }
        if self.negative_samples == 0 {
            return bad("negative_samples must be positive");
        }
        if !(self.initial_learning_rate > 0.0 && self.initial_learning_rate.is_finite()) {
            return bad("initial_learning_rate must be a positive number");
        }
        if !(self.min_learning_rate >= 0.0 && self.min_learning_rate <= self.initial_learning_rate) {
            return bad("min_learning_rate must lie in [0, initial_learning_rate]");
        }
        if self.threads == 0 {
            return bad("threads must be at least 1");
        }
        if let Some(sw) = &self.subword {
            if sw.min_n == 0 || sw.min_n > sw.max_n || sw.buckets == 0 {
                return bad("subword needs 0 < min_n <= max_n and buckets > 0");
            }
        }
        Ok(())
    }
}

/// Trained vectors. For subword models `vectors` holds the composed
/// vectors and `ngram_vectors` the bucket rows used to compose vectors for
/// out-of-vocabulary words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingMatrix {
    pub vocabulary: Vocabulary,
    pub dims: usize,
    pub vectors: Vec<f64>,
    pub ngram_vectors: Vec<f64>,
    pub config: EmbeddingConfig,
    /// Mean example loss per epoch.
    pub loss_trace: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.vectors[index * self.dims..(index + 1) * self.dims]
    }

    /// The vector for `key`. Out-of-vocabulary words get a vector composed
    /// from their character n-grams in subword mode and `None` otherwise.
    pub fn vector(&self, key: &WordKey) -> Option<Cow<'_, [f64]>> {
        if let Some(i) = self.vocabulary.index_of(key) {
            return Some(Cow::Borrowed(self.row(i as usize)));
        }
        let sw = self.config.subword?;
        let grams = char_ngrams(&key.surface, sw.min_n, sw.max_n);
        if grams.is_empty() {
            return None;
        }
        let mut v = vec![0.0; self.dims];
        for g in &grams {
            let b = ngram_bucket(g, sw.buckets);
            for (acc, x) in v
                .iter_mut()
                .zip(&self.ngram_vectors[b * self.dims..(b + 1) * self.dims])
            {
                *acc += x;
            }
        }
        let n = grams.len() as f64;
        v.iter_mut().for_each(|x| *x /= n);
        Some(Cow::Owned(v))
    }
}

/// Trains on windows with [`EmbeddingConfig::subword`] unset.
pub fn train_cbow(windows: &[ContextWindow], config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    let config = EmbeddingConfig {
        subword: None,
        ..config.clone()
    };
    train_windows(windows, &config)
}

/// Trains with subword n-grams, falling back to the defaults' n-gram
/// settings when `config.subword` is unset.
pub fn train_subword(windows: &[ContextWindow], config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    let config = EmbeddingConfig {
        subword: Some(config.subword.unwrap_or_default()),
        ..config.clone()
    };
    train_windows(windows, &config)
}

fn train_windows(windows: &[ContextWindow], config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    let sequences: Vec<Vec<WordKey>> = windows.iter().map(ContextWindow::training_tokens).collect();
    train_sequences(&sequences, config)
}

/// Trains on token sequences (one per context window).
pub fn train_sequences(sequences: &[Vec<WordKey>], config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    config.validate()?;
    let vocab = build_vocab(sequences.iter().map(Vec::as_slice), config.min_count)?;
    let instances: Vec<Vec<u32>> = sequences
        .iter()
        .map(|s| s.iter().filter_map(|k| vocab.index_of(k)).collect::<Vec<u32>>())
        .filter(|s| s.len() >= 2)
        .collect();
    Trainer::new(vocab, config.clone())?.train(&instances)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
