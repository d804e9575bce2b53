use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::WordKey;

/// Words with at least `min_count` training occurrences, ordered by
/// descending frequency then key.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "VocabRepr", into = "VocabRepr")]
pub struct Vocabulary {
    words: Vec<WordKey>,
    counts: Vec<u64>,
    index: HashMap<WordKey, u32>,
}

#[derive(Serialize, Deserialize)]
struct VocabRepr {
    words: Vec<WordKey>,
    counts: Vec<u64>,
}

impl From<VocabRepr> for Vocabulary {
    fn from(r: VocabRepr) -> Self {
        Vocabulary::from_parts(r.words, r.counts)
    }
}

impl From<Vocabulary> for VocabRepr {
    fn from(v: Vocabulary) -> Self {
        VocabRepr {
            words: v.words,
            counts: v.counts,
        }
    }
}

impl Vocabulary {
    pub(crate) fn from_parts(words: Vec<WordKey>, counts: Vec<u64>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Vocabulary { words, counts, index }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[WordKey] {
        &self.words
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn index_of(&self, key: &WordKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn word(&self, index: u32) -> &WordKey {
        &self.words[index as usize]
    }
}

pub fn build_vocab<'a>(sequences: impl IntoIterator<Item = &'a [WordKey]>, min_count: u64) -> Result<Vocabulary> {
    let mut freq: HashMap<&WordKey, u64> = HashMap::new();
    for seq in sequences {
        for key in seq {
            *freq.entry(key).or_default() += 1;
        }
    }
    let mut kept: Vec<(&WordKey, u64)> = freq.into_iter().filter(|(_, c)| *c >= min_count).collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary { min_count });
    }
    kept.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let (words, counts) = kept.into_iter().map(|(k, c)| (k.clone(), c)).unzip();
    Ok(Vocabulary::from_parts(words, counts))
}
