//! Tokenization, part-of-speech tagging and stop-word filtering.

mod stopwords;
mod tagger;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use stopwords::{remove_stopwords, Stoplist};
pub use tagger::{read_pretagged, BaselineTagger, TaggerBackend};
pub use tokenize::{detokenize, tokenize, tokenize_text, RawToken};

/// Coarse part-of-speech class derived from a Penn Treebank tag.
///
/// Variants are declared in alphabetical order of their short names so the
/// derived ordering matches lexicographic order on `as_str()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Coarse {
    #[serde(rename = "a")]
    Adjective,
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "other")]
    Other,
    #[serde(rename = "punct")]
    Punct,
    #[serde(rename = "r")]
    Adverb,
    #[serde(rename = "v")]
    Verb,
}

impl Coarse {
    pub const CONTENT: [Coarse; 4] = [Coarse::Noun, Coarse::Verb, Coarse::Adjective, Coarse::Adverb];

    pub fn as_str(self) -> &'static str {
        match self {
            Coarse::Noun => "n",
            Coarse::Verb => "v",
            Coarse::Adjective => "a",
            Coarse::Adverb => "r",
            Coarse::Other => "other",
            Coarse::Punct => "punct",
        }
    }

    pub fn is_content(self) -> bool {
        matches!(self, Coarse::Noun | Coarse::Verb | Coarse::Adjective | Coarse::Adverb)
    }
}

impl fmt::Display for Coarse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Coarse {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "n" => Coarse::Noun,
            "v" => Coarse::Verb,
            "a" => Coarse::Adjective,
            "r" => Coarse::Adverb,
            "other" => Coarse::Other,
            "punct" => Coarse::Punct,
            _ => return Err(format!("unknown coarse POS class `{s}`")),
        })
    }
}

const PUNCT_TAGS: &[&str] = &[
    ".", ",", ":", "``", "''", "\"", "(", ")", "-LRB-", "-RRB-", "-LCB-", "-RCB-", "-LSB-", "-RSB-", "HYPH", "NFP",
];

/// Maps a Penn Treebank tag to its coarse class. Total over all strings.
pub fn coarse_pos(ptb_tag: &str) -> Coarse {
    if PUNCT_TAGS.contains(&ptb_tag) {
        Coarse::Punct
    } else if ptb_tag.starts_with("NN") {
        Coarse::Noun
    } else if ptb_tag.starts_with("VB") {
        Coarse::Verb
    } else if ptb_tag.starts_with("JJ") {
        Coarse::Adjective
    } else if ptb_tag.starts_with("RB") {
        Coarse::Adverb
    } else {
        Coarse::Other
    }
}

/// Word identity used for counting, seeds, descriptors and the embedding
/// vocabulary: lowercased surface plus coarse class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WordKey {
    pub surface: String,
    pub coarse: Coarse,
}

impl WordKey {
    pub fn new(surface: impl Into<String>, coarse: Coarse) -> Self {
        WordKey {
            surface: surface.into(),
            coarse,
        }
    }
}

impl fmt::Display for WordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.surface, self.coarse)
    }
}

impl FromStr for WordKey {
    type Err = String;

    /// Parses `surface/coarse`, splitting on the last slash.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (surface, coarse) = s
            .rsplit_once('/')
            .ok_or_else(|| format!("expected surface/coarse, got `{s}`"))?;
        if surface.is_empty() {
            return Err(format!("empty surface in `{s}`"));
        }
        Ok(WordKey::new(surface, coarse.parse()?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    /// Surface as it appeared in the source.
    pub surface: String,
    /// Lowercased surface used for matching and counting.
    pub folded: String,
    pub ptb_tag: String,
    pub coarse: Coarse,
    /// First token of a sentence or paragraph; windows never reach across it.
    #[serde(default)]
    pub sentence_start: bool,
}

impl TaggedToken {
    pub fn new(surface: impl Into<String>, ptb_tag: impl Into<String>) -> Self {
        let surface = surface.into();
        let ptb_tag = ptb_tag.into();
        TaggedToken {
            folded: surface.to_lowercase(),
            coarse: coarse_pos(&ptb_tag),
            surface,
            ptb_tag,
            sentence_start: false,
        }
    }

    pub fn key(&self) -> WordKey {
        WordKey::new(self.folded.clone(), self.coarse)
    }

    pub fn is_punct(&self) -> bool {
        self.coarse == Coarse::Punct
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub book_id: String,
    pub tokens: Vec<TaggedToken>,
}

impl TokenStream {
    pub fn new(book_id: impl Into<String>, tokens: Vec<TaggedToken>) -> Self {
        TokenStream {
            book_id: book_id.into(),
            tokens,
        }
    }
}

/// Tokenizes and tags raw text with the given backend. For
/// [`TaggerBackend::PreTagged`] the text must be in token/tag format.
pub fn tag_pos(
    book_id: &str,
    text: &str,
    backend: TaggerBackend,
    baseline: &BaselineTagger,
    source: &std::path::Path,
) -> crate::Result<TokenStream> {
    let tokens = match backend {
        TaggerBackend::PreTagged => read_pretagged(text, source)?,
        TaggerBackend::Baseline => baseline.tag(&tokenize_text(text)),
    };
    Ok(TokenStream::new(book_id, tokens))
}
