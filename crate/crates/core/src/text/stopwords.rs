use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{Coarse, TokenStream};
use crate::error::{Error, Result};

const BUNDLED_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

/// Stop-word list. Each entry is a lowercased surface, optionally
/// restricted to a set of coarse classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    entries: HashMap<String, Option<Vec<Coarse>>>,
}

impl Stoplist {
    /// The versioned list shipped with the crate: light verbs (be, have, go,
    /// come, make) in all inflections plus general English function words.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_STOPWORDS, Path::new("<bundled stopwords>")).expect("bundled stop-word list is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// One entry per line, `surface` or `surface/coarse`; `#` starts a comment line.
    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let mut list = Stoplist::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (surface, coarse) = match line.rsplit_once('/') {
                Some((s, c)) if !s.is_empty() => {
                    let coarse = c.parse::<Coarse>().map_err(|message| Error::Parse {
                        path: source.to_path_buf(),
                        line: i + 1,
                        message,
                    })?;
                    (s, Some(coarse))
                }
                _ => (line, None),
            };
            list.insert(surface, coarse);
        }
        Ok(list)
    }

    pub fn insert(&mut self, surface: &str, coarse: Option<Coarse>) {
        let slot = self
            .entries
            .entry(surface.to_lowercase())
            .or_insert_with(|| Some(Vec::new()));
        match (slot.as_mut(), coarse) {
            (Some(classes), Some(c)) => classes.push(c),
            (_, None) => *slot = None,
            (None, Some(_)) => {}
        }
    }

    pub fn contains(&self, folded: &str, coarse: Coarse) -> bool {
        match self.entries.get(folded) {
            Some(None) => true,
            Some(Some(classes)) => classes.contains(&coarse),
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Drops stop words. Punctuation always survives, order is preserved, and a
/// sentence-start flag on a removed token moves to the next kept token.
pub fn remove_stopwords(stream: TokenStream, stoplist: &Stoplist) -> TokenStream {
    let mut carry_start = false;
    let mut kept = Vec::with_capacity(stream.tokens.len());
    for mut tok in stream.tokens {
        if !tok.is_punct() && stoplist.contains(&tok.folded, tok.coarse) {
            carry_start |= tok.sentence_start;
            continue;
        }
        tok.sentence_start |= carry_start;
        carry_start = false;
        kept.push(tok);
    }
    TokenStream {
        book_id: stream.book_id,
        tokens: kept,
    }
}
